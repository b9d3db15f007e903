#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "todaflow/errors.hpp"
#include "todaflow/gaussian.hpp"
#include "todaflow/specfun.hpp"

using namespace todaflow;
using namespace todaflow::gaussian;

namespace {

const double kPi = 3.14159265358979323846;
const double kSqrtPi = std::sqrt(kPi);
const double kAlphas[] = {1.0 / std::sqrt(2.0), 1.0, std::sqrt(2.0)};

// F(chi) = Im erf(alpha (chi + i/2)) straight from the complex error function
double f_ref(double alpha, double chi) {
  return specfun::erf_complex({alpha * chi, alpha / 2.0}).imag();
}

PhaseVelocity w_ref(double alpha, double a, PhasePoint p) {
  const double g = alpha * alpha / kPi * std::exp(-alpha * alpha * (p.x * p.x + p.k * p.k));
  const double jx = alpha / kSqrtPi * f_ref(alpha, p.x) * std::sinh(p.k) * std::exp(-alpha * alpha * p.k * p.k);
  const double jk = -a * alpha / kSqrtPi * f_ref(alpha, p.k) * std::sinh(p.x) * std::exp(-alpha * alpha * p.x * p.x);
  return {jx / g, jk / g};
}

std::vector<PhasePoint> grid21(double half) {
  std::vector<PhasePoint> pts;
  for (int i = 0; i < 21; ++i)
    for (int j = 0; j < 21; ++j) pts.push_back({-half + 2 * half * i / 20.0, -half + 2 * half * j / 20.0});
  return pts;
}

double rel(double got, double want) {
  return want == 0.0 ? std::abs(got) : std::abs(got - want) / std::abs(want);
}

}  // namespace

TEST_CASE("Gaussian Wigner function and purity") {
  const GaussianEnsembleParams unit{1.0, 1.0};
  CHECK(gaussian_w(unit, {0.0, 0.0}) == doctest::Approx(1.0 / kPi).epsilon(1e-15));
  CHECK(gaussian_w(unit, {0.6, 0.8}) == doctest::Approx(gaussian_w(unit, {1.0, 0.0})).epsilon(1e-15));
  for (double al : kAlphas) {
    const GaussianEnsembleParams p{al, 1.0};
    const double n = specfun::integrate_2d([&](double x, double k) { return gaussian_w(p, {x, k}); },
                                           -8 / al, 8 / al, -8 / al, 8 / al);
    CHECK(std::abs(n - 1.0) < 1e-10);
    CHECK(purity(p) == doctest::Approx(al * al).epsilon(1e-15));
    CHECK(rel(purity_quadrature(p), al * al) < 1e-8);
  }
  CHECK(purity({1.0 / std::sqrt(2.0), 1.0}) == doctest::Approx(0.5));
  CHECK(purity({std::sqrt(2.0), 1.0}) == doctest::Approx(2.0));
  CHECK_THROWS_AS(GaussianEnsembleParams({0.0, 1.0}).validate(), DomainError);
  CHECK_THROWS_AS(GaussianEnsembleParams({1.0, -2.0}).validate(), DomainError);
}

TEST_CASE("closed-form divergences") {
  const GaussianEnsembleParams p{1.0, 2.0};
  for (double c : {-1.5, 0.0, 0.4}) {
    CHECK(div_currents_closed(p, {0.0, c}).vx == 0.0);
    CHECK(div_currents_closed(p, {c, 0.0}).vx == 0.0);
    CHECK(div_currents_closed(p, {0.0, c}).vk == 0.0);
    CHECK(div_currents_closed(p, {c, 0.0}).vk == 0.0);
  }
  // printed structure with the classical-consistent sign
  const double x = 0.7, k = 0.4;
  const double g = gaussian_w(p, {x, k});
  const PhaseVelocity d = div_currents_closed(p, {x, k});
  CHECK(d.vx == doctest::Approx(-2 * std::sinh(k) * std::sin(x) * std::exp(0.25) * g).epsilon(1e-14));
  CHECK(d.vk == doctest::Approx(2 * 2.0 * std::sinh(x) * std::sin(k) * std::exp(0.25) * g).epsilon(1e-14));
  // leading order matches the classical divergence d/dx (sinh k G)
  const PhasePoint s{1e-3, 2e-3};
  const double classical = -2 * s.x * std::sinh(s.k) * gaussian_w(p, s);
  CHECK(div_currents_closed(p, s).vx == doctest::Approx(classical).epsilon(1e-3));
  // full-line x integral of dJx/dx vanishes
  const double total = specfun::integrate_1d([&](double u) { return div_currents_closed(p, {u, 0.9}).vx; },
                                             -10.0, 10.0);
  CHECK(std::abs(total) < 1e-12);
}

TEST_CASE("Hermite series reproduces the closed form") {
  for (double al : kAlphas) {
    const GaussianEnsembleParams p{al, 1.0};
    double worst = 0.0;
    for (const PhasePoint& q : grid21(2.0)) {
      const PhaseVelocity s = series_currents(p, q, 12);
      const PhaseVelocity c = div_currents_closed(p, q);
      const double scale = std::max(std::hypot(c.vx, c.vk), 1e-300);
      worst = std::max(worst, std::hypot(s.vx - c.vx, s.vk - c.vk) / scale);
    }
    CHECK(worst < 1e-6);
  }
  const GaussianEnsembleParams p{1.0, 1.0};
  const PhaseVelocity s = series_currents(p, {0.7, 0.4}, 12);
  const PhaseVelocity c = div_currents_closed(p, {0.7, 0.4});
  CHECK(rel(s.vx, c.vx) < 1e-8);
  CHECK(rel(s.vk, c.vk) < 1e-8);

  // eta = 0 keeps only the classical Liouville term
  const GaussianEnsembleParams q{1.3, 2.0};
  const PhasePoint pt{0.5, -0.8};
  const double g = gaussian_w(q, pt);
  const PhaseVelocity s0 = series_currents(q, pt, 0);
  CHECK(s0.vx == doctest::Approx(std::sinh(pt.k) * (-2 * 1.69 * pt.x * g)).epsilon(1e-13));
  CHECK(s0.vk == doctest::Approx(-2.0 * std::sinh(pt.x) * (-2 * 1.69 * pt.k * g)).epsilon(1e-13));

  CHECK_THROWS_AS(series_currents(p, {0.1, 0.1}, 26), UsageError);
  CHECK_NOTHROW(series_currents(p, {0.1, 0.1}, 25));
}

TEST_CASE("series terms decay beyond eta = 3") {
  // monotone while the terms still matter in double precision; far below
  // that, zeros of H_n(alpha x) make single ratios exceed one
  const GaussianEnsembleParams p{1.0, 1.0};
  for (double x : {-2.0, -0.9, 0.3, 1.1, 2.0})
    for (double k : {-1.7, 0.6, 2.0}) {
      const double lead = std::abs(series_currents(p, {x, k}, 0).vx);
      for (int eta = 3; series_term_x(p, {x, k}, eta + 1) > 1e-17 * lead; ++eta)
        CHECK(series_term_x(p, {x, k}, eta + 1) < series_term_x(p, {x, k}, eta));
      CHECK(series_term_x(p, {x, k}, 25) < 1e-30 * lead);
    }
}

TEST_CASE("closed-form currents") {
  const GaussianEnsembleParams p{1.0, 1.0};
  CHECK(currents_closed(p, {0.0, 0.0}).vx == 0.0);
  CHECK(currents_closed(p, {0.0, 0.0}).vk == 0.0);
  const PhaseVelocity j = currents_closed(p, {0.0, 0.5});
  CHECK(j.vx > 0.0);
  CHECK(j.vx / (std::sinh(0.5) * std::exp(-0.25)) == doctest::Approx(0.346950).epsilon(1e-5));
  CHECK(j.vx / (std::sinh(0.5) * std::exp(-0.25)) ==
        doctest::Approx(0.614952 / kSqrtPi).epsilon(1e-5));
  // frozen high-precision F values
  CHECK(currents_closed(p, {0.7, 0.4}).vx ==
        doctest::Approx(0.344689101567682445 / kSqrtPi * std::sinh(0.4) * std::exp(-0.16)).epsilon(1e-12));
  const GaussianEnsembleParams q{std::sqrt(2.0), 3.0};
  CHECK(currents_closed(q, {-1.0, 0.3}).vk ==
        doctest::Approx(3.0 * std::sqrt(2.0) / kSqrtPi * 0.742970035006204180 * std::sinh(1.0) * std::exp(-2.0))
            .epsilon(1e-12));
  // Jx / (sinh k e^{-alpha^2 k^2}) depends on x only
  const double r1 = currents_closed(q, {0.9, 0.3}).vx / (std::sinh(0.3) * std::exp(-2 * 0.09));
  const double r2 = currents_closed(q, {0.9, -1.2}).vx / (std::sinh(-1.2) * std::exp(-2 * 1.44));
  CHECK(r1 == doctest::Approx(r2).epsilon(1e-13));
}

TEST_CASE("currents integrate their divergence") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 10; ++i) {
    const GaussianEnsembleParams p{1.0, 1.0 + i * 0.3};
    const PhasePoint q{u(rng), u(rng)};
    specfun::QuadratureSpec spec;
    spec.abs_tol = 1e-14;
    const double jx = specfun::integrate_1d(
        [&](double s) { return div_currents_closed(p, {s, q.k}).vx; }, -INFINITY, q.x, spec);
    const double jk = specfun::integrate_1d(
        [&](double s) { return div_currents_closed(p, {q.x, s}).vk; }, -INFINITY, q.k, spec);
    CHECK(std::abs(currents_closed(p, q).vx - jx) < 1e-8);
    CHECK(std::abs(currents_closed(p, q).vk - jk) < 1e-8);
  }
}

TEST_CASE("continuity against finite differences") {
  for (double al : kAlphas) {
    const GaussianEnsembleParams p{al, 1.7};
    const double h = 1e-5;
    double worst = 0.0;
    for (const PhasePoint& q : grid21(2.0)) {
      const double dx = (currents_closed(p, {q.x + h, q.k}).vx - currents_closed(p, {q.x - h, q.k}).vx) / (2 * h);
      const double dk = (currents_closed(p, {q.x, q.k + h}).vk - currents_closed(p, {q.x, q.k - h}).vk) / (2 * h);
      worst = std::max(worst, std::abs(stationarity_div_j(p, q) - (dx + dk)));
    }
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("symmetries") {
  for (double al : kAlphas) {
    const GaussianEnsembleParams iso{al, 1.0};
    for (double c : {-1.9, -0.4, 0.0, 0.9, 2.0}) CHECK(std::abs(stationarity_div_j(iso, {c, c})) <= 1e-14);
    CHECK(stationarity_div_j(iso, {0.0, 0.0}) == 0.0);
    const GaussianEnsembleParams p{al, 2.5};
    for (const PhasePoint& q : grid21(2.0)) {
      const PhaseVelocity j = currents_closed(p, q);
      const PhaseVelocity jmx = currents_closed(p, {-q.x, q.k});
      const PhaseVelocity jmk = currents_closed(p, {q.x, -q.k});
      CHECK(std::abs(j.vx - jmx.vx) <= 1e-12 * std::abs(j.vx));
      CHECK(std::abs(j.vx + jmk.vx) <= 1e-12 * std::abs(j.vx));
      CHECK(std::abs(j.vk + jmx.vk) <= 1e-12 * std::abs(j.vk));
      CHECK(std::abs(j.vk - jmk.vk) <= 1e-12 * std::abs(j.vk));
      const double d = stationarity_div_j(iso, q);
      CHECK(std::abs(d + stationarity_div_j(iso, {q.k, q.x})) <= 1e-12 * std::max(std::abs(d), 1e-300));
      const PhaseVelocity w = velocity_w(p, q);
      const PhaseVelocity wmk = velocity_w(p, {q.x, -q.k});
      const PhaseVelocity wmx = velocity_w(p, {-q.x, q.k});
      CHECK(std::abs(w.vx + wmk.vx) <= 1e-12 * std::abs(w.vx));
      CHECK(std::abs(w.vx - wmx.vx) <= 1e-12 * std::abs(w.vx));
    }
  }
}

TEST_CASE("quantum velocity") {
  const GaussianEnsembleParams p{1.0, 1.3};
  CHECK(velocity_w(p, {0.0, 0.0}).vx == 0.0);
  CHECK(velocity_w(p, {0.0, 0.0}).vk == 0.0);
  for (double al : kAlphas) {
    const GaussianEnsembleParams q{al, 1.3};
    for (const PhasePoint& pt : grid21(1.5)) {
      const PhaseVelocity w = velocity_w(q, pt);
      const PhaseVelocity r = w_ref(al, 1.3, pt);
      CHECK(std::abs(w.vx - r.vx) <= 1e-12 * (1 + std::abs(r.vx)));
      CHECK(std::abs(w.vk - r.vk) <= 1e-12 * (1 + std::abs(r.vk)));
    }
  }
  // trust region
  const GaussianEnsembleParams q{2.0, 1.0};
  CHECK(in_trust_region(q, {3.0, -3.0}));
  CHECK_FALSE(in_trust_region(q, {3.01, 0.0}));
  CHECK_THROWS_AS(velocity_w(q, {0.0, 3.2}), DomainError);
  CHECK_THROWS_AS(liouville_div_w(q, {3.2, 0.0}), DomainError);
  CHECK_THROWS_AS(vorticity(q, {3.2, 0.0}, FieldKind::quantum), DomainError);
  CHECK_NOTHROW(vorticity(q, {3.2, 0.0}, FieldKind::classical));
  // deep in the trust region the cancelled form stays finite
  const PhaseVelocity far = velocity_w(q, {2.99, 2.99});
  CHECK(std::isfinite(far.vx));
  CHECK(std::isfinite(far.vk));
}

TEST_CASE("classical limit") {
  const double a = 1.0;
  const GaussianEnsembleParams p{0.2, a};
  const PhaseVelocity w = velocity_w(p, {0.3, 0.2});
  CHECK(rel(w.vx, std::sinh(0.2)) < 0.01);
  CHECK(rel(w.vk, -a * std::sinh(0.3)) < 0.01);
  double worst = 0.0;
  for (const PhasePoint& q : grid21(1.0)) {
    const PhaseVelocity v{std::sinh(q.k), -a * std::sinh(q.x)};
    const PhaseVelocity wq = velocity_w(p, q);
    worst = std::max(worst, std::hypot(wq.vx - v.vx, wq.vk - v.vk) / (1 + std::hypot(v.vx, v.vk)));
  }
  CHECK(worst < 0.02);
  // Liouvillian and vorticity limits
  const double dw = std::abs(liouville_div_w(p, {0.3, 0.2})) / std::hypot(w.vx, w.vk);
  CHECK(dw < 0.05);
  const GaussianEnsembleParams sharp{1.0, a};
  const PhaseVelocity ws = velocity_w(sharp, {0.3, 0.2});
  CHECK(dw < std::abs(liouville_div_w(sharp, {0.3, 0.2})) / std::hypot(ws.vx, ws.vk));
  CHECK(rel(vorticity(p, {0.3, 0.2}, FieldKind::quantum), vorticity(p, {0.3, 0.2}, FieldKind::classical)) < 0.02);
}

TEST_CASE("Liouvillianity quantifier") {
  for (double al : kAlphas) {
    const GaussianEnsembleParams p{al, 1.6};
    CHECK(liouville_div_w(p, {0.0, 0.0}) == 0.0);
    const double h = 1e-5;
    for (const PhasePoint& q : grid21(1.8)) {
      const double fd = (velocity_w(p, {q.x + h, q.k}).vx - velocity_w(p, {q.x - h, q.k}).vx) / (2 * h) +
                        (velocity_w(p, {q.x, q.k + h}).vk - velocity_w(p, {q.x, q.k - h}).vk) / (2 * h);
      CHECK(std::abs(liouville_div_w(p, q) - fd) < 1e-6);
    }
  }
  CHECK(std::abs(liouville_div_w({1.0, 1.0}, {0.5, 0.2})) > 1e-3);
}

TEST_CASE("vorticity") {
  CHECK(vorticity({1.0, 1.0}, {0.0, 0.0}, FieldKind::classical) == -2.0);
  CHECK(vorticity({1.0, 4.0}, {1.0, 0.0}, FieldKind::classical) == doctest::Approx(-7.172322).epsilon(1e-6));
  // the curl of w has a closed form through the scaled F
  for (double al : kAlphas) {
    const double a = 1.4;
    const GaussianEnsembleParams p{al, a};
    const auto s = [&](double c) { return f_ref(al, c) * std::exp(al * al * c * c); };
    for (const PhasePoint& q : grid21(1.5)) {
      const double want = -(kSqrtPi / al) * (a * std::cosh(q.x) * s(q.k) + std::cosh(q.k) * s(q.x));
      CHECK(std::abs(vorticity(p, q, FieldKind::quantum) - want) < 1e-6 * (1 + std::abs(want)));
    }
  }
  const FlowSample f = flow_sample({1.0, 2.0}, {0.4, -0.3});
  CHECK(f.j.vx == currents_closed({1.0, 2.0}, {0.4, -0.3}).vx);
  CHECK(f.w.vk == velocity_w({1.0, 2.0}, {0.4, -0.3}).vk);
  CHECK(f.div_j == stationarity_div_j({1.0, 2.0}, {0.4, -0.3}));
  CHECK(f.div_w == liouville_div_w({1.0, 2.0}, {0.4, -0.3}));
}

TEST_CASE("circulation numbers") {
  for (double al : {0.2, 0.5, 1.0 / std::sqrt(2.0), 1.0, std::sqrt(2.0), 2.0}) {
    const GaussianEnsembleParams p{al, 1.0};
    CHECK(circulation_number(p, {0.0, 0.0}, 0.05) == -1.0);
    CHECK(circulation_number(p, {0.0, 0.0}, 0.05, FieldKind::classical) == -1.0);
  }
  const GaussianEnsembleParams p{1.0 / std::sqrt(2.0), 1.0};
  CHECK(circulation_number(p, {0.8, 0.9}, 0.3) == 0.0);
  const LoopAnalysis origin = analyse_loop(p, {0.0, 0.0}, 0.1);
  CHECK(origin.winding == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(origin.mean_tangential < -0.1);
  CHECK_THROWS_AS(analyse_loop(p, {0.0, 0.0}, 0.1, FieldKind::quantum, 719), UsageError);

  // saddles at alpha = sqrt 2 sit on the zeros of F
  const GaussianEnsembleParams s{std::sqrt(2.0), 1.0};
  const double z = 1.4267050735614497;
  for (double sx : {-1.0, 1.0})
    for (double sk : {-1.0, 1.0}) {
      CHECK(circulation_number(s, {sx * z, sk * z}, 0.2) == 0.0);
      CHECK(analyse_loop(s, {sx * z, sk * z}, 0.2).winding == doctest::Approx(-1.0).epsilon(1e-3));
    }
}

TEST_CASE("stagnation points") {
  const BoundingBox box{-3.0, 3.0, -3.0, 3.0};
  const auto low = find_stagnation_points({1.0 / std::sqrt(2.0), 1.0}, box);
  const auto high = find_stagnation_points({std::sqrt(2.0), 1.0}, box);
  REQUIRE(low.size() == 1);
  CHECK(low[0].location.x == 0.0);
  CHECK(low[0].location.k == 0.0);
  CHECK(low[0].cls == StagnationClass::vortex_cw);
  CHECK(high.size() > low.size());
  REQUIRE(high.size() == 5);
  int saddles = 0;
  for (const StagnationPoint& sp : high) {
    CHECK(sp.residual < 1e-10);
    CHECK(std::abs(sp.circulation) <= 1);
    if (sp.cls == StagnationClass::saddle_or_separatrix) {
      ++saddles;
      CHECK(std::abs(sp.location.x) == doctest::Approx(1.4267050735614497).epsilon(1e-10));
      CHECK(std::abs(sp.location.k) == doctest::Approx(1.4267050735614497).epsilon(1e-10));
      CHECK(sp.circulation == 0);
    }
  }
  CHECK(saddles == 4);
  // sorted and reproducible
  for (std::size_t i = 1; i < high.size(); ++i)
    CHECK((high[i - 1].location.x < high[i].location.x ||
           (high[i - 1].location.x == high[i].location.x && high[i - 1].location.k < high[i].location.k)));
  const auto again = find_stagnation_points({std::sqrt(2.0), 1.0}, box);
  REQUIRE(again.size() == high.size());
  for (std::size_t i = 0; i < high.size(); ++i) CHECK(again[i].location.x == high[i].location.x);

  // origin is always present when inside the box
  for (double al : {0.3, 1.0, 1.9}) {
    const auto pts = find_stagnation_points({al, 2.0}, {-2.0, 2.0, -2.0, 2.0});
    bool origin = false;
    for (const auto& sp : pts) origin |= (sp.location.x == 0.0 && sp.location.k == 0.0);
    CHECK(origin);
  }
  CHECK(find_stagnation_points({1.0, 1.0}, {0.5, 1.0, 0.5, 1.0}).empty());
  CHECK_THROWS_AS(find_stagnation_points({3.0, 1.0}, box), DomainError);
  CHECK_THROWS_AS(BoundingBox({1.0, -1.0, 0.0, 1.0}).validate(), UsageError);
}

TEST_CASE("quantum trajectories") {
  const GaussianEnsembleParams p{1.0, 1.0};
  const QuantumTrajectory still = integrate_quantum_trajectory(p, {0.0, 0.0}, 1e-2, 20.0);
  for (const auto& s : still.quantum.samples) {
    CHECK(std::abs(s.point.x) <= 1e-12);
    CHECK(std::abs(s.point.k) <= 1e-12);
  }

  const SeparableHamiltonian toda(ModelKind::toda, 1.0);
  OrbitSpec spec = OrbitSpec::from_point(toda, {0.6, 0.0}, 1e-3, 40.0);
  const double period = orbit_period(spec);
  const QuantumTrajectory t = integrate_quantum_trajectory(p, {0.6, 0.0}, 1e-3, 10 * period);
  double extent = 0.0;
  for (const auto& s : t.quantum.samples) extent = std::max({extent, std::abs(s.point.x), std::abs(s.point.k)});
  CHECK(extent < 2.0);
  CHECK(std::abs(t.quantum.samples.back().tau - 10 * period) <= 1e-3);
  CHECK(t.classical.samples.size() == t.quantum.samples.size());
  CHECK(t.quantum.samples[5].species.y == doctest::Approx(std::exp(-t.quantum.samples[5].point.x)));

  const PeriodMeasurement q = quantum_return(p, {0.6, 0.0}, 1e-3, 10 * period);
  REQUIRE(q.crossings.size() >= 2);
  for (const auto& c : q.crossings) CHECK(std::abs(c.x - 0.6) < 1e-3);
  CHECK(rel(q.period, period) > 1e-3);
}

TEST_CASE("trajectory leaving the trust region") {
  // a weak potential lets x swing past the trust radius
  const GaussianEnsembleParams p{1.0, 0.1};
  try {
    integrate_quantum_trajectory(p, {0.0, 5.5}, 1e-3, 50.0);
    FAIL("expected TrajectoryFailure");
  } catch (const TrajectoryFailure& e) {
    CHECK_FALSE(e.partial().samples.empty());
    for (const auto& s : e.partial().samples) CHECK(in_trust_region(p, s.point));
  }
}

TEST_CASE("low speed nodes") {
  const GaussianEnsembleParams p{1.0, 4.0};
  const auto nodes = low_speed_nodes(p, {-2.0, 2.0, -2.0, 2.0}, 41, 0.08);
  bool origin = false;
  for (const PhasePoint& n : nodes) {
    const PhaseVelocity w = velocity_w(p, n);
    CHECK(std::hypot(w.vx, w.vk) < 0.08);
    origin |= (n.x == 0.0 && n.k == 0.0);
  }
  CHECK(origin);
  CHECK(std::string(to_string(StagnationClass::vortex_ccw)) == "vortex_ccw");
}
