#include "todaflow/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "todaflow/errors.hpp"
#include "todaflow/specfun.hpp"

namespace todaflow::gaussian {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrtPi = 1.7724538509055160273;
constexpr double kVorticityStep = 1e-5;
constexpr double kDegenerateSpeed = 1e-12;
constexpr double kResidualTolerance = 1e-10;
constexpr double kIntegralTolerance = 1e-3;
constexpr double kNodeTangential = 0.1;
constexpr int kMinLoopSamples = 720;
constexpr int kMaxSeriesOrder = 25;

double scaled_f(double alpha, double chi) { return specfun::im_erf_offset_scaled(alpha, chi); }

void require_trust(const GaussianEnsembleParams& params, PhasePoint p, const char* what) {
  if (!in_trust_region(params, p)) {
    throw DomainError(std::string(what) + ": (" + std::to_string(p.x) + ", " +
                      std::to_string(p.k) + ") is outside the trust region alpha*max(|x|,|k|) <= 6");
  }
}

PhaseVelocity classical_velocity(const GaussianEnsembleParams& params, PhasePoint p) {
  return {std::sinh(p.k), -params.a * std::sinh(p.x)};
}

PhaseVelocity field_velocity(const GaussianEnsembleParams& params, PhasePoint p, FieldKind field) {
  return field == FieldKind::quantum ? velocity_w(params, p) : classical_velocity(params, p);
}

double wrap_angle(double d) {
  while (d > kPi) d -= 2.0 * kPi;
  while (d <= -kPi) d += 2.0 * kPi;
  return d;
}

// Zeros of the scaled F on [lo, hi], bracketed on a uniform grid and refined
// by bisection to machine precision.
std::vector<double> f_zeros(double alpha, double lo, double hi, int grid) {
  std::vector<double> out;
  const double h = (hi - lo) / grid;
  double prev_x = lo;
  double prev = scaled_f(alpha, lo);
  if (prev == 0.0) out.push_back(lo);
  for (int i = 1; i <= grid; ++i) {
    const double x = i == grid ? hi : lo + i * h;
    const double v = scaled_f(alpha, x);
    if (v == 0.0) {
      out.push_back(x);
    } else if (prev != 0.0 && (v < 0.0) != (prev < 0.0)) {
      double a = prev_x;
      double b = x;
      double fa = prev;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) break;
        const double fm = scaled_f(alpha, mid);
        if (fm == 0.0) {
          a = b = mid;
          break;
        }
        if ((fm < 0.0) == (fa < 0.0)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      out.push_back(0.5 * (a + b));
    }
    prev_x = x;
    prev = v;
  }
  return out;
}

double norm(PhaseVelocity v) { return std::hypot(v.vx, v.vk); }

// Damped Newton on J with a central-difference Jacobian. Keeps the start
// unless a step lowers |J|.
PhasePoint polish(const GaussianEnsembleParams& params, PhasePoint p) {
  double best = norm(currents_closed(params, p));
  for (int it = 0; it < 50 && best > 0.0; ++it) {
    const double hx = 1e-7 * std::max(1.0, std::abs(p.x));
    const double hk = 1e-7 * std::max(1.0, std::abs(p.k));
    const PhaseVelocity j = currents_closed(params, p);
    const PhaseVelocity jxp = currents_closed(params, {p.x + hx, p.k});
    const PhaseVelocity jxm = currents_closed(params, {p.x - hx, p.k});
    const PhaseVelocity jkp = currents_closed(params, {p.x, p.k + hk});
    const PhaseVelocity jkm = currents_closed(params, {p.x, p.k - hk});
    const double a11 = (jxp.vx - jxm.vx) / (2.0 * hx);
    const double a12 = (jkp.vx - jkm.vx) / (2.0 * hk);
    const double a21 = (jxp.vk - jxm.vk) / (2.0 * hx);
    const double a22 = (jkp.vk - jkm.vk) / (2.0 * hk);
    const double det = a11 * a22 - a12 * a21;
    if (!(std::abs(det) > 0.0) || !std::isfinite(det)) break;
    const double dx = -(a22 * j.vx - a12 * j.vk) / det;
    const double dk = -(-a21 * j.vx + a11 * j.vk) / det;
    bool improved = false;
    for (double lambda = 1.0; lambda > 1e-4; lambda *= 0.5) {
      const PhasePoint q{p.x + lambda * dx, p.k + lambda * dk};
      const double r = norm(currents_closed(params, q));
      if (r < best) {
        p = q;
        best = r;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  return p;
}

double toda_energy(double a, PhasePoint p) { return std::cosh(p.k) + a * std::cosh(p.x); }

}  // namespace

void GaussianEnsembleParams::validate() const {
  if (!std::isfinite(alpha) || alpha <= 0.0) throw DomainError("alpha must be positive and finite");
  if (!std::isfinite(a) || a <= 0.0) throw DomainError("a must be positive and finite");
}

bool in_trust_region(const GaussianEnsembleParams& params, PhasePoint p) {
  return params.alpha * std::max(std::abs(p.x), std::abs(p.k)) <= kTrustRadius;
}

const char* to_string(StagnationClass c) {
  switch (c) {
    case StagnationClass::vortex_cw:
      return "vortex_cw";
    case StagnationClass::vortex_ccw:
      return "vortex_ccw";
    case StagnationClass::node:
      return "node";
    case StagnationClass::saddle_or_separatrix:
      break;
  }
  return "saddle_or_separatrix";
}

void BoundingBox::validate() const {
  if (!(x_lo < x_hi) || !(k_lo < k_hi) || !std::isfinite(x_lo) || !std::isfinite(x_hi) ||
      !std::isfinite(k_lo) || !std::isfinite(k_hi))
    throw UsageError("bounding box needs finite lo < hi on both axes");
}

double gaussian_w(const GaussianEnsembleParams& params, PhasePoint p) {
  const double a2 = params.alpha * params.alpha;
  return a2 / kPi * std::exp(-a2 * (p.x * p.x + p.k * p.k));
}

double purity(const GaussianEnsembleParams& params) {
  params.validate();
  return params.alpha * params.alpha;
}

double purity_quadrature(const GaussianEnsembleParams& params) {
  params.validate();
  const double r = 7.0 / params.alpha;
  return 2.0 * kPi *
         specfun::integrate_2d(
             [&params](double x, double k) {
               const double g = gaussian_w(params, {x, k});
               return g * g;
             },
             -r, r, -r, r);
}

PhaseVelocity div_currents_closed(const GaussianEnsembleParams& params, PhasePoint p) {
  const double a2 = params.alpha * params.alpha;
  const double scale = 2.0 * std::exp(0.25 * a2) * gaussian_w(params, p);
  return {-scale * std::sinh(p.k) * std::sin(a2 * p.x),
          scale * params.a * std::sinh(p.x) * std::sin(a2 * p.k)};
}

PhaseVelocity currents_closed(const GaussianEnsembleParams& params, PhasePoint p) {
  const double al = params.alpha;
  const double c = al / kSqrtPi;
  const double fx = specfun::im_erf_offset(al, p.x);
  const double fk = specfun::im_erf_offset(al, p.k);
  return {c * fx * std::sinh(p.k) * std::exp(-al * al * p.k * p.k),
          -c * params.a * fk * std::sinh(p.x) * std::exp(-al * al * p.x * p.x)};
}

PhaseVelocity velocity_w(const GaussianEnsembleParams& params, PhasePoint p) {
  require_trust(params, p, "velocity_w");
  const double c = kSqrtPi / params.alpha;
  return {c * std::sinh(p.k) * scaled_f(params.alpha, p.x),
          -c * params.a * std::sinh(p.x) * scaled_f(params.alpha, p.k)};
}

double stationarity_div_j(const GaussianEnsembleParams& params, PhasePoint p) {
  const PhaseVelocity d = div_currents_closed(params, p);
  return d.vx + d.vk;
}

double liouville_div_w(const GaussianEnsembleParams& params, PhasePoint p) {
  require_trust(params, p, "liouville_div_w");
  const double al = params.alpha;
  const double c = kSqrtPi / al;
  return c * (std::sinh(p.k) * specfun::im_erf_offset_scaled_derivative(al, p.x) -
              params.a * std::sinh(p.x) * specfun::im_erf_offset_scaled_derivative(al, p.k));
}

double vorticity(const GaussianEnsembleParams& params, PhasePoint p, FieldKind field) {
  if (field == FieldKind::classical) return -(params.a * std::cosh(p.x) + std::cosh(p.k));
  const double h = kVorticityStep;
  const double dwk = velocity_w(params, {p.x + h, p.k}).vk - velocity_w(params, {p.x - h, p.k}).vk;
  const double dwx = velocity_w(params, {p.x, p.k + h}).vx - velocity_w(params, {p.x, p.k - h}).vx;
  return (dwk - dwx) / (2.0 * h);
}

FlowSample flow_sample(const GaussianEnsembleParams& params, PhasePoint p) {
  FlowSample s;
  s.location = p;
  s.j = currents_closed(params, p);
  s.w = velocity_w(params, p);
  s.div_j = stationarity_div_j(params, p);
  s.div_w = liouville_div_w(params, p);
  s.vorticity = vorticity(params, p, FieldKind::quantum);
  return s;
}

LoopAnalysis analyse_loop(const GaussianEnsembleParams& params, PhasePoint center, double radius,
                          FieldKind field, int samples) {
  params.validate();
  if (!(radius > 0.0) || !std::isfinite(radius)) throw UsageError("loop radius must be positive");
  if (samples < kMinLoopSamples)
    throw UsageError("circulation loops need at least " + std::to_string(kMinLoopSamples) +
                     " samples");
  double total = 0.0;
  double tangential = 0.0;
  double first_angle = 0.0;
  double prev_angle = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double theta = 2.0 * kPi * i / samples;
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const PhaseVelocity v = field_velocity(params, {center.x + radius * c, center.k + radius * s}, field);
    const double speed = norm(v);
    if (!(speed >= kDegenerateSpeed))
      throw DegenerateLoop("degenerate circulation loop: |w| = " + std::to_string(speed) +
                           " at angle " + std::to_string(theta));
    tangential += (-s * v.vx + c * v.vk) / speed;
    const double angle = std::atan2(v.vk, v.vx);
    if (i == 0)
      first_angle = angle;
    else
      total += wrap_angle(angle - prev_angle);
    prev_angle = angle;
  }
  total += wrap_angle(first_angle - prev_angle);

  LoopAnalysis out;
  out.winding = total / (2.0 * kPi);
  out.mean_tangential = tangential / samples;
  const double index = std::round(out.winding);
  if (std::abs(out.winding - index) > kIntegralTolerance)
    throw NumericalFailure("circulation loop winding " + std::to_string(out.winding) +
                           " is not an integer; refine the loop");
  if (index == 1.0 && std::abs(out.mean_tangential) > kNodeTangential)
    out.circulation = out.mean_tangential > 0.0 ? 1.0 : -1.0;
  return out;
}

double circulation_number(const GaussianEnsembleParams& params, PhasePoint center, double radius,
                          FieldKind field) {
  return analyse_loop(params, center, radius, field).circulation;
}

std::vector<StagnationPoint> find_stagnation_points(const GaussianEnsembleParams& params,
                                                    const BoundingBox& box, int grid) {
  params.validate();
  box.validate();
  if (grid < 2) throw UsageError("stagnation search grid must have at least 2 cells per axis");
  for (PhasePoint corner : {PhasePoint{box.x_lo, box.k_lo}, PhasePoint{box.x_lo, box.k_hi},
                            PhasePoint{box.x_hi, box.k_lo}, PhasePoint{box.x_hi, box.k_hi}})
    require_trust(params, corner, "find_stagnation_points");

  std::vector<PhasePoint> seeds;
  if (box.x_lo <= 0.0 && 0.0 <= box.x_hi && box.k_lo <= 0.0 && 0.0 <= box.k_hi)
    seeds.push_back({0.0, 0.0});
  const std::vector<double> zx = f_zeros(params.alpha, box.x_lo, box.x_hi, grid);
  const std::vector<double> zk = f_zeros(params.alpha, box.k_lo, box.k_hi, grid);
  for (double x : zx)
    for (double k : zk) seeds.push_back({x, k});

  std::vector<StagnationPoint> out;
  for (PhasePoint seed : seeds) {
    StagnationPoint s;
    s.location = (seed.x == 0.0 && seed.k == 0.0) ? seed : polish(params, seed);
    s.residual = norm(currents_closed(params, s.location));
    if (!(s.residual < kResidualTolerance))
      throw NumericalFailure("stagnation point residual " + std::to_string(s.residual) +
                             " above tolerance");
    out.push_back(s);
  }
  std::sort(out.begin(), out.end(), [](const StagnationPoint& l, const StagnationPoint& r) {
    return l.location.x != r.location.x ? l.location.x < r.location.x : l.location.k < r.location.k;
  });

  for (std::size_t i = 0; i < out.size(); ++i) {
    double nearest = INFINITY;
    for (std::size_t j = 0; j < out.size(); ++j) {
      if (i == j) continue;
      nearest = std::min(nearest, std::hypot(out[i].location.x - out[j].location.x,
                                             out[i].location.k - out[j].location.k));
    }
    double radius = std::isfinite(nearest) ? nearest / 3.0 : 0.1;
    LoopAnalysis loop;
    for (int attempt = 0;; ++attempt) {
      try {
        loop = analyse_loop(params, out[i].location, radius);
        break;
      } catch (const DegenerateLoop&) {
        if (attempt == 5) throw;
        radius *= 0.5;
      }
    }
    out[i].winding = loop.winding;
    out[i].circulation = static_cast<int>(loop.circulation);
    if (out[i].circulation < 0)
      out[i].cls = StagnationClass::vortex_cw;
    else if (out[i].circulation > 0)
      out[i].cls = StagnationClass::vortex_ccw;
    else if (std::round(loop.winding) == 1.0)
      out[i].cls = StagnationClass::node;
    else
      out[i].cls = StagnationClass::saddle_or_separatrix;
  }
  return out;
}

std::vector<PhasePoint> low_speed_nodes(const GaussianEnsembleParams& params,
                                        const BoundingBox& box, int grid, double threshold) {
  params.validate();
  box.validate();
  if (grid < 2) throw UsageError("envelope grid must have at least 2 nodes per axis");
  std::vector<PhasePoint> out;
  for (int j = 0; j < grid; ++j) {
    const double k = box.k_lo + (box.k_hi - box.k_lo) * j / (grid - 1);
    for (int i = 0; i < grid; ++i) {
      const PhasePoint p{box.x_lo + (box.x_hi - box.x_lo) * i / (grid - 1), k};
      if (!in_trust_region(params, p)) continue;
      if (norm(velocity_w(params, p)) < threshold) out.push_back(p);
    }
  }
  return out;
}

QuantumTrajectory integrate_quantum_trajectory(const GaussianEnsembleParams& params,
                                               PhasePoint start, double step, double duration) {
  params.validate();
  if (!(step > 0.0) || !(duration > 0.0) || !(step < duration))
    throw UsageError("need 0 < step < duration");
  require_trust(params, start, "integrate_quantum_trajectory");

  const double a = params.a;
  const double h0 = toda_energy(a, start);
  const auto quantum_rhs = [&params](PhasePoint p) { return velocity_w(params, p); };
  const auto classical_rhs = [&params](PhasePoint p) { return classical_velocity(params, p); };
  const long steps = std::lround(std::ceil(duration / step - 1e-9));

  QuantumTrajectory out;
  out.quantum.samples.reserve(static_cast<std::size_t>(steps) + 1);
  out.classical.samples.reserve(static_cast<std::size_t>(steps) + 1);
  PhasePoint q = start;
  PhasePoint c = start;
  auto record = [h0, a](Trajectory& t, double tau, PhasePoint p) {
    const double r = toda_energy(a, p) - h0;
    t.samples.push_back({tau, p, species_from_phase(p), r});
    t.max_energy_drift = std::max(t.max_energy_drift, std::abs(r));
  };
  record(out.quantum, 0.0, q);
  record(out.classical, 0.0, c);
  for (long n = 1; n <= steps; ++n) {
    const double tau = n * step;
    try {
      q = rk4_step(quantum_rhs, q, step);
    } catch (const DomainError&) {
      throw TrajectoryFailure("quantum trajectory left the trust region near tau=" +
                                  std::to_string(tau),
                              std::move(out.quantum));
    }
    if (!in_trust_region(params, q) || !std::isfinite(q.x) || !std::isfinite(q.k))
      throw TrajectoryFailure("quantum trajectory left the trust region at tau=" +
                                  std::to_string(tau),
                              std::move(out.quantum));
    c = rk4_step(classical_rhs, c, step);
    record(out.quantum, tau, q);
    record(out.classical, tau, c);
  }
  return out;
}

PeriodMeasurement quantum_return(const GaussianEnsembleParams& params, PhasePoint start,
                                 double step, double duration) {
  params.validate();
  if (!(step > 0.0) || !(duration > 0.0) || !(step < duration))
    throw UsageError("need 0 < step < duration");
  require_trust(params, start, "quantum_return");
  const auto rhs = [&params](PhasePoint p) { return velocity_w(params, p); };
  const long steps = std::lround(std::ceil(duration / step - 1e-9));
  PeriodMeasurement out;
  if (start.k == 0.0 && start.x > 0.0) out.crossings.push_back({0.0, start.x});
  PhasePoint p = start;
  for (long n = 0; n < steps; ++n) {
    PhasePoint next;
    try {
      next = rk4_step(rhs, p, step);
      if (auto c = locate_section_crossing(rhs, p, next, n * step)) out.crossings.push_back(*c);
    } catch (const DomainError&) {
      throw NumericalFailure("quantum_return: trajectory left the trust region");
    }
    p = next;
  }
  if (out.crossings.size() < 2)
    throw NumericalFailure("quantum_return: fewer than two section crossings within duration");
  out.period = (out.crossings.back().tau - out.crossings.front().tau) /
               static_cast<double>(out.crossings.size() - 1);
  return out;
}

namespace {

// coefficient (-1)^eta / (4^eta (2 eta + 1)!) times the Gaussian derivative
// factor -alpha^(2 eta + 1) H_(2 eta + 1)(alpha chi), without G itself
double series_factor(double alpha, double chi, int eta) {
  const int n = 2 * eta + 1;
  const double log_mag = n * std::log(alpha) - eta * std::log(4.0) - std::lgamma(n + 1.0);
  const double sign = eta % 2 == 0 ? 1.0 : -1.0;
  return -sign * std::exp(log_mag) * specfun::hermite_odd(n, alpha * chi);
}

}  // namespace

PhaseVelocity series_currents(const GaussianEnsembleParams& params, PhasePoint p, int eta_max) {
  params.validate();
  if (eta_max < 0 || eta_max > kMaxSeriesOrder)
    throw UsageError("series_currents: eta_max must lie in [0, 25]");
  double sx = 0.0;
  double sk = 0.0;
  for (int eta = 0; eta <= eta_max; ++eta) {
    sx += series_factor(params.alpha, p.x, eta);
    sk += series_factor(params.alpha, p.k, eta);
  }
  const double g = gaussian_w(params, p);
  return {std::sinh(p.k) * sx * g, -params.a * std::sinh(p.x) * sk * g};
}

double series_term_x(const GaussianEnsembleParams& params, PhasePoint p, int eta) {
  if (eta < 0 || eta > kMaxSeriesOrder) throw UsageError("series_term_x: eta must lie in [0, 25]");
  return std::abs(std::sinh(p.k) * series_factor(params.alpha, p.x, eta) * gaussian_w(params, p));
}

}  // namespace todaflow::gaussian
