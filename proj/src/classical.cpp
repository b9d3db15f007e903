#include "todaflow/classical.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace todaflow {

namespace {

using specfun::EllipticConvention;

constexpr double kDiscriminantClamp = -1e-12;
constexpr double kDerivativeStep = 1e-4;

void require_closed_toda(double eps, const char* what) {
  if (!std::isfinite(eps) || eps <= 2.0)
    throw DomainError(std::string(what) + ": isotropic Toda orbits need eps > 2");
}

double lv_turning_point(double a, double eps) {
  // a (x + e^{-x}) = eps - 1 on x > 0
  const double target = (eps - 1.0) / a;
  double lo = 0.0;
  double hi = target;
  for (int i = 0; i < 200 && hi - lo > 1e-16 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid + std::exp(-mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

PhaseVelocity isotropic_toda(PhasePoint p) { return {std::sinh(p.k), -std::sinh(p.x)}; }

}  // namespace

OrbitSpec OrbitSpec::from_energy(const SeparableHamiltonian& model, double eps, double step,
                                 double duration) {
  if (!std::isfinite(eps) || eps <= model.ground_energy())
    throw DomainError("closed orbits need eps > 1 + a");
  OrbitSpec spec;
  spec.model = model;
  spec.eps = eps;
  spec.step = step;
  spec.duration = duration;
  if (model.kind() == ModelKind::toda)
    spec.start = {std::acosh((eps - 1.0) / model.a()), 0.0};
  else
    spec.start = {lv_turning_point(model.a(), eps), 0.0};
  spec.validate();
  return spec;
}

OrbitSpec OrbitSpec::from_point(const SeparableHamiltonian& model, PhasePoint start, double step,
                                double duration) {
  OrbitSpec spec;
  spec.model = model;
  spec.start = start;
  spec.eps = energy(model, start);
  spec.step = step;
  spec.duration = duration;
  spec.validate();
  return spec;
}

void OrbitSpec::validate() const {
  if (!std::isfinite(start.x) || !std::isfinite(start.k)) throw DomainError("non-finite start point");
  if (!(eps > model.ground_energy())) throw DomainError("closed orbits need eps > 1 + a");
  if (!(step > 0.0) || !(duration > 0.0) || !(step < duration))
    throw UsageError("need 0 < step < duration");
  if (!(drift_tolerance > 0.0)) throw UsageError("drift tolerance must be positive");
}

PhaseVelocity hamilton_rhs(const SeparableHamiltonian& h, PhasePoint p) {
  return {h.dkinetic(p.k), -h.dpotential(p.x)};
}

Trajectory integrate_orbit(const OrbitSpec& spec) {
  spec.validate();
  const auto rhs = [&h = spec.model](PhasePoint p) { return hamilton_rhs(h, p); };
  const long steps = std::lround(std::ceil(spec.duration / spec.step - 1e-9));
  const double fail_at = 10.0 * spec.drift_tolerance;

  Trajectory out;
  out.samples.reserve(static_cast<std::size_t>(steps) + 1);
  PhasePoint p = spec.start;
  for (long n = 0; n <= steps; ++n) {
    if (n > 0) p = rk4_step(rhs, p, spec.step);
    const double residual = energy(spec.model, p) - spec.eps;
    out.samples.push_back({n * spec.step, p, species_from_phase(p), residual});
    out.max_energy_drift = std::max(out.max_energy_drift, std::abs(residual));
    if (!(std::abs(residual) <= fail_at)) {
      throw TrajectoryFailure("energy drift " + std::to_string(residual) + " exceeds " +
                                  std::to_string(fail_at) + " at tau=" +
                                  std::to_string(n * spec.step),
                              std::move(out));
    }
  }
  return out;
}

PeriodMeasurement measure_orbit_period(const OrbitSpec& spec) {
  spec.validate();
  const auto rhs = [&h = spec.model](PhasePoint p) { return hamilton_rhs(h, p); };
  const long steps = std::lround(std::ceil(spec.duration / spec.step - 1e-9));
  PeriodMeasurement out;
  PhasePoint p = spec.start;
  for (long n = 0; n < steps; ++n) {
    const PhasePoint next = rk4_step(rhs, p, spec.step);
    if (auto c = locate_section_crossing(rhs, p, next, n * spec.step)) out.crossings.push_back(*c);
    p = next;
  }
  // The start itself sits on the section when it came from from_energy.
  if (spec.start.k == 0.0 && spec.start.x > 0.0)
    out.crossings.insert(out.crossings.begin(), SectionCrossing{0.0, spec.start.x});
  if (out.crossings.size() < 2)
    throw NumericalFailure("orbit_period: fewer than two section crossings within duration");
  out.period = (out.crossings.back().tau - out.crossings.front().tau) /
               static_cast<double>(out.crossings.size() - 1);
  return out;
}

double orbit_period(const OrbitSpec& spec) { return measure_orbit_period(spec).period; }

double toda_modulus(double eps) {
  require_closed_toda(eps, "toda_modulus");
  const double r = std::sqrt(eps * eps - 4.0);
  return 2.0 * eps * r / (eps * (eps + r) - 2.0);
}

double toda_sn_rate(double eps) {
  require_closed_toda(eps, "toda_sn_rate");
  const double r = std::sqrt(eps * eps - 4.0);
  return std::sqrt((eps + r) - 2.0) / (2.0 * std::numbers::sqrt2);
}

double toda_parametric_T(double eps, double tau, EllipticConvention convention) {
  require_closed_toda(eps, "toda_parametric_T");
  const double r = std::sqrt(eps * eps - 4.0);
  const double sn = specfun::jacobi_sn(toda_sn_rate(eps) * tau, toda_modulus(eps), convention);
  return 2.0 / (r * (1.0 - 2.0 * sn * sn) + eps);
}

SpeciesPair toda_species_from_T(double eps, double T) {
  double disc = T * T - T / (eps - T);
  if (disc < 0.0) {
    if (disc < kDiscriminantClamp)
      throw NumericalFailure("toda_species_from_T: negative discriminant " + std::to_string(disc));
    disc = 0.0;
  }
  const double root = std::sqrt(disc);
  return {T + root, T - root};
}

SpeciesPair toda_species_analytic(double eps, double tau, EllipticConvention convention) {
  return toda_species_from_T(eps, toda_parametric_T(eps, tau, convention));
}

std::vector<SpeciesPair> toda_species_ode(double eps, const std::vector<double>& taus,
                                          double max_step) {
  require_closed_toda(eps, "toda_species_ode");
  const double t_minus = 0.5 * (eps - std::sqrt(eps * eps - 4.0));
  PhasePoint p{-std::log(t_minus), -std::log(t_minus)};
  double now = 0.0;
  std::vector<SpeciesPair> out;
  out.reserve(taus.size());
  for (double target : taus) {
    if (target < now) throw UsageError("toda_T_ode: sample times must be non-decreasing and >= 0");
    const double span = target - now;
    if (span > 0.0) {
      const long n = std::max(1L, std::lround(std::ceil(span / max_step)));
      const double h = span / static_cast<double>(n);
      for (long i = 0; i < n; ++i) p = rk4_step(isotropic_toda, p, h);
      now = target;
    }
    out.push_back(species_from_phase(p));
  }
  return out;
}

std::vector<double> toda_T_ode(double eps, const std::vector<double>& taus, double max_step) {
  std::vector<double> out;
  out.reserve(taus.size());
  for (const SpeciesPair& s : toda_species_ode(eps, taus, max_step)) out.push_back(0.5 * (s.y + s.z));
  return out;
}

namespace {

double toda_constraint(double eps, double T, double dT) {
  return dT * dT - T * T * (T - eps) * (T - eps) - T * (T - eps);
}

// Mismatch of the closed form under one convention against the ODE.
double formula_mismatch(double eps, double period, EllipticConvention convention) {
  constexpr int kSamples = 256;
  std::vector<double> taus;
  for (int i = 0; i < kSamples; ++i) {
    const double t = period * (i + 0.5) / kSamples;
    taus.push_back(t);
  }
  const std::vector<double> ode = toda_T_ode(eps, taus);
  double diff2 = 0.0;
  double res2 = 0.0;
  for (int i = 0; i < kSamples; ++i) {
    const double t = taus[static_cast<std::size_t>(i)];
    const double T = toda_parametric_T(eps, t, convention);
    const double dT = (toda_parametric_T(eps, t + kDerivativeStep, convention) -
                       toda_parametric_T(eps, t - kDerivativeStep, convention)) /
                      (2.0 * kDerivativeStep);
    const double d = T - ode[static_cast<std::size_t>(i)];
    const double r = toda_constraint(eps, T, dT);
    diff2 += d * d;
    res2 += r * r;
  }
  return std::sqrt(diff2 / kSamples) + std::sqrt(res2 / kSamples);
}

}  // namespace

TodaClosedForm toda_closed_period(double eps) {
  require_closed_toda(eps, "toda_closed_period");
  TodaClosedForm out;
  out.eps = eps;
  const double r = std::sqrt(eps * eps - 4.0);
  out.kappa = toda_modulus(eps);
  out.t_plus = 0.5 * (eps + r);
  out.t_minus = 0.5 * (eps - r);
  out.period_formula =
      8.0 * std::numbers::sqrt2 * specfun::sine_k_integral(out.kappa) / std::sqrt((eps + r) - 2.0);

  const SeparableHamiltonian toda(ModelKind::toda, 1.0);
  // Small orbits have period ~2pi; large ones are faster. Five periods is
  // plenty for the averaging in measure_orbit_period.
  OrbitSpec spec = OrbitSpec::from_energy(toda, eps, 1e-3, 5.0 * 2.0 * std::numbers::pi + 1.0);
  out.period_ode = orbit_period(spec);
  out.ratio = out.period_formula / out.period_ode;

  out.mismatch_parameter_m = formula_mismatch(eps, out.period_ode, EllipticConvention::parameter_m);
  out.mismatch_modulus = formula_mismatch(eps, out.period_ode, EllipticConvention::modulus_kappa);
  out.convention = out.mismatch_modulus < out.mismatch_parameter_m
                       ? EllipticConvention::modulus_kappa
                       : EllipticConvention::parameter_m;
  out.formula_consistent = std::min(out.mismatch_modulus, out.mismatch_parameter_m) < 1e-6;
  return out;
}

double constraint_residual(double eps, double tau, ConstraintModel which, TSource source,
                           EllipticConvention convention) {
  const double d = kDerivativeStep;
  if (which == ConstraintModel::lv) {
    if (source == TSource::formula)
      throw UsageError("constraint_residual: the lv model has no closed-form T(tau)");
    if (tau < d) throw UsageError("constraint_residual: tau must be at least the difference step");
    const SeparableHamiltonian lv(ModelKind::lotka_volterra, 1.0);
    const OrbitSpec spec = OrbitSpec::from_energy(lv, eps, 1e-3, 1.0);
    const auto rhs = [&lv](PhasePoint p) { return hamilton_rhs(lv, p); };
    auto T_at = [&](double target) {
      const long n = std::max(1L, std::lround(std::ceil(target / 1e-3)));
      const double h = target / static_cast<double>(n);
      PhasePoint p = spec.start;
      for (long i = 0; i < n; ++i) p = rk4_step(rhs, p, h);
      const SpeciesPair s = species_from_phase(p);
      return s.y + s.z;
    };
    const double T = T_at(tau);
    const double dT = (T_at(tau + d) - T_at(tau - d)) / (2.0 * d);
    return dT * dT - T * T + 4.0 * std::exp(T - eps);
  }

  require_closed_toda(eps, "constraint_residual");
  double T;
  double dT;
  if (source == TSource::formula) {
    T = toda_parametric_T(eps, tau, convention);
    dT = (toda_parametric_T(eps, tau + d, convention) - toda_parametric_T(eps, tau - d, convention)) /
         (2.0 * d);
  } else {
    if (tau < d) throw UsageError("constraint_residual: tau must be at least the difference step");
    const std::vector<double> v = toda_T_ode(eps, {tau - d, tau, tau + d});
    T = v[1];
    dT = (v[2] - v[0]) / (2.0 * d);
  }
  return toda_constraint(eps, T, dT);
}

}  // namespace todaflow
