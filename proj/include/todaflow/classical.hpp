#pragma once

#include <vector>

#include "todaflow/errors.hpp"
#include "todaflow/model.hpp"
#include "todaflow/ode.hpp"
#include "todaflow/specfun.hpp"

namespace todaflow {

struct TrajectorySample {
  double tau = 0.0;
  PhasePoint point;
  SpeciesPair species;
  double energy_residual = 0.0;  // H(point) - reference energy
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  double max_energy_drift = 0.0;
};

/// NumericalFailure that keeps the samples produced before the failure.
class TrajectoryFailure : public NumericalFailure {
 public:
  TrajectoryFailure(const std::string& what, Trajectory partial)
      : NumericalFailure(what), partial_(std::move(partial)) {}
  const Trajectory& partial() const noexcept { return partial_; }

 private:
  Trajectory partial_;
};

struct OrbitSpec {
  SeparableHamiltonian model{ModelKind::toda, 1.0};
  double eps = 2.5;
  PhasePoint start;
  double step = 1e-3;
  double duration = 10.0;
  double drift_tolerance = 1e-8;

  /// Start on the k = 0 section at the positive-x turning point of the
  /// level curve H = eps. Throws DomainError when eps <= 1 + a.
  static OrbitSpec from_energy(const SeparableHamiltonian& model, double eps, double step,
                               double duration);
  /// Start at an explicit point; eps is H(start).
  static OrbitSpec from_point(const SeparableHamiltonian& model, PhasePoint start, double step,
                              double duration);

  void validate() const;
};

/// (dH/dk, -dH/dx).
PhaseVelocity hamilton_rhs(const SeparableHamiltonian& h, PhasePoint p);

/// Fixed-step RK4 integration. Every step is recorded. Throws
/// TrajectoryFailure when |H - eps| exceeds 10 x drift_tolerance.
Trajectory integrate_orbit(const OrbitSpec& spec);

struct PeriodMeasurement {
  double period = 0.0;
  std::vector<SectionCrossing> crossings;
};

/// Period from successive crossings of {k = 0, x > 0} (k decreasing there)
/// within spec.duration. Needs at least two crossings.
PeriodMeasurement measure_orbit_period(const OrbitSpec& spec);
double orbit_period(const OrbitSpec& spec);

// ---------------------------------------------------------------------------
// Isotropic (a = 1) Toda closed form, in terms of the half-sum of species
// T = (y + z) / 2, which oscillates between the roots T_- and T_+ of
// T^2 - eps T + 1.

/// kappa(eps) = 2 eps sqrt(eps^2 - 4) / (eps (eps + sqrt(eps^2 - 4)) - 2).
double toda_modulus(double eps);

/// sqrt((eps + sqrt(eps^2 - 4)) - 2) / (2 sqrt 2), the time scale inside sn.
double toda_sn_rate(double eps);

/// T(tau) = 2 / (sqrt(eps^2 - 4) (1 - 2 sn^2(rate tau | kappa)) + eps).
double toda_parametric_T(double eps, double tau,
                         specfun::EllipticConvention convention =
                             specfun::EllipticConvention::parameter_m);

/// y, z = T +- sqrt(T^2 - T / (eps - T)); a discriminant in (-1e-12, 0) is
/// clamped to zero, anything more negative is a NumericalFailure.
SpeciesPair toda_species_from_T(double eps, double T);

SpeciesPair toda_species_analytic(double eps, double tau,
                                  specfun::EllipticConvention convention =
                                      specfun::EllipticConvention::parameter_m);

struct TodaClosedForm {
  double eps = 0.0;
  double kappa = 0.0;
  double t_plus = 0.0;
  double t_minus = 0.0;
  /// 8 sqrt 2 sine_k_integral(kappa) / sqrt((eps + sqrt(eps^2 - 4)) - 2)
  double period_formula = 0.0;
  /// measured on the integrated isotropic Toda orbit
  double period_ode = 0.0;
  double ratio = 0.0;  // period_formula / period_ode
  specfun::EllipticConvention convention = specfun::EllipticConvention::parameter_m;
  /// RMS of (T_formula - T_ode) plus RMS constraint residual over one
  /// period, per convention. The smaller one selects `convention`.
  double mismatch_parameter_m = 0.0;
  double mismatch_modulus = 0.0;
  /// true when the selected convention reproduces the ODE to 1e-6
  bool formula_consistent = false;
};

TodaClosedForm toda_closed_period(double eps);

/// Sample T_ode(tau) = (y + z)/2 of the isotropic Toda orbit started at
/// y = z = T_- (so tau = 0 matches the closed form). `taus` must be
/// non-decreasing and non-negative.
std::vector<double> toda_T_ode(double eps, const std::vector<double>& taus, double max_step = 1e-3);
/// Same orbit, returning the species themselves.
std::vector<SpeciesPair> toda_species_ode(double eps, const std::vector<double>& taus,
                                          double max_step = 1e-3);

enum class ConstraintModel { toda, lv };
enum class TSource { ode, formula };

/// Residual of the squared-velocity constraint on T at time tau,
/// with dT/dtau by central differences (step 1e-4):
///   toda: T'^2 - T^2 (T - eps)^2 - T (T - eps),  T = (y + z)/2
///   lv:   T'^2 - T^2 + 4 exp(T - eps),           T = y + z
/// Both isotropic (a = 1). The lv model only has an ODE source.
double constraint_residual(double eps, double tau, ConstraintModel which,
                           TSource source = TSource::ode,
                           specfun::EllipticConvention convention =
                               specfun::EllipticConvention::parameter_m);

}  // namespace todaflow
