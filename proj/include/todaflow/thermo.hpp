#pragma once

#include "todaflow/model.hpp"
#include "todaflow/ode.hpp"

namespace todaflow::thermo {

/// Canonical ensemble of the Toda-like Hamiltonian cosh k + a cosh x.
enum class Order { classical, h2 };

const char* to_string(Order order);
Order parse_order(const std::string& name);

struct ThermalEnsembleParams {
  double beta = 1.0;
  double a = 1.0;
  Order order = Order::classical;

  /// beta > 0 and a > 0 (DomainError). For Order::h2 additionally
  /// Z_ST(beta, a) > 0 (ValidityError carrying the boundary beta).
  void validate() const;
};

struct ThermalObservables {
  double z0 = 0.0;
  double z_st = 0.0;
  double energy = 0.0;
  double heat_capacity = 0.0;
  Order order = Order::classical;
};

/// 4 K0(beta) K0(a beta).
double z0_closed(double beta, double a);
/// 4 (K0(beta) K0(a beta) - a beta^2 / 24 K1(beta) K1(a beta)).
double z_st_closed(double beta, double a);

/// Largest beta with Z_ST > 0 for this a, found by bisection.
double validity_boundary(double a);

/// Maxwell-Boltzmann W0 = exp(-beta H) / Z0.
double w0(const ThermalEnsembleParams& params, PhasePoint p);

/// O(hbar^2) relative correction
///   (a beta^2 / 8) cosh k cosh x [ (beta/3)(a tanh x sinh x + tanh k sinh k) - 1 ].
double epsilon_correction(const ThermalEnsembleParams& params, PhasePoint p);

/// (Z0 / Z_ST) W0 (1 + epsilon). Throws ValidityError outside the domain.
double w_st2(const ThermalEnsembleParams& params, PhasePoint p);

/// O(hbar^2) Wigner currents built on W0.
PhaseVelocity currents_td(const ThermalEnsembleParams& params, PhasePoint p);

/// Classical currents (sinh k W0, -a sinh x W0).
PhaseVelocity currents_classical(const ThermalEnsembleParams& params, PhasePoint p);

/// Central-difference divergence of currents_td.
double div_currents_td(const ThermalEnsembleParams& params, PhasePoint p, double h = 1e-4);

/// Liouvillianity quantifier (a beta^2 / 12) sinh x sinh k (a cosh x - cosh k).
double div_w_td(const ThermalEnsembleParams& params, PhasePoint p);

/// Integration half-width beyond which exp(-beta_eff (cosh u - 1)) < 1e-16.
double truncation_radius(double beta_eff);

/// Internal energy -d ln Z / d beta and heat capacity beta^2 d^2 ln Z / d beta^2.
/// Classical energy is analytic; everything else uses central differences
/// of ln Z with step beta * 1e-4.
ThermalObservables observables(const ThermalEnsembleParams& params);

/// Classical energy and heat capacity from Bessel-function derivatives
/// (K0' = -K1, K1' = -K0 - K1/x), used as a cross-check.
double classical_energy_analytic(double beta, double a);
double classical_heat_capacity_analytic(double beta, double a);

}  // namespace todaflow::thermo
