#include "todaflow/thermo.hpp"

#include <cmath>
#include <string>

#include "todaflow/errors.hpp"
#include "todaflow/specfun.hpp"

namespace todaflow::thermo {

namespace {

using specfun::bessel_k;
using specfun::bessel_k_scaled;

constexpr double kRelativeStep = 1e-4;

void require_positive(double beta, double a) {
  if (!std::isfinite(beta) || beta <= 0.0) throw DomainError("beta must be positive and finite");
  if (!std::isfinite(a) || a <= 0.0) throw DomainError("a must be positive and finite");
}

// sign(Z_ST) without underflow: K0 K0 / (K1 K1) - a beta^2 / 24
double z_st_sign_function(double beta, double a) {
  const double r0 = bessel_k_scaled(0, beta) / bessel_k_scaled(1, beta);
  const double r1 = bessel_k_scaled(0, a * beta) / bessel_k_scaled(1, a * beta);
  return r0 * r1 - a * beta * beta / 24.0;
}

[[noreturn]] void throw_invalid(double beta, double a) {
  const double bmax = validity_boundary(a);
  throw ValidityError("O(hbar^2) ensemble invalid at beta=" + std::to_string(beta) +
                          " (Z_ST <= 0); for a=" + std::to_string(a) +
                          " beta must stay below " + std::to_string(bmax),
                      bmax);
}

double log_z(double beta, double a, Order order) {
  return std::log(order == Order::classical ? z0_closed(beta, a) : z_st_closed(beta, a));
}

// d/dx (K1/K0)
double ratio_derivative(double x) {
  const double r = bessel_k_scaled(1, x) / bessel_k_scaled(0, x);
  return -1.0 - r / x + r * r;
}

}  // namespace

const char* to_string(Order order) { return order == Order::classical ? "classical" : "h2"; }

Order parse_order(const std::string& name) {
  if (name == "classical") return Order::classical;
  if (name == "h2") return Order::h2;
  throw UsageError("unknown order '" + name + "' (expected classical or h2)");
}

void ThermalEnsembleParams::validate() const {
  require_positive(beta, a);
  if (order == Order::h2 && !(z_st_sign_function(beta, a) > 0.0)) throw_invalid(beta, a);
}

double z0_closed(double beta, double a) {
  require_positive(beta, a);
  return 4.0 * bessel_k(0, beta) * bessel_k(0, a * beta);
}

double z_st_closed(double beta, double a) {
  require_positive(beta, a);
  return 4.0 * (bessel_k(0, beta) * bessel_k(0, a * beta) -
                a * beta * beta / 24.0 * bessel_k(1, beta) * bessel_k(1, a * beta));
}

double validity_boundary(double a) {
  if (!std::isfinite(a) || a <= 0.0) throw DomainError("a must be positive and finite");
  double lo = 1e-3;
  double hi = 1.0;
  while (z_st_sign_function(hi, a) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e6) throw NumericalFailure("validity_boundary: no sign change of Z_ST found");
  }
  for (int i = 0; i < 200 && hi - lo > 4e-16 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (z_st_sign_function(mid, a) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

double w0(const ThermalEnsembleParams& params, PhasePoint p) {
  require_positive(params.beta, params.a);
  const double b = params.beta;
  const double a = params.a;
  // exp(-b (cosh k + a cosh x)) / (4 K0(b) K0(ab)), with the e^{-b(1+a)}
  // factors of the scaled Bessel functions cancelled
  const double num = std::exp(-b * (std::cosh(p.k) - 1.0) - a * b * (std::cosh(p.x) - 1.0));
  return num / (4.0 * bessel_k_scaled(0, b) * bessel_k_scaled(0, a * b));
}

double epsilon_correction(const ThermalEnsembleParams& params, PhasePoint p) {
  const double b = params.beta;
  const double a = params.a;
  const double chx = std::cosh(p.x);
  const double chk = std::cosh(p.k);
  const double shx = std::sinh(p.x);
  const double shk = std::sinh(p.k);
  return a * b * b / 8.0 * chk * chx *
         (b / 3.0 * (a * std::tanh(p.x) * shx + std::tanh(p.k) * shk) - 1.0);
}

double w_st2(const ThermalEnsembleParams& params, PhasePoint p) {
  require_positive(params.beta, params.a);
  const double zst = z_st_closed(params.beta, params.a);
  if (!(z_st_sign_function(params.beta, params.a) > 0.0)) throw_invalid(params.beta, params.a);
  const double z0 = z0_closed(params.beta, params.a);
  return z0 / zst * w0(params, p) * (1.0 + epsilon_correction(params, p));
}

PhaseVelocity currents_td(const ThermalEnsembleParams& params, PhasePoint p) {
  const double b = params.beta;
  const double a = params.a;
  const double W = w0(params, p);
  const double eps = epsilon_correction(params, p);
  const double shx = std::sinh(p.x);
  const double shk = std::sinh(p.k);
  const double jx =
      shk * (1.0 + eps - a * b / 24.0 * (a * b * shx * shx - std::cosh(p.x))) * W;
  const double jk = -a * shx * (1.0 + eps - b / 24.0 * (b * shk * shk - std::cosh(p.k))) * W;
  return {jx, jk};
}

PhaseVelocity currents_classical(const ThermalEnsembleParams& params, PhasePoint p) {
  const double W = w0(params, p);
  return {std::sinh(p.k) * W, -params.a * std::sinh(p.x) * W};
}

double div_currents_td(const ThermalEnsembleParams& params, PhasePoint p, double h) {
  const double djx =
      currents_td(params, {p.x + h, p.k}).vx - currents_td(params, {p.x - h, p.k}).vx;
  const double djk =
      currents_td(params, {p.x, p.k + h}).vk - currents_td(params, {p.x, p.k - h}).vk;
  return (djx + djk) / (2.0 * h);
}

double div_w_td(const ThermalEnsembleParams& params, PhasePoint p) {
  const double a = params.a;
  const double b = params.beta;
  return a * b * b / 12.0 * std::sinh(p.x) * std::sinh(p.k) * (a * std::cosh(p.x) - std::cosh(p.k));
}

double truncation_radius(double beta_eff) {
  if (!(beta_eff > 0.0)) throw DomainError("truncation_radius: beta must be positive");
  return std::acosh(1.0 + 36.8413614879047 / beta_eff);  // -ln(1e-16)
}

double classical_energy_analytic(double beta, double a) {
  require_positive(beta, a);
  return bessel_k_scaled(1, beta) / bessel_k_scaled(0, beta) +
         a * bessel_k_scaled(1, a * beta) / bessel_k_scaled(0, a * beta);
}

double classical_heat_capacity_analytic(double beta, double a) {
  require_positive(beta, a);
  return -beta * beta * (ratio_derivative(beta) + a * a * ratio_derivative(a * beta));
}

ThermalObservables observables(const ThermalEnsembleParams& params) {
  params.validate();
  const double b = params.beta;
  const double a = params.a;
  const double h = b * kRelativeStep;
  ThermalObservables out;
  out.order = params.order;
  out.z0 = z0_closed(b, a);
  out.z_st = z_st_closed(b, a);

  if (params.order == Order::h2) {
    const double bmax = validity_boundary(a);
    if (b + 2.0 * h >= bmax) {
      throw ValidityError("beta=" + std::to_string(b) +
                              " is within two difference steps of the validity boundary " +
                              std::to_string(bmax),
                          bmax);
    }
  }

  const double lm = log_z(b - h, a, params.order);
  const double l0 = log_z(b, a, params.order);
  const double lp = log_z(b + h, a, params.order);
  out.energy = params.order == Order::classical ? classical_energy_analytic(b, a)
                                                : -(lp - lm) / (2.0 * h);
  out.heat_capacity = b * b * (lp - 2.0 * l0 + lm) / (h * h);
  return out;
}

}  // namespace todaflow::thermo
