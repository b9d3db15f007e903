#include "todaflow/model.hpp"

#include <cmath>

#include "todaflow/errors.hpp"

namespace todaflow {

const char* to_string(ModelKind kind) {
  return kind == ModelKind::toda ? "toda" : "lv";
}

ModelKind parse_model_kind(const std::string& name) {
  if (name == "toda") return ModelKind::toda;
  if (name == "lv") return ModelKind::lotka_volterra;
  throw UsageError("unknown model '" + name + "' (expected toda or lv)");
}

SeparableHamiltonian::SeparableHamiltonian(ModelKind kind, double a) : kind_(kind), a_(a) {
  if (!std::isfinite(a) || a <= 0.0) throw DomainError("anisotropy a must be positive and finite");
}

double SeparableHamiltonian::kinetic(double k) const {
  return kind_ == ModelKind::toda ? std::cosh(k) : k + std::exp(-k);
}

double SeparableHamiltonian::potential(double x) const {
  return kind_ == ModelKind::toda ? a_ * std::cosh(x) : a_ * (x + std::exp(-x));
}

double SeparableHamiltonian::dkinetic(double k) const {
  return kind_ == ModelKind::toda ? std::sinh(k) : -std::expm1(-k);
}

double SeparableHamiltonian::dpotential(double x) const {
  return kind_ == ModelKind::toda ? a_ * std::sinh(x) : -a_ * std::expm1(-x);
}

double SeparableHamiltonian::d2kinetic(double k) const {
  return kind_ == ModelKind::toda ? std::cosh(k) : std::exp(-k);
}

double SeparableHamiltonian::d2potential(double x) const {
  return kind_ == ModelKind::toda ? a_ * std::cosh(x) : a_ * std::exp(-x);
}

double energy(const SeparableHamiltonian& h, PhasePoint p) {
  return h.kinetic(p.k) + h.potential(p.x);
}

double odd_derivative(const SeparableHamiltonian& h, Side side, int order, double coord) {
  if (order < 1 || order % 2 == 0)
    throw UsageError("odd_derivative: order must be odd and positive");
  const double scale = side == Side::kinetic ? 1.0 : h.a();
  if (h.kind() == ModelKind::toda) return scale * std::sinh(coord);
  // d/du (u + e^{-u}) = 1 - e^{-u}; every higher odd derivative is -e^{-u}
  if (order == 1) return -scale * std::expm1(-coord);
  return -scale * std::exp(-coord);
}

SpeciesPair species_from_phase(PhasePoint p) { return {std::exp(-p.x), std::exp(-p.k)}; }

double harmonic_residual(const SeparableHamiltonian& h, PhasePoint p) {
  const double a = h.a();
  double kin;
  double pot;
  if (h.kind() == ModelKind::toda) {
    // cosh u - 1 - u^2/2 = 2 sinh^2(u/2) - u^2/2, kept in the subtracted form
    const double sk = std::sinh(0.5 * p.k);
    const double sx = std::sinh(0.5 * p.x);
    kin = 2.0 * sk * sk - 0.5 * p.k * p.k;
    pot = a * (2.0 * sx * sx - 0.5 * p.x * p.x);
  } else {
    // u + e^{-u} - 1 - u^2/2 = expm1(-u) + u - u^2/2
    kin = std::expm1(-p.k) + p.k - 0.5 * p.k * p.k;
    pot = a * (std::expm1(-p.x) + p.x - 0.5 * p.x * p.x);
  }
  return kin + pot;
}

}  // namespace todaflow
