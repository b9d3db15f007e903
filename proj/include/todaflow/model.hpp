#pragma once

#include <string>

namespace todaflow {

/// Dimensionless canonical pair.
struct PhasePoint {
  double x = 0.0;
  double k = 0.0;
};

/// Normalized predator (y) and prey (z) populations.
struct SpeciesPair {
  double y = 1.0;
  double z = 1.0;
};

enum class ModelKind { lotka_volterra, toda };

const char* to_string(ModelKind kind);
/// Accepts "lv" / "toda". Throws UsageError otherwise.
ModelKind parse_model_kind(const std::string& name);

enum class Side { kinetic, potential };

/// H(x, k) = K(k) + V(x) for the two prey-predator models.
///
///   Lotka-Volterra:  K(k) = k + e^{-k},   V(x) = a (x + e^{-x})
///   Toda-like:       K(k) = cosh k,       V(x) = a cosh x
///
/// Both have their minimum 1 + a at the origin.
class SeparableHamiltonian {
 public:
  /// Throws DomainError unless a > 0 and finite.
  SeparableHamiltonian(ModelKind kind, double a);

  ModelKind kind() const noexcept { return kind_; }
  double a() const noexcept { return a_; }

  double kinetic(double k) const;
  double potential(double x) const;
  double dkinetic(double k) const;     // K'(k)
  double dpotential(double x) const;   // V'(x)
  double d2kinetic(double k) const;    // K''(k)
  double d2potential(double x) const;  // V''(x)

  /// Minimum of H, reached at the origin.
  double ground_energy() const noexcept { return 1.0 + a_; }

 private:
  ModelKind kind_;
  double a_;
};

double energy(const SeparableHamiltonian& h, PhasePoint p);

/// Odd-order derivative of K (kinetic side, d/dk) or V (potential side, d/dx).
/// Even or non-positive order is a UsageError.
double odd_derivative(const SeparableHamiltonian& h, Side side, int order, double coord);

/// y = e^{-x}, z = e^{-k}.
SpeciesPair species_from_phase(PhasePoint p);

/// H(x, k) - (1 + a) - (a x^2 + k^2) / 2. Cubic (LV) or quartic (Toda) in
/// the distance from the origin.
double harmonic_residual(const SeparableHamiltonian& h, PhasePoint p);

}  // namespace todaflow
