#pragma once

#include <cmath>
#include <optional>

#include "todaflow/model.hpp"

namespace todaflow {

/// Phase-space velocity (dx/dtau, dk/dtau).
struct PhaseVelocity {
  double vx = 0.0;
  double vk = 0.0;
};

/// One classical fourth-order Runge-Kutta step of dxi/dtau = f(xi).
template <class Rhs>
PhasePoint rk4_step(const Rhs& f, PhasePoint p, double h) {
  const PhaseVelocity k1 = f(p);
  const PhaseVelocity k2 = f({p.x + 0.5 * h * k1.vx, p.k + 0.5 * h * k1.vk});
  const PhaseVelocity k3 = f({p.x + 0.5 * h * k2.vx, p.k + 0.5 * h * k2.vk});
  const PhaseVelocity k4 = f({p.x + h * k3.vx, p.k + h * k3.vk});
  return {p.x + h / 6.0 * (k1.vx + 2.0 * k2.vx + 2.0 * k3.vx + k4.vx),
          p.k + h / 6.0 * (k1.vk + 2.0 * k2.vk + 2.0 * k3.vk + k4.vk)};
}

/// A crossing of the Poincare section {k = 0, x > 0} in the direction of
/// decreasing k, located to RK4 accuracy.
struct SectionCrossing {
  double tau;
  double x;
};

/// If the step from `from` (at time `tau`) to `to` crosses the section, locate
/// the crossing with one RK4 step in k as the independent variable:
///   d(x, tau)/dk = (vx / vk, 1 / vk).
template <class Rhs>
std::optional<SectionCrossing> locate_section_crossing(const Rhs& f, PhasePoint from, PhasePoint to,
                                                       double tau) {
  if (!(from.k > 0.0 && to.k <= 0.0)) return std::nullopt;
  if (from.x <= 0.0 && to.x <= 0.0) return std::nullopt;
  struct State {
    double x;
    double t;
  };
  auto g = [&f](double k, State s) {
    const PhaseVelocity v = f({s.x, k});
    return State{v.vx / v.vk, 1.0 / v.vk};
  };
  const double h = -from.k;
  const double k0 = from.k;
  const State s0{from.x, tau};
  const State d1 = g(k0, s0);
  const State d2 = g(k0 + 0.5 * h, {s0.x + 0.5 * h * d1.x, s0.t + 0.5 * h * d1.t});
  const State d3 = g(k0 + 0.5 * h, {s0.x + 0.5 * h * d2.x, s0.t + 0.5 * h * d2.t});
  const State d4 = g(k0 + h, {s0.x + h * d3.x, s0.t + h * d3.t});
  const double x = s0.x + h / 6.0 * (d1.x + 2.0 * d2.x + 2.0 * d3.x + d4.x);
  const double t = s0.t + h / 6.0 * (d1.t + 2.0 * d2.t + 2.0 * d3.t + d4.t);
  if (!(x > 0.0) || !std::isfinite(t)) return std::nullopt;
  return SectionCrossing{t, x};
}

}  // namespace todaflow
