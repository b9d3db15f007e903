#pragma once

#include <string>
#include <vector>

#include "todaflow/classical.hpp"
#include "todaflow/model.hpp"
#include "todaflow/ode.hpp"

namespace todaflow::gaussian {

/// Gaussian Wigner function G = (alpha^2 / pi) exp(-alpha^2 (x^2 + k^2))
/// evolving under the Toda-like Hamiltonian cosh k + a cosh x.
struct GaussianEnsembleParams {
  double alpha = 1.0;
  double a = 1.0;

  void validate() const;  // DomainError unless alpha > 0 and a > 0
};

/// Velocity fields are evaluated only where alpha * max(|x|, |k|) <= 6.
constexpr double kTrustRadius = 6.0;

bool in_trust_region(const GaussianEnsembleParams& params, PhasePoint p);

struct FlowSample {
  PhasePoint location;
  PhaseVelocity j;
  PhaseVelocity w;
  double div_j = 0.0;
  double div_w = 0.0;
  double vorticity = 0.0;
};

enum class StagnationClass { vortex_cw, vortex_ccw, saddle_or_separatrix, node };

const char* to_string(StagnationClass c);

struct StagnationPoint {
  PhasePoint location;
  double residual = 0.0;  // |J| at location
  double winding = 0.0;   // index of w around the annotation loop
  int circulation = 0;
  StagnationClass cls = StagnationClass::saddle_or_separatrix;
};

struct BoundingBox {
  double x_lo = -3.0;
  double x_hi = 3.0;
  double k_lo = -3.0;
  double k_hi = 3.0;

  void validate() const;
};

double gaussian_w(const GaussianEnsembleParams& params, PhasePoint p);

/// 2 pi times the plane integral of G^2, which is alpha^2.
double purity(const GaussianEnsembleParams& params);
double purity_quadrature(const GaussianEnsembleParams& params);

/// (dJx/dx, dJk/dk) =
///   (-2 sinh k sin(alpha^2 x) e^{alpha^2/4} G, 2 a sinh x sin(alpha^2 k) e^{alpha^2/4} G)
PhaseVelocity div_currents_closed(const GaussianEnsembleParams& params, PhasePoint p);

/// Jx = (alpha / sqrt pi) F(x) sinh k e^{-alpha^2 k^2},
/// Jk = -(a alpha / sqrt pi) F(k) sinh x e^{-alpha^2 x^2},  F = im_erf_offset.
PhaseVelocity currents_closed(const GaussianEnsembleParams& params, PhasePoint p);

/// w = J / G with the Gaussian cancelled. DomainError outside the trust region.
PhaseVelocity velocity_w(const GaussianEnsembleParams& params, PhasePoint p);

/// dJx/dx + dJk/dk.
double stationarity_div_j(const GaussianEnsembleParams& params, PhasePoint p);

/// div w from the closed-form derivative of the scaled error function.
double liouville_div_w(const GaussianEnsembleParams& params, PhasePoint p);

enum class FieldKind { quantum, classical };

/// dwk/dx - dwx/dk. Classical: -(a cosh x + cosh k); quantum: central
/// differences with h = 1e-5.
double vorticity(const GaussianEnsembleParams& params, PhasePoint p, FieldKind field);

FlowSample flow_sample(const GaussianEnsembleParams& params, PhasePoint p);

/// Raised when the field nearly vanishes somewhere on a circulation loop.
class DegenerateLoop : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

struct LoopAnalysis {
  double winding = 0.0;          // accumulated angle of w / 2 pi
  double mean_tangential = 0.0;  // loop average of t . w / |w|
  double circulation = 0.0;      // signed winding, see circulation_number
};

/// Walk a counterclockwise circle with `samples` points (at least 720).
LoopAnalysis analyse_loop(const GaussianEnsembleParams& params, PhasePoint center, double radius,
                          FieldKind field = FieldKind::quantum, int samples = 720);

/// Winding of the direction of w around the loop, carrying the sense of
/// rotation: -1 for a clockwise vortex, +1 for a counterclockwise one, 0 for
/// saddles, nodes and empty loops.
double circulation_number(const GaussianEnsembleParams& params, PhasePoint center, double radius,
                          FieldKind field = FieldKind::quantum);

/// All zeros of J inside the box. They are the origin plus the product set
/// of the zeros of F in x and in k; each is polished by damped Newton and
/// annotated with its circulation. Sorted by (x, k).
std::vector<StagnationPoint> find_stagnation_points(const GaussianEnsembleParams& params,
                                                    const BoundingBox& box, int grid = 200);

/// Grid nodes where |w| < threshold (edges of the flux envelopes).
std::vector<PhasePoint> low_speed_nodes(const GaussianEnsembleParams& params,
                                        const BoundingBox& box, int grid, double threshold = 0.08);

struct QuantumTrajectory {
  Trajectory quantum;
  Trajectory classical;  // same start, Hamilton's equations
};

/// RK4 along w and along the classical flow. energy_residual holds
/// H - H(start) for both. Leaving the trust region throws TrajectoryFailure
/// carrying the quantum samples so far.
QuantumTrajectory integrate_quantum_trajectory(const GaussianEnsembleParams& params,
                                               PhasePoint start, double step, double duration);

/// Return times of the quantum flow through {k = 0, x > 0}.
PeriodMeasurement quantum_return(const GaussianEnsembleParams& params, PhasePoint start,
                                 double step, double duration);

/// Truncated Hermite series for (dJx/dx, dJk/dk), terms eta = 0..eta_max.
/// eta_max above 25 is a UsageError.
PhaseVelocity series_currents(const GaussianEnsembleParams& params, PhasePoint p, int eta_max);

/// Magnitude of the eta-th term of the x-component of series_currents.
double series_term_x(const GaussianEnsembleParams& params, PhasePoint p, int eta);

}  // namespace todaflow::gaussian
