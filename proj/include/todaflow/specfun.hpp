#pragma once

#include <complex>
#include <functional>

namespace todaflow::specfun {

/// Tolerances for the adaptive quadrature engine.
struct QuadratureSpec {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_subdivisions = 2000;

  /// Throws UsageError unless both tolerances are positive and
  /// max_subdivisions >= 1.
  void validate() const;
};

/// How the second argument of jacobi_sn is read.
enum class EllipticConvention {
  parameter_m,    // sn(u | m)
  modulus_kappa,  // sn(u, k) with m = k^2
};

const char* to_string(EllipticConvention c);

/// Modified Bessel function of the second kind K_0 or K_1 for arg > 0.
double bessel_k(int order, double arg);

/// exp(arg) K_order(arg); stays representable where K itself underflows.
double bessel_k_scaled(int order, double arg);

/// Complete elliptic integral of the first kind,
/// K(m) = int_0^{pi/2} (1 - m sin^2 t)^{-1/2} dt, evaluated with the AGM.
double elliptic_k_complete(double m);

/// The linear-sine variant 4 * int_0^{pi/2} (1 - kappa sin t)^{-1/2} dt.
/// This is not the standard K; it is kept separate so both can be compared.
/// Evaluated with integrate_1d at tolerance 1e-10.
double sine_k_integral(double kappa);

/// Jacobi elliptic sn by descending Landen transformation (AGM).
double jacobi_sn(double u, double m_or_kappa,
                 EllipticConvention convention = EllipticConvention::parameter_m);

std::complex<double> erf_complex(std::complex<double> z);
std::complex<double> erfc_complex(std::complex<double> z);

/// F(chi) = Im erf(alpha (chi + i/2)). Even in chi.
double im_erf_offset(double alpha, double chi);

/// F(chi) * exp(alpha^2 chi^2), with the Gaussian factor cancelled
/// analytically so the product stays accurate where F itself underflows.
double im_erf_offset_scaled(double alpha, double chi);

/// d/dchi of im_erf_offset_scaled, closed form.
double im_erf_offset_scaled_derivative(double alpha, double chi);

/// Physicists' Hermite polynomial H_n(x), n >= 0, by three-term recurrence.
double hermite(int order, double arg);

/// H_n for odd n >= 1; even or non-positive order is a UsageError.
double hermite_odd(int order, double arg);

using Integrand = std::function<double(double)>;

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int subdivisions = 0;
  int evaluations = 0;
};

/// Global adaptive Gauss-Kronrod (10/21) quadrature. Either limit may be
/// infinite; a half-line is mapped onto [0,1) with x = lo - log(1 - t), which
/// keeps exponentially decaying integrands smooth. Throws NumericalFailure
/// (carrying the best estimate) if the tolerance is not met.
QuadratureResult integrate_1d_detailed(const Integrand& f, double lo, double hi,
                                       const QuadratureSpec& spec = {});

double integrate_1d(const Integrand& f, double lo, double hi, const QuadratureSpec& spec = {});

/// Iterated integral over a rectangle, inner variable k.
double integrate_2d(const std::function<double(double, double)>& f, double x_lo, double x_hi,
                    double k_lo, double k_hi, const QuadratureSpec& spec = {});

}  // namespace todaflow::specfun
