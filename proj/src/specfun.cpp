#include "todaflow/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "todaflow/errors.hpp"

namespace todaflow::specfun {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Below this argument K_nu uses the integral representation.
constexpr double kBesselAsymptoticFrom = 25.0;

// Re z at which erf/erfc switch from the Maclaurin series to the continued
// fraction. Past it 1 - erf(z) would cancel too many digits.
constexpr double kErfContinuedFractionFrom = 1.5;

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw DomainError(std::string(what) + ": non-finite argument");
}

// e^x K_nu(x) = int_0^inf exp(-x (cosh t - 1)) cosh(nu t) dt.
// The integrand is analytic in the strip |Im t| < pi/2 and decays doubly
// exponentially, so the plain trapezoid rule converges geometrically in 1/h.
double scaled_bessel_k_trapezoid(int order, double x) {
  constexpr double h = 0.05;
  double sum = 0.5;  // t = 0 term, cosh(0) = 1
  for (int j = 1;; ++j) {
    const double t = j * h;
    const double s = std::sinh(0.5 * t);
    const double expo = -2.0 * x * s * s;
    const double term = std::exp(expo) * (order == 0 ? 1.0 : std::cosh(t));
    sum += term;
    if (term < 1e-18 * sum || expo < -745.0) break;
  }
  return h * sum;
}

double scaled_bessel_k_asymptotic(int order, double x) {
  const double mu = 4.0 * order * order;
  double term = 1.0;
  double sum = 1.0;
  double last = 1.0;
  for (int k = 1; k < 60; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) / (k * 8.0 * x);
    if (std::abs(term) > last) break;  // series started diverging
    sum += term;
    last = std::abs(term);
    if (last < 1e-17 * std::abs(sum)) break;
  }
  return std::sqrt(kPi / (2.0 * x)) * sum;
}

cplx erf_series(cplx z) {
  const cplx z2 = z * z;
  cplx term = z;
  cplx sum = z;
  for (int n = 1; n < 500; ++n) {
    term *= -z2 / static_cast<double>(n);
    const cplx add = term / static_cast<double>(2 * n + 1);
    sum += add;
    if (std::abs(add) < 1e-17 * std::abs(sum)) break;
  }
  return sum * (2.0 / std::sqrt(kPi));
}

// Laplace continued fraction, Re z > 0:
//   erfc z = exp(-z^2) / sqrt(pi) / (z + (1/2)/(z + 1/(z + (3/2)/(z + ...))))
// Returns erfc(z) * exp(z^2).
cplx erfcx_continued_fraction(cplx z) {
  constexpr double tiny = 1e-300;
  cplx f = z;
  cplx c = f;
  cplx d = 0.0;
  for (int n = 1; n < 20000; ++n) {
    const double an = 0.5 * n;
    d = z + an * d;
    if (std::abs(d) == 0.0) d = tiny;
    c = z + an / c;
    if (std::abs(c) == 0.0) c = tiny;
    d = 1.0 / d;
    const cplx delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 4.0 * kEps) return 1.0 / (std::sqrt(kPi) * f);
  }
  throw NumericalFailure("erfc continued fraction did not converge");
}

bool use_continued_fraction(cplx z) { return std::abs(z.real()) >= kErfContinuedFractionFrom; }

}  // namespace

void QuadratureSpec::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
    throw UsageError("quadrature tolerances must be strictly positive");
  if (max_subdivisions < 1) throw UsageError("quadrature needs at least one subdivision");
}

const char* to_string(EllipticConvention c) {
  return c == EllipticConvention::parameter_m ? "parameter_m" : "modulus_kappa";
}

double bessel_k_scaled(int order, double arg) {
  if (order != 0 && order != 1) throw UsageError("bessel_k: order must be 0 or 1");
  require_finite(arg, "bessel_k");
  if (arg <= 0.0) throw DomainError("bessel_k: argument must be positive");
  return arg > kBesselAsymptoticFrom ? scaled_bessel_k_asymptotic(order, arg)
                                     : scaled_bessel_k_trapezoid(order, arg);
}

double bessel_k(int order, double arg) { return bessel_k_scaled(order, arg) * std::exp(-arg); }

double elliptic_k_complete(double m) {
  require_finite(m, "elliptic_k_complete");
  if (m < 0.0 || m >= 1.0) throw DomainError("elliptic_k_complete: m must lie in [0, 1)");
  double a = 1.0;
  double b = std::sqrt(1.0 - m);
  while (std::abs(a - b) > kEps * a) {
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return kPi / (2.0 * a);
}

double sine_k_integral(double kappa) {
  require_finite(kappa, "sine_k_integral");
  if (kappa < 0.0 || kappa >= 1.0) throw DomainError("sine_k_integral: kappa must lie in [0, 1)");
  QuadratureSpec spec;
  spec.abs_tol = 1e-12;
  spec.rel_tol = 1e-11;
  const double integral = integrate_1d(
      [kappa](double t) { return 1.0 / std::sqrt(1.0 - kappa * std::sin(t)); }, 0.0, kPi / 2.0,
      spec);
  return 4.0 * integral;
}

double jacobi_sn(double u, double m_or_kappa, EllipticConvention convention) {
  require_finite(u, "jacobi_sn");
  require_finite(m_or_kappa, "jacobi_sn");
  if (convention == EllipticConvention::modulus_kappa && std::abs(m_or_kappa) >= 1.0)
    throw DomainError("jacobi_sn: modulus must satisfy |kappa| < 1");
  const double m = convention == EllipticConvention::parameter_m ? m_or_kappa
                                                                 : m_or_kappa * m_or_kappa;
  if (m < 0.0 || m >= 1.0) throw DomainError("jacobi_sn: parameter must lie in [0, 1)");
  if (m == 0.0) return std::sin(u);

  constexpr int kMaxLevels = 40;
  double a[kMaxLevels + 1];
  double c[kMaxLevels + 1];
  a[0] = 1.0;
  double b = std::sqrt(1.0 - m);
  c[0] = std::sqrt(m);
  int n = 0;
  while (std::abs(c[n]) > kEps && n < kMaxLevels) {
    const double an = 0.5 * (a[n] + b);
    c[n + 1] = 0.5 * (a[n] - b);
    b = std::sqrt(a[n] * b);
    a[n + 1] = an;
    ++n;
  }
  double phi = std::ldexp(a[n] * u, n);
  for (int j = n; j > 0; --j) phi = 0.5 * (phi + std::asin(c[j] / a[j] * std::sin(phi)));
  return std::sin(phi);
}

std::complex<double> erf_complex(std::complex<double> z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw DomainError("erf_complex: non-finite argument");
  if (!use_continued_fraction(z)) return erf_series(z);
  if (z.real() < 0.0) return -erf_complex(-z);
  return 1.0 - std::exp(-z * z) * erfcx_continued_fraction(z);
}

std::complex<double> erfc_complex(std::complex<double> z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw DomainError("erfc_complex: non-finite argument");
  if (!use_continued_fraction(z)) return 1.0 - erf_series(z);
  if (z.real() < 0.0) return 2.0 - erfc_complex(-z);
  return std::exp(-z * z) * erfcx_continued_fraction(z);
}

double im_erf_offset(double alpha, double chi) {
  require_finite(alpha, "im_erf_offset");
  require_finite(chi, "im_erf_offset");
  if (alpha <= 0.0) throw DomainError("im_erf_offset: alpha must be positive");
  const cplx z(alpha * std::abs(chi), 0.5 * alpha);
  if (!use_continued_fraction(z)) return erf_series(z).imag();
  return -(std::exp(-z * z) * erfcx_continued_fraction(z)).imag();
}

double im_erf_offset_scaled(double alpha, double chi) {
  require_finite(alpha, "im_erf_offset_scaled");
  require_finite(chi, "im_erf_offset_scaled");
  if (alpha <= 0.0) throw DomainError("im_erf_offset_scaled: alpha must be positive");
  const double ax = alpha * std::abs(chi);
  const cplx z(ax, 0.5 * alpha);
  if (!use_continued_fraction(z)) return erf_series(z).imag() * std::exp(ax * ax);
  // exp(-z^2) exp(alpha^2 chi^2) = exp(alpha^2/4) exp(-i alpha^2 |chi|)
  const cplx phase = std::polar(1.0, -alpha * ax);
  return -std::exp(0.25 * alpha * alpha) * (phase * erfcx_continued_fraction(z)).imag();
}

double im_erf_offset_scaled_derivative(double alpha, double chi) {
  const double a2 = alpha * alpha;
  const double s = im_erf_offset_scaled(alpha, chi);
  return -2.0 * alpha / std::sqrt(kPi) * std::exp(0.25 * a2) * std::sin(a2 * chi) +
         2.0 * a2 * chi * s;
}

double hermite(int order, double arg) {
  if (order < 0) throw UsageError("hermite: order must be non-negative");
  double prev = 1.0;
  if (order == 0) return prev;
  double cur = 2.0 * arg;
  for (int n = 1; n < order; ++n) {
    const double next = 2.0 * arg * cur - 2.0 * n * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double hermite_odd(int order, double arg) {
  if (order < 1 || order % 2 == 0)
    throw UsageError("hermite_odd: order must be odd and positive, got " + std::to_string(order));
  return hermite(order, arg);
}

}  // namespace todaflow::specfun
