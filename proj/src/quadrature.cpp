#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "todaflow/errors.hpp"
#include "todaflow/specfun.hpp"

namespace todaflow::specfun {

namespace {

// Gauss-Kronrod 10/21 abscissae and weights (QUADPACK qk21).
constexpr double kXgk[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr double kWgk[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208062815443, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr double kWg[5] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Piece {
  Integrand g;
  double a;
  double b;
};

struct Segment {
  int piece;
  double a;
  double b;
  double value;
  double error;
};

struct Rule {
  double value;
  double error;
};

Rule kronrod21(const Integrand& g, double a, double b, int& evals) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double fv1[10];
  double fv2[10];
  const double fc = g(center);
  double resk = fc * kWgk[10];
  double resabs = std::abs(resk);
  double resg = 0.0;
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = g(center - dx);
    const double f2 = g(center + dx);
    fv1[j] = f1;
    fv2[j] = f2;
    resk += kWgk[j] * (f1 + f2);
    resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
  }
  evals += 21;
  const double reskh = 0.5 * resk;
  double resasc = kWgk[10] * std::abs(fc - reskh);
  for (int j = 0; j < 10; ++j) resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));

  const double value = resk * half;
  resabs *= std::abs(half);
  resasc *= std::abs(half);
  double err = std::abs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  constexpr double uflow = std::numeric_limits<double>::min();
  constexpr double epmach = std::numeric_limits<double>::epsilon();
  if (resabs > uflow / (50.0 * epmach)) err = std::max(epmach * 50.0 * resabs, err);
  if (!std::isfinite(value) || !std::isfinite(err))
    throw NumericalFailure("integrate_1d: integrand is not finite on the domain");
  return {value, err};
}

bool by_error(const Segment& l, const Segment& r) { return l.error < r.error; }

}  // namespace

QuadratureResult integrate_1d_detailed(const Integrand& f, double lo, double hi,
                                       const QuadratureSpec& spec) {
  spec.validate();
  if (std::isnan(lo) || std::isnan(hi)) throw DomainError("integrate_1d: NaN limit");
  if (lo == hi) return {};
  if (lo > hi) {
    auto r = integrate_1d_detailed(f, hi, lo, spec);
    r.value = -r.value;
    return r;
  }

  std::vector<Piece> pieces;
  const bool lo_inf = std::isinf(lo);
  const bool hi_inf = std::isinf(hi);
  // x = c -/+ log(1 - t), dx = dt / (1 - t)
  auto right_tail = [&f](double c) {
    return Integrand([&f, c](double t) { return f(c - std::log1p(-t)) / (1.0 - t); });
  };
  auto left_tail = [&f](double c) {
    return Integrand([&f, c](double t) { return f(c + std::log1p(-t)) / (1.0 - t); });
  };
  if (!lo_inf && !hi_inf) {
    pieces.push_back({f, lo, hi});
  } else if (!lo_inf) {
    pieces.push_back({right_tail(lo), 0.0, 1.0});
  } else if (!hi_inf) {
    pieces.push_back({left_tail(hi), 0.0, 1.0});
  } else {
    pieces.push_back({left_tail(0.0), 0.0, 1.0});
    pieces.push_back({right_tail(0.0), 0.0, 1.0});
  }

  QuadratureResult out;
  std::vector<Segment> heap;
  double total = 0.0;
  double total_err = 0.0;
  for (int p = 0; p < static_cast<int>(pieces.size()); ++p) {
    const Rule r = kronrod21(pieces[p].g, pieces[p].a, pieces[p].b, out.evaluations);
    heap.push_back({p, pieces[p].a, pieces[p].b, r.value, r.error});
    total += r.value;
    total_err += r.error;
  }
  std::make_heap(heap.begin(), heap.end(), by_error);

  int subdivisions = static_cast<int>(heap.size());
  while (total_err > std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) {
    if (subdivisions >= spec.max_subdivisions) {
      throw NumericalFailure("integrate_1d: tolerance not reached within " +
                                 std::to_string(spec.max_subdivisions) + " subdivisions",
                             total, total_err);
    }
    std::pop_heap(heap.begin(), heap.end(), by_error);
    const Segment worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      throw NumericalFailure("integrate_1d: interval collapsed below machine resolution", total,
                             total_err);
    }
    const Integrand& g = pieces[worst.piece].g;
    const Rule left = kronrod21(g, worst.a, mid, out.evaluations);
    const Rule right = kronrod21(g, mid, worst.b, out.evaluations);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push_back({worst.piece, worst.a, mid, left.value, left.error});
    std::push_heap(heap.begin(), heap.end(), by_error);
    heap.push_back({worst.piece, mid, worst.b, right.value, right.error});
    std::push_heap(heap.begin(), heap.end(), by_error);
    ++subdivisions;
  }

  // Re-sum from scratch so the running-update rounding does not leak out.
  out.value = 0.0;
  out.error = 0.0;
  std::sort(heap.begin(), heap.end(), [](const Segment& l, const Segment& r) {
    return l.piece != r.piece ? l.piece < r.piece : l.a < r.a;
  });
  for (const auto& s : heap) {
    out.value += s.value;
    out.error += s.error;
  }
  out.subdivisions = subdivisions;
  return out;
}

double integrate_1d(const Integrand& f, double lo, double hi, const QuadratureSpec& spec) {
  return integrate_1d_detailed(f, lo, hi, spec).value;
}

double integrate_2d(const std::function<double(double, double)>& f, double x_lo, double x_hi,
                    double k_lo, double k_hi, const QuadratureSpec& spec) {
  QuadratureSpec inner = spec;
  inner.abs_tol = spec.abs_tol * 1e-2;
  inner.rel_tol = spec.rel_tol * 1e-2;
  return integrate_1d(
      [&](double x) {
        return integrate_1d([&](double k) { return f(x, k); }, k_lo, k_hi, inner);
      },
      x_lo, x_hi, spec);
}

}  // namespace todaflow::specfun
