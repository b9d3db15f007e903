#include <cmath>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "todaflow/classical.hpp"
#include "todaflow/cli.hpp"
#include "todaflow/fieldgrid.hpp"
#include "todaflow/gaussian.hpp"
#include "todaflow/specfun.hpp"
#include "todaflow/thermo.hpp"

namespace todaflow::cli {

namespace {

struct Check {
  std::string name;
  std::function<double()> error;  // returns the observed error
  double tolerance;
};

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

}  // namespace

int selftest(std::ostream& log) {
  const std::vector<Check> checks = {
      {"bessel_k0 vs libstdc++",
       [] {
         double worst = 0.0;
         for (double x : {0.05, 0.5, 1.0, 3.0, 10.0, 40.0})
           worst = std::max(worst, rel(specfun::bessel_k(0, x), std::cyl_bessel_k(0.0, x)));
         return worst;
       },
       1e-13},
      {"bessel_k1 vs libstdc++",
       [] {
         double worst = 0.0;
         for (double x : {0.05, 0.5, 1.0, 3.0, 10.0, 40.0})
           worst = std::max(worst, rel(specfun::bessel_k(1, x), std::cyl_bessel_k(1.0, x)));
         return worst;
       },
       1e-13},
      {"elliptic K vs libstdc++",
       [] {
         double worst = 0.0;
         for (double m : {0.0, 0.3, 0.9, 0.999})
           worst = std::max(worst, rel(specfun::elliptic_k_complete(m), std::comp_ellint_1(std::sqrt(m))));
         return worst;
       },
       1e-13},
      {"erf on the real axis",
       [] {
         double worst = 0.0;
         for (double x : {-3.0, -0.7, 0.2, 1.4, 1.6, 4.0})
           worst = std::max(worst, std::abs(specfun::erf_complex({x, 0.0}).real() - std::erf(x)));
         return worst;
       },
       1e-15},
      {"partition function vs quadrature",
       [] {
         const double q = specfun::integrate_2d(
             [](double x, double k) { return std::exp(-(std::cosh(k) + 2.0 * std::cosh(x))); },
             -8.0, 8.0, -8.0, 8.0);
         return rel(thermo::z0_closed(1.0, 2.0), q);
       },
       1e-8},
      {"Hermite series vs closed divergence",
       [] {
         const gaussian::GaussianEnsembleParams p{1.0, 1.0};
         const PhaseVelocity s = gaussian::series_currents(p, {0.7, 0.4}, 12);
         const PhaseVelocity c = gaussian::div_currents_closed(p, {0.7, 0.4});
         return std::max(rel(s.vx, c.vx), rel(s.vk, c.vk));
       },
       1e-8},
      {"Gaussian purity by quadrature",
       [] { return rel(gaussian::purity_quadrature({std::sqrt(2.0), 1.0}), 2.0); },
       1e-8},
      {"Toda energy conservation",
       [] {
         const SeparableHamiltonian toda(ModelKind::toda, 1.0);
         return integrate_orbit(OrbitSpec::from_energy(toda, 2.5, 1e-3, 10.0)).max_energy_drift;
       },
       1e-8},
  };

  int failures = 0;
  for (const auto& c : checks) {
    double e = 0.0;
    bool pass = false;
    try {
      e = c.error();
      pass = e <= c.tolerance;
    } catch (const std::exception& ex) {
      log << "FAIL " << c.name << " threw: " << ex.what() << '\n';
      ++failures;
      continue;
    }
    log << (pass ? "ok   " : "FAIL ") << c.name << " error=" << fieldgrid::format_double(e)
        << " tol=" << fieldgrid::format_double(c.tolerance) << '\n';
    if (!pass) ++failures;
  }
  log << "selftest failures=" << failures << '\n';
  return failures;
}

}  // namespace todaflow::cli
