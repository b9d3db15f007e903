#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "todaflow/classical.hpp"
#include "todaflow/cli.hpp"
#include "todaflow/errors.hpp"
#include "todaflow/fieldgrid.hpp"
#include "todaflow/gaussian.hpp"
#include "todaflow/specfun.hpp"
#include "todaflow/thermo.hpp"

namespace py = pybind11;
using namespace todaflow;

namespace {

py::tuple pair(PhaseVelocity v) { return py::make_tuple(v.vx, v.vk); }

py::dict trajectory_dict(const Trajectory& t) {
  const std::size_t n = t.samples.size();
  py::array_t<double> tau(n), x(n), k(n), y(n), z(n), res(n);
  auto tt = tau.mutable_unchecked<1>();
  auto xx = x.mutable_unchecked<1>();
  auto kk = k.mutable_unchecked<1>();
  auto yy = y.mutable_unchecked<1>();
  auto zz = z.mutable_unchecked<1>();
  auto rr = res.mutable_unchecked<1>();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = t.samples[i];
    tt(i) = s.tau;
    xx(i) = s.point.x;
    kk(i) = s.point.k;
    yy(i) = s.species.y;
    zz(i) = s.species.z;
    rr(i) = s.energy_residual;
  }
  py::dict d;
  d["tau"] = tau;
  d["x"] = x;
  d["k"] = k;
  d["y"] = y;
  d["z"] = z;
  d["energy_residual"] = res;
  d["max_energy_drift"] = t.max_energy_drift;
  return d;
}

}  // namespace

PYBIND11_MODULE(_todaflow, m) {
  m.doc() = "Phase-space flows of Toda-like prey-predator models";

  auto domain = py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ValidityError>(m, "ValidityError", domain.ptr());
  py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
  py::register_exception<NumericalFailure>(m, "NumericalFailure", PyExc_RuntimeError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  m.def("bessel_k", &specfun::bessel_k, py::arg("order"), py::arg("arg"));
  m.def("elliptic_k", &specfun::elliptic_k_complete, py::arg("m"));
  m.def("im_erf_offset", &specfun::im_erf_offset, py::arg("alpha"), py::arg("chi"));

  m.def(
      "energy",
      [](const std::string& model, double a, double x, double k) {
        return energy(SeparableHamiltonian(parse_model_kind(model), a), {x, k});
      },
      py::arg("model"), py::arg("a"), py::arg("x"), py::arg("k"));
  m.def(
      "integrate_orbit",
      [](const std::string& model, double a, double eps, double dt, double duration) {
        const SeparableHamiltonian h(parse_model_kind(model), a);
        return trajectory_dict(integrate_orbit(OrbitSpec::from_energy(h, eps, dt, duration)));
      },
      py::arg("model") = "toda", py::arg("a") = 1.0, py::arg("eps") = 2.5, py::arg("dt") = 1e-3,
      py::arg("duration") = 10.0);
  m.def(
      "orbit_period",
      [](const std::string& model, double a, double eps, double dt) {
        const SeparableHamiltonian h(parse_model_kind(model), a);
        double duration = 8.0;
        for (;; duration *= 2.0) {
          try {
            return orbit_period(OrbitSpec::from_energy(h, eps, dt, duration));
          } catch (const NumericalFailure&) {
            if (duration > 1e4) throw;
          }
        }
      },
      py::arg("model") = "toda", py::arg("a") = 1.0, py::arg("eps") = 2.5, py::arg("dt") = 1e-3);
  m.def(
      "toda_closed_period",
      [](double eps) {
        const TodaClosedForm cf = toda_closed_period(eps);
        py::dict d;
        d["kappa"] = cf.kappa;
        d["t_minus"] = cf.t_minus;
        d["t_plus"] = cf.t_plus;
        d["period_formula"] = cf.period_formula;
        d["period_ode"] = cf.period_ode;
        d["ratio"] = cf.ratio;
        d["formula_consistent"] = cf.formula_consistent;
        return d;
      },
      py::arg("eps"));

  m.def("z0", &thermo::z0_closed, py::arg("beta"), py::arg("a") = 1.0);
  m.def("z_st", &thermo::z_st_closed, py::arg("beta"), py::arg("a") = 1.0);
  m.def("validity_boundary", &thermo::validity_boundary, py::arg("a") = 1.0);
  m.def(
      "thermal_observables",
      [](double beta, double a, const std::string& order) {
        const thermo::ThermalObservables o = thermo::observables({beta, a, thermo::parse_order(order)});
        py::dict d;
        d["z0"] = o.z0;
        d["z_st"] = o.z_st;
        d["energy"] = o.energy;
        d["heat_capacity"] = o.heat_capacity;
        return d;
      },
      py::arg("beta"), py::arg("a") = 1.0, py::arg("order") = "classical");

  m.def(
      "gaussian_currents",
      [](double alpha, double a, double x, double k) { return pair(gaussian::currents_closed({alpha, a}, {x, k})); },
      py::arg("alpha"), py::arg("a"), py::arg("x"), py::arg("k"));
  m.def(
      "gaussian_divergence",
      [](double alpha, double a, double x, double k) {
        return pair(gaussian::div_currents_closed({alpha, a}, {x, k}));
      },
      py::arg("alpha"), py::arg("a"), py::arg("x"), py::arg("k"));
  m.def(
      "quantum_velocity",
      [](double alpha, double a, double x, double k) { return pair(gaussian::velocity_w({alpha, a}, {x, k})); },
      py::arg("alpha"), py::arg("a"), py::arg("x"), py::arg("k"));
  m.def(
      "purity", [](double alpha) { return gaussian::purity({alpha, 1.0}); }, py::arg("alpha"));
  m.def(
      "stagnation_points",
      [](double alpha, double a, std::vector<double> bbox, int grid) {
        if (bbox.size() != 4) throw UsageError("bbox needs four numbers");
        const auto pts = gaussian::find_stagnation_points({alpha, a}, {bbox[0], bbox[1], bbox[2], bbox[3]}, grid);
        py::list out;
        for (const auto& s : pts) {
          py::dict d;
          d["x"] = s.location.x;
          d["k"] = s.location.k;
          d["residual"] = s.residual;
          d["circulation"] = s.circulation;
          d["class"] = gaussian::to_string(s.cls);
          out.append(d);
        }
        return out;
      },
      py::arg("alpha"), py::arg("a") = 1.0, py::arg("bbox") = std::vector<double>{-3, 3, -3, 3},
      py::arg("grid") = 200);

  m.def(
      "sample_field",
      [](const std::string& ensemble, const std::string& quantity, double alpha, double beta, double a,
         const std::string& order, std::vector<double> bbox, int nx, int nk, int threads) {
        if (bbox.size() != 4) throw UsageError("bbox needs four numbers");
        fieldgrid::FieldSource src;
        src.ensemble = fieldgrid::parse_ensemble(ensemble);
        src.quantity = quantity;
        src.gaussian = {alpha, a};
        src.thermal = {beta, a, thermo::parse_order(order)};
        const fieldgrid::GridSpec spec{bbox[0], bbox[1], bbox[2], bbox[3], nx, nk};
        fieldgrid::FieldGrid g;
        {
          py::gil_scoped_release release;
          g = fieldgrid::sample_field(src, spec, threads);
        }
        std::vector<py::ssize_t> shape{nk, nx};
        if (g.components > 1) shape.push_back(g.components);
        py::array_t<double> values(shape);
        std::copy(g.values.begin(), g.values.end(), values.mutable_data());
        py::array_t<bool> trusted({static_cast<py::ssize_t>(nk), static_cast<py::ssize_t>(nx)});
        std::transform(g.trusted.begin(), g.trusted.end(), trusted.mutable_data(),
                       [](unsigned char t) { return t != 0; });
        return py::make_tuple(values, trusted);
      },
      py::arg("ensemble") = "gaussian", py::arg("quantity") = "g", py::arg("alpha") = 1.0, py::arg("beta") = 1.0,
      py::arg("a") = 1.0, py::arg("order") = "h2", py::arg("bbox") = std::vector<double>{-3, 3, -3, 3},
      py::arg("nx") = 101, py::arg("nk") = 101, py::arg("threads") = 1);

  m.def(
      "quantum_trajectory",
      [](double alpha, double a, double x0, double k0, double dt, double duration) {
        const auto t = gaussian::integrate_quantum_trajectory({alpha, a}, {x0, k0}, dt, duration);
        return py::make_tuple(trajectory_dict(t.quantum), trajectory_dict(t.classical));
      },
      py::arg("alpha") = 1.0, py::arg("a") = 1.0, py::arg("x0") = 0.6, py::arg("k0") = 0.0, py::arg("dt") = 1e-3,
      py::arg("duration") = 20.0);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}
