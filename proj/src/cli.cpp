#include "todaflow/cli.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "todaflow/classical.hpp"
#include "todaflow/errors.hpp"
#include "todaflow/fieldgrid.hpp"
#include "todaflow/gaussian.hpp"
#include "todaflow/thermo.hpp"

namespace todaflow::cli {

namespace {

using fieldgrid::format_double;
using fieldgrid::Format;
using fieldgrid::Table;

struct Output {
  std::string path = "-";
  std::string format = "csv";
};

int default_threads() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

// With several sweep members, member n of "runs/out.csv" goes to "runs/out_n.csv".
std::string member_path(const std::string& path, std::size_t index, std::size_t count) {
  if (count <= 1 || path == "-") return path;
  const std::size_t slash = path.find_last_of('/');
  const std::size_t dot = path.find_last_of('.');
  const std::string suffix = "_" + std::to_string(index);
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return path + suffix;
  return path.substr(0, dot) + suffix + path.substr(dot);
}

std::string render(const Table& table, Format format) {
  std::ostringstream s;
  fieldgrid::write_table(table, format, s);
  return s.str();
}

std::vector<double> parse_numbers(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream s(text);
  std::string item;
  while (std::getline(s, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size())
      throw UsageError(std::string(what) + ": cannot parse '" + item + "' as a number");
    out.push_back(v);
  }
  return out;
}

gaussian::BoundingBox parse_bbox(const std::string& text) {
  const std::vector<double> v = parse_numbers(text, "--bbox");
  if (v.size() != 4) throw UsageError("--bbox expects xlo,xhi,klo,khi");
  gaussian::BoundingBox box{v[0], v[1], v[2], v[3]};
  box.validate();
  return box;
}

std::pair<int, int> parse_grid(const std::string& text) {
  const std::vector<double> v = parse_numbers(text, "--grid");
  if (v.empty() || v.size() > 2) throw UsageError("--grid expects n or nx,nk");
  for (double n : v)
    if (n != std::floor(n) || n < 2 || n > 1e5) throw UsageError("--grid sizes must be integers >= 2");
  return {static_cast<int>(v[0]), static_cast<int>(v.size() == 2 ? v[1] : v[0])};
}

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 1) throw UsageError("need at least one sample");
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
  return out;
}

std::string num(double v) { return format_double(v); }

void add_output_options(CLI::App* cmd, Output& o, bool with_format = true) {
  cmd->add_option("--out", o.path, "output file, '-' for standard output");
  if (with_format)
    cmd->add_option("--format", o.format, "table format")->check(CLI::IsMember({"csv", "json"}));
}

// ---------------------------------------------------------------------------

struct OrbitConfig {
  std::string model = "toda";
  double a = 1.0;
  std::vector<double> eps;
  double x0 = 0.0;
  double k0 = 0.0;
  double dt = 1e-3;
  double periods = 3.0;
  double drift = 1e-8;
  Output output;
  CLI::Option* x0_opt = nullptr;
  CLI::Option* k0_opt = nullptr;
};

double estimate_period(const OrbitSpec& base) {
  for (double d = 8.0; d <= 8192.0; d *= 2.0) {
    OrbitSpec spec = base;
    spec.duration = d;
    try {
      return orbit_period(spec);
    } catch (const NumericalFailure&) {
    }
  }
  throw NumericalFailure("could not measure the orbit period");
}

int cmd_orbit(const OrbitConfig& c, std::ostream& out, std::ostream& err) {
  const SeparableHamiltonian model(parse_model_kind(c.model), c.a);
  const bool from_point = c.x0_opt->count() > 0 || c.k0_opt->count() > 0;
  if (from_point && !c.eps.empty()) throw UsageError("give either --eps or --x0/--k0, not both");
  if (!(c.periods > 0.0)) throw UsageError("--periods must be positive");
  const Format format = fieldgrid::parse_format(c.output.format);
  std::vector<double> eps = c.eps.empty() ? std::vector<double>{2.5} : c.eps;
  const std::size_t members = from_point ? 1 : eps.size();
  std::ostream& summary = c.output.path == "-" ? err : out;

  for (std::size_t m = 0; m < members; ++m) {
    OrbitSpec spec = from_point ? OrbitSpec::from_point(model, {c.x0, c.k0}, c.dt, 1.0)
                                : OrbitSpec::from_energy(model, eps[m], c.dt, 1.0);
    spec.drift_tolerance = c.drift;
    const double period = estimate_period(spec);
    spec.duration = c.periods * period;
    const std::string path = member_path(c.output.path, m, members);
    Trajectory traj;
    int code = ok;
    std::string failure;
    try {
      traj = integrate_orbit(spec);
    } catch (const TrajectoryFailure& f) {
      traj = f.partial();
      code = numerical_failure;
      failure = f.what();
    }
    fieldgrid::write_text(path, render(fieldgrid::trajectory_table(traj), format), out);
    summary << "member=" << m << " model=" << to_string(model.kind()) << " a=" << num(c.a)
            << " eps=" << num(spec.eps) << " period=" << num(period)
            << " max_energy_drift=" << num(traj.max_energy_drift)
            << " samples=" << traj.samples.size() << " out=" << path << '\n';
    if (code != ok) {
      err << "error: " << failure << '\n';
      return code;
    }
  }
  return ok;
}

// ---------------------------------------------------------------------------

struct AnalyticConfig {
  std::vector<double> eps;
  double tau_max = 0.0;
  int samples = 200;
  Output output;
};

int cmd_analytic(const AnalyticConfig& c, std::ostream& out, std::ostream& err) {
  const Format format = fieldgrid::parse_format(c.output.format);
  if (c.samples < 2) throw UsageError("--samples must be at least 2");
  if (c.tau_max < 0.0) throw UsageError("--tau-max must be non-negative");
  const std::vector<double> eps = c.eps.empty() ? std::vector<double>{2.5} : c.eps;
  std::ostream& summary = c.output.path == "-" ? err : out;
  for (double e : eps)
    if (!(e > 2.0)) throw DomainError("analytic: eps must exceed 2, got " + num(e));

  for (std::size_t m = 0; m < eps.size(); ++m) {
    const TodaClosedForm closed = toda_closed_period(eps[m]);
    const double tau_max = c.tau_max > 0.0 ? c.tau_max : closed.period_ode;
    const std::vector<double> taus = linspace(0.0, tau_max, c.samples);
    const std::vector<SpeciesPair> ode = toda_species_ode(eps[m], taus);
    Table t;
    t.columns = {"tau", "T", "y", "z", "T_formula"};
    for (std::size_t i = 0; i < taus.size(); ++i) {
      const double tf = toda_parametric_T(eps[m], taus[i], closed.convention);
      if (closed.formula_consistent) {
        const SpeciesPair s = toda_species_from_T(eps[m], tf);
        t.rows.push_back({taus[i], tf, s.y, s.z, tf});
      } else {
        t.rows.push_back({taus[i], 0.5 * (ode[i].y + ode[i].z), ode[i].y, ode[i].z, tf});
      }
    }
    const std::string path = member_path(c.output.path, m, eps.size());
    fieldgrid::write_text(path, render(t, format), out);
    summary << "member=" << m << " eps=" << num(eps[m]) << " kappa=" << num(closed.kappa)
            << " t_minus=" << num(closed.t_minus) << " t_plus=" << num(closed.t_plus)
            << " period_formula=" << num(closed.period_formula)
            << " period_ode=" << num(closed.period_ode) << " ratio=" << num(closed.ratio)
            << " convention=" << specfun::to_string(closed.convention)
            << " formula_consistent=" << (closed.formula_consistent ? "true" : "false")
            << " T_source=" << (closed.formula_consistent ? "formula" : "ode") << " out=" << path
            << '\n';
  }
  return ok;
}

// ---------------------------------------------------------------------------

struct ThermoConfig {
  std::vector<double> a;
  std::vector<std::string> orders;
  double beta_min = 0.05;
  double beta_max = 4.5;
  int steps = 90;
  Output output;
};

int cmd_thermo(const ThermoConfig& c, std::ostream& out, std::ostream& err) {
  const Format format = fieldgrid::parse_format(c.output.format);
  if (!(c.beta_min <= c.beta_max)) throw UsageError("--beta-min must not exceed --beta-max");
  const std::vector<double> betas = linspace(c.beta_min, c.beta_max, c.steps);
  const std::vector<double> as = c.a.empty() ? std::vector<double>{1.0} : c.a;
  std::vector<thermo::Order> orders;
  for (const auto& o : c.orders.empty() ? std::vector<std::string>{"classical", "h2"} : c.orders)
    orders.push_back(thermo::parse_order(o));
  const std::size_t members = as.size() * orders.size();
  std::ostream& summary = c.output.path == "-" ? err : out;

  std::size_t m = 0;
  for (double a : as) {
    for (thermo::Order order : orders) {
      Table t;
      t.columns = {"beta", "Z", "E", "C", "valid"};
      std::size_t valid = 0;
      for (double b : betas) {
        try {
          const thermo::ThermalObservables o = thermo::observables({b, a, order});
          const double z = order == thermo::Order::classical ? o.z0 : o.z_st;
          t.rows.push_back({b, z, o.energy, o.heat_capacity, 1.0});
          ++valid;
        } catch (const ValidityError&) {
          t.rows.push_back({b, 0.0, 0.0, 0.0, 0.0});
        }
      }
      const std::string path = member_path(c.output.path, m, members);
      fieldgrid::write_text(path, render(t, format), out);
      summary << "member=" << m << " a=" << num(a) << " order=" << thermo::to_string(order)
              << " rows=" << t.rows.size() << " valid_rows=" << valid;
      if (order == thermo::Order::h2) summary << " beta_star=" << num(thermo::validity_boundary(a));
      summary << " out=" << path << '\n';
      if (valid == 0)
        throw DomainError("the whole beta range lies outside the O(hbar^2) validity domain for a=" +
                          num(a));
      ++m;
    }
  }
  return ok;
}

// ---------------------------------------------------------------------------

struct FieldConfig {
  std::string ensemble = "gaussian";
  std::vector<double> alpha;
  std::vector<double> beta;
  std::vector<double> a;
  std::vector<std::string> quantity;
  std::string order = "h2";
  std::string bbox = "-3,3,-3,3";
  std::string grid = "101";
  int threads = default_threads();
  Output output;
};

int cmd_field(const FieldConfig& c, std::ostream& out, std::ostream& err) {
  const Format format = fieldgrid::parse_format(c.output.format);
  const fieldgrid::Ensemble ensemble = fieldgrid::parse_ensemble(c.ensemble);
  const gaussian::BoundingBox box = parse_bbox(c.bbox);
  const auto [nx, nk] = parse_grid(c.grid);
  const fieldgrid::GridSpec spec{box.x_lo, box.x_hi, box.k_lo, box.k_hi, nx, nk};
  const bool gauss = ensemble == fieldgrid::Ensemble::gaussian;
  if (gauss && !c.beta.empty()) throw UsageError("--beta applies to the thermal ensemble");
  if (!gauss && !c.alpha.empty()) throw UsageError("--alpha applies to the gaussian ensemble");
  const std::vector<double> params =
      gauss ? (c.alpha.empty() ? std::vector<double>{1.0} : c.alpha)
            : (c.beta.empty() ? std::vector<double>{1.0} : c.beta);
  const std::vector<double> as = c.a.empty() ? std::vector<double>{1.0} : c.a;
  const std::vector<std::string> quantities =
      c.quantity.empty() ? std::vector<std::string>{gauss ? "g" : "w0"} : c.quantity;
  const thermo::Order order = thermo::parse_order(c.order);
  const std::size_t members = quantities.size() * as.size() * params.size();
  std::ostream& summary = c.output.path == "-" ? err : out;

  std::size_t m = 0;
  for (const auto& q : quantities) {
    for (double a : as) {
      for (double p : params) {
        fieldgrid::FieldSource source;
        source.ensemble = ensemble;
        source.quantity = q;
        source.gaussian = {p, a};
        source.thermal = {p, a, order};
        const fieldgrid::FieldGrid grid = fieldgrid::sample_field(source, spec, c.threads);
        const std::size_t untrusted =
            static_cast<std::size_t>(std::count(grid.trusted.begin(), grid.trusted.end(), 0));
        const std::string path = member_path(c.output.path, m, members);
        fieldgrid::write_text(path, render(fieldgrid::grid_table(grid), format), out);
        summary << "member=" << m << " ensemble=" << fieldgrid::to_string(ensemble)
                << " quantity=" << q << (gauss ? " alpha=" : " beta=") << num(p)
                << " a=" << num(a) << " nx=" << nx << " nk=" << nk << " untrusted=" << untrusted
                << " out=" << path << '\n';
        ++m;
      }
    }
  }
  return ok;
}

// ---------------------------------------------------------------------------

struct StagnationConfig {
  std::vector<double> a;
  std::vector<double> alpha;
  double alpha_min = 0.1;
  double alpha_max = 2.7;
  int alpha_steps = 27;
  std::string bbox = "-2,2,-2,2";
  int grid = 200;
  bool envelope = false;
  double threshold = 0.08;
  int envelope_grid = 101;
  Output output;
};

int cmd_stagnation(const StagnationConfig& c, std::ostream& out, std::ostream& err) {
  const gaussian::BoundingBox box = parse_bbox(c.bbox);
  const std::vector<double> alphas =
      c.alpha.empty() ? linspace(c.alpha_min, c.alpha_max, c.alpha_steps) : c.alpha;
  const std::vector<double> as = c.a.empty() ? std::vector<double>{1.0} : c.a;
  const double top = *std::max_element(alphas.begin(), alphas.end());
  const double reach = std::max({std::abs(box.x_lo), std::abs(box.x_hi), std::abs(box.k_lo),
                                 std::abs(box.k_hi)});
  if (top > 0.0 && top * reach > gaussian::kTrustRadius)
    throw DomainError("bounding box leaves the velocity trust region at alpha=" + num(top) +
                      " (need alpha*max|coordinate| <= 6)");
  std::ostream& summary = c.output.path == "-" ? err : out;

  nlohmann::ordered_json records = nlohmann::ordered_json::array();
  std::size_t m = 0;
  for (double a : as) {
    for (double alpha : alphas) {
      const gaussian::GaussianEnsembleParams params{alpha, a};
      const auto points = gaussian::find_stagnation_points(params, box, c.grid);
      std::ostringstream pts;
      fieldgrid::write_stagnation_json(points, pts);
      nlohmann::ordered_json rec;
      rec["alpha"] = alpha;
      rec["a"] = a;
      rec["count"] = points.size();
      rec["points"] = nlohmann::ordered_json::parse(pts.str());
      if (c.envelope) {
        nlohmann::ordered_json env = nlohmann::ordered_json::array();
        for (PhasePoint p : gaussian::low_speed_nodes(params, box, c.envelope_grid, c.threshold))
          env.push_back({p.x, p.k});
        rec["envelope"] = std::move(env);
      }
      records.push_back(std::move(rec));
      int vortices = 0;
      int saddles = 0;
      int nodes = 0;
      for (const auto& p : points) {
        if (p.circulation != 0)
          ++vortices;
        else if (p.cls == gaussian::StagnationClass::node)
          ++nodes;
        else
          ++saddles;
      }
      summary << "member=" << m++ << " alpha=" << num(alpha) << " a=" << num(a)
              << " count=" << points.size() << " vortices=" << vortices << " saddles=" << saddles
              << " nodes=" << nodes << '\n';
    }
  }
  fieldgrid::write_text(c.output.path, records.dump(1) + "\n", out);
  return ok;
}

// ---------------------------------------------------------------------------

struct TrajectoryConfig {
  double alpha = 1.0;
  std::vector<double> a;
  double x0 = 0.6;
  double k0 = 0.0;
  double dt = 1e-3;
  double tau_max = 20.0;
  Output output;
};

int cmd_trajectory(const TrajectoryConfig& c, std::ostream& out, std::ostream& err) {
  const Format format = fieldgrid::parse_format(c.output.format);
  const std::vector<double> as = c.a.empty() ? std::vector<double>{1.0} : c.a;
  std::ostream& summary = c.output.path == "-" ? err : out;
  const PhasePoint start{c.x0, c.k0};
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();

  for (std::size_t m = 0; m < as.size(); ++m) {
    const gaussian::GaussianEnsembleParams params{c.alpha, as[m]};
    const std::string path = member_path(c.output.path, m, as.size());
    gaussian::QuantumTrajectory traj;
    try {
      traj = gaussian::integrate_quantum_trajectory(params, start, c.dt, c.tau_max);
    } catch (const TrajectoryFailure& f) {
      fieldgrid::write_text(path, render(fieldgrid::trajectory_table(f.partial()), format), out);
      err << "error: " << f.what() << '\n';
      return numerical_failure;
    }
    fieldgrid::write_text(path, render(fieldgrid::paired_trajectory_table(traj), format), out);

    double quantum_return = nan;
    double closure = nan;
    try {
      const PeriodMeasurement q = gaussian::quantum_return(params, start, c.dt, c.tau_max);
      quantum_return = q.period;
      closure = std::abs(q.crossings[1].x - q.crossings[0].x);
    } catch (const NumericalFailure&) {
    }
    double classical_period = nan;
    try {
      const SeparableHamiltonian toda(ModelKind::toda, as[m]);
      classical_period = orbit_period(OrbitSpec::from_point(toda, start, c.dt, c.tau_max));
    } catch (const std::exception&) {
    }
    summary << "member=" << m << " alpha=" << num(c.alpha) << " a=" << num(as[m])
            << " samples=" << traj.quantum.samples.size()
            << " quantum_return_time=" << num(quantum_return)
            << " classical_period=" << num(classical_period) << " section_closure=" << num(closure)
            << " out=" << path << '\n';
  }
  return ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Phase-space flows of the Toda-like and Lotka-Volterra prey-predator models",
               "todaflow"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(0, 1);
  bool run_selftest = false;
  app.add_flag("--selftest", run_selftest, "run the built-in oracle checks")->group("");

  OrbitConfig orbit;
  auto* orbit_cmd = app.add_subcommand("orbit", "integrate classical orbits");
  orbit_cmd->add_option("--model", orbit.model, "toda or lv")->check(CLI::IsMember({"toda", "lv"}));
  orbit_cmd->add_option("--a", orbit.a, "anisotropy");
  orbit_cmd->add_option("--eps", orbit.eps, "energy; repeat for a sweep (default 2.5)");
  orbit.x0_opt = orbit_cmd->add_option("--x0", orbit.x0, "start x instead of --eps");
  orbit.k0_opt = orbit_cmd->add_option("--k0", orbit.k0, "start k instead of --eps");
  orbit_cmd->add_option("--dt", orbit.dt, "RK4 step");
  orbit_cmd->add_option("--periods", orbit.periods, "number of periods to integrate");
  orbit_cmd->add_option("--drift-tol", orbit.drift, "energy drift audit tolerance");
  add_output_options(orbit_cmd, orbit.output);

  AnalyticConfig analytic;
  auto* analytic_cmd = app.add_subcommand("analytic", "isotropic Toda closed form against the ODE");
  analytic_cmd->add_option("--eps", analytic.eps, "energy > 2; repeat for a sweep (default 2.5)");
  analytic_cmd->add_option("--tau-max", analytic.tau_max, "time span, 0 for one period");
  analytic_cmd->add_option("--samples", analytic.samples, "rows per member");
  add_output_options(analytic_cmd, analytic.output);

  ThermoConfig thermo_cfg;
  auto* thermo_cmd = app.add_subcommand("thermo", "partition function, energy and heat capacity");
  thermo_cmd->add_option("--a", thermo_cfg.a, "anisotropy; repeat for a sweep (default 1)");
  thermo_cmd->add_option("--beta-min", thermo_cfg.beta_min, "first beta");
  thermo_cmd->add_option("--beta-max", thermo_cfg.beta_max, "last beta");
  thermo_cmd->add_option("--steps", thermo_cfg.steps, "number of beta values");
  thermo_cmd->add_option("--order", thermo_cfg.orders, "classical or h2; repeatable (default both)")
      ->check(CLI::IsMember({"classical", "h2"}));
  add_output_options(thermo_cmd, thermo_cfg.output);

  FieldConfig field;
  auto* field_cmd = app.add_subcommand("field", "sample a phase-space field on a grid");
  field_cmd->add_option("--ensemble", field.ensemble, "gaussian or thermal")
      ->check(CLI::IsMember({"gaussian", "thermal"}));
  field_cmd->add_option("--alpha", field.alpha, "Gaussian spread; repeat for a sweep (default 1)");
  field_cmd->add_option("--beta", field.beta, "inverse temperature; repeat for a sweep (default 1)");
  field_cmd->add_option("--a", field.a, "anisotropy; repeat for a sweep (default 1)");
  field_cmd->add_option("--quantity", field.quantity,
                        "gaussian: g jx jk divj divw vort wx wk j w; thermal: w0 w_st2 jx jk "
                        "divj divw j (default g / w0)");
  field_cmd->add_option("--order", field.order, "thermal currents: classical or h2")
      ->check(CLI::IsMember({"classical", "h2"}));
  field_cmd->add_option("--bbox", field.bbox, "xlo,xhi,klo,khi");
  field_cmd->add_option("--grid", field.grid, "n or nx,nk nodes");
  field_cmd->add_option("--threads", field.threads, "worker threads")->check(CLI::PositiveNumber);
  add_output_options(field_cmd, field.output);

  StagnationConfig stag;
  auto* stag_cmd = app.add_subcommand("stagnation", "stagnation points of the Gaussian flow (JSON)");
  stag_cmd->add_option("--a", stag.a, "anisotropy; repeat for a sweep (default 1)");
  stag_cmd->add_option("--alpha", stag.alpha, "explicit alpha values; overrides the range");
  stag_cmd->add_option("--alpha-min", stag.alpha_min, "first alpha of the range");
  stag_cmd->add_option("--alpha-max", stag.alpha_max, "last alpha of the range");
  stag_cmd->add_option("--alpha-steps", stag.alpha_steps, "number of alpha values");
  stag_cmd->add_option("--bbox", stag.bbox, "xlo,xhi,klo,khi");
  stag_cmd->add_option("--grid", stag.grid, "bracketing cells per axis");
  stag_cmd->add_flag("--envelope", stag.envelope, "also emit nodes where |w| < threshold");
  stag_cmd->add_option("--threshold", stag.threshold, "envelope speed threshold");
  stag_cmd->add_option("--envelope-grid", stag.envelope_grid, "envelope nodes per axis");
  stag_cmd->add_option("--threads", field.threads, "accepted for uniformity; the search is serial");
  add_output_options(stag_cmd, stag.output, false);

  TrajectoryConfig traj;
  auto* traj_cmd = app.add_subcommand("trajectory", "quantum and classical trajectories");
  traj_cmd->add_option("--alpha", traj.alpha, "Gaussian spread");
  traj_cmd->add_option("--a", traj.a, "anisotropy; repeat for a sweep (default 1)");
  traj_cmd->add_option("--x0", traj.x0, "start x");
  traj_cmd->add_option("--k0", traj.k0, "start k");
  traj_cmd->add_option("--dt", traj.dt, "RK4 step");
  traj_cmd->add_option("--tau-max", traj.tau_max, "duration");
  add_output_options(traj_cmd, traj.output);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : usage_error;
  }

  try {
    if (run_selftest) return selftest(out) == 0 ? ok : numerical_failure;
    if (orbit_cmd->parsed()) return cmd_orbit(orbit, out, err);
    if (analytic_cmd->parsed()) return cmd_analytic(analytic, out, err);
    if (thermo_cmd->parsed()) return cmd_thermo(thermo_cfg, out, err);
    if (field_cmd->parsed()) return cmd_field(field, out, err);
    if (stag_cmd->parsed()) return cmd_stagnation(stag, out, err);
    if (traj_cmd->parsed()) return cmd_trajectory(traj, out, err);
    err << app.help();
    return usage_error;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return usage_error;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return domain_error;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << '\n';
    return numerical_failure;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return numerical_failure;
  }
}

}  // namespace todaflow::cli
