#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "todaflow/errors.hpp"
#include "todaflow/fieldgrid.hpp"

using namespace todaflow;
using namespace todaflow::fieldgrid;

namespace {

FieldSource gaussian_source(const std::string& q, double alpha = 1.0, double a = 1.0) {
  FieldSource s;
  s.ensemble = Ensemble::gaussian;
  s.quantity = q;
  s.gaussian = {alpha, a};
  return s;
}

FieldSource thermal_source(const std::string& q, double beta = 1.0, double a = 1.0,
                           thermo::Order order = thermo::Order::h2) {
  FieldSource s;
  s.ensemble = Ensemble::thermal;
  s.quantity = q;
  s.thermal = {beta, a, order};
  return s;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, sep)) out.push_back(cell);
  return out;
}

FieldGrid analytic_grid(const GridSpec& spec, double (*f)(double, double)) {
  FieldGrid g;
  g.spec = spec;
  g.quantity = "analytic";
  for (int j = 0; j < spec.nk; ++j)
    for (int i = 0; i < spec.nx; ++i) {
      g.values.push_back(f(spec.x(i), spec.k(j)));
      g.trusted.push_back(1);
    }
  return g;
}

double distance_to_polylines(PhasePoint p, const std::vector<Polyline>& lines) {
  double best = INFINITY;
  for (const Polyline& l : lines)
    for (std::size_t s = 0; s + 1 < l.size(); ++s) {
      const double ex = l[s + 1].x - l[s].x, ek = l[s + 1].k - l[s].k;
      const double len2 = ex * ex + ek * ek;
      double t = len2 > 0 ? ((p.x - l[s].x) * ex + (p.k - l[s].k) * ek) / len2 : 0.0;
      t = std::clamp(t, 0.0, 1.0);
      best = std::min(best, std::hypot(p.x - l[s].x - t * ex, p.k - l[s].k - t * ek));
    }
  return best;
}

}  // namespace

TEST_CASE("grid sampling") {
  const GridSpec tiny{-1.0, 1.0, -1.0, 1.0, 3, 3};
  const FieldGrid g = sample_field(gaussian_source("g"), tiny);
  CHECK(g.values.size() == 9);
  CHECK(g.at(1, 1) == doctest::Approx(1.0 / M_PI).epsilon(1e-15));
  CHECK(g.at(0, 0) == doctest::Approx(std::exp(-2.0) / M_PI).epsilon(1e-15));

  const GridSpec sq{-2.0, 2.0, -2.0, 2.0, 41, 41};
  const FieldGrid d = sample_field(gaussian_source("divj"), sq);
  for (int i = 0; i < 41; ++i) CHECK(std::abs(d.at(i, i)) <= 1e-14);

  const FieldGrid j = sample_field(gaussian_source("j", 1.2, 2.0), tiny);
  CHECK(j.components == 2);
  const PhaseVelocity ref = gaussian::currents_closed({1.2, 2.0}, {1.0, -1.0});
  CHECK(j.at(2, 0, 0) == ref.vx);
  CHECK(j.at(2, 0, 1) == ref.vk);

  const FieldGrid w0 = sample_field(thermal_source("w0", 1.0, 1.0, thermo::Order::classical), tiny);
  CHECK(w0.at(1, 1) == doctest::Approx(0.190873).epsilon(1e-5));
  const FieldGrid dw = sample_field(thermal_source("divw", 1.0, 4.0), {1.0, 2.0, 1.0, 2.0, 2, 2});
  CHECK(dw.at(0, 0) == doctest::Approx(2.1312).epsilon(1e-4));
}

TEST_CASE("thread count does not change the result") {
  const GridSpec spec{-3.0, 3.0, -3.0, 3.0, 57, 43};
  for (const char* q : {"w", "divw", "vort", "divj"}) {
    const FieldGrid a = sample_field(gaussian_source(q, std::sqrt(2.0), 1.5), spec, 1);
    const FieldGrid b = sample_field(gaussian_source(q, std::sqrt(2.0), 1.5), spec, 8);
    CHECK(a.values == b.values);
    CHECK(a.trusted == b.trusted);
  }
  const FieldGrid a = sample_field(thermal_source("j", 0.7, 2.0), spec, 1);
  const FieldGrid b = sample_field(thermal_source("j", 0.7, 2.0), spec, 3);
  CHECK(a.values == b.values);
}

TEST_CASE("trust region marks nodes") {
  const GridSpec spec{-4.0, 4.0, -1.0, 1.0, 9, 3};
  const FieldGrid w = sample_field(gaussian_source("wx", 2.0), spec);
  for (int i = 0; i < 9; ++i) {
    const bool inside = std::abs(spec.x(i)) <= 3.0;
    CHECK(w.trusted_at(i, 1) == inside);
    if (!inside) CHECK(w.at(i, 1) == 0.0);
  }
  const FieldGrid j = sample_field(gaussian_source("jx", 2.0), spec);
  for (int i = 0; i < 9; ++i) CHECK(j.trusted_at(i, 1));
}

TEST_CASE("errors") {
  const GridSpec spec{-1.0, 1.0, -1.0, 1.0, 3, 3};
  CHECK_THROWS_AS(sample_field(gaussian_source("w0"), spec), UsageError);
  CHECK_THROWS_AS(sample_field(thermal_source("vort"), spec), UsageError);
  CHECK_THROWS_AS(sample_field(gaussian_source("speed"), spec), UsageError);
  CHECK_THROWS_AS(sample_field(thermal_source("w_st2", 4.95, 1.0), spec), ValidityError);
  const GridSpec bad{1.0, -1.0, -1.0, 1.0, 3, 3};
  CHECK_THROWS_AS(bad.validate(), UsageError);
  const GridSpec one{-1.0, 1.0, -1.0, 1.0, 1, 3};
  CHECK_THROWS_AS(one.validate(), UsageError);
  CHECK_THROWS_AS(parse_ensemble("coherent"), UsageError);
  CHECK_THROWS_AS(parse_format("xml"), UsageError);
}

TEST_CASE("zero contours of analytic fields") {
  const GridSpec spec{-2.0, 2.0, -2.0, 2.0, 41, 41};
  const double cell = 4.0 / 40;
  const FieldGrid s = analytic_grid(spec, [](double, double k) { return std::sinh(k); });
  const auto lines = zero_contours(s);
  REQUIRE(lines.size() == 1);
  double dev = 0.0;
  for (const PhasePoint& p : lines[0]) dev = std::max(dev, std::abs(p.k));
  CHECK(dev < cell / 100);
  CHECK(lines[0].front().x == doctest::Approx(-2.0));
  CHECK(lines[0].back().x == doctest::Approx(2.0));

  // off-node zero: interpolation error is second order
  const GridSpec shifted{-2.0, 2.0, -2.05, 1.95, 41, 41};
  const auto sh = zero_contours(analytic_grid(shifted, [](double, double k) { return std::sinh(k); }));
  REQUIRE(sh.size() == 1);
  for (const PhasePoint& p : sh[0]) CHECK(std::abs(p.k) < cell / 100);

  // a circle closes on itself
  const auto circ = zero_contours(analytic_grid(spec, [](double x, double k) { return x * x + k * k - 1.0; }));
  REQUIRE(circ.size() == 1);
  CHECK(circ[0].front().x == circ[0].back().x);
  CHECK(circ[0].front().k == circ[0].back().k);
  for (const PhasePoint& p : circ[0]) CHECK(std::abs(std::hypot(p.x, p.k) - 1.0) < cell * cell);
}

TEST_CASE("zero contours of the flow fields") {
  const GridSpec spec{-2.0, 2.0, -2.0, 2.0, 41, 41};
  const double cell = 4.0 / 40;
  const auto jx = zero_contours(sample_field(gaussian_source("jx"), spec));
  for (double x = -2.0; x <= 2.0; x += 0.05) CHECK(distance_to_polylines({x, 0.0}, jx) < cell);

  const auto dj = zero_contours(sample_field(gaussian_source("divj"), spec));
  for (double t = -2.0; t <= 2.0; t += 0.05) CHECK(distance_to_polylines({t, t}, dj) < std::sqrt(2.0) * cell);
}

TEST_CASE("tables") {
  const GridSpec spec{-1.0, 1.0, -1.0, 1.0, 2, 2};
  const FieldGrid g = sample_field(gaussian_source("jx", 0.9, 1.3), spec);
  std::ostringstream csv;
  write_table(grid_table(g), Format::csv, csv);
  std::istringstream in(csv.str());
  std::vector<std::string> lines;
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  REQUIRE(lines.size() == 5);
  CHECK(lines[0] == "x,k,value,trusted");
  int n = 0;
  for (int j = 0; j < 2; ++j)
    for (int i = 0; i < 2; ++i) {
      const auto cells = split(lines[1 + n++], ',');
      REQUIRE(cells.size() == 4);
      CHECK(std::strtod(cells[0].c_str(), nullptr) == spec.x(i));
      CHECK(std::strtod(cells[1].c_str(), nullptr) == spec.k(j));
      CHECK(std::strtod(cells[2].c_str(), nullptr) == g.at(i, j));
      CHECK(cells[3] == "1");
    }

  std::ostringstream js;
  write_table(grid_table(g), Format::json, js);
  const auto doc = nlohmann::json::parse(js.str());
  REQUIRE(doc.size() == 4);
  CHECK(doc[3]["value"].get<double>() == g.at(1, 1));
  CHECK(doc[0].contains("trusted"));

  const FieldGrid v = sample_field(gaussian_source("w"), spec);
  CHECK(grid_table(v).columns == std::vector<std::string>{"x", "k", "vx", "vk", "trusted"});

  for (double x : {0.1, 1.0 / 3.0, -2.718281828459045e-300, 6.02214076e23, 5e-324})
    CHECK(std::strtod(format_double(x).c_str(), nullptr) == x);
}

TEST_CASE("trajectory tables") {
  const SeparableHamiltonian toda(ModelKind::toda, 1.0);
  const Trajectory t = integrate_orbit(OrbitSpec::from_energy(toda, 2.5, 1e-2, 0.1));
  const Table tab = trajectory_table(t);
  CHECK(tab.columns == std::vector<std::string>{"tau", "x", "k", "y", "z", "energy_residual"});
  CHECK(tab.rows.size() == t.samples.size());
  CHECK(tab.rows[3][3] == t.samples[3].species.y);

  const auto q = gaussian::integrate_quantum_trajectory({1.0, 1.0}, {0.6, 0.0}, 1e-2, 0.1);
  const Table pt = paired_trajectory_table(q);
  CHECK(pt.columns.size() == 10);
  CHECK(pt.columns[6] == "x_classical");
  CHECK(pt.columns[9] == "z_classical");
}

TEST_CASE("stagnation JSON") {
  const auto pts = gaussian::find_stagnation_points({std::sqrt(2.0), 1.0}, {-3.0, 3.0, -3.0, 3.0});
  std::ostringstream os;
  write_stagnation_json(pts, os);
  const auto doc = nlohmann::json::parse(os.str());
  REQUIRE(doc.size() == pts.size());
  for (const auto& rec : doc) {
    CHECK(rec.size() == 5);
    for (const char* key : {"x", "k", "residual", "circulation", "class"}) CHECK(rec.contains(key));
    CHECK(rec["circulation"].is_number_integer());
  }
  CHECK(doc[2]["class"] == "vortex_cw");
}

TEST_CASE("writing files") {
  std::ostringstream fallback;
  write_text("-", "hello\n", fallback);
  CHECK(fallback.str() == "hello\n");
  CHECK_THROWS_AS(write_text("/nonexistent-dir/out.csv", "x", fallback), IoError);
  const std::string path = "fieldgrid_test_output.txt";
  write_text(path, "abc", fallback);
  std::FILE* f = std::fopen(path.c_str(), "r");
  REQUIRE(f != nullptr);
  char buf[8] = {};
  CHECK(std::fread(buf, 1, 7, f) == 3);
  std::fclose(f);
  std::remove(path.c_str());
}
