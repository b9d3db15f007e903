#include "todaflow/fieldgrid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "todaflow/errors.hpp"

namespace todaflow::fieldgrid {

namespace {

using Evaluator = std::function<void(PhasePoint, double*)>;

bool contains(const std::vector<std::string>& names, const std::string& q) {
  return std::find(names.begin(), names.end(), q) != names.end();
}

std::string join(const std::vector<std::string>& names) {
  std::string out;
  for (const auto& n : names) out += (out.empty() ? "" : ", ") + n;
  return out;
}

Evaluator gaussian_evaluator(const gaussian::GaussianEnsembleParams& p, const std::string& q) {
  using namespace gaussian;
  if (q == "g") return [p](PhasePoint x, double* v) { v[0] = gaussian_w(p, x); };
  if (q == "jx") return [p](PhasePoint x, double* v) { v[0] = currents_closed(p, x).vx; };
  if (q == "jk") return [p](PhasePoint x, double* v) { v[0] = currents_closed(p, x).vk; };
  if (q == "divj") return [p](PhasePoint x, double* v) { v[0] = stationarity_div_j(p, x); };
  if (q == "divw") return [p](PhasePoint x, double* v) { v[0] = liouville_div_w(p, x); };
  if (q == "vort")
    return [p](PhasePoint x, double* v) { v[0] = vorticity(p, x, FieldKind::quantum); };
  if (q == "wx") return [p](PhasePoint x, double* v) { v[0] = velocity_w(p, x).vx; };
  if (q == "wk") return [p](PhasePoint x, double* v) { v[0] = velocity_w(p, x).vk; };
  if (q == "j")
    return [p](PhasePoint x, double* v) {
      const PhaseVelocity j = currents_closed(p, x);
      v[0] = j.vx;
      v[1] = j.vk;
    };
  if (q == "w")
    return [p](PhasePoint x, double* v) {
      const PhaseVelocity w = velocity_w(p, x);
      v[0] = w.vx;
      v[1] = w.vk;
    };
  return {};
}

Evaluator thermal_evaluator(const thermo::ThermalEnsembleParams& p, const std::string& q) {
  using namespace thermo;
  const bool h2 = p.order == Order::h2;
  auto current = [p, h2](PhasePoint x) {
    return h2 ? currents_td(p, x) : currents_classical(p, x);
  };
  if (q == "w0") return [p](PhasePoint x, double* v) { v[0] = w0(p, x); };
  if (q == "w_st2") return [p](PhasePoint x, double* v) { v[0] = w_st2(p, x); };
  if (q == "jx") return [current](PhasePoint x, double* v) { v[0] = current(x).vx; };
  if (q == "jk") return [current](PhasePoint x, double* v) { v[0] = current(x).vk; };
  if (q == "divj")
    return [current](PhasePoint x, double* v) {
      constexpr double h = 1e-4;
      v[0] = (current({x.x + h, x.k}).vx - current({x.x - h, x.k}).vx +
              current({x.x, x.k + h}).vk - current({x.x, x.k - h}).vk) /
             (2.0 * h);
    };
  if (q == "divw") return [p](PhasePoint x, double* v) { v[0] = div_w_td(p, x); };
  if (q == "j")
    return [current](PhasePoint x, double* v) {
      const PhaseVelocity j = current(x);
      v[0] = j.vx;
      v[1] = j.vk;
    };
  return {};
}

// Edge ids: horizontal edges (i,j)-(i+1,j) first, then vertical (i,j)-(i,j+1).
struct EdgeIndex {
  int nx;
  int nk;
  int horizontal(int i, int j) const { return j * (nx - 1) + i; }
  int vertical(int i, int j) const { return (nx - 1) * nk + j * nx + i; }
};

}  // namespace

void GridSpec::validate() const {
  if (!(x_lo < x_hi) || !(k_lo < k_hi) || !std::isfinite(x_lo) || !std::isfinite(x_hi) ||
      !std::isfinite(k_lo) || !std::isfinite(k_hi))
    throw UsageError("grid needs finite lo < hi on both axes");
  if (nx < 2 || nk < 2) throw UsageError("grid needs at least 2 nodes per axis");
}

const char* to_string(Ensemble e) { return e == Ensemble::gaussian ? "gaussian" : "thermal"; }

Ensemble parse_ensemble(const std::string& name) {
  if (name == "gaussian") return Ensemble::gaussian;
  if (name == "thermal") return Ensemble::thermal;
  throw UsageError("unknown ensemble '" + name + "' (expected gaussian or thermal)");
}

std::vector<std::string> scalar_quantities(Ensemble e) {
  if (e == Ensemble::gaussian) return {"g", "jx", "jk", "divj", "divw", "vort", "wx", "wk"};
  return {"w0", "w_st2", "jx", "jk", "divj", "divw"};
}

std::vector<std::string> vector_quantities(Ensemble e) {
  if (e == Ensemble::gaussian) return {"j", "w"};
  return {"j"};
}

FieldGrid sample_field(const FieldSource& source, const GridSpec& spec, int threads) {
  spec.validate();
  const bool is_vector = contains(vector_quantities(source.ensemble), source.quantity);
  if (!is_vector && !contains(scalar_quantities(source.ensemble), source.quantity)) {
    throw UsageError("unknown quantity '" + source.quantity + "' for the " +
                     to_string(source.ensemble) + " ensemble (expected one of " +
                     join(scalar_quantities(source.ensemble)) + ", " +
                     join(vector_quantities(source.ensemble)) + ")");
  }

  Evaluator eval;
  if (source.ensemble == Ensemble::gaussian) {
    source.gaussian.validate();
    eval = gaussian_evaluator(source.gaussian, source.quantity);
  } else {
    thermo::ThermalEnsembleParams p = source.thermal;
    if (source.quantity == "w_st2") p.order = thermo::Order::h2;
    p.validate();
    eval = thermal_evaluator(p, source.quantity);
  }
  const bool may_leave_trust = source.ensemble == Ensemble::gaussian;

  FieldGrid grid;
  grid.spec = spec;
  grid.quantity = source.quantity;
  grid.components = is_vector ? 2 : 1;
  const std::size_t nodes = static_cast<std::size_t>(spec.nx) * spec.nk;
  grid.values.assign(nodes * grid.components, 0.0);
  grid.trusted.assign(nodes, 1);

  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min(threads, spec.nk);

  auto worker = [&](int t) {
    for (int j = t; j < spec.nk; j += threads) {
      for (int i = 0; i < spec.nx; ++i) {
        const std::size_t node = static_cast<std::size_t>(j) * spec.nx + i;
        double* out = grid.values.data() + node * grid.components;
        try {
          eval({spec.x(i), spec.k(j)}, out);
        } catch (const ValidityError&) {
          throw;
        } catch (const DomainError&) {
          if (!may_leave_trust) throw;
          for (int c = 0; c < grid.components; ++c) out[c] = 0.0;
          grid.trusted[node] = 0;
        }
      }
    }
  };

  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        worker(t);
      } catch (...) {
        errors[static_cast<std::size_t>(t)] = std::current_exception();
      }
    });
  }
  try {
    worker(0);
  } catch (...) {
    errors[0] = std::current_exception();
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return grid;
}

std::vector<Polyline> zero_contours(const FieldGrid& grid) {
  if (grid.components != 1) throw UsageError("zero_contours needs a scalar grid");
  const GridSpec& s = grid.spec;
  const EdgeIndex edges{s.nx, s.nk};
  auto value = [&](int i, int j) { return grid.at(i, j); };
  auto positive = [&](int i, int j) { return value(i, j) > 0.0; };

  auto crossing = [&](int i0, int j0, int i1, int j1) {
    const double v0 = value(i0, j0);
    const double v1 = value(i1, j1);
    const double t = v0 / (v0 - v1);
    return PhasePoint{s.x(i0) + t * (s.x(i1) - s.x(i0)), s.k(j0) + t * (s.k(j1) - s.k(j0))};
  };

  struct Segment {
    int e0;
    int e1;
  };
  std::vector<Segment> segments;
  std::vector<PhasePoint> edge_point(
      static_cast<std::size_t>((s.nx - 1) * s.nk + s.nx * (s.nk - 1)));

  for (int j = 0; j + 1 < s.nk; ++j) {
    for (int i = 0; i + 1 < s.nx; ++i) {
      if (!grid.trusted_at(i, j) || !grid.trusted_at(i + 1, j) || !grid.trusted_at(i, j + 1) ||
          !grid.trusted_at(i + 1, j + 1))
        continue;
      const bool bl = positive(i, j);
      const bool br = positive(i + 1, j);
      const bool tr = positive(i + 1, j + 1);
      const bool tl = positive(i, j + 1);
      // bottom, right, top, left
      const int ids[4] = {edges.horizontal(i, j), edges.vertical(i + 1, j),
                          edges.horizontal(i, j + 1), edges.vertical(i, j)};
      const bool cut[4] = {bl != br, br != tr, tl != tr, bl != tl};
      if (cut[0]) edge_point[static_cast<std::size_t>(ids[0])] = crossing(i, j, i + 1, j);
      if (cut[1]) edge_point[static_cast<std::size_t>(ids[1])] = crossing(i + 1, j, i + 1, j + 1);
      if (cut[2]) edge_point[static_cast<std::size_t>(ids[2])] = crossing(i, j + 1, i + 1, j + 1);
      if (cut[3]) edge_point[static_cast<std::size_t>(ids[3])] = crossing(i, j, i, j + 1);

      std::vector<int> crossed;
      for (int e = 0; e < 4; ++e)
        if (cut[e]) crossed.push_back(ids[e]);
      if (crossed.size() == 2) {
        segments.push_back({crossed[0], crossed[1]});
      } else if (crossed.size() == 4) {
        const double centre =
            0.25 * (value(i, j) + value(i + 1, j) + value(i + 1, j + 1) + value(i, j + 1));
        if ((centre > 0.0) == bl) {
          segments.push_back({ids[0], ids[1]});
          segments.push_back({ids[2], ids[3]});
        } else {
          segments.push_back({ids[3], ids[0]});
          segments.push_back({ids[1], ids[2]});
        }
      }
    }
  }

  std::vector<std::vector<int>> at_edge(edge_point.size());
  for (std::size_t n = 0; n < segments.size(); ++n) {
    at_edge[static_cast<std::size_t>(segments[n].e0)].push_back(static_cast<int>(n));
    at_edge[static_cast<std::size_t>(segments[n].e1)].push_back(static_cast<int>(n));
  }
  std::vector<bool> used(segments.size(), false);

  // Walk from `edge` away from the already used segments.
  auto walk = [&](int edge, std::vector<int>& chain) {
    for (;;) {
      int next = -1;
      for (int n : at_edge[static_cast<std::size_t>(edge)])
        if (!used[static_cast<std::size_t>(n)]) next = n;
      if (next < 0) return;
      used[static_cast<std::size_t>(next)] = true;
      const Segment& seg = segments[static_cast<std::size_t>(next)];
      edge = seg.e0 == edge ? seg.e1 : seg.e0;
      chain.push_back(edge);
    }
  };

  auto emit = [&](std::size_t start, std::vector<Polyline>& out) {
    used[start] = true;
    std::vector<int> forward{segments[start].e0, segments[start].e1};
    walk(segments[start].e1, forward);
    std::vector<int> backward;
    walk(segments[start].e0, backward);
    Polyline line;
    for (auto it = backward.rbegin(); it != backward.rend(); ++it)
      line.push_back(edge_point[static_cast<std::size_t>(*it)]);
    for (int e : forward) line.push_back(edge_point[static_cast<std::size_t>(e)]);
    out.push_back(std::move(line));
  };

  std::vector<Polyline> out;
  // Open lines first, starting from a dangling end, then closed loops.
  for (std::size_t n = 0; n < segments.size(); ++n) {
    if (used[n]) continue;
    if (at_edge[static_cast<std::size_t>(segments[n].e0)].size() == 1) {
      emit(n, out);
    } else if (at_edge[static_cast<std::size_t>(segments[n].e1)].size() == 1) {
      std::swap(segments[n].e0, segments[n].e1);
      emit(n, out);
    }
  }
  for (std::size_t n = 0; n < segments.size(); ++n)
    if (!used[n]) emit(n, out);
  return out;
}

const char* to_string(Format f) { return f == Format::csv ? "csv" : "json"; }

Format parse_format(const std::string& name) {
  if (name == "csv") return Format::csv;
  if (name == "json") return Format::json;
  throw UsageError("unknown format '" + name + "' (expected csv or json)");
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_table(const Table& table, Format format, std::ostream& out) {
  if (format == Format::csv) {
    for (std::size_t c = 0; c < table.columns.size(); ++c)
      out << (c ? "," : "") << table.columns[c];
    out << '\n';
    for (const auto& row : table.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_double(row[c]);
      out << '\n';
    }
    return;
  }
  nlohmann::ordered_json records = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json rec;
    for (std::size_t c = 0; c < row.size(); ++c) rec[table.columns[c]] = row[c];
    records.push_back(std::move(rec));
  }
  out << records.dump(1) << '\n';
}

Table grid_table(const FieldGrid& grid) {
  Table t;
  t.columns = grid.components == 1 ? std::vector<std::string>{"x", "k", "value", "trusted"}
                                   : std::vector<std::string>{"x", "k", "vx", "vk", "trusted"};
  const GridSpec& s = grid.spec;
  t.rows.reserve(static_cast<std::size_t>(s.nx) * s.nk);
  for (int j = 0; j < s.nk; ++j) {
    for (int i = 0; i < s.nx; ++i) {
      std::vector<double> row{s.x(i), s.k(j)};
      for (int c = 0; c < grid.components; ++c) row.push_back(grid.at(i, j, c));
      row.push_back(grid.trusted_at(i, j) ? 1.0 : 0.0);
      t.rows.push_back(std::move(row));
    }
  }
  return t;
}

Table trajectory_table(const Trajectory& trajectory) {
  Table t;
  t.columns = {"tau", "x", "k", "y", "z", "energy_residual"};
  t.rows.reserve(trajectory.samples.size());
  for (const auto& s : trajectory.samples)
    t.rows.push_back({s.tau, s.point.x, s.point.k, s.species.y, s.species.z, s.energy_residual});
  return t;
}

Table paired_trajectory_table(const gaussian::QuantumTrajectory& trajectory) {
  Table t = trajectory_table(trajectory.quantum);
  for (const char* c : {"x_classical", "k_classical", "y_classical", "z_classical"})
    t.columns.emplace_back(c);
  for (std::size_t n = 0; n < t.rows.size(); ++n) {
    const auto& s = trajectory.classical.samples.at(n);
    t.rows[n].insert(t.rows[n].end(), {s.point.x, s.point.k, s.species.y, s.species.z});
  }
  return t;
}

void write_stagnation_json(const std::vector<gaussian::StagnationPoint>& points,
                           std::ostream& out) {
  nlohmann::ordered_json records = nlohmann::ordered_json::array();
  for (const auto& p : points) {
    nlohmann::ordered_json rec;
    rec["x"] = p.location.x;
    rec["k"] = p.location.k;
    rec["residual"] = p.residual;
    rec["circulation"] = p.circulation;
    rec["class"] = gaussian::to_string(p.cls);
    records.push_back(std::move(rec));
  }
  out << records.dump(1) << '\n';
}

void write_text(const std::string& path, const std::string& text, std::ostream& fallback) {
  if (path == "-") {
    fallback << text;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open output file", path);
  f << text;
  f.flush();
  if (!f) throw IoError("write failed", path);
}

}  // namespace todaflow::fieldgrid
