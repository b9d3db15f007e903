#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "todaflow/classical.hpp"
#include "todaflow/gaussian.hpp"
#include "todaflow/thermo.hpp"

namespace todaflow::fieldgrid {

struct GridSpec {
  double x_lo = -3.0;
  double x_hi = 3.0;
  double k_lo = -3.0;
  double k_hi = 3.0;
  int nx = 101;
  int nk = 101;

  void validate() const;  // UsageError unless lo < hi and n >= 2 on both axes
  double x(int i) const { return x_lo + (x_hi - x_lo) * i / (nx - 1); }
  double k(int j) const { return k_lo + (k_hi - k_lo) * j / (nk - 1); }
};

enum class Ensemble { gaussian, thermal };

const char* to_string(Ensemble e);
Ensemble parse_ensemble(const std::string& name);

struct FieldSource {
  Ensemble ensemble = Ensemble::gaussian;
  std::string quantity = "g";
  gaussian::GaussianEnsembleParams gaussian;
  thermo::ThermalEnsembleParams thermal;
};

/// Quantities per ensemble. Vector quantities have two components.
///   gaussian: g jx jk divj divw vort wx wk | j w
///   thermal:  w0 w_st2 jx jk divj divw     | j
std::vector<std::string> scalar_quantities(Ensemble e);
std::vector<std::string> vector_quantities(Ensemble e);

/// Row-major samples, x fastest. Nodes where the quantity is undefined
/// (outside the velocity trust region) hold 0 and trusted = 0.
struct FieldGrid {
  GridSpec spec;
  std::string quantity;
  int components = 1;
  std::vector<double> values;  // nx * nk * components
  std::vector<unsigned char> trusted;

  double at(int i, int j, int c = 0) const {
    return values[(static_cast<std::size_t>(j) * spec.nx + i) * components + c];
  }
  bool trusted_at(int i, int j) const {
    return trusted[static_cast<std::size_t>(j) * spec.nx + i] != 0;
  }
};

/// Rows are spread over `threads` workers; the result does not depend on
/// the thread count. Unknown quantity is a UsageError.
FieldGrid sample_field(const FieldSource& source, const GridSpec& spec, int threads = 1);

using Polyline = std::vector<PhasePoint>;

/// Marching-squares zero level of a scalar grid, with linear interpolation
/// on cell edges. Untrusted nodes are skipped; zero counts as negative.
std::vector<Polyline> zero_contours(const FieldGrid& grid);

enum class Format { csv, json };

const char* to_string(Format f);
Format parse_format(const std::string& name);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// 17 significant digits, so that parsing the text reproduces the double.
std::string format_double(double v);

void write_table(const Table& table, Format format, std::ostream& out);

/// Columns x,k,value,trusted or x,k,vx,vk,trusted.
Table grid_table(const FieldGrid& grid);
/// Columns tau,x,k,y,z,energy_residual.
Table trajectory_table(const Trajectory& trajectory);
/// Quantum columns followed by x_classical,k_classical,y_classical,z_classical.
Table paired_trajectory_table(const gaussian::QuantumTrajectory& trajectory);

/// JSON array of {x, k, residual, circulation, class}.
void write_stagnation_json(const std::vector<gaussian::StagnationPoint>& points,
                           std::ostream& out);

/// Write text to a file, or to `fallback` when path is "-". IoError on failure.
void write_text(const std::string& path, const std::string& text, std::ostream& fallback);

}  // namespace todaflow::fieldgrid
