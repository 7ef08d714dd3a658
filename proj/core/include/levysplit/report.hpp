#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace levysplit {

struct LadderRow {
  int n = 0;
  double h = 0.0;
  double price = 0.0;
  double seconds = 0.0;
  std::optional<double> beta;
  std::optional<double> expected;
  std::size_t n_jump_grid = 0;
  double positivity_min = 0.0;
  int positivity_violations = 0;
  std::vector<int> picard_iterations;
  bool failed = false;
  std::string error;
};

struct ConvergenceSeries {
  std::string name;  // jump method, e.g. "exp" or "picard"
  std::vector<LadderRow> rows;
  std::optional<double> c_ref;
  std::string c_ref_provenance;
  bool partial = false;
  std::string diagnostics_json = "{}";  // regime and run settings
};

struct ConvergenceReport {
  std::string study;
  std::vector<ConvergenceSeries> series;
  std::string metadata_json = "{}";
};

// beta_i = log2((C_{i-1} - C_ref) / (C_i - C_ref)) placed on row i; row 0
// and rows where either difference vanishes or changes sign get none.
std::vector<std::optional<double>> beta_column(const std::vector<double>& prices, double c_ref);
void compute_betas(ConvergenceSeries& s);

// C,h,N,t_e,beta
void write_csv(const ConvergenceSeries& s, std::ostream& os);
// h |C - C_ref| pairs, one per line
void write_plot_data(const ConvergenceSeries& s, std::ostream& os);
std::string to_json(const ConvergenceReport& r);

// Writes through a temporary sibling file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

// <study>[_<series>].csv, <study>[_<series>]_plot.dat and <study>.json under dir.
std::vector<std::filesystem::path> emit_outputs(const ConvergenceReport& r,
                                                const std::filesystem::path& dir);

}  // namespace levysplit
