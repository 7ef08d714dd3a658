#include "levysplit/report.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <unistd.h>

#include <nlohmann/json.hpp>

#include "levysplit/errors.hpp"

namespace levysplit {

std::vector<std::optional<double>> beta_column(const std::vector<double>& c, double c_ref) {
  std::vector<std::optional<double>> out(c.size());
  for (std::size_t i = 1; i < c.size(); ++i) {
    const double a = c[i - 1] - c_ref, b = c[i] - c_ref;
    if (a == 0.0 || b == 0.0 || (a > 0) != (b > 0)) continue;
    out[i] = std::log2(a / b);
  }
  return out;
}

void compute_betas(ConvergenceSeries& s) {
  for (auto& r : s.rows) r.beta.reset();
  if (!s.c_ref) return;
  std::vector<double> c;
  for (const auto& r : s.rows) {
    if (r.failed) break;
    c.push_back(r.price);
  }
  const auto b = beta_column(c, *s.c_ref);
  for (std::size_t i = 0; i < b.size(); ++i) s.rows[i].beta = b[i];
}

void write_csv(const ConvergenceSeries& s, std::ostream& os) {
  os << "C,h,N,t_e,beta\n";
  for (const auto& r : s.rows) {
    if (r.failed) continue;
    os << std::setprecision(12) << r.price << ',' << std::setprecision(9) << r.h << ',' << r.n
       << ',' << std::setprecision(5) << r.seconds << ',';
    if (r.beta) os << std::setprecision(6) << *r.beta;
    os << '\n';
  }
}

void write_plot_data(const ConvergenceSeries& s, std::ostream& os) {
  os << "# h |C-C_ref|\n";
  if (!s.c_ref) return;
  os << std::setprecision(10);
  for (const auto& r : s.rows) {
    if (r.failed) continue;
    const double e = std::abs(r.price - *s.c_ref);
    if (e > 0) os << r.h << ' ' << e << '\n';
  }
}

namespace {

nlohmann::json opt(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

std::string to_json(const ConvergenceReport& r) {
  nlohmann::json j;
  j["study"] = r.study;
  j["metadata"] = nlohmann::json::parse(r.metadata_json);
  j["series"] = nlohmann::json::array();
  for (const auto& s : r.series) {
    nlohmann::json js;
    js["name"] = s.name;
    js["c_ref"] = opt(s.c_ref);
    js["c_ref_provenance"] = s.c_ref_provenance;
    js["partial"] = s.partial;
    js["diagnostics"] = nlohmann::json::parse(s.diagnostics_json);
    js["rows"] = nlohmann::json::array();
    for (const auto& row : s.rows) {
      nlohmann::json jr{{"C", row.price},
                        {"h", row.h},
                        {"N", row.n},
                        {"t_e", row.seconds},
                        {"beta", opt(row.beta)},
                        {"expected", opt(row.expected)},
                        {"N_jump_grid", row.n_jump_grid},
                        {"positivity_min", row.positivity_min},
                        {"positivity_violations", row.positivity_violations},
                        {"picard_iterations", row.picard_iterations},
                        {"failed", row.failed}};
      if (row.failed) jr["error"] = row.error;
      js["rows"].push_back(std::move(jr));
    }
    j["series"].push_back(std::move(js));
  }
  return j.dump(2) + "\n";
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + tmp.string());
    f << content;
    f.flush();
    if (!f) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot rename " + tmp.string() + ": " + ec.message());
  }
}

std::vector<std::filesystem::path> emit_outputs(const ConvergenceReport& r,
                                                const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  for (const auto& s : r.series) {
    const std::string stem = r.series.size() > 1 ? r.study + "_" + s.name : r.study;
    std::ostringstream csv, plot;
    write_csv(s, csv);
    write_plot_data(s, plot);
    written.push_back(dir / (stem + ".csv"));
    write_file_atomic(written.back(), csv.str());
    written.push_back(dir / (stem + "_plot.dat"));
    write_file_atomic(written.back(), plot.str());
  }
  written.push_back(dir / (r.study + ".json"));
  write_file_atomic(written.back(), to_json(r));
  return written;
}

}  // namespace levysplit
