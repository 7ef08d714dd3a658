#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "levysplit/config.hpp"
#include "levysplit/errors.hpp"
#include "levysplit/report.hpp"
#include "levysplit/studies.hpp"

using namespace levysplit;
namespace fs = std::filesystem;

namespace {

Config parse(const std::string& text) {
  std::istringstream is(text);
  return Config::parse(is);
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("levysplit_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

const char* kBsConvergence = R"(
model = none
spot = 100
strike = 100
r = 0.05
sigma = 0.2
maturity = 1
grid.x_min = -2
grid.x_max = 2
time.steps = 400
rannacher = true
ladder = 51, 101, 201, 401
reference.price = black-scholes
)";

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("config parsing") {
  const Config c = parse("# comment\nspot = 100  # trailing\nladder = 1, 2, 3\nmodel=kou\n");
  CHECK(c.get_double("spot", 0) == 100.0);
  CHECK(c.get_string("model", "") == "kou");
  CHECK(c.get_int_list("ladder") == std::vector<int>{1, 2, 3});
  CHECK(c.get_double("missing", 7.5) == 7.5);
  CHECK_THROWS_AS(c.require_double("missing"), ValidationError);
  CHECK_THROWS_AS(parse("a = 1\na = 2\n"), ValidationError);
  CHECK_THROWS_AS(parse("no equals sign\n"), ValidationError);
  CHECK_THROWS_AS(check_known_keys(parse("sigmaa = 0.2\n")), ValidationError);
  CHECK_NOTHROW(check_known_keys(parse("expected.exp = 1, 2\nreference.price.it = 3\n")));
  CHECK(Config::split_assignment("grid.n=101") == std::pair<std::string, std::string>{"grid.n", "101"});
}

TEST_CASE("settings from config") {
  const RunSettings s = settings_from_config(parse(
      "model = merton\nspot = 100\nstrike = 110\nmaturity = 0.5\nsigma = 0.2\nmerton.lambda = 1\n"
      "merton.mu_j = -0.1\nmerton.sigma_j = 0.2\ngrid.n = 101\ngrid.s_min = 10\ngrid.s_max = 1000\n"));
  CHECK(std::holds_alternative<MertonParams>(s.problem.jump));
  CHECK(s.problem.grid_spec.x_min == doctest::Approx(std::log(0.1)));
  CHECK(s.problem.grid_spec.x_max == doctest::Approx(std::log(10.0)));
  CHECK_THROWS_AS(settings_from_config(parse("grid.x_min = -1\ngrid.s_min = 1\n")), ValidationError);
}

TEST_CASE("beta column") {
  const auto b = beta_column({1.25, 1.0625}, 1.0);
  REQUIRE(b.size() == 2);
  CHECK_FALSE(b[0].has_value());
  CHECK(*b[1] == doctest::Approx(2.0));
  const auto flip = beta_column({1.1, 0.9}, 1.0);
  CHECK_FALSE(flip[1].has_value());
  const auto exact = beta_column({1.1, 1.0}, 1.0);
  CHECK_FALSE(exact[1].has_value());
}

TEST_CASE("empty ladder writes only the header") {
  ConvergenceSeries s;
  std::ostringstream os;
  write_csv(s, os);
  CHECK(os.str() == "C,h,N,t_e,beta\n");
}

TEST_CASE("atomic writes replace the whole file") {
  const fs::path d = scratch_dir("atomic");
  const fs::path f = d / "out.txt";
  write_file_atomic(f, "first\n");
  write_file_atomic(f, "second\n");
  CHECK(slurp(f) == "second\n");
  int entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(d)) ++entries;
  CHECK(entries == 1);
}

TEST_CASE("named studies") {
  CHECK(find_study("TABLE-1") != nullptr);
  CHECK(find_study("tab4") != nullptr);
  CHECK(find_study("nope") == nullptr);
  CHECK_THROWS_AS(resolve_study_config("nope", Config{}, false), ValidationError);
  const Config pinned_change = parse("maturity = 1\n");
  CHECK_THROWS_AS(resolve_study_config("table-1", pinned_change, false), ValidationError);
  const Config ok = resolve_study_config("table-1", pinned_change, true);
  CHECK(ok.get_double("maturity", 0) == 1.0);
  const Config same = resolve_study_config("table-1", parse("maturity = 0.25\n"), false);
  CHECK(same.get_string("model", "") == "kou");
}

TEST_CASE("zero-jump convergence study is second order and deterministic") {
  const Config c = parse(kBsConvergence);
  const ConvergenceReport r = run_convergence(c);
  REQUIRE(r.series.size() == 1);
  const ConvergenceSeries& s = r.series[0];
  CHECK_FALSE(s.partial);
  REQUIRE(s.rows.size() == 4);
  REQUIRE(s.c_ref.has_value());
  CHECK(s.c_ref_provenance == "black-scholes closed form");
  for (std::size_t i = 1; i < s.rows.size(); ++i) {
    REQUIRE(s.rows[i].beta.has_value());
    CHECK(*s.rows[i].beta == doctest::Approx(2.0).epsilon(0.15));
  }
  const fs::path d1 = scratch_dir("det1"), d2 = scratch_dir("det2");
  emit_outputs(r, d1);
  emit_outputs(run_convergence(c), d2);
  // t_e differs between runs; compare every other column
  auto strip_time = [](const std::string& csv) {
    std::istringstream is(csv);
    std::string line, out;
    while (std::getline(is, line)) {
      std::vector<std::string> f;
      std::stringstream ls(line);
      std::string cell;
      while (std::getline(ls, cell, ',')) f.push_back(cell);
      if (f.size() >= 4) f[3].clear();
      for (const auto& x : f) out += x + ",";
      out += "\n";
    }
    return out;
  };
  CHECK(strip_time(slurp(d1 / "convergence.csv")) == strip_time(slurp(d2 / "convergence.csv")));
  CHECK(fs::exists(d1 / "convergence_plot.dat"));
  CHECK(fs::exists(d1 / "convergence.json"));
}

TEST_CASE("failed rungs truncate the ladder") {
  Config c = parse(R"(
model = gtsp
spot = 100
strike = 100
sigma = 0.2
maturity = 1
gtsp.lambda_r = 5
gtsp.alpha_r = 1.5
gtsp.lambda_l = 0
jump_method = picard
picard.max_iter = 2
picard.tol = 1e-14
ladder = 21, 41
)");
  const ConvergenceReport r = run_convergence(c);
  REQUIRE(r.series.size() == 1);
  CHECK(r.series[0].partial);
  REQUIRE(r.series[0].rows.size() == 1);
  CHECK(r.series[0].rows[0].failed);
  CHECK(r.series[0].rows[0].error.find("2") != std::string::npos);
}

TEST_CASE("cross-check against Black-Scholes") {
  const Config c = parse(R"(
model = none
spot = 100
strike = 100
r = 0.05
sigma = 0.2
maturity = 1
grid.x_min = -2
grid.x_max = 2
grid.n = 801
time.steps = 64
)");
  const CrossCheckResult r = run_cross_check(c);
  CHECK(r.oracle == "black-scholes");
  CHECK(r.rel_error < 1e-4);
  CHECK(r.to_json().find("\"relative_error\"") != std::string::npos);
}

}
