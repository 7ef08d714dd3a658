#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "levysplit/config.hpp"
#include "levysplit/errors.hpp"
#include "levysplit/jump_generator.hpp"
#include "levysplit/matrix_functions.hpp"
#include "levysplit/reference_pricers.hpp"
#include "levysplit/report.hpp"
#include "levysplit/structural.hpp"
#include "levysplit/studies.hpp"

namespace ls = levysplit;

namespace {

constexpr int kOk = 0;
constexpr int kValidation = 2;
constexpr int kNumerical = 3;

struct CommonArgs {
  std::string config;
  std::string study;
  std::string out;
  std::string jump_method;
  std::vector<std::string> sets;
  bool allow_override = false;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("--config", a.config, "key = value configuration file");
  cmd->add_option("--study", a.study, "named study (table-1, table-2, tab2, tab3, tabAL1, tab4, "
                                      "cross-check) or convergence / single-price");
  cmd->add_option("--out", a.out, "output directory");
  cmd->add_option("--jump-method", a.jump_method, "jump step: exp or picard")
      ->check(CLI::IsMember({"exp", "picard"}));
  cmd->add_option("--set", a.sets, "override a config key (key=value), repeatable");
  cmd->add_flag("--allow-override", a.allow_override, "allow changing a study's pinned keys");
}

ls::Config build_config(const CommonArgs& a) {
  ls::Config user = a.config.empty() ? ls::Config{} : ls::Config::load(a.config);
  for (const auto& kv : a.sets) {
    auto [k, v] = ls::Config::split_assignment(kv);
    user.set(k, v);
  }
  if (!a.jump_method.empty()) user.set("jump_method", a.jump_method);
  const std::string study = a.study.empty() ? user.get_string("study", "") : a.study;
  ls::Config c = ls::resolve_study_config(study, user, a.allow_override);
  ls::check_known_keys(c);
  return c;
}

std::string study_name(const ls::Config& c, const std::string& fallback) {
  return c.get_string("study", fallback);
}

int cmd_price(const CommonArgs& a) {
  const ls::Config c = ls::freeze_resolved_parameters(build_config(a));
  const ls::RunSettings s = ls::settings_from_config(c);
  const ls::PriceResult r = ls::run_price(s);
  const double price = r.price * s.price_scale;
  std::printf("price %.10g\n", price);
  nlohmann::json j{{"price", price},
                   {"diagnostics", nlohmann::json::parse(r.diagnostics.to_json())}};
  std::cout << j.dump(2) << '\n';
  if (!a.out.empty()) {
    std::filesystem::create_directories(a.out);
    ls::write_file_atomic(std::filesystem::path(a.out) / (study_name(c, "price") + ".json"),
                          j.dump(2) + "\n");
  }
  return r.diagnostics.positivity_violations > 0 ? kNumerical : kOk;
}

void print_series(const ls::ConvergenceSeries& s) {
  std::printf("series %s  C_ref %s (%s)%s\n", s.name.c_str(),
              s.c_ref ? std::to_string(*s.c_ref).c_str() : "n/a", s.c_ref_provenance.c_str(),
              s.partial ? "  [partial]" : "");
  std::printf("%16s %12s %8s %10s %9s %14s\n", "C", "h", "N", "t_e", "beta", "expected");
  for (const auto& r : s.rows) {
    if (r.failed) {
      std::printf("%16s %12s %8d  failed: %s\n", "-", "-", r.n, r.error.c_str());
      continue;
    }
    std::printf("%16.10g %12.6g %8d %10.4f %9s %14s\n", r.price, r.h, r.n, r.seconds,
                r.beta ? std::to_string(*r.beta).c_str() : "-",
                r.expected ? std::to_string(*r.expected).c_str() : "");
  }
}

int cmd_converge(const CommonArgs& a) {
  const ls::Config c = build_config(a);
  const ls::ConvergenceReport rep = ls::run_convergence(c, study_name(c, "convergence"));
  bool partial = false;
  for (const auto& s : rep.series) {
    print_series(s);
    partial = partial || s.partial;
  }
  const std::string out = a.out.empty() ? "." : a.out;
  for (const auto& p : ls::emit_outputs(rep, out)) std::printf("wrote %s\n", p.c_str());
  return partial ? kNumerical : kOk;
}

int cmd_crosscheck(const CommonArgs& a) {
  const ls::Config c = build_config(a);
  const ls::CrossCheckResult r = ls::run_cross_check(c);
  std::printf("engine %.10g  %s %.10g  relative error %.3e\n", r.engine, r.oracle.c_str(),
              r.reference, r.rel_error);
  if (!a.out.empty()) {
    std::filesystem::create_directories(a.out);
    ls::write_file_atomic(
        std::filesystem::path(a.out) / (study_name(c, "crosscheck") + "_crosscheck.json"),
        r.to_json());
  }
  return kOk;
}

bool report(const char* what, bool ok, const std::string& detail) {
  std::printf("%s  %s  %s\n", ok ? "PASS" : "FAIL", what, detail.c_str());
  return ok;
}

int cmd_selftest() {
  bool ok = true;
  char buf[160];

  ls::PricingProblem p;
  p.spot = p.strike = 100;
  p.maturity = 1;
  p.diffusion = {0.05, 0.0, 0.2};
  p.grid_spec.x_min = -2;
  p.grid_spec.x_max = 2;
  p.grid_spec.n = 201;
  p.n_time_steps = 16;
  const double bs = ls::black_scholes(100, 100, 0.05, 0.0, 0.2, 1.0, ls::PayoffKind::call);
  const double rel = std::abs(ls::strang_price(p).price / bs - 1);
  std::snprintf(buf, sizeof buf, "relative error %.2e", rel);
  ok &= report("zero-jump engine vs Black-Scholes (1e-3)", rel < 1e-3, buf);

  const double cm = ls::carr_madan_call(ls::LevyJumpModel{ls::NoJumps{}}, p.diffusion, 100, 100,
                                        1.0, ls::FftConfig{});
  std::snprintf(buf, sizeof buf, "relative difference %.2e", std::abs(cm / bs - 1));
  ok &= report("Carr-Madan vs Black-Scholes (1e-6)", std::abs(cm / bs - 1) < 1e-6, buf);

  const ls::MertonParams m{0.5, -0.1, 0.2};
  const double ms = ls::merton_series(100, 100, 1.0, p.diffusion, m);
  const double mc = ls::carr_madan_call(ls::LevyJumpModel{m}, p.diffusion, 100, 100, 1.0,
                                        ls::FftConfig{});
  std::snprintf(buf, sizeof buf, "relative difference %.2e", std::abs(mc / ms - 1));
  ok &= report("Merton series vs Carr-Madan (1e-5)", std::abs(mc / ms - 1) < 1e-5, buf);

  const ls::Grid g = ls::build_uniform_grid(-3, 3, 61);
  const ls::JumpGenerator kou = ls::build_kou({0.1, 0.3445, 3.0465, 3.0775}, g);
  ls::StructuralOptions so;
  so.excluded_rows = kou.boundary_rows;
  so.exp_dt = 0.25;
  const ls::StructuralReport sr = ls::structural_checks(kou.dense(), so);
  std::snprintf(buf, sizeof buf, "max Re(eig) %.2e, ||exp|| %.6f", sr.max_real_eig,
                sr.spectral_norm_exp.value_or(NAN));
  ok &= report("Kou generator is a negated M-matrix with contractive exponential",
               sr.is_negated_m_matrix && sr.spectral_norm_exp.value_or(2.0) <= 1 + 1e-10, buf);
  return ok ? kOk : kNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Jump-diffusion PIDE pricer: Strang splitting with matrix exponentials"};
  app.require_subcommand(1);
  CommonArgs price_args, conv_args, cross_args;
  auto* price = app.add_subcommand("price", "price one option");
  add_common(price, price_args);
  auto* conv = app.add_subcommand("converge", "run a grid-refinement ladder");
  add_common(conv, conv_args);
  auto* cross = app.add_subcommand("crosscheck", "compare the engine with an oracle price");
  add_common(cross, cross_args);
  auto* self = app.add_subcommand("selftest", "quick consistency checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kValidation;
  }

  try {
    if (*price) return cmd_price(price_args);
    if (*conv) return cmd_converge(conv_args);
    if (*cross) return cmd_crosscheck(cross_args);
    if (*self) return cmd_selftest();
  } catch (const ls::ValidationError& e) {
    std::fprintf(stderr, "validation error: %s\n", e.what());
    return kValidation;
  } catch (const ls::NumericalError& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return kNumerical;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return kOk;
}
