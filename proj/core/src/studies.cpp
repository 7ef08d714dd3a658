#include "levysplit/studies.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdio>
#include <mutex>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "levysplit/errors.hpp"
#include "levysplit/reference_pricers.hpp"

namespace levysplit {

namespace {

const char* kKouCommon = R"(
model = kou
spot = 100
strike = 100
r = 0.05
q = 0
sigma = 0.15
payoff = call
kou.p = 0.3445
kou.theta1 = 3.0465
kou.theta2 = 3.0775
kou.lambda = resolve
kou.lambda_anchor = 3.97383
kou.lambda_anchor_maturity = 0.25
mode = two-stage
two_stage.rate = risk-free
grid.s_min = 1e-3
grid.s_max = 3000
grid.s_min_jump = 1e-3
grid.s_max_jump = 1e5
grid.extension = uniform
series = picard
ladder = 101, 201, 401, 801, 1601, 3201, 6401, 12801, 25601, 51201, 102401
reference.n = 409601
)";

const char* kCgmySmall = R"(
model = gtsp
spot = 1
strike = 1
r = 0
q = 0
sigma = 0.2
payoff = call
maturity = 0.1
gtsp.lambda_r = 10
gtsp.nu_r = 2
gtsp.lambda_l = 0
mode = two-stage
two_stage.rate = risk-free
grid.s_min = 1e-3
grid.s_max = 30
grid.s_min_jump = 1e-3
grid.s_max_jump = 1e5
grid.growth = 1.03
price_scale = 100
)";

const char* kCgmyLarge = R"(
model = gtsp
spot = 100
strike = 100
r = 0.05
q = 0
sigma = 0.15
payoff = call
gtsp.lambda_r = 0.1
gtsp.nu_r = 2
gtsp.lambda_l = 0
mode = two-stage
two_stage.rate = forward
grid.s_min = 1e-3
grid.s_max = 1e3
grid.s_min_jump = 1e-3
grid.s_max_jump = 1e5
grid.growth = 1.03
series = exp
reference.n = 3201
)";

std::vector<StudyInfo> make_studies() {
  std::vector<StudyInfo> v;
  v.push_back({"table-1", "Kou one-period two-stage ladder, T = 0.25",
               std::string(kKouCommon) + R"(
maturity = 0.25
expected = 4.08176114, 4.00896884, 3.99640628, 3.99568288, 3.99550355, 3.99546116, 3.99545000, 3.99544714, 3.99544641, 3.99544623, 3.99544618
)"});
  v.push_back({"table-2", "Kou one-period two-stage ladder, T = 0.05",
               std::string(kKouCommon) + R"(
maturity = 0.05
expected = 1.96362542, 1.72184850, 1.55009251, 1.54500503, 1.54457335, 1.54456134, 1.54455816, 1.54455739, 1.54455721, 1.54455716, 1.54455715
)"});
  v.push_back({"tab2", "GTSP alpha = -0.5, exponential and Pade-Picard jump steps",
               std::string(kCgmySmall) + R"(
gtsp.alpha_r = -0.5
series = exp, it
ladder = 100, 200, 400, 800, 1600
reference.n = 3200
expected.exp = 39.1027, 39.1937, 39.2167, 39.2216, 39.2222
expected.it = 40.1100, 40.2002, 40.2223, 40.2260, 40.2258
)"});
  v.push_back({"tab3", "GTSP alpha = 0.9, first-order construction",
               std::string(kCgmySmall) + R"(
gtsp.alpha_r = 0.9
series = exp
ladder = 100, 200, 400, 800, 1600, 3200
expected = 23.9336, 22.9222, 22.5558, 22.3944, 22.3170, 22.2789
)"});
  v.push_back({"tabAL1", "GTSP alpha = 1 with drift damping kappa = 5",
               std::string(kCgmyLarge) + R"(
maturity = 0.05
gtsp.alpha_r = 1
gtsp.kappa_dump = 5
ladder = 101, 201, 401, 801, 1601
expected = 3.7296, 2.6527, 2.3939, 2.2402, 2.1594
)"});
  v.push_back({"tab4", "GTSP alpha = 1.98, second-order construction",
               std::string(kCgmyLarge) + R"(
maturity = 0.01
gtsp.alpha_r = 1.98
ladder = 51, 101, 201, 401, 801, 1601
expected = 8.2197, 7.9533, 8.1558, 8.1836, 8.1943, 8.1970
)"});
  v.push_back({"cross-check", "Kou T = 0.05 engine price against Carr-Madan",
               std::string(kKouCommon) + R"(
maturity = 0.05
grid.n = 25601
cross_check.oracle = carr-madan
)"});
  return v;
}

std::string lower(std::string s) {
  for (auto& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return s;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Rung {
  int n = 0;
  LadderRow row;
  bool ok = false;
};

LadderRow price_rung(const RunSettings& base, int n, double scale) {
  RunSettings s = base;
  s.problem.grid_spec.n = n;
  LadderRow row;
  row.n = n;
  try {
    const PriceResult r = run_price(s);
    row.price = r.price * scale;
    row.h = r.diagnostics.h;
    row.seconds = r.diagnostics.wall_seconds;
    row.n_jump_grid = r.diagnostics.n_jump_grid;
    row.positivity_min = r.diagnostics.positivity_min * scale;
    row.positivity_violations = r.diagnostics.positivity_violations;
    row.picard_iterations = r.diagnostics.picard_iterations;
  } catch (const std::exception& e) {
    row.failed = true;
    row.error = e.what();
  }
  return row;
}

// Runs f(i) for i in [0, count) on up to hardware_concurrency threads.
template <class F>
void parallel_for(std::size_t count, F f) {
  const std::size_t workers =
      std::min<std::size_t>(count, std::max(1u, std::thread::hardware_concurrency()));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) f(i);
  };
  std::vector<std::jthread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
}

nlohmann::json config_json(const Config& c) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : c.entries()) j[k] = v;
  return j;
}

}  // namespace

const std::vector<StudyInfo>& named_studies() {
  static const std::vector<StudyInfo> s = make_studies();
  return s;
}

const StudyInfo* find_study(const std::string& name) {
  for (const auto& s : named_studies())
    if (lower(s.name) == lower(name)) return &s;
  return nullptr;
}

Config resolve_study_config(const std::string& name, const Config& user, bool allow_override) {
  if (name.empty() || name == "convergence" || name == "single-price") return user;
  const StudyInfo* info = find_study(name);
  if (!info) {
    std::string msg = "unknown study '" + name + "'; known: convergence, single-price";
    for (const auto& s : named_studies()) msg += ", " + s.name;
    throw ValidationError(msg);
  }
  std::istringstream is(info->pinned);
  Config c = Config::parse(is, "study " + info->name);
  std::vector<std::string> clashes;
  for (const auto& [k, v] : user.entries()) {
    if (k == "study") continue;
    auto pinned = c.get(k);
    if (pinned && *pinned != v) clashes.push_back(k);
    c.set(k, v);
  }
  if (!clashes.empty() && !allow_override) {
    std::string msg = "study '" + info->name + "' pins";
    for (auto& k : clashes) msg += " " + k;
    throw ValidationError(msg + "; pass --allow-override to change them");
  }
  c.set("study", info->name);
  return c;
}

Config freeze_resolved_parameters(const Config& c) {
  Config out = c;
  if (c.get_string("model", "none") == "kou" && c.get_string("kou.lambda", "") == "resolve") {
    RunSettings s = settings_from_config(c);
    out.set("kou.lambda", fmt(std::get<KouParams>(s.problem.jump).lambda));
  }
  return out;
}

ConvergenceReport run_convergence(const Config& user_cfg, const std::string& study_name) {
  check_known_keys(user_cfg);
  const Config cfg = freeze_resolved_parameters(user_cfg);
  const std::vector<int> ladder = cfg.get_int_list("ladder");
  for (std::size_t i = 1; i < ladder.size(); ++i)
    if (ladder[i] <= ladder[i - 1]) throw ValidationError("ladder must be strictly increasing");
  std::vector<std::string> series = cfg.get_string_list("series");
  if (series.empty()) series.push_back(cfg.get_string("jump_method", ""));

  const RunSettings base = settings_from_config(cfg);
  const double scale = base.price_scale;

  ConvergenceReport report;
  report.study = study_name;
  nlohmann::json meta;
  meta["config"] = config_json(cfg);
  meta["jump_model"] = model_name(base.problem.jump);
  meta["drift_shift_sign"] = base.two_stage.reverse_drift ? "reversed" : "compensator";
  report.metadata_json = meta.dump();

  for (const auto& name : series) {
    RunSettings s = base;
    if (!name.empty()) s.problem.jump_method = parse_jump_method(name);
    const JumpMethod method = s.problem.jump_method.value_or(default_jump_method(s.problem.jump));

    std::vector<int> ns = ladder;
    const std::optional<int> ref_n =
        cfg.has("reference.n") ? std::optional<int>(cfg.get_int("reference.n", 0)) : std::nullopt;
    if (ref_n) ns.push_back(*ref_n);
    std::vector<LadderRow> rows(ns.size());
    // Largest grids first so the long runs overlap.
    std::vector<std::size_t> order(ns.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = order.size() - 1 - i;
    parallel_for(order.size(), [&](std::size_t k) {
      const std::size_t i = order[k];
      rows[i] = price_rung(s, ns[i], scale);
    });

    ConvergenceSeries out;
    out.name = name.empty() ? to_string(method) : name;
    std::optional<LadderRow> ref_row;
    if (ref_n) {
      ref_row = rows.back();
      rows.pop_back();
    }
    const std::vector<double> expected = cfg.has("expected." + out.name)
                                             ? cfg.get_double_list("expected." + out.name)
                                             : cfg.get_double_list("expected");
    bool failed = false;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (failed) {
        out.partial = true;
        break;
      }
      if (i < expected.size()) rows[i].expected = expected[i];
      failed = rows[i].failed;
      out.rows.push_back(std::move(rows[i]));
    }
    out.partial = out.partial || failed;

    const std::string quoted_key =
        cfg.has("reference.price." + out.name) ? "reference.price." + out.name : "reference.price";
    if (cfg.has(quoted_key)) {
      const std::string v = cfg.require_string(quoted_key);
      if (v == "black-scholes") {
        const auto& p = s.problem;
        out.c_ref = scale * black_scholes(p.spot, p.strike, p.diffusion.r, p.diffusion.q,
                                          p.diffusion.sigma, p.maturity, p.payoff);
        out.c_ref_provenance = "black-scholes closed form";
      } else {
        out.c_ref = cfg.require_double(quoted_key);
        out.c_ref_provenance = "quoted value";
      }
    } else if (ref_row) {
      if (ref_row->failed) {
        out.partial = true;
        out.c_ref_provenance = "reference run at N=" + std::to_string(*ref_n) +
                               " failed: " + ref_row->error;
      } else {
        out.c_ref = ref_row->price;
        out.c_ref_provenance = "self-computed at N=" + std::to_string(*ref_n);
      }
    } else if (!out.rows.empty() && !out.rows.back().failed) {
      out.c_ref = out.rows.back().price;
      out.c_ref_provenance = "finest ladder rung";
    }
    compute_betas(out);

    nlohmann::json d;
    d["jump_method"] = to_string(method);
    d["price_scale"] = scale;
    if (!out.rows.empty() && !out.rows.front().failed) {
      RunSettings probe = s;
      probe.problem.grid_spec.n = out.rows.front().n;
      const Grid g = build_jump_grid(probe.problem.grid_spec);
      d["regime"] = nlohmann::json::parse(
          build_jump_generator(probe.problem.jump, g, {probe.problem.merton_mode}).regime.to_json());
    }
    out.diagnostics_json = d.dump();
    report.series.push_back(std::move(out));
  }
  return report;
}

std::string CrossCheckResult::to_json() const {
  nlohmann::json j{{"oracle", oracle},
                   {"engine", engine},
                   {"reference", reference},
                   {"relative_error", rel_error},
                   {"diagnostics", nlohmann::json::parse(diagnostics.to_json())}};
  return j.dump(2) + "\n";
}

CrossCheckResult run_cross_check(const Config& user_cfg) {
  check_known_keys(user_cfg);
  const Config cfg = freeze_resolved_parameters(user_cfg);
  const RunSettings s = settings_from_config(cfg);
  const auto& p = s.problem;
  std::string oracle = cfg.get_string("cross_check.oracle", "auto");
  if (oracle == "auto") {
    if (std::holds_alternative<NoJumps>(p.jump)) {
      oracle = "black-scholes";
    } else if (std::holds_alternative<MertonParams>(p.jump)) {
      oracle = "merton-series";
    } else {
      oracle = "carr-madan";
    }
  }
  CrossCheckResult r;
  r.oracle = oracle;
  const PriceResult e = run_price(s);
  r.engine = e.price;
  r.diagnostics = e.diagnostics;
  if (oracle == "black-scholes") {
    if (!std::holds_alternative<NoJumps>(p.jump))
      throw ValidationError("black-scholes oracle needs model = none");
    r.reference = black_scholes(p.spot, p.strike, p.diffusion.r, p.diffusion.q,
                                p.diffusion.sigma, p.maturity, p.payoff);
  } else if (oracle == "merton-series") {
    const auto* m = std::get_if<MertonParams>(&p.jump);
    if (!m) throw ValidationError("merton-series oracle needs model = merton");
    r.reference = merton_series(p.spot, p.strike, p.maturity, p.diffusion, *m, p.payoff);
  } else if (oracle == "carr-madan") {
    if (p.payoff != PayoffKind::call) throw ValidationError("carr-madan oracle prices calls only");
    FftConfig f;
    f.n = cfg.get_int("fft.n", f.n);
    f.eta = cfg.get_double("fft.eta", f.eta);
    f.damping = cfg.get_double("fft.damping", f.damping);
    r.reference = carr_madan_call(p.jump, p.diffusion, p.spot, p.strike, p.maturity, f);
  } else {
    throw ValidationError("unknown cross_check.oracle '" + oracle + "'");
  }
  r.engine *= s.price_scale;
  r.reference *= s.price_scale;
  r.rel_error = std::abs(r.engine - r.reference) / std::abs(r.reference);
  return r;
}

}  // namespace levysplit
