#include "levysplit/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <boost/math/tools/roots.hpp>

#include "levysplit/errors.hpp"

namespace levysplit {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::string item;
  std::stringstream ss(v);
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos == v.size()) return d;
  } catch (const std::exception&) {
  }
  throw ValidationError("config key '" + key + "': expected a number, got '" + v + "'");
}

int to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long n = std::stol(v, &pos);
    if (pos == v.size()) return static_cast<int>(n);
  } catch (const std::exception&) {
  }
  throw ValidationError("config key '" + key + "': expected an integer, got '" + v + "'");
}

const std::vector<std::string> kKeyPrefixes = {"expected.", "reference.price."};

}  // namespace

std::pair<std::string, std::string> Config::split_assignment(const std::string& kv) {
  const auto eq = kv.find('=');
  if (eq == std::string::npos) throw ValidationError("expected key=value, got '" + kv + "'");
  std::string k = trim(kv.substr(0, eq)), v = trim(kv.substr(eq + 1));
  if (k.empty()) throw ValidationError("empty key in '" + kv + "'");
  return {k, v};
}

Config Config::parse(std::istream& is, const std::string& source) {
  Config c;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    std::pair<std::string, std::string> kv;
    try {
      kv = split_assignment(line);
    } catch (const ValidationError& e) {
      throw ValidationError(source + ":" + std::to_string(lineno) + ": " + e.what());
    }
    if (c.has(kv.first))
      throw ValidationError(source + ":" + std::to_string(lineno) + ": duplicate key '" +
                            kv.first + "'");
    c.entries_[kv.first] = kv.second;
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot open config file '" + path + "'");
  return parse(f, path);
}

void Config::set(const std::string& key, const std::string& value) { entries_[key] = value; }

std::optional<std::string> Config::get(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::string Config::get_string(const std::string& key, const std::string& def) const {
  return get(key).value_or(def);
}

std::string Config::require_string(const std::string& key) const {
  auto v = get(key);
  if (!v) throw ValidationError("missing config key '" + key + "'");
  return *v;
}

double Config::get_double(const std::string& key, double def) const {
  auto v = get(key);
  return v ? to_double(key, *v) : def;
}

double Config::require_double(const std::string& key) const {
  return to_double(key, require_string(key));
}

std::optional<double> Config::get_optional_double(const std::string& key) const {
  auto v = get(key);
  if (!v) return std::nullopt;
  return to_double(key, *v);
}

int Config::get_int(const std::string& key, int def) const {
  auto v = get(key);
  return v ? to_int(key, *v) : def;
}

bool Config::get_bool(const std::string& key, bool def) const {
  auto v = get(key);
  if (!v) return def;
  if (*v == "true" || *v == "1" || *v == "yes" || *v == "on") return true;
  if (*v == "false" || *v == "0" || *v == "no" || *v == "off") return false;
  throw ValidationError("config key '" + key + "': expected a boolean, got '" + *v + "'");
}

std::vector<int> Config::get_int_list(const std::string& key) const {
  std::vector<int> out;
  for (auto& s : get_string_list(key)) out.push_back(to_int(key, s));
  return out;
}

std::vector<double> Config::get_double_list(const std::string& key) const {
  std::vector<double> out;
  for (auto& s : get_string_list(key)) out.push_back(to_double(key, s));
  return out;
}

std::vector<std::string> Config::get_string_list(const std::string& key) const {
  auto v = get(key);
  return v ? split_list(*v) : std::vector<std::string>{};
}

const std::vector<std::string>& known_config_keys() {
  static const std::vector<std::string> keys = {
      "study", "mode", "spot", "strike", "maturity", "payoff", "r", "q", "sigma", "model",
      "merton.lambda", "merton.mu_j", "merton.sigma_j", "merton.mode",
      "kou.lambda", "kou.p", "kou.theta1", "kou.theta2", "kou.lambda_anchor",
      "kou.lambda_anchor_maturity",
      "gtsp.lambda_r", "gtsp.nu_r", "gtsp.alpha_r", "gtsp.lambda_l", "gtsp.nu_l",
      "gtsp.alpha_l", "gtsp.kappa_dump",
      "grid.n", "grid.spacing", "grid.extension", "grid.focus", "grid.concentration", "grid.growth",
      "grid.x_min", "grid.x_max", "grid.x_min_jump", "grid.x_max_jump",
      "grid.s_min", "grid.s_max", "grid.s_min_jump", "grid.s_max_jump",
      "time.steps", "jump_method", "picard.tol", "picard.max_iter", "rannacher",
      "two_stage.rate", "two_stage.reverse_drift", "price_scale",
      "ladder", "series", "reference.n", "reference.price",
      "cross_check.oracle", "fft.n", "fft.eta", "fft.damping"};
  return keys;
}

void check_known_keys(const Config& c) {
  const auto& keys = known_config_keys();
  std::vector<std::string> unknown;
  for (const auto& [k, v] : c.entries()) {
    (void)v;
    if (std::find(keys.begin(), keys.end(), k) != keys.end()) continue;
    bool prefixed = false;
    for (const auto& p : kKeyPrefixes) prefixed = prefixed || k.rfind(p, 0) == 0;
    if (k == "expected") prefixed = true;
    if (!prefixed) unknown.push_back(k);
  }
  if (!unknown.empty()) {
    std::string msg = "unknown config keys:";
    for (auto& k : unknown) msg += " " + k;
    throw ValidationError(msg);
  }
}

double resolve_kou_lambda(const KouParams& base, const DiffusionParams& d, double spot,
                          double strike, double maturity, double anchor) {
  auto f = [&](double lam) {
    KouParams k = base;
    k.lambda = lam;
    return carr_madan_call(LevyJumpModel{k}, d, spot, strike, maturity, FftConfig{}) - anchor;
  };
  double lo = 0.0, hi = 1.0;
  double flo = f(lo), fhi = f(hi);
  while (flo * fhi > 0 && hi < 64.0) {
    hi *= 2.0;
    fhi = f(hi);
  }
  if (flo * fhi > 0)
    throw ValidationError("no Kou intensity reproduces the anchor price " +
                          std::to_string(anchor));
  std::uintmax_t iters = 200;
  auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi,
                                             boost::math::tools::eps_tolerance<double>(40),
                                             iters);
  return 0.5 * (r.first + r.second);
}

LevyJumpModel model_from_config(const Config& c, const DiffusionParams& d, double spot,
                                double strike) {
  const std::string model = c.get_string("model", "none");
  if (model == "none") return NoJumps{};
  if (model == "merton")
    return MertonParams{c.require_double("merton.lambda"), c.require_double("merton.mu_j"),
                        c.require_double("merton.sigma_j")};
  if (model == "kou") {
    KouParams k;
    k.p = c.require_double("kou.p");
    k.theta1 = c.require_double("kou.theta1");
    k.theta2 = c.require_double("kou.theta2");
    const std::string lam = c.require_string("kou.lambda");
    if (lam == "resolve") {
      k.lambda = resolve_kou_lambda(k, d, spot, strike,
                                    c.require_double("kou.lambda_anchor_maturity"),
                                    c.require_double("kou.lambda_anchor"));
    } else {
      k.lambda = c.require_double("kou.lambda");
    }
    return k;
  }
  if (model == "gtsp") {
    GtspParams g;
    g.right = {c.get_double("gtsp.lambda_r", 0.0), c.get_double("gtsp.nu_r", 2.0),
               c.get_double("gtsp.alpha_r", 0.5)};
    g.left = {c.get_double("gtsp.lambda_l", 0.0), c.get_double("gtsp.nu_l", g.right.nu),
              c.get_double("gtsp.alpha_l", g.right.alpha)};
    g.kappa_dump = c.get_double("gtsp.kappa_dump", 5.0);
    return g;
  }
  throw ValidationError("unknown model '" + model + "' (none|merton|kou|gtsp)");
}

namespace {

PayoffKind parse_payoff(const std::string& s) {
  if (s == "call") return PayoffKind::call;
  if (s == "put") return PayoffKind::put;
  if (s == "digital") return PayoffKind::digital;
  throw ValidationError("unknown payoff '" + s + "'");
}

MertonMode parse_merton_mode(const std::string& s) {
  if (s == "matrix") return MertonMode::matrix;
  if (s == "heat") return MertonMode::heat;
  if (s == "gaussian") return MertonMode::gaussian;
  throw ValidationError("unknown merton.mode '" + s + "'");
}

// A bound given either in log-moneyness or as a price level.
std::optional<double> bound(const Config& c, const std::string& name, double spot) {
  const bool has_x = c.has("grid.x_" + name), has_s = c.has("grid.s_" + name);
  if (has_x && has_s)
    throw ValidationError("grid." + std::string("x_") + name + " and grid.s_" + name +
                          " are mutually exclusive");
  if (has_x) return c.require_double("grid.x_" + name);
  if (has_s) {
    const double s = c.require_double("grid.s_" + name);
    if (!(s > 0)) throw ValidationError("grid.s_" + name + " must be > 0");
    return std::log(s / spot);
  }
  return std::nullopt;
}

}  // namespace

RunSettings settings_from_config(const Config& c) {
  RunSettings s;
  PricingProblem& p = s.problem;
  p.spot = c.get_double("spot", 100.0);
  p.strike = c.get_double("strike", p.spot);
  p.maturity = c.get_double("maturity", 1.0);
  p.payoff = parse_payoff(c.get_string("payoff", "call"));
  p.diffusion = {c.get_double("r", 0.0), c.get_double("q", 0.0), c.get_double("sigma", 0.2)};
  validate(p.diffusion);
  p.jump = model_from_config(c, p.diffusion, p.spot, p.strike);

  GridSpec& g = p.grid_spec;
  const double width = 5.0 * p.diffusion.sigma * std::sqrt(p.maturity) + 1.0;
  g.x_min = bound(c, "min", p.spot).value_or(-width);
  g.x_max = bound(c, "max", p.spot).value_or(width);
  g.x_min_jump = bound(c, "min_jump", p.spot);
  g.x_max_jump = bound(c, "max_jump", p.spot);
  g.n = c.get_int("grid.n", 401);
  const std::string spacing = c.get_string("grid.spacing", "uniform");
  if (spacing == "uniform") {
    g.spacing = Spacing::uniform;
  } else if (spacing == "concentrated") {
    g.spacing = Spacing::concentrated;
  } else {
    throw ValidationError("unknown grid.spacing '" + spacing + "'");
  }
  g.focus = c.get_double("grid.focus", std::log(p.strike / p.spot));
  g.concentration = c.get_double("grid.concentration", g.concentration);
  g.growth = c.get_double("grid.growth", g.growth);
  const std::string ext = c.get_string("grid.extension", "geometric");
  if (ext == "geometric") {
    g.extension = Extension::geometric;
  } else if (ext == "uniform") {
    g.extension = Extension::uniform;
  } else {
    throw ValidationError("unknown grid.extension '" + ext + "'");
  }

  p.n_time_steps = c.get_int("time.steps", 1);
  if (auto m = c.get("jump_method")) p.jump_method = parse_jump_method(*m);
  p.picard_tol = c.get_double("picard.tol", p.picard_tol);
  p.picard_max_iter = c.get_int("picard.max_iter", p.picard_max_iter);
  p.rannacher = c.get_bool("rannacher", false);
  p.merton_mode = parse_merton_mode(c.get_string("merton.mode", "heat"));

  const std::string mode = c.get_string("mode", "strang");
  if (mode == "strang") {
    s.mode = PricingMode::strang;
  } else if (mode == "two-stage" || mode == "two_stage") {
    s.mode = PricingMode::two_stage;
  } else {
    throw ValidationError("unknown mode '" + mode + "' (strang|two-stage)");
  }
  s.two_stage.rate = parse_first_stage_rate(c.get_string("two_stage.rate", "risk-free"));
  s.two_stage.reverse_drift = c.get_bool("two_stage.reverse_drift", false);
  s.price_scale = c.get_double("price_scale", 1.0);
  validate(p);
  return s;
}

PriceResult run_price(const RunSettings& s) {
  return s.mode == PricingMode::strang ? strang_price(s.problem)
                                       : two_stage_price(s.problem, s.two_stage);
}

}  // namespace levysplit
