#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "levysplit/time_stepping.hpp"

namespace levysplit {

// Flat `key = value` configuration; `#` starts a comment.
class Config {
 public:
  static Config parse(std::istream& is, const std::string& source = "<input>");
  static Config load(const std::string& path);
  // `key=value`
  static std::pair<std::string, std::string> split_assignment(const std::string& kv);

  void set(const std::string& key, const std::string& value);
  void erase(const std::string& key) { entries_.erase(key); }
  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  std::optional<std::string> get(const std::string& key) const;

  std::string get_string(const std::string& key, const std::string& def) const;
  std::string require_string(const std::string& key) const;
  double get_double(const std::string& key, double def) const;
  double require_double(const std::string& key) const;
  std::optional<double> get_optional_double(const std::string& key) const;
  int get_int(const std::string& key, int def) const;
  bool get_bool(const std::string& key, bool def) const;
  std::vector<int> get_int_list(const std::string& key) const;
  std::vector<double> get_double_list(const std::string& key) const;
  std::vector<std::string> get_string_list(const std::string& key) const;

  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
};

// Keys understood by problem_from_config and the study runner.
const std::vector<std::string>& known_config_keys();
// Throws ValidationError naming any key not in known_config_keys().
void check_known_keys(const Config& c);

enum class PricingMode { strang, two_stage };

struct RunSettings {
  PricingProblem problem;
  PricingMode mode = PricingMode::strang;
  TwoStageOptions two_stage;
  double price_scale = 1.0;  // reported prices are multiplied by this
};

// Grid bounds come either as log-moneyness (grid.x_*) or as price levels
// (grid.s_*, converted with ln(S / spot)).
RunSettings settings_from_config(const Config& c);

LevyJumpModel model_from_config(const Config& c, const DiffusionParams& d, double spot,
                                double strike);

PriceResult run_price(const RunSettings& s);

// Kou intensity at which the Carr-Madan price at `maturity` equals `anchor`.
double resolve_kou_lambda(const KouParams& base, const DiffusionParams& d, double spot,
                          double strike, double maturity, double anchor);

}  // namespace levysplit
