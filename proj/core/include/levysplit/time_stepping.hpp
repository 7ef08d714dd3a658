#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "levysplit/grid.hpp"
#include "levysplit/jump_generator.hpp"
#include "levysplit/levy_models.hpp"
#include "levysplit/reference_pricers.hpp"

namespace levysplit {

enum class JumpMethod { exp, pade_picard };
std::string to_string(JumpMethod m);
JumpMethod parse_jump_method(const std::string& s);

// Log-price coordinates x = ln(S / spot).
struct PricingProblem {
  double spot = 100.0;
  double strike = 100.0;
  double maturity = 1.0;
  PayoffKind payoff = PayoffKind::call;
  DiffusionParams diffusion;
  LevyJumpModel jump = NoJumps{};
  GridSpec grid_spec;
  int n_time_steps = 1;
  std::optional<JumpMethod> jump_method;  // unset: model default
  double picard_tol = 1e-9;
  int picard_max_iter = 100;
  bool rannacher = false;
  MertonMode merton_mode = MertonMode::heat;
};

void validate(const PricingProblem& p);
JumpMethod default_jump_method(const LevyJumpModel& m);

struct SolutionState {
  Eigen::VectorXd values;
  double tau = 0.0;
};

// Terminal payoff on every node of the grid.
SolutionState payoff_on_grid(const PricingProblem& p, const Grid& grid);

// Discounted large/small-S behavior of the payoff at elapsed time tau.
double asymptotic_value(PayoffKind kind, double s, double k, double r, double q, double tau);

// Crank-Nicolson (theta = 1/2) or implicit Euler (theta = 1) steps of
//   C_tau = sigma^2/2 C_xx + (r - q - sigma^2/2 + drift_shift) C_x - r C
// on the diffusion index range with Dirichlet asymptotic values at both
// ends; nodes outside the range are set to their asymptotic values.
class DiffusionStepper {
 public:
  DiffusionStepper(const Grid& grid, const DiffusionParams& d, double drift_shift, double dt,
                   double theta = 0.5);
  void step(SolutionState& state, const PricingProblem& p) const;
  double dt() const { return dt_; }

 private:
  const Grid* grid_;
  DiffusionParams d_;
  double dt_, theta_;
  std::vector<double> lo_, di_, up_;  // spatial operator rows
};

void diffusion_half_step(SolutionState& state, const PricingProblem& p, double drift_shift,
                         const Grid& grid, double dt);

// state <- exp(dt J*) state, with the exponential formed once per (gen, dt).
class ExpJumpStepper {
 public:
  ExpJumpStepper(const JumpGenerator& gen, double dt);
  void step(SolutionState& state) const;
  const Eigen::MatrixXd& propagator() const { return *a_; }

 private:
  std::shared_ptr<const Eigen::MatrixXd> a_;
  bool identity_ = false;
};

// Pade(1,1) step solved by fixed-point iteration
// C_{k+1} = C_old + dt/2 J*(C_old + C_k). Returns the iteration count.
int jump_full_step_picard(SolutionState& state, const JumpGenerator& gen, double dt, double tol,
                          int max_iter);

struct PricingDiagnostics {
  std::string regime_json;
  double h = 0.0;
  std::size_t n_diffusion = 0;
  std::size_t n_jump_grid = 0;
  double dt = 0.0;
  double drift_shift = 0.0;
  JumpMethod jump_method = JumpMethod::exp;
  std::vector<int> picard_iterations;
  double wall_seconds = 0.0;
  double positivity_min = 0.0;
  int positivity_violations = 0;
  std::string to_json() const;
};

struct PriceResult {
  double price = 0.0;
  Grid grid;
  Eigen::VectorXd values;
  PricingDiagnostics diagnostics;
};

// Value at x (ln S/spot) from a natural cubic spline through every grid node.
double interpolate_spline(const Grid& grid, const Eigen::VectorXd& v, double x);

PriceResult strang_price(const PricingProblem& p);

// Table-reproduction mode: closed-form Black-Scholes over the whole
// maturity with the moved drift, then a single jump step of length T.
enum class FirstStageRate {
  risk_free,  // drift r - q + shift, discount r
  forward,    // rate r + shift used for drift and discount
};
std::string to_string(FirstStageRate r);
FirstStageRate parse_first_stage_rate(const std::string& s);

struct TwoStageOptions {
  FirstStageRate rate = FirstStageRate::risk_free;
  // Apply the moved drift with the opposite sign in the first stage.
  bool reverse_drift = false;
};

PriceResult two_stage_price(const PricingProblem& p, const TwoStageOptions& opt = {});

}  // namespace levysplit
