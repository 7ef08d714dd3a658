#include "levysplit/time_stepping.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_interp.h>
#include <nlohmann/json.hpp>

#include "levysplit/errors.hpp"
#include "levysplit/matrix_functions.hpp"

namespace levysplit {

std::string to_string(JumpMethod m) { return m == JumpMethod::exp ? "exp" : "pade-picard"; }

JumpMethod parse_jump_method(const std::string& s) {
  if (s == "exp") return JumpMethod::exp;
  if (s == "picard" || s == "it" || s == "pade-picard" || s == "pade_picard")
    return JumpMethod::pade_picard;
  throw ValidationError("unknown jump method '" + s + "'");
}

std::string to_string(FirstStageRate r) {
  return r == FirstStageRate::risk_free ? "risk-free" : "forward";
}

FirstStageRate parse_first_stage_rate(const std::string& s) {
  if (s == "risk-free" || s == "risk_free") return FirstStageRate::risk_free;
  if (s == "forward") return FirstStageRate::forward;
  throw ValidationError("unknown first-stage rate '" + s + "'");
}

void validate(const PricingProblem& p) {
  std::vector<std::string> errs;
  if (!(p.spot > 0)) errs.push_back("spot must be > 0");
  if (!(p.strike > 0)) errs.push_back("strike must be > 0");
  if (!(p.maturity > 0)) errs.push_back("maturity must be > 0");
  if (p.n_time_steps < 1) errs.push_back("n_time_steps must be >= 1");
  if (!(p.picard_tol > 0)) errs.push_back("picard_tol must be > 0");
  if (p.picard_max_iter < 1) errs.push_back("picard_max_iter must be >= 1");
  for (auto& e : validation_errors(p.diffusion)) errs.push_back(e);
  for (auto& e : validation_errors(p.jump)) errs.push_back(e);
  if (!errs.empty()) {
    std::string msg = "invalid pricing problem:";
    for (auto& e : errs) msg += "\n  " + e;
    throw ValidationError(msg);
  }
  validate(p.grid_spec);
  if (!(p.grid_spec.x_min < 0 && p.grid_spec.x_max > 0))
    throw ValidationError("diffusion grid must contain x = 0 in its interior");
}

JumpMethod default_jump_method(const LevyJumpModel& m) {
  if (const auto* g = std::get_if<GtspParams>(&m)) {
    (void)g;
    return JumpMethod::exp;
  }
  return JumpMethod::pade_picard;
}

double asymptotic_value(PayoffKind kind, double s, double k, double r, double q, double tau) {
  const double dq = std::exp(-q * tau), dr = std::exp(-r * tau);
  switch (kind) {
    case PayoffKind::call: return s > k ? std::max(s * dq - k * dr, 0.0) : 0.0;
    case PayoffKind::put: return s < k ? std::max(k * dr - s * dq, 0.0) : 0.0;
    case PayoffKind::digital: return s > k ? dr : 0.0;
  }
  return 0.0;
}

SolutionState payoff_on_grid(const PricingProblem& p, const Grid& grid) {
  SolutionState st;
  st.values.resize(static_cast<Eigen::Index>(grid.size()));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double s = p.spot * std::exp(grid[i]);
    double v = 0.0;
    switch (p.payoff) {
      case PayoffKind::call: v = std::max(s - p.strike, 0.0); break;
      case PayoffKind::put: v = std::max(p.strike - s, 0.0); break;
      case PayoffKind::digital: v = s > p.strike ? 1.0 : 0.0; break;
    }
    st.values[static_cast<Eigen::Index>(i)] = v;
  }
  st.tau = 0.0;
  return st;
}

DiffusionStepper::DiffusionStepper(const Grid& grid, const DiffusionParams& d, double drift_shift,
                                   double dt, double theta)
    : grid_(&grid), d_(d), dt_(dt), theta_(theta) {
  if (!(d.sigma > 0)) throw ValidationError("diffusion step needs sigma > 0");
  if (grid.diffusion_size() < 3) throw ValidationError("diffusion range needs >= 3 nodes");
  const double mu = d.r - d.q - 0.5 * d.sigma * d.sigma + drift_shift;
  const double half_s2 = 0.5 * d.sigma * d.sigma;
  const std::size_t n = grid.size();
  lo_.assign(n, 0.0);
  di_.assign(n, 0.0);
  up_.assign(n, 0.0);
  for (std::size_t i = grid.diffusion_begin() + 1; i + 1 < grid.diffusion_end(); ++i) {
    const double hl = grid.step(i - 1), hr = grid.step(i);
    // exact-for-quadratics first and second derivatives
    const double c1m = -hr / (hl * (hl + hr)), c1p = hl / (hr * (hl + hr));
    const double c10 = -(c1m + c1p);
    const double c2m = 2.0 / (hl * (hl + hr)), c2p = 2.0 / (hr * (hl + hr));
    const double c20 = -(c2m + c2p);
    lo_[i] = mu * c1m + half_s2 * c2m;
    di_[i] = mu * c10 + half_s2 * c20 - d.r;
    up_[i] = mu * c1p + half_s2 * c2p;
  }
}

void DiffusionStepper::step(SolutionState& st, const PricingProblem& p) const {
  const Grid& g = *grid_;
  const std::size_t a = g.diffusion_begin(), b = g.diffusion_end() - 1;
  const double tau_new = st.tau + dt_;
  auto& v = st.values;
  auto asym = [&](std::size_t i) {
    return asymptotic_value(p.payoff, p.spot * std::exp(g[i]), p.strike, d_.r, d_.q, tau_new);
  };

  // interior unknowns a+1 .. b-1, Thomas algorithm
  const std::size_t m = b - a - 1;
  std::vector<double> rhs(m), cl(m), cd(m), cu(m);
  const double ex = (1.0 - theta_) * dt_, im = theta_ * dt_;
  const double va = asym(a), vb = asym(b);
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t i = a + 1 + k;
    const auto ii = static_cast<Eigen::Index>(i);
    rhs[k] = v[ii] + ex * (lo_[i] * v[ii - 1] + di_[i] * v[ii] + up_[i] * v[ii + 1]);
    cl[k] = -im * lo_[i];
    cd[k] = 1.0 - im * di_[i];
    cu[k] = -im * up_[i];
  }
  rhs[0] -= cl[0] * va;
  rhs[m - 1] -= cu[m - 1] * vb;
  for (std::size_t k = 1; k < m; ++k) {
    const double w = cl[k] / cd[k - 1];
    cd[k] -= w * cu[k - 1];
    rhs[k] -= w * rhs[k - 1];
  }
  rhs[m - 1] /= cd[m - 1];
  for (std::size_t k = m - 1; k-- > 0;) rhs[k] = (rhs[k] - cu[k] * rhs[k + 1]) / cd[k];

  for (std::size_t k = 0; k < m; ++k) v[static_cast<Eigen::Index>(a + 1 + k)] = rhs[k];
  for (std::size_t i = 0; i <= a; ++i) v[static_cast<Eigen::Index>(i)] = asym(i);
  for (std::size_t i = b; i < g.size(); ++i) v[static_cast<Eigen::Index>(i)] = asym(i);
  st.tau = tau_new;
}

void diffusion_half_step(SolutionState& state, const PricingProblem& p, double drift_shift,
                         const Grid& grid, double dt) {
  DiffusionStepper(grid, p.diffusion, drift_shift, dt).step(state, p);
}

ExpJumpStepper::ExpJumpStepper(const JumpGenerator& gen, double dt) {
  if (gen.is_zero()) {
    identity_ = true;
    return;
  }
  a_ = std::make_shared<const Eigen::MatrixXd>(matrix_exponential(gen.dense(), dt));
}

void ExpJumpStepper::step(SolutionState& state) const {
  if (identity_) return;
  state.values = (*a_) * state.values;
}

int jump_full_step_picard(SolutionState& state, const JumpGenerator& gen, double dt, double tol,
                          int max_iter) {
  if (gen.is_zero()) return 1;
  const double half = 0.5 * dt;
  const Eigen::VectorXd w = state.values + half * gen.apply(state.values);
  Eigen::VectorXd c = state.values;
  int k = 1;
  for (; k <= max_iter; ++k) {
    Eigen::VectorXd next = w + half * gen.apply(c);
    const double diff = (next - c).lpNorm<Eigen::Infinity>();
    c = std::move(next);
    if (!std::isfinite(diff)) break;
    if (diff <= tol) {
      state.values = std::move(c);
      return k;
    }
  }
  k = std::min(k, max_iter);
  throw ConvergenceError("Pade-Picard jump step did not converge in " + std::to_string(k) +
                             " iterations",
                         k);
}

std::string PricingDiagnostics::to_json() const {
  nlohmann::json j;
  j["regime"] = nlohmann::json::parse(regime_json);
  j["h"] = h;
  j["N"] = n_diffusion;
  j["N_jump_grid"] = n_jump_grid;
  j["dtau"] = dt;
  j["drift_shift"] = drift_shift;
  j["jump_method"] = to_string(jump_method);
  j["picard_iterations"] = picard_iterations;
  j["wall_seconds"] = wall_seconds;
  j["positivity_min"] = positivity_min;
  j["positivity_violations"] = positivity_violations;
  return j.dump(2);
}

double interpolate_spline(const Grid& grid, const Eigen::VectorXd& v, double x) {
  const std::size_t n = grid.size();
  std::unique_ptr<gsl_interp, decltype(&gsl_interp_free)> sp(
      gsl_interp_alloc(gsl_interp_cspline, n), &gsl_interp_free);
  std::unique_ptr<gsl_interp_accel, decltype(&gsl_interp_accel_free)> acc(
      gsl_interp_accel_alloc(), &gsl_interp_accel_free);
  if (!sp || !acc) throw NumericalError("spline allocation failed");
  if (gsl_interp_init(sp.get(), grid.nodes().data(), v.data(), n) != GSL_SUCCESS)
    throw NumericalError("spline setup failed");
  return gsl_interp_eval(sp.get(), grid.nodes().data(), v.data(), x, acc.get());
}

namespace {

constexpr double kPositivityTol = 1e-12;

struct PositivityTracker {
  double min = std::numeric_limits<double>::infinity();
  int violations = 0;
  void observe(const Eigen::VectorXd& v) {
    const double m = v.minCoeff();
    min = std::min(min, m);
    if (m < -kPositivityTol) ++violations;
  }
};

// Runs one jump step of length dt with the chosen method.
class JumpStep {
 public:
  JumpStep(const JumpGenerator& gen, JumpMethod m, double dt, double tol, int max_iter)
      : gen_(gen), dt_(dt), tol_(tol), max_iter_(max_iter) {
    if (m == JumpMethod::exp) exp_.emplace(gen, dt);
  }
  int operator()(SolutionState& st) const {
    if (exp_) {
      exp_->step(st);
      return 0;
    }
    return jump_full_step_picard(st, gen_, dt_, tol_, max_iter_);
  }

 private:
  const JumpGenerator& gen_;
  double dt_, tol_;
  int max_iter_;
  std::optional<ExpJumpStepper> exp_;
};

PricingDiagnostics base_diagnostics(const Grid& grid, const JumpGenerator& gen, JumpMethod m,
                                    double dt) {
  PricingDiagnostics d;
  d.regime_json = gen.regime.to_json();
  d.h = grid.diffusion_step();
  d.n_diffusion = grid.diffusion_size();
  d.n_jump_grid = grid.size();
  d.dt = dt;
  d.drift_shift = gen.drift_shift;
  d.jump_method = m;
  return d;
}

}  // namespace

PriceResult strang_price(const PricingProblem& p) {
  validate(p);
  const auto t0 = std::chrono::steady_clock::now();
  Grid grid = build_jump_grid(p.grid_spec);
  const JumpGenerator gen = build_jump_generator(p.jump, grid, {p.merton_mode});
  const JumpMethod method = p.jump_method.value_or(default_jump_method(p.jump));
  const double dt = p.maturity / p.n_time_steps;

  const DiffusionStepper half(grid, p.diffusion, gen.drift_shift, 0.5 * dt);
  std::optional<DiffusionStepper> quarter_ie;
  if (p.rannacher) quarter_ie.emplace(grid, p.diffusion, gen.drift_shift, 0.25 * dt, 1.0);
  const JumpStep jump(gen, method, dt, p.picard_tol, p.picard_max_iter);

  PricingDiagnostics diag = base_diagnostics(grid, gen, method, dt);
  PositivityTracker pos;
  SolutionState st = payoff_on_grid(p, grid);
  pos.observe(st.values);
  for (int n = 0; n < p.n_time_steps; ++n) {
    if (n == 0 && quarter_ie) {
      quarter_ie->step(st, p);
      quarter_ie->step(st, p);
    } else {
      half.step(st, p);
    }
    pos.observe(st.values);
    const int it = jump(st);
    if (method == JumpMethod::pade_picard) diag.picard_iterations.push_back(it);
    pos.observe(st.values);
    half.step(st, p);
    pos.observe(st.values);
    if (!st.values.allFinite()) throw NumericalError("non-finite state after time step");
  }

  PriceResult res;
  res.price = interpolate_spline(grid, st.values, 0.0);
  diag.positivity_min = pos.min;
  diag.positivity_violations = pos.violations;
  diag.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  res.values = std::move(st.values);
  res.grid = std::move(grid);
  res.diagnostics = std::move(diag);
  return res;
}

PriceResult two_stage_price(const PricingProblem& p, const TwoStageOptions& opt) {
  validate(p);
  const auto t0 = std::chrono::steady_clock::now();
  Grid grid = build_jump_grid(p.grid_spec);
  const JumpGenerator gen = build_jump_generator(p.jump, grid, {p.merton_mode});
  const JumpMethod method = p.jump_method.value_or(default_jump_method(p.jump));
  const double t = p.maturity;
  const double shift = opt.reverse_drift ? -gen.drift_shift : gen.drift_shift;
  const auto& d = p.diffusion;

  SolutionState st;
  st.values.resize(static_cast<Eigen::Index>(grid.size()));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double s = p.spot * std::exp(grid[i]);
    st.values[static_cast<Eigen::Index>(i)] =
        opt.rate == FirstStageRate::risk_free
            ? black_scholes(s, p.strike, d.r, d.q - shift, d.sigma, t, p.payoff)
            : black_scholes(s, p.strike, d.r + shift, d.q, d.sigma, t, p.payoff);
  }
  st.tau = t;

  PricingDiagnostics diag = base_diagnostics(grid, gen, method, t);
  PositivityTracker pos;
  pos.observe(st.values);
  const JumpStep jump(gen, method, t, p.picard_tol, p.picard_max_iter);
  const int it = jump(st);
  if (method == JumpMethod::pade_picard) diag.picard_iterations.push_back(it);
  pos.observe(st.values);
  if (!st.values.allFinite()) throw NumericalError("non-finite state after jump step");

  PriceResult res;
  res.price = interpolate_spline(grid, st.values, 0.0);
  diag.positivity_min = pos.min;
  diag.positivity_violations = pos.violations;
  diag.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  res.values = std::move(st.values);
  res.grid = std::move(grid);
  res.diagnostics = std::move(diag);
  return res;
}

}  // namespace levysplit
