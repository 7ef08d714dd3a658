#include <doctest.h>

#include <cmath>

#include "levysplit/errors.hpp"
#include "levysplit/time_stepping.hpp"

using namespace levysplit;

namespace {

PricingProblem bs_problem(int n, int steps) {
  PricingProblem p;
  p.spot = 100;
  p.strike = 100;
  p.maturity = 1;
  p.diffusion = {0.05, 0.0, 0.2};
  p.grid_spec.x_min = -2;
  p.grid_spec.x_max = 2;
  p.grid_spec.n = n;
  p.n_time_steps = steps;
  return p;
}

PricingProblem kou_problem(int n) {
  PricingProblem k;
  k.spot = k.strike = 100;
  k.maturity = 0.25;
  k.diffusion = {0.05, 0, 0.15};
  k.jump = KouParams{0.1, 0.3445, 3.0465, 3.0775};
  k.grid_spec.x_min = std::log(1e-3 / 100);
  k.grid_spec.x_max = std::log(3000.0 / 100);
  k.grid_spec.n = n;
  k.grid_spec.x_max_jump = std::log(1e5 / 100);
  k.grid_spec.x_min_jump = k.grid_spec.x_min;
  return k;
}

}  // namespace

TEST_SUITE("time_stepping") {

TEST_CASE("payoffs on the grid") {
  PricingProblem p = bs_problem(5, 1);
  const Grid g = build_uniform_grid(std::log(0.5), std::log(1.5), 3);
  p.grid_spec.x_min = std::log(0.5);
  p.grid_spec.x_max = std::log(1.5);
  const double s[] = {50, 100 * std::sqrt(0.75), 150};
  const SolutionState call = payoff_on_grid(p, g);
  CHECK(call.tau == 0.0);
  CHECK(call.values[0] == 0.0);
  CHECK(call.values[2] == doctest::Approx(50));
  p.payoff = PayoffKind::put;
  const SolutionState put = payoff_on_grid(p, g);
  CHECK(put.values[0] == doctest::Approx(50));
  CHECK(put.values[1] == doctest::Approx(100 - s[1]));
  CHECK(put.values[2] == 0.0);
  p.payoff = PayoffKind::digital;
  const SolutionState dig = payoff_on_grid(p, g);
  CHECK(dig.values[0] == 0.0);
  CHECK(dig.values[2] == 1.0);
}

TEST_CASE("asymptotic values") {
  CHECK(asymptotic_value(PayoffKind::call, 200, 100, 0.05, 0.0, 1) ==
        doctest::Approx(200 - 100 * std::exp(-0.05)));
  CHECK(asymptotic_value(PayoffKind::call, 50, 100, 0.05, 0.0, 1) == 0.0);
  CHECK(asymptotic_value(PayoffKind::put, 50, 100, 0.05, 0.0, 1) ==
        doctest::Approx(100 * std::exp(-0.05) - 50));
  CHECK(asymptotic_value(PayoffKind::digital, 200, 100, 0.05, 0.0, 1) ==
        doctest::Approx(std::exp(-0.05)));
}

TEST_CASE("jump method parsing and defaults") {
  CHECK(parse_jump_method("exp") == JumpMethod::exp);
  CHECK(parse_jump_method("picard") == JumpMethod::pade_picard);
  CHECK(parse_jump_method("it") == JumpMethod::pade_picard);
  CHECK_THROWS_AS(parse_jump_method("rk4"), ValidationError);
  CHECK(default_jump_method(GtspParams{}) == JumpMethod::exp);
  CHECK(default_jump_method(KouParams{}) == JumpMethod::pade_picard);
}

TEST_CASE("problem validation") {
  PricingProblem p = bs_problem(11, 4);
  CHECK_NOTHROW(validate(p));
  p.grid_spec.x_min = 0.5;
  CHECK_THROWS_AS(validate(p), ValidationError);
  p = bs_problem(11, 0);
  CHECK_THROWS_AS(validate(p), ValidationError);
  p = bs_problem(11, 4);
  p.maturity = -1;
  CHECK_THROWS_AS(validate(p), ValidationError);
}

TEST_CASE("zero-intensity jump step leaves the state unchanged") {
  const Grid g = build_uniform_grid(-1, 1, 21);
  const JumpGenerator j = build_jump_generator(MertonParams{0, 0.1, 0.2}, g);
  SolutionState s{Eigen::VectorXd::LinSpaced(21, 0, 3), 0.0};
  const Eigen::VectorXd before = s.values;
  ExpJumpStepper(j, 0.1).step(s);
  CHECK((s.values - before).cwiseAbs().maxCoeff() == 0.0);
  CHECK(jump_full_step_picard(s, j, 0.1, 1e-9, 100) == 1);
  CHECK((s.values - before).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("Picard failure reports the iteration count") {
  GridSpec gs;
  gs.x_min = -2;
  gs.x_max = 2;
  gs.n = 81;
  const Grid g = build_jump_grid(gs);
  const JumpGenerator j = build_gtsp({{5, 2, 1.5}, {0, 2, 1.5}, 5}, g);
  SolutionState s{Eigen::VectorXd::Ones(81), 0.0};
  for (Eigen::Index i = 0; i < 81; ++i) s.values[i] = std::max(std::exp(g[i]) - 1, 0.0);
  try {
    jump_full_step_picard(s, j, 1.0, 1e-14, 3);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.iterations() == 3);
  }
}

TEST_CASE("vanishing volatility makes the diffusion step nearly the identity") {
  PricingProblem p = bs_problem(41, 1);
  p.diffusion = {0.0, 0.0, 1e-10};
  const Grid g = build_jump_grid(p.grid_spec);
  SolutionState s = payoff_on_grid(p, g);
  for (Eigen::Index i = 0; i < s.values.size(); ++i) s.values[i] = std::sin(g[static_cast<std::size_t>(i)]);
  const Eigen::VectorXd before = s.values;
  DiffusionStepper(g, p.diffusion, 0.0, 0.01).step(s, p);
  CHECK((s.values - before).segment(1, 39).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("zero-jump Black-Scholes") {
  const PricingProblem p = bs_problem(801, 64);
  const PriceResult r = strang_price(p);
  const double bs = black_scholes(100, 100, 0.05, 0, 0.2, 1);
  CHECK(std::abs(r.price / bs - 1) < 1e-4);
  CHECK(r.diagnostics.positivity_violations == 0);
}

TEST_CASE("Merton prices against the Poisson series") {
  for (const MertonParams m : {MertonParams{0.5, -0.1, 0.2}, MertonParams{5, 0.3, 0.1}}) {
    PricingProblem p = bs_problem(801, 64);
    p.grid_spec.x_min = std::log(1e-2);
    p.grid_spec.x_max = std::log(1e2);
    p.jump = m;
    const PriceResult r = strang_price(p);
    const double ref = merton_series(100, 100, 1, p.diffusion, m);
    CHECK(std::abs(r.price / ref - 1) < 1e-3);
    CHECK(r.diagnostics.positivity_violations == 0);
  }
}

TEST_CASE("Kou two-stage price with the reversed first-stage drift") {
  const PricingProblem k = kou_problem(401);
  TwoStageOptions o;
  o.reverse_drift = true;
  const PriceResult r = two_stage_price(k, o);
  CHECK(r.price == doctest::Approx(3.99640628).epsilon(1e-5));
  CHECK(r.diagnostics.jump_method == JumpMethod::pade_picard);
  CHECK(r.diagnostics.picard_iterations.size() == 1);
}

TEST_CASE("Picard and exponential jump steps agree") {
  PricingProblem k = kou_problem(201);
  k.n_time_steps = 4;
  k.jump_method = JumpMethod::pade_picard;
  const double a = strang_price(k).price;
  k.jump_method = JumpMethod::exp;
  const double b = strang_price(k).price;
  CHECK(std::abs(a - b) < 1e-3 * std::abs(b));
}

TEST_CASE("coarser time steps do not amplify the solution") {
  PricingProblem p = bs_problem(201, 64);
  p.jump = KouParams{1.0, 0.4, 3.0, 3.5};
  for (int steps : {64, 32, 16, 8, 4, 2, 1}) {
    p.n_time_steps = steps;
    const PriceResult r = strang_price(p);
    CHECK(r.values.cwiseAbs().maxCoeff() <= 100 * std::exp(2.0));
    CHECK(r.diagnostics.positivity_min > -1e-6);
  }
}

TEST_CASE("Strang splitting is second order in time") {
  PricingProblem p = bs_problem(401, 2);
  p.jump = MertonParams{2, -0.1, 0.15};
  p.merton_mode = MertonMode::matrix;
  p.jump_method = JumpMethod::exp;
  p.rannacher = true;
  std::vector<double> prices;
  for (int steps : {2, 4, 8, 16}) {
    p.n_time_steps = steps;
    prices.push_back(strang_price(p).price);
  }
  p.n_time_steps = 256;
  const double ref = strang_price(p).price;
  const double order = std::log2((prices[2] - ref) / (prices[3] - ref));
  CHECK(order == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("diagnostics serialize") {
  const PriceResult r = strang_price(bs_problem(41, 2));
  const std::string js = r.diagnostics.to_json();
  CHECK(js.find("\"N_jump_grid\"") != std::string::npos);
  CHECK(js.find("\"positivity_violations\"") != std::string::npos);
}

TEST_CASE("spline interpolation reproduces nodes and smooth functions") {
  const Grid g = build_uniform_grid(-1, 1, 201);
  Eigen::VectorXd v(201);
  for (Eigen::Index i = 0; i < 201; ++i) v[i] = std::exp(g[static_cast<std::size_t>(i)]);
  CHECK(interpolate_spline(g, v, g[37]) == doctest::Approx(v[37]));
  CHECK(interpolate_spline(g, v, 0.123) == doctest::Approx(std::exp(0.123)).epsilon(1e-8));
}

}
