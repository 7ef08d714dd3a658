#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "levysplit/errors.hpp"
#include "levysplit/grid.hpp"

using namespace levysplit;

TEST_SUITE("grid") {

TEST_CASE("uniform grid nodes and step") {
  const Grid g = build_uniform_grid(0, 1, 3);
  REQUIRE(g.size() == 3);
  CHECK(g[0] == 0.0);
  CHECK(g[1] == doctest::Approx(0.5));
  CHECK(g[2] == 1.0);
  CHECK(g.diffusion_begin() == 0);
  CHECK(g.diffusion_end() == 3);
  CHECK(g.is_uniform());
}

TEST_CASE("Kou test domain step at N = 401") {
  const Grid g = build_uniform_grid(std::log(1e-3), std::log(3000.0), 401);
  CHECK(g.diffusion_step() == doctest::Approx(0.0372853).epsilon(1e-6));
}

TEST_CASE("too few nodes or bad bounds are rejected") {
  CHECK_THROWS_AS(build_uniform_grid(0, 1, 2), ValidationError);
  CHECK_THROWS_AS(build_uniform_grid(1, 0, 5), ValidationError);
  CHECK_THROWS_AS(build_uniform_grid(0, NAN, 5), ValidationError);
}

TEST_CASE("geometric extension steps") {
  const Grid d = build_uniform_grid(0, 1, 11);  // h = 0.1
  const double target = 1.0 + 0.103 + 0.10609 + 0.1092727 - 1e-9;
  const Grid g = extend_to_jump_grid(d, 0.0, target, 1.03);
  REQUIRE(g.size() == 14);
  CHECK(g.step(10) == doctest::Approx(0.103).epsilon(1e-12));
  CHECK(g.step(11) == doctest::Approx(0.10609).epsilon(1e-12));
  CHECK(g.step(12) == doctest::Approx(0.1092727).epsilon(1e-12));
}

TEST_CASE("extension to the last node is a no-op") {
  const Grid d = build_uniform_grid(-1, 1, 21);
  const Grid g = extend_to_jump_grid(d, -1, 1, 1.03);
  CHECK(g.nodes() == d.nodes());
  CHECK(g.id() == d.id());
}

TEST_CASE("growth factor must exceed one") {
  const Grid d = build_uniform_grid(-1, 1, 21);
  CHECK_THROWS_AS(extend_to_jump_grid(d, -2, 2, 1.0), ValidationError);
  CHECK_THROWS_AS(extend_to_jump_grid(d, -2, 2, 0.9), ValidationError);
}

TEST_CASE("uniform extension keeps the boundary step") {
  const Grid d = build_uniform_grid(0, 1, 11);
  const Grid g = extend_uniform_to_jump_grid(d, -0.3, 1.5);
  CHECK(g.diffusion_begin() == 3);
  CHECK(g.diffusion_size() == 11);
  CHECK(g.is_uniform(1e-9));
  CHECK(g.nodes().front() == doctest::Approx(-0.3));
  CHECK(g.nodes().back() == doctest::Approx(1.5));
}

TEST_CASE("lower extension mirrors the upper one by default") {
  GridSpec s;
  s.x_min = -1;
  s.x_max = 1;
  s.n = 21;
  s.x_max_jump = 3;
  const Grid g = build_jump_grid(s);
  CHECK(g.nodes().front() <= -3.0);
  CHECK(g.diffusion_begin() == g.size() - g.diffusion_end());
}

TEST_CASE("property: superset, exact ratios and monotone nodes over random specs") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 200; ++trial) {
    GridSpec s;
    s.x_min = -1 - 3 * u(rng);
    s.x_max = 1 + 3 * u(rng);
    s.n = 3 + static_cast<int>(200 * u(rng));
    s.spacing = u(rng) < 0.5 ? Spacing::uniform : Spacing::concentrated;
    s.focus = 0.2 * (u(rng) - 0.5);
    s.growth = 1.001 + 0.2 * u(rng);
    s.x_max_jump = s.x_max + 5 * u(rng);
    s.x_min_jump = s.x_min - 5 * u(rng);
    const Grid d = build_diffusion_grid(s);
    const Grid g = build_jump_grid(s);
    REQUIRE(g.diffusion_size() == d.size());
    for (std::size_t i = 0; i < d.size(); ++i)
      REQUIRE(g[g.diffusion_begin() + i] == d[i]);
    for (std::size_t i = 0; i + 1 < g.size(); ++i) REQUIRE(g[i + 1] > g[i]);
    for (std::size_t i = g.diffusion_end(); i + 1 < g.size(); ++i) {
      // steps are differences of stored nodes, so round-off scales with |x|
      const double ratio = g.step(i) / g.step(i - 1);
      const double scale = std::abs(g[i + 1]) + std::abs(g[i]) + std::abs(g[i - 1]);
      const double eps = std::numeric_limits<double>::epsilon();
      REQUIRE(std::abs(ratio - s.growth) <= 4 * eps * (s.growth + scale / g.step(i - 1)));
    }
  }
}

TEST_CASE("concentrated grid clusters at the focus") {
  const Grid g = build_concentrated_grid(-2, 2, 101, 0.0, 0.1);
  const std::size_t mid = g.locate(0.0);
  CHECK(g.step(mid) < g.step(0));
  CHECK(g.step(mid) < g.step(g.size() - 2));
  CHECK(g[0] == doctest::Approx(-2.0));
  CHECK(g[g.size() - 1] == doctest::Approx(2.0));
}

TEST_CASE("csv export") {
  const Grid d = build_uniform_grid(0, 1, 3);
  const Grid g = extend_to_jump_grid(d, -0.5, 1.5, 1.03);
  std::ostringstream os;
  write_csv(g, os);
  const std::string s = os.str();
  CHECK(s.rfind("index,x,region\n", 0) == 0);
  CHECK(s.find("lower") != std::string::npos);
  CHECK(s.find("upper") != std::string::npos);
}

}
