#include <doctest.h>

#include <cmath>

#include "levysplit/errors.hpp"
#include "levysplit/reference_pricers.hpp"

using namespace levysplit;

TEST_SUITE("reference_pricers") {

TEST_CASE("Black-Scholes textbook values") {
  CHECK(black_scholes(100, 100, 0.05, 0, 0.2, 1) == doctest::Approx(10.450583572185565).epsilon(1e-12));
  CHECK(black_scholes(100, 100, 0.05, 0, 0.2, 1, PayoffKind::put) ==
        doctest::Approx(5.573526022256971).epsilon(1e-12));
  CHECK(black_scholes(100, 100, 0.05, 0, 0.2, 1, PayoffKind::digital) ==
        doctest::Approx(std::exp(-0.05) * normal_cdf(0.15)).epsilon(1e-12));
}

TEST_CASE("put-call parity") {
  for (double k : {80.0, 100.0, 130.0})
    for (double t : {0.1, 1.0, 3.0}) {
      const double c = black_scholes(100, k, 0.03, 0.01, 0.25, t);
      const double p = black_scholes(100, k, 0.03, 0.01, 0.25, t, PayoffKind::put);
      CHECK(c - p == doctest::Approx(100 * std::exp(-0.01 * t) - k * std::exp(-0.03 * t)).epsilon(1e-12));
    }
}

TEST_CASE("Merton series with zero intensity is Black-Scholes") {
  const DiffusionParams d{0.05, 0.0, 0.2};
  CHECK(merton_series(100, 110, 0.5, d, {0, 0.1, 0.2}) ==
        doctest::Approx(black_scholes(100, 110, 0.05, 0, 0.2, 0.5)).epsilon(1e-14));
}

namespace {
// The default eta = 0.25 leaves a Simpson error of ~1.5e-6 relative at K = 120.
FftConfig fine_fft() {
  FftConfig f;
  f.n = 32768;
  f.eta = 0.1;
  return f;
}
}  // namespace

TEST_CASE("Carr-Madan agrees with Black-Scholes") {
  const DiffusionParams d{0.05, 0.0, 0.2};
  CHECK(carr_madan_call(NoJumps{}, d, 100, 100, 1) ==
        doctest::Approx(black_scholes(100, 100, 0.05, 0, 0.2, 1)).epsilon(1e-6));
  for (double k : {80.0, 100.0, 120.0})
    CHECK(carr_madan_call(NoJumps{}, d, 100, k, 1, fine_fft()) ==
          doctest::Approx(black_scholes(100, k, 0.05, 0, 0.2, 1)).epsilon(1e-6));
}

TEST_CASE("Merton series agrees with Carr-Madan") {
  const DiffusionParams d{0.05, 0.0, 0.2};
  const MertonParams m{0.5, -0.1, 0.2};
  for (double k : {80.0, 100.0, 120.0})
    for (double t : {0.25, 1.0, 2.0}) {
      CAPTURE(k);
      CAPTURE(t);
      const double a = merton_series(100, k, t, d, m);
      const double b = carr_madan_call(m, d, 100, k, t, fine_fft());
      CHECK(std::abs(a / b - 1) < 1e-5);
    }
}

TEST_CASE("log-price characteristic function is normalized and martingale") {
  const DiffusionParams d{0.05, 0.0, 0.2};
  const LevyJumpModel models[] = {MertonParams{1, -0.1, 0.2}, KouParams{1, 0.4, 3, 3.5},
                                  GtspParams{{1, 2, 0.5}, {1, 3, 0.5}, 5}};
  for (const auto& m : models) {
    const LogPriceCf cf = levy_log_price_cf(m, d, 100, 1);
    CHECK(std::abs(cf({0, 0}) - 1.0) < 1e-12);
    // E[S_T] = S_0 e^{rT}
    CHECK(std::abs(cf({0, -1}) - 100 * std::exp(0.05)) < 1e-9 * 100);
  }
}

TEST_CASE("Carr-Madan damping must respect the upward tail") {
  const DiffusionParams d{0, 0, 0.2};
  const GtspParams g{{10, 2, -0.5}, {0, 2, -0.5}, 5};
  CHECK_THROWS_AS(carr_madan_call(g, d, 1, 1, 0.1), ValidationError);
  FftConfig a = fine_fft(), b = fine_fft();
  a.damping = 0.25;
  b.damping = 0.5;
  CHECK(carr_madan_call(g, d, 1, 1, 0.1, a) ==
        doctest::Approx(carr_madan_call(g, d, 1, 1, 0.1, b)).epsilon(1e-3));
}

}
