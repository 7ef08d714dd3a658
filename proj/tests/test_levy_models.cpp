#include <doctest.h>

#include <cmath>
#include <complex>
#include <functional>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "levysplit/errors.hpp"
#include "levysplit/levy_models.hpp"

using namespace levysplit;
using cd = std::complex<double>;

namespace {

// Integral of (e^{iuy} - 1 - iu(e^y - 1)) density(y) over y > 0 (sign = 1) or y < 0.
cd levy_integral_half(const std::function<double(double)>& density, double u, int sign,
                      double a_min = 0.0) {
  auto integrand = [&](double a, bool imag) {
    if (a == 0.0) return 0.0;
    const double y = sign * a;
    cd v;
    if (a < 1e-2) {
      // sum_{k>=2} ((iuy)^k - iu y^k) / k!, free of the cancellation near 0
      cd term_a = cd(0, u * y), term_b = y;
      for (int k = 2; k <= 12; ++k) {
        term_a *= cd(0, u * y) / double(k);
        term_b *= y / double(k);
        v += term_a - cd(0, u) * term_b;
      }
    } else {
      v = std::exp(cd(0, u * y)) - 1.0 - cd(0, u) * std::expm1(y);
    }
    const double dens = density(y);
    // the integrand vanishes like a^{1 - alpha} while the density overflows
    if (!std::isfinite(dens)) return 0.0;
    return (imag ? v.imag() : v.real()) * dens;
  };
  boost::math::quadrature::tanh_sinh<double> ts;
  double re = 0, im = 0;
  for (bool imag : {false, true}) {
    auto f = [&](double a) { return integrand(a, imag); };
    // every tested density is below e^{-300} times e^{|y|} beyond |y| = 200
    const double v = ts.integrate(f, a_min, 1.0) + ts.integrate(f, 1.0, 200.0);
    (imag ? im : re) = v;
  }
  return {re, im};
}

// GTSP part over 0 < a < delta, termwise from the Taylor series of the
// integrand and lower incomplete gamma functions.
cd gtsp_near_zero(const GtspTail& t, double u, int sign, double delta) {
  cd sum = 0;
  cd iu_pow = cd(0, u);
  double fact = 1;
  for (int k = 2; k <= 16; ++k) {
    iu_pow *= cd(0, u);
    fact *= k;
    const cd ck = (iu_pow - cd(0, u)) / fact * std::pow(double(sign), k);
    const double s = k - t.alpha;
    sum += ck * boost::math::tgamma_lower(s, t.nu * delta) / std::pow(t.nu, s);
  }
  return t.lambda * sum;
}

cd levy_integral(const std::function<double(double)>& density, double u) {
  return levy_integral_half(density, u, 1) + levy_integral_half(density, u, -1);
}

void check_close(cd a, cd b, double rel) {
  CHECK(std::abs(a - b) <= rel * std::max(1e-12, std::abs(b)));
}

}  // namespace

TEST_SUITE("levy_models") {

TEST_CASE("Merton kappa") {
  CHECK(merton_kappa({1.0, 0.3, 0.1}) == doctest::Approx(std::exp(0.305) - 1).epsilon(1e-14));
  CHECK(merton_kappa({1.0, 0.3, 0.1}) == doctest::Approx(0.356625).epsilon(1e-6));
  CHECK(std::abs(merton_kappa({1.0, 0.0, 1e-9})) < 1e-15);
  CHECK(std::abs(merton_kappa({1.0, -0.02, 0.2})) < 1e-15);
}

TEST_CASE("Kou mu0") {
  CHECK(kou_mu0({0.1, 0.3445, 3.0465, 3.0775}) ==
        doctest::Approx(0.3445 / 2.0465 - 0.6555 / 4.0775).epsilon(1e-14));
  CHECK(kou_mu0({0.1, 0.3445, 3.0465, 3.0775}) == doctest::Approx(0.007584).epsilon(1e-3));
  CHECK(kou_mu0({0.1, 1.0, 2.0, 3.0}) == doctest::Approx(1.0));
  const double t1 = 3, t2 = 4;
  CHECK(std::abs(kou_mu0({0.1, (t1 - 1) / (t1 + t2), t1, t2})) < 1e-15);
  CHECK_THROWS_AS(kou_mu0({0.1, 0.5, 1.0, 2.0}), ValidationError);
}

TEST_CASE("GTSP drift coefficients") {
  const GtspTail t{10, 2, -0.5};
  CHECK(gtsp_drift_coefficient(t, Side::right) ==
        doctest::Approx(10 * std::tgamma(0.5) * (std::pow(2, -0.5) - 1)).epsilon(1e-13));
  const GtspTail z{1, 2, 0.0};
  CHECK(gtsp_drift_coefficient(z, Side::right) == doctest::Approx(std::log(0.5)).epsilon(1e-13));
  CHECK(gtsp_drift_coefficient(z, Side::left) == doctest::Approx(std::log(1.5)).epsilon(1e-13));
  CHECK_THROWS_AS(gtsp_drift_coefficient({1, 1.0, 1.0}, Side::right), ValidationError);
  CHECK_THROWS_AS(gamma_neg(2.0), ValidationError);
}

TEST_CASE("alpha regimes") {
  CHECK(alpha_regime(-0.5) == AlphaRegime::negative);
  CHECK(alpha_regime(1e-10) == AlphaRegime::zero);
  CHECK(alpha_regime(0.9) == AlphaRegime::between01);
  CHECK(alpha_regime(1.0 - 1e-10) == AlphaRegime::one);
  CHECK(alpha_regime(1.98) == AlphaRegime::between12);
}

TEST_CASE("validation reports every violated constraint") {
  CHECK_THROWS_AS(validate(LevyJumpModel{KouParams{0.1, 0.5, 0.9, 2}}), ValidationError);
  const auto errs = validation_errors(LevyJumpModel{KouParams{-1, 1.5, 0.9, -2}});
  CHECK(errs.size() >= 4);
  GtspParams g;
  g.right = {1, 1.0, 0.5};
  g.left = {1, 2, 0.5};
  CHECK_THROWS_AS(validate(LevyJumpModel{g}), ValidationError);
  CHECK_NOTHROW(validate(LevyJumpModel{KouParams{0.1, 0.3445, 3.0465, 3.0775}}));
  CHECK_THROWS_AS(validate(DiffusionParams{0.05, 0, 0}), ValidationError);
}

TEST_CASE("phi(0) = 0 and compensator identity") {
  const std::vector<LevyJumpModel> models = {
      MertonParams{5, 0.3, 0.1}, KouParams{0.1, 0.3445, 3.0465, 3.0775},
      GtspParams{{10, 2, -0.5}, {3, 1.5, 0.4}, 5}, GtspParams{{1, 2, 1.0}, {1, 2, 1.5}, 5},
      GtspParams{{0.33, 1.5098, 0.0}, {0.33, 2.7598, 0.0}, 5}};
  for (const auto& m : models) {
    CHECK(characteristic_exponent(m, 0.0) == cd(0, 0));
  }
  // grad -> 1, i.e. u = -i
  CHECK(std::abs(characteristic_exponent(models[0], cd(0, -1))) < 1e-10);
  CHECK(std::abs(characteristic_exponent(models[1], cd(0, -1))) < 1e-10);
}

TEST_CASE("closed forms match quadrature of the Levy integral") {
  const MertonParams mp{5, 0.3, 0.1};
  auto merton_density = [&](double y) {
    const double z = (y - mp.mu_j) / mp.sigma_j;
    return mp.lambda * std::exp(-0.5 * z * z) / (mp.sigma_j * std::sqrt(2 * M_PI));
  };
  const KouParams kp{0.1, 0.3445, 3.0465, 3.0775};
  auto kou_density = [&](double y) {
    return kp.lambda * (y > 0 ? kp.p * kp.theta1 * std::exp(-kp.theta1 * y)
                              : (1 - kp.p) * kp.theta2 * std::exp(kp.theta2 * y));
  };
  for (double u : {0.5, 1.0, 5.0}) {
    CAPTURE(u);
    check_close(characteristic_exponent(LevyJumpModel{mp}, u), levy_integral(merton_density, u), 1e-7);
    check_close(characteristic_exponent(LevyJumpModel{kp}, u), levy_integral(kou_density, u), 1e-7);
  }
}

TEST_CASE("GTSP closed forms match quadrature for every alpha regime") {
  for (double alpha : {-0.5, 0.0, 0.4, 0.9, 1.0, 1.5, 1.98}) {
    for (Side side : {Side::right, Side::left}) {
      const GtspTail t{0.7, 2.0, alpha};
      auto density = [&](double y) {
        const double a = std::abs(y);
        return t.lambda * std::exp(-t.nu * a) / std::pow(a, 1 + alpha);
      };
      const int sign = side == Side::right ? 1 : -1;
      for (double u : {0.5, 1.0, 5.0}) {
        CAPTURE(alpha);
        CAPTURE(u);
        CAPTURE(sign);
        const double tol = 1e-7;
        const double delta = 1e-2;
        check_close(characteristic_exponent(t, side, u),
                    levy_integral_half(density, u, sign, delta) + gtsp_near_zero(t, u, sign, delta),
                    tol);
      }
    }
  }
}

TEST_CASE("compensator drift of each model") {
  CHECK(compensator_drift(LevyJumpModel{NoJumps{}}) == 0.0);
  CHECK(compensator_drift(LevyJumpModel{MertonParams{5, 0.3, 0.1}}) ==
        doctest::Approx(-5 * merton_kappa({5, 0.3, 0.1})));
  const KouParams k{0.1, 0.3445, 3.0465, 3.0775};
  CHECK(compensator_drift(LevyJumpModel{k}) == doctest::Approx(-0.1 * kou_mu0(k)));
}

}
