#pragma once

#include <complex>
#include <string>
#include <variant>
#include <vector>

namespace levysplit {

struct DiffusionParams {
  double r = 0.0;
  double q = 0.0;
  double sigma = 0.2;
};

struct MertonParams {
  double lambda = 0.0;
  double mu_j = 0.0;
  double sigma_j = 0.1;
};

struct KouParams {
  double lambda = 0.0;
  double p = 0.5;
  double theta1 = 2.0;  // up-tail decay
  double theta2 = 2.0;  // down-tail decay
};

enum class Side { right, left };

// One tail of a generalized tempered stable measure:
// lambda * exp(-nu |y|) / |y|^(1 + alpha) on y > 0 (right) or y < 0 (left).
struct GtspTail {
  double lambda = 0.0;
  double nu = 2.0;
  double alpha = 0.5;
};

struct GtspParams {
  GtspTail right;
  GtspTail left;
  double kappa_dump = 5.0;  // alpha = 1 damping constant
};

struct NoJumps {};

using LevyJumpModel = std::variant<NoJumps, MertonParams, KouParams, GtspParams>;

std::string model_name(const LevyJumpModel& m);

// Every violated constraint, empty when valid.
std::vector<std::string> validation_errors(const LevyJumpModel& m);
std::vector<std::string> validation_errors(const DiffusionParams& d);
// Throws ValidationError listing all violations.
void validate(const LevyJumpModel& m);
void validate(const DiffusionParams& d);

// E[e^Y] - 1 for the lognormal jump size.
double merton_kappa(const MertonParams& p);
// E[e^Y] - 1 for the double-exponential jump size.
double kou_mu0(const KouParams& p);

// Alpha values within this distance of 0 or 1 use the special-case forms.
inline constexpr double kIntegerAlphaTol = 1e-8;

enum class AlphaRegime { negative, zero, between01, one, between12 };
AlphaRegime alpha_regime(double alpha);
std::string to_string(AlphaRegime r);

// Gamma(-alpha); rejects alpha in the exclusion zone around 0 and 1.
double gamma_neg(double alpha);

// Coefficient of the first derivative in the tail operator, i.e. the drift
// term that the time stepping moves into the diffusion step (before any
// alpha = 1 damping borrow).
double gtsp_drift_coefficient(const GtspTail& tail, Side side);

// alpha = 1 constants c such that the tail operator carries c * d/dx:
// right (1 - nu) log(nu - 1) + nu log(nu), left (nu + 1) log(nu + 1) - nu log(nu).
double gtsp_alpha1_constant(const GtspTail& tail, Side side);

// Characteristic exponent of the compensated jump part: the jump CF over
// time t is exp(t * phi(u)). Complex u supported where the transform exists.
std::complex<double> characteristic_exponent(const LevyJumpModel& m, std::complex<double> u);
std::complex<double> characteristic_exponent(const GtspTail& tail, Side side,
                                             std::complex<double> u);

// Total drift moved from the jump operator into the diffusion step
// (the coefficient of d/dx), before any discretization borrow.
double compensator_drift(const LevyJumpModel& m);

}  // namespace levysplit
