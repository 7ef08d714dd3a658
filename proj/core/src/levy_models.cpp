#include "levysplit/levy_models.hpp"

#include <cmath>
#include <sstream>

#include "levysplit/errors.hpp"

namespace levysplit {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_tail(const GtspTail& t, Side side, std::vector<std::string>& errs) {
  const char* s = side == Side::right ? "R" : "L";
  if (!(t.lambda >= 0.0)) errs.push_back(std::string("lambda_") + s + " >= 0 required");
  if (t.lambda == 0.0) return;
  if (!(t.alpha < 2.0)) errs.push_back(std::string("alpha_") + s + " < 2 required");
  if (side == Side::right && !(t.nu > 1.0)) errs.push_back("nu_R > 1 required");
  if (side == Side::left && !(t.nu > 0.0)) errs.push_back("nu_L > 0 required");
}

}  // namespace

std::string model_name(const LevyJumpModel& m) {
  return std::visit(overloaded{[](const NoJumps&) { return std::string("none"); },
                               [](const MertonParams&) { return std::string("merton"); },
                               [](const KouParams&) { return std::string("kou"); },
                               [](const GtspParams&) { return std::string("gtsp"); }},
                    m);
}

std::vector<std::string> validation_errors(const LevyJumpModel& m) {
  std::vector<std::string> errs;
  std::visit(overloaded{[](const NoJumps&) {},
                        [&](const MertonParams& p) {
                          if (!(p.lambda >= 0.0)) errs.push_back("lambda >= 0 required");
                          if (!(p.sigma_j > 0.0)) errs.push_back("sigma_J > 0 required");
                          if (!std::isfinite(p.mu_j)) errs.push_back("mu_J must be finite");
                        },
                        [&](const KouParams& p) {
                          if (!(p.lambda >= 0.0)) errs.push_back("lambda >= 0 required");
                          if (!(p.theta1 > 1.0)) errs.push_back("theta1 > 1 required");
                          if (!(p.theta2 > 0.0)) errs.push_back("theta2 > 0 required");
                          if (!(p.p >= 0.0 && p.p <= 1.0)) errs.push_back("0 <= p <= 1 required");
                        },
                        [&](const GtspParams& p) {
                          check_tail(p.right, Side::right, errs);
                          check_tail(p.left, Side::left, errs);
                          if (!(p.kappa_dump > 0.0)) errs.push_back("kappa_dump > 0 required");
                        }},
             m);
  return errs;
}

std::vector<std::string> validation_errors(const DiffusionParams& d) {
  std::vector<std::string> errs;
  if (!(d.sigma > 0.0)) errs.push_back("sigma > 0 required");
  if (!std::isfinite(d.r)) errs.push_back("r must be finite");
  if (!std::isfinite(d.q)) errs.push_back("q must be finite");
  return errs;
}

namespace {
void throw_if(const std::vector<std::string>& errs) {
  if (errs.empty()) return;
  std::ostringstream os;
  for (std::size_t i = 0; i < errs.size(); ++i) os << (i ? "; " : "") << errs[i];
  throw ValidationError(os.str());
}
}  // namespace

void validate(const LevyJumpModel& m) { throw_if(validation_errors(m)); }
void validate(const DiffusionParams& d) { throw_if(validation_errors(d)); }

double merton_kappa(const MertonParams& p) {
  return std::expm1(p.mu_j + 0.5 * p.sigma_j * p.sigma_j);
}

double kou_mu0(const KouParams& p) {
  if (!(p.theta1 > 1.0)) throw ValidationError("theta1 > 1 required");
  return p.p / (p.theta1 - 1.0) - (1.0 - p.p) / (1.0 + p.theta2);
}

AlphaRegime alpha_regime(double a) {
  if (!(a < 2.0)) throw ValidationError("alpha < 2 required");
  if (std::abs(a) < kIntegerAlphaTol) return AlphaRegime::zero;
  if (std::abs(a - 1.0) < kIntegerAlphaTol) return AlphaRegime::one;
  if (a < 0.0) return AlphaRegime::negative;
  if (a < 1.0) return AlphaRegime::between01;
  return AlphaRegime::between12;
}

std::string to_string(AlphaRegime r) {
  switch (r) {
    case AlphaRegime::negative: return "alpha<0";
    case AlphaRegime::zero: return "alpha=0";
    case AlphaRegime::between01: return "0<alpha<1";
    case AlphaRegime::one: return "alpha=1";
    case AlphaRegime::between12: return "1<alpha<2";
  }
  return "unknown";
}

double gamma_neg(double a) {
  const AlphaRegime r = alpha_regime(a);
  if (r == AlphaRegime::zero || r == AlphaRegime::one)
    throw ValidationError("Gamma(-alpha) undefined at alpha = 0 or 1; use the special forms");
  return std::tgamma(-a);
}

double gtsp_alpha1_constant(const GtspTail& t, Side side) {
  const double nu = t.nu;
  if (side == Side::right) {
    if (!(nu > 1.0)) throw ValidationError("nu_R > 1 required");
    return (1.0 - nu) * std::log(nu - 1.0) + nu * std::log(nu);
  }
  if (!(nu > 0.0)) throw ValidationError("nu_L > 0 required");
  return (nu + 1.0) * std::log(nu + 1.0) - nu * std::log(nu);
}

double gtsp_drift_coefficient(const GtspTail& t, Side side) {
  if (t.lambda == 0.0) return 0.0;
  const double nu = t.nu;
  if (side == Side::right && !(nu > 1.0)) throw ValidationError("nu_R > 1 required");
  if (side == Side::left && !(nu > 0.0)) throw ValidationError("nu_L > 0 required");
  const double nb = side == Side::right ? nu - 1.0 : nu + 1.0;
  switch (alpha_regime(t.alpha)) {
    case AlphaRegime::zero: return t.lambda * std::log(nb / nu);
    case AlphaRegime::one:
      return side == Side::right ? t.lambda * gtsp_alpha1_constant(t, side)
                                 : -t.lambda * gtsp_alpha1_constant(t, side);
    default:
      return t.lambda * gamma_neg(t.alpha) * (std::pow(nu, t.alpha) - std::pow(nb, t.alpha));
  }
}

std::complex<double> characteristic_exponent(const GtspTail& t, Side side,
                                             std::complex<double> u) {
  using C = std::complex<double>;
  if (t.lambda == 0.0) return 0.0;
  const C iu = C(0.0, 1.0) * u;
  const C z = side == Side::right ? t.nu - iu : t.nu + iu;  // nu -/+ d/dx
  const double nu = t.nu;
  const double drift = gtsp_drift_coefficient(t, side);
  switch (alpha_regime(t.alpha)) {
    case AlphaRegime::zero:
      return t.lambda * (std::log(nu) - std::log(z)) + drift * iu;
    case AlphaRegime::one:
      return t.lambda * (z * std::log(z) - nu * std::log(nu)) + drift * iu;
    default:
      return t.lambda * gamma_neg(t.alpha) * (std::pow(z, t.alpha) - std::pow(nu, t.alpha)) +
             drift * iu;
  }
}

std::complex<double> characteristic_exponent(const LevyJumpModel& m, std::complex<double> u) {
  using C = std::complex<double>;
  const C iu = C(0.0, 1.0) * u;
  return std::visit(
      overloaded{[](const NoJumps&) { return C(0.0); },
                 [&](const MertonParams& p) {
                   const C jump = std::exp(iu * p.mu_j + 0.5 * p.sigma_j * p.sigma_j * iu * iu);
                   return p.lambda * (jump - 1.0 - iu * merton_kappa(p));
                 },
                 [&](const KouParams& p) {
                   const C up = p.p * p.theta1 / (p.theta1 - iu);
                   const C down = (1.0 - p.p) * p.theta2 / (p.theta2 + iu);
                   return p.lambda * (up + down - 1.0 - iu * kou_mu0(p));
                 },
                 [&](const GtspParams& p) {
                   return characteristic_exponent(p.right, Side::right, u) +
                          characteristic_exponent(p.left, Side::left, u);
                 }},
      m);
}

double compensator_drift(const LevyJumpModel& m) {
  return std::visit(overloaded{[](const NoJumps&) { return 0.0; },
                               [](const MertonParams& p) { return -p.lambda * merton_kappa(p); },
                               [](const KouParams& p) { return -p.lambda * kou_mu0(p); },
                               [](const GtspParams& p) {
                                 return gtsp_drift_coefficient(p.right, Side::right) +
                                        gtsp_drift_coefficient(p.left, Side::left);
                               }},
                    m);
}

}  // namespace levysplit
