#pragma once

#include <complex>
#include <functional>

#include "levysplit/levy_models.hpp"

namespace levysplit {

enum class PayoffKind { call, put, digital };  // digital: cash-or-nothing call

double normal_cdf(double x);

double black_scholes(double s, double k, double r, double q, double sigma, double t,
                     PayoffKind kind = PayoffKind::call);

// Poisson mixture of Black-Scholes prices.
double merton_series(double s, double k, double t, const DiffusionParams& d,
                     const MertonParams& m, PayoffKind kind = PayoffKind::call,
                     double tol = 1e-15, int max_terms = 400);

struct FftConfig {
  double damping = 1.25;
  int n = 8192;
  double eta = 0.25;
};

// Characteristic function of ln S_T.
using LogPriceCf = std::function<std::complex<double>(std::complex<double>)>;

LogPriceCf levy_log_price_cf(const LevyJumpModel& m, const DiffusionParams& d, double s0,
                             double t);

// Damped-call transform priced by FFT with Simpson weights; the price at
// ln K is interpolated from the four surrounding log-strikes.
double carr_madan_call(const LogPriceCf& cf, double s0, double k, double r, double t,
                       const FftConfig& cfg = {});

// Rejects a damping whose moment E[S_T^{1 + damping}] is infinite.
double carr_madan_call(const LevyJumpModel& m, const DiffusionParams& d, double s0, double k,
                       double t, const FftConfig& cfg = {});

}  // namespace levysplit
