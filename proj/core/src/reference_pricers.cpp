#include "levysplit/reference_pricers.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <vector>

#include <fftw3.h>

#include "levysplit/errors.hpp"

namespace levysplit {

namespace {
// FFTW planning is not thread-safe.
std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double black_scholes(double s, double k, double r, double q, double sigma, double t,
                     PayoffKind kind) {
  if (!(s > 0.0 && k > 0.0)) throw ValidationError("black_scholes needs S > 0 and K > 0");
  if (!(sigma > 0.0)) throw ValidationError("black_scholes needs sigma > 0");
  if (!(t > 0.0)) throw ValidationError("black_scholes needs T > 0");
  const double sd = sigma * std::sqrt(t);
  const double d1 = (std::log(s / k) + (r - q + 0.5 * sigma * sigma) * t) / sd;
  const double d2 = d1 - sd;
  const double df = std::exp(-r * t), fq = std::exp(-q * t);
  switch (kind) {
    case PayoffKind::call: return s * fq * normal_cdf(d1) - k * df * normal_cdf(d2);
    case PayoffKind::put: return k * df * normal_cdf(-d2) - s * fq * normal_cdf(-d1);
    case PayoffKind::digital: return df * normal_cdf(d2);
  }
  return 0.0;
}

double merton_series(double s, double k, double t, const DiffusionParams& d,
                     const MertonParams& m, PayoffKind kind, double tol, int max_terms) {
  validate(LevyJumpModel{m});
  validate(d);
  const double kappa = merton_kappa(m);
  const double lam = m.lambda * (1.0 + kappa);
  const double lt = lam * t;
  double sum = 0.0;
  double log_w = -lt;  // log Poisson weight
  for (int n = 0; n < max_terms; ++n) {
    if (n > 0) log_w += std::log(lt) - std::log(static_cast<double>(n));
    const double w = std::exp(log_w);
    const double rn = d.r - m.lambda * kappa + n * std::log1p(kappa) / t;
    const double sn = std::sqrt(d.sigma * d.sigma + n * m.sigma_j * m.sigma_j / t);
    const double term = w * black_scholes(s, k, rn, d.q, sn, t, kind);
    sum += term;
    if (n > lt && std::abs(term) < tol * std::max(1.0, std::abs(sum))) break;
    if (lt == 0.0) break;
  }
  return sum;
}

LogPriceCf levy_log_price_cf(const LevyJumpModel& m, const DiffusionParams& d, double s0,
                             double t) {
  return [m, d, s0, t](std::complex<double> u) {
    const std::complex<double> iu(-u.imag(), u.real());
    const double drift = d.r - d.q - 0.5 * d.sigma * d.sigma;
    const std::complex<double> e = iu * (std::log(s0) + drift * t) +
                                   0.5 * d.sigma * d.sigma * t * iu * iu +
                                   t * characteristic_exponent(m, u);
    return std::exp(e);
  };
}

double carr_madan_call(const LogPriceCf& cf, double s0, double k, double r, double t,
                       const FftConfig& cfg) {
  if (cfg.n < 8 || (cfg.n & (cfg.n - 1)) != 0) throw ValidationError("FFT size must be a power of 2");
  if (!(cfg.damping > 0.0 && cfg.eta > 0.0)) throw ValidationError("bad FFT configuration");
  const int n = cfg.n;
  const double a = cfg.damping, eta = cfg.eta;
  const double dk = 2.0 * std::numbers::pi / (n * eta);
  const double b = 0.5 * n * dk;
  const double k0 = std::log(s0) - b;
  const double df = std::exp(-r * t);

  fftw_complex* in = fftw_alloc_complex(static_cast<std::size_t>(n));
  fftw_complex* out = fftw_alloc_complex(static_cast<std::size_t>(n));
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    plan = fftw_plan_dft_1d(n, in, out, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  for (int j = 0; j < n; ++j) {
    const double v = j * eta;
    const std::complex<double> u(v, -(a + 1.0));
    const std::complex<double> denom(a * a + a - v * v, (2.0 * a + 1.0) * v);
    const std::complex<double> psi = df * cf(u) / denom;
    const double simpson = (3.0 + (j % 2 == 0 ? -1.0 : 1.0) - (j == 0 ? 1.0 : 0.0)) / 3.0;
    const std::complex<double> x = std::exp(std::complex<double>(0.0, -k0 * v)) * psi * eta * simpson;
    in[j][0] = x.real();
    in[j][1] = x.imag();
  }
  fftw_execute(plan);
  std::vector<double> price(static_cast<std::size_t>(n));
  for (int m = 0; m < n; ++m) {
    const double km = k0 + m * dk;
    price[static_cast<std::size_t>(m)] = std::exp(-a * km) / std::numbers::pi * out[m][0];
  }
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(in);
  fftw_free(out);

  const double lk = std::log(k);
  int i = static_cast<int>(std::floor((lk - k0) / dk));
  if (i < 1 || i + 2 >= n) throw ValidationError("strike outside the FFT log-strike range");
  double result = 0.0;
  for (int p = i - 1; p <= i + 2; ++p) {
    double w = 1.0;
    const double xp = k0 + p * dk;
    for (int q = i - 1; q <= i + 2; ++q) {
      if (q == p) continue;
      w *= (lk - (k0 + q * dk)) / (xp - (k0 + q * dk));
    }
    result += w * price[static_cast<std::size_t>(p)];
  }
  return result;
}

double carr_madan_call(const LevyJumpModel& m, const DiffusionParams& d, double s0, double k,
                       double t, const FftConfig& cfg) {
  validate(m);
  validate(d);
  // E[S_T^{1 + damping}] must be finite
  double moment_bound = INFINITY;
  if (const auto* kp = std::get_if<KouParams>(&m); kp && kp->lambda > 0 && kp->p > 0)
    moment_bound = kp->theta1;
  if (const auto* gp = std::get_if<GtspParams>(&m); gp && gp->right.lambda > 0)
    moment_bound = gp->right.nu;
  if (!(1.0 + cfg.damping < moment_bound))
    throw ValidationError("Carr-Madan damping " + std::to_string(cfg.damping) +
                          " needs exponential moment " + std::to_string(1.0 + cfg.damping) +
                          " but the upward jump tail decays at rate " +
                          std::to_string(moment_bound));
  return carr_madan_call(levy_log_price_cf(m, d, s0, t), s0, k, d.r, t, cfg);
}

}  // namespace levysplit
