#include "levysplit/matrix_functions.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include "levysplit/errors.hpp"

namespace levysplit {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

Triangle triangle_of(const MatrixXd& m) {
  const Index n = m.rows();
  bool upper = true, lower = true;
  for (Index j = 0; j < n && (upper || lower); ++j) {
    for (Index i = 0; i < n; ++i) {
      if (i > j && m(i, j) != 0.0) upper = false;
      if (i < j && m(i, j) != 0.0) lower = false;
    }
  }
  if (upper) return Triangle::upper;
  if (lower) return Triangle::lower;
  return Triangle::none;
}

namespace {

constexpr double kTheta[] = {1.495585217958292e-2, 2.539398330063230e-1,
                             9.504178996162932e-1, 2.097847961257068e0,
                             5.371920351148152e0};
constexpr int kDegrees[] = {3, 5, 7, 9, 13};

const double* pade_coefficients(int m) {
  static const double c3[] = {120., 60., 12., 1.};
  static const double c5[] = {30240., 15120., 3360., 420., 30., 1.};
  static const double c7[] = {17297280., 8648640., 1995840., 277200., 25200., 1512., 56., 1.};
  static const double c9[] = {17643225600., 8821612800., 2075673600., 302702400., 30270240.,
                              2162160., 110880., 3960., 90., 1.};
  static const double c13[] = {64764752532480000., 32382376266240000., 7771770303897600.,
                               1187353796428800.,  129060195264000.,   10559470521600.,
                               670442572800.,      33522128640.,       1323241920.,
                               40840800.,          960960.,            16380.,
                               182.,               1.};
  switch (m) {
    case 3: return c3;
    case 5: return c5;
    case 7: return c7;
    case 9: return c9;
    default: return c13;
  }
}

MatrixXd pade_solve(const MatrixXd& u, const MatrixXd& v, Triangle tri) {
  MatrixXd p = v + u;
  MatrixXd q = v - u;
  if (tri == Triangle::upper) return q.triangularView<Eigen::Upper>().solve(p);
  if (tri == Triangle::lower) return q.triangularView<Eigen::Lower>().solve(p);
  return q.partialPivLu().solve(p);
}

bool all_finite(const MatrixXd& m) { return m.allFinite(); }

}  // namespace

MatrixXd matrix_exponential(const MatrixXd& a_in, double t, ExpmInfo* info) {
  if (a_in.rows() != a_in.cols()) throw ValidationError("matrix_exponential needs a square matrix");
  const Index n = a_in.rows();
  if (n == 0) return MatrixXd();
  MatrixXd a = a_in * t;
  if (!all_finite(a)) throw OverflowError("matrix_exponential: non-finite input", 0);
  const Triangle tri = triangle_of(a);
  const MatrixXd id = MatrixXd::Identity(n, n);
  const double norm = a.cwiseAbs().colwise().sum().maxCoeff();

  for (int k = 0; k < 4; ++k) {
    if (norm <= kTheta[k]) {
      const int m = kDegrees[k];
      const double* c = pade_coefficients(m);
      MatrixXd a2 = a * a;
      MatrixXd pw = id;
      MatrixXd usum = c[1] * id;
      MatrixXd vsum = c[0] * id;
      for (int j = 2; j <= m; j += 2) {
        pw = pw * a2;
        usum += c[j + 1] * pw;
        vsum += c[j] * pw;
      }
      MatrixXd u = a * usum;
      MatrixXd r = pade_solve(u, vsum, tri);
      if (info) *info = {0, m};
      if (!all_finite(r)) throw OverflowError("matrix_exponential: overflow", 0);
      return r;
    }
  }

  int s = std::max(0, static_cast<int>(std::ceil(std::log2(norm / kTheta[4]))));
  if (s > 1000) throw OverflowError("matrix_exponential: norm too large", s);
  a /= std::ldexp(1.0, s);
  const double* c = pade_coefficients(13);
  MatrixXd a2 = a * a;
  MatrixXd a4 = a2 * a2;
  MatrixXd a6 = a2 * a4;
  MatrixXd u = a * (a6 * (c[13] * a6 + c[11] * a4 + c[9] * a2) + c[7] * a6 + c[5] * a4 +
                    c[3] * a2 + c[1] * id);
  MatrixXd v = a6 * (c[12] * a6 + c[10] * a4 + c[8] * a2) + c[6] * a6 + c[4] * a4 +
               c[2] * a2 + c[0] * id;
  MatrixXd r = pade_solve(u, v, tri);
  for (int k = 0; k < s; ++k) {
    if (tri == Triangle::upper) {
      MatrixXd r2 = MatrixXd::Zero(n, n);
      r2.triangularView<Eigen::Upper>() = r.triangularView<Eigen::Upper>() * r;
      r = std::move(r2);
    } else {
      r = r * r;
    }
    if (!all_finite(r))
      throw OverflowError("matrix_exponential: overflow while squaring", k + 1);
  }
  if (!all_finite(r)) throw OverflowError("matrix_exponential: overflow", s);
  if (info) *info = {s, 13};
  return r;
}

VectorXd exp_action(const LinearMap& a, double norm1, const VectorXd& v, double t,
                    double tol) {
  const double scaled = std::abs(t) * norm1;
  if (!std::isfinite(scaled)) throw OverflowError("exp_action: non-finite norm", 0);
  const long steps = std::max(1L, static_cast<long>(std::ceil(scaled)));
  const double dt = t / static_cast<double>(steps);
  VectorXd x = v;
  for (long s = 0; s < steps; ++s) {
    VectorXd term = x;
    VectorXd sum = x;
    const double ref = x.cwiseAbs().maxCoeff();
    for (int k = 1; k <= 60; ++k) {
      term = a(term) * (dt / k);
      sum += term;
      if (term.cwiseAbs().maxCoeff() <= tol * std::max(ref, sum.cwiseAbs().maxCoeff())) break;
    }
    x = std::move(sum);
  }
  if (!x.allFinite()) throw OverflowError("exp_action: overflow", 0);
  return x;
}

std::vector<double> power_series_coefficients(const std::vector<double>& p, double alpha,
                                              std::size_t n) {
  if (p.empty() || !(p[0] > 0.0)) throw ValidationError("power series needs p_0 > 0");
  std::vector<double> c(n, 0.0);
  if (n == 0) return c;
  c[0] = std::pow(p[0], alpha);
  const std::size_t b = p.size() - 1;
  for (std::size_t k = 1; k < n; ++k) {
    double s = 0.0;
    for (std::size_t j = 1; j <= std::min(k, b); ++j)
      s += ((alpha + 1.0) * static_cast<double>(j) - static_cast<double>(k)) * p[j] * c[k - j];
    c[k] = s / (static_cast<double>(k) * p[0]);
  }
  return c;
}

std::vector<double> log_series_coefficients(const std::vector<double>& p, std::size_t n) {
  if (p.empty() || !(p[0] > 0.0)) throw ValidationError("log series needs p_0 > 0");
  std::vector<double> c(n, 0.0);
  if (n == 0) return c;
  c[0] = std::log(p[0]);
  const std::size_t b = p.size() - 1;
  for (std::size_t k = 1; k < n; ++k) {
    double s = k <= b ? static_cast<double>(k) * p[k] : 0.0;
    for (std::size_t j = 1; j <= std::min(k - 1, b); ++j)
      s -= static_cast<double>(k - j) * p[j] * c[k - j];
    c[k] = s / (static_cast<double>(k) * p[0]);
  }
  return c;
}

bool toeplitz_band(const MatrixXd& m, Triangle tri, std::vector<double>& p) {
  const Index n = m.rows();
  if (tri == Triangle::none || n == 0) return false;
  auto entry = [&](Index i, Index k) { return tri == Triangle::upper ? m(i, i + k) : m(i + k, i); };
  Index band = 0;
  for (Index k = 0; k < n; ++k)
    for (Index i = 0; i + k < n; ++i)
      if (entry(i, k) != 0.0) band = std::max(band, k);
  if (band > 8) return false;
  // Stencils built from node differences on a uniform grid vary in the last
  // few bits, so diagonals are compared against the largest band entry.
  double scale = 0.0;
  for (Index k = 0; k <= band; ++k) scale = std::max(scale, std::abs(entry(0, k)));
  const double tol = 1e-12 * std::max(1.0, scale);
  p.assign(static_cast<std::size_t>(band + 1), 0.0);
  for (Index k = 0; k <= band; ++k) {
    double sum = 0.0;
    for (Index i = 0; i + k < n; ++i) {
      if (std::abs(entry(i, k) - entry(0, k)) > tol) return false;
      sum += entry(i, k);
    }
    p[static_cast<std::size_t>(k)] = sum / static_cast<double>(n - k);
  }
  return true;
}

namespace {

MatrixXd toeplitz_from(const std::vector<double>& c, Index n, Triangle tri) {
  MatrixXd r = MatrixXd::Zero(n, n);
  for (Index k = 0; k < n; ++k) {
    for (Index i = 0; i + k < n; ++i) {
      if (tri == Triangle::upper) r(i, i + k) = c[static_cast<std::size_t>(k)];
      else r(i + k, i) = c[static_cast<std::size_t>(k)];
    }
  }
  return r;
}

void require_positive_diagonal(const MatrixXd& m) {
  for (Index i = 0; i < m.rows(); ++i) {
    if (!(m(i, i) > 0.0))
      throw ValidationError("triangular matrix function needs a positive diagonal (row " +
                            std::to_string(i) + ")");
  }
}

// Gauss-Legendre 7-point rule on [-1, 1].
constexpr double kGlX[] = {-0.9491079123427585245, -0.7415311855993944399, -0.4058451513773971669,
                           0.0,                    0.4058451513773971669,  0.7415311855993944399,
                           0.9491079123427585245};
constexpr double kGlW[] = {0.1294849661688696933, 0.2797053914892766679, 0.3818300505051189450,
                           0.4179591836734693878, 0.3818300505051189450, 0.2797053914892766679,
                           0.1294849661688696933};

}  // namespace

MatrixXd sqrt_triangular(const MatrixXd& t) {
  const Index n = t.rows();
  require_positive_diagonal(t);
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  RowMajor r = RowMajor::Zero(n, n);
  VectorXd col(n);
  for (Index j = 0; j < n; ++j) {
    r(j, j) = std::sqrt(t(j, j));
    col.setZero();
    col[j] = r(j, j);
    for (Index i = j - 1; i >= 0; --i) {
      const Index len = j - i - 1;
      double s = t(i, j);
      if (len > 0) s -= r.row(i).segment(i + 1, len).dot(col.segment(i + 1, len));
      col[i] = s / (r(i, i) + r(j, j));
    }
    for (Index i = 0; i < j; ++i) r(i, j) = col[i];
  }
  return MatrixXd(r);
}

MatrixXd log_triangular_iss(const MatrixXd& t) {
  const Index n = t.rows();
  require_positive_diagonal(t);
  const MatrixXd id = MatrixXd::Identity(n, n);
  MatrixXd r = t;
  int s = 0;
  for (;;) {
    const double norm = (r - id).cwiseAbs().colwise().sum().maxCoeff();
    if (norm <= 0.25) break;
    if (s >= 64) throw NumericalError("matrix log: square-root iteration did not converge");
    r = sqrt_triangular(r);
    ++s;
  }
  const MatrixXd x = r - id;
  MatrixXd l = MatrixXd::Zero(n, n);
  for (int k = 0; k < 7; ++k) {
    const double node = 0.5 * (kGlX[k] + 1.0);
    const double w = 0.5 * kGlW[k];
    MatrixXd y = id + node * x;
    l += w * y.triangularView<Eigen::Upper>().solve(x);
  }
  l *= std::ldexp(1.0, s);
  l.triangularView<Eigen::StrictlyLower>().setZero();
  for (Index i = 0; i < n; ++i) l(i, i) = std::log(t(i, i));
  return l;
}

MatrixXd power_triangular_iss(const MatrixXd& t, double alpha) {
  MatrixXd l = log_triangular_iss(t);
  MatrixXd r = matrix_exponential(l, alpha);
  r.triangularView<Eigen::StrictlyLower>().setZero();
  for (Index i = 0; i < t.rows(); ++i) r(i, i) = std::pow(t(i, i), alpha);
  return r;
}

MatrixXd fractional_power_triangular(const MatrixXd& m, double alpha) {
  if (m.rows() != m.cols()) throw ValidationError("fractional power needs a square matrix");
  const Triangle tri = triangle_of(m);
  if (tri == Triangle::none) throw ValidationError("fractional power needs a triangular matrix");
  require_positive_diagonal(m);
  std::vector<double> p;
  if (toeplitz_band(m, tri, p)) {
    return toeplitz_from(power_series_coefficients(p, alpha, static_cast<std::size_t>(m.rows())),
                         m.rows(), tri);
  }
  if (tri == Triangle::upper) return power_triangular_iss(m, alpha);
  return power_triangular_iss(m.transpose(), alpha).transpose();
}

MatrixXd matrix_log_triangular(const MatrixXd& m) {
  if (m.rows() != m.cols()) throw ValidationError("matrix log needs a square matrix");
  const Triangle tri = triangle_of(m);
  if (tri == Triangle::none) throw ValidationError("matrix log needs a triangular matrix");
  require_positive_diagonal(m);
  std::vector<double> p;
  if (toeplitz_band(m, tri, p)) {
    return toeplitz_from(log_series_coefficients(p, static_cast<std::size_t>(m.rows())),
                         m.rows(), tri);
  }
  if (tri == Triangle::upper) return log_triangular_iss(m);
  return log_triangular_iss(m.transpose()).transpose();
}

void write_matrix_text(const MatrixXd& m, std::ostream& os) {
  os << m.rows() << " rows " << m.cols() << " cols\n";
  const auto old = os.precision(17);
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) os << ' ';
      os << m(i, j);
    }
    os << '\n';
  }
  os.precision(old);
}

MatrixXd read_matrix_text(std::istream& is) {
  Index rows = 0, cols = 0;
  std::string w1, w2;
  if (!(is >> rows >> w1 >> cols >> w2) || w1 != "rows" || w2 != "cols" || rows < 0 || cols < 0)
    throw ValidationError("matrix text: bad header");
  MatrixXd m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j)
      if (!(is >> m(i, j))) throw ValidationError("matrix text: truncated data");
  return m;
}

}  // namespace levysplit
