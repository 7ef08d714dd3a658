#include "levysplit/banded.hpp"

#include <algorithm>
#include <cmath>

#include "levysplit/errors.hpp"

namespace levysplit {

BandedMatrix::BandedMatrix(std::size_t n, int lower, int upper)
    : n_(n), lower_(lower), upper_(upper),
      data_(n * static_cast<std::size_t>(lower + upper + 1), 0.0) {
  if (lower < 0 || upper < 0) throw ValidationError("negative bandwidth");
}

bool BandedMatrix::in_band(std::size_t i, std::size_t j) const {
  long d = static_cast<long>(j) - static_cast<long>(i);
  return i < n_ && j < n_ && d >= -lower_ && d <= upper_;
}

double BandedMatrix::operator()(std::size_t i, std::size_t j) const {
  return in_band(i, j) ? data_[index(i, j)] : 0.0;
}

double& BandedMatrix::at(std::size_t i, std::size_t j) {
  if (!in_band(i, j)) throw ValidationError("band matrix entry outside band");
  return data_[index(i, j)];
}

Eigen::VectorXd BandedMatrix::apply(const Eigen::VectorXd& v) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_));
  for (std::size_t i = 0; i < n_; ++i) {
    std::size_t j0 = i >= static_cast<std::size_t>(lower_) ? i - lower_ : 0;
    std::size_t j1 = std::min(n_ - 1, i + upper_);
    double s = 0.0;
    for (std::size_t j = j0; j <= j1; ++j) s += data_[index(i, j)] * v[j];
    out[i] = s;
  }
  return out;
}

Eigen::MatrixXd BandedMatrix::dense() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_),
                                            static_cast<Eigen::Index>(n_));
  for (std::size_t i = 0; i < n_; ++i) {
    std::size_t j0 = i >= static_cast<std::size_t>(lower_) ? i - lower_ : 0;
    std::size_t j1 = std::min(n_ - 1, i + upper_);
    for (std::size_t j = j0; j <= j1; ++j) m(i, j) = data_[index(i, j)];
  }
  return m;
}

BandedMatrix BandedMatrix::operator*(const BandedMatrix& o) const {
  if (o.n_ != n_) throw ValidationError("band matrix size mismatch");
  BandedMatrix r(n_, lower_ + o.lower_, upper_ + o.upper_);
  for (std::size_t i = 0; i < n_; ++i) {
    std::size_t k0 = i >= static_cast<std::size_t>(lower_) ? i - lower_ : 0;
    std::size_t k1 = std::min(n_ - 1, i + upper_);
    for (std::size_t k = k0; k <= k1; ++k) {
      double a = data_[index(i, k)];
      if (a == 0.0) continue;
      std::size_t j0 = k >= static_cast<std::size_t>(o.lower_) ? k - o.lower_ : 0;
      std::size_t j1 = std::min(n_ - 1, k + o.upper_);
      for (std::size_t j = j0; j <= j1; ++j) r.data_[r.index(i, j)] += a * o.data_[o.index(k, j)];
    }
  }
  return r;
}

BandedMatrix BandedMatrix::operator+(const BandedMatrix& o) const {
  if (o.n_ != n_) throw ValidationError("band matrix size mismatch");
  BandedMatrix r(n_, std::max(lower_, o.lower_), std::max(upper_, o.upper_));
  for (std::size_t i = 0; i < n_; ++i) {
    std::size_t j0 = i >= static_cast<std::size_t>(r.lower_) ? i - r.lower_ : 0;
    std::size_t j1 = std::min(n_ - 1, i + r.upper_);
    for (std::size_t j = j0; j <= j1; ++j) r.data_[r.index(i, j)] = (*this)(i, j) + o(i, j);
  }
  return r;
}

BandedMatrix BandedMatrix::operator*(double s) const {
  BandedMatrix r = *this;
  for (double& v : r.data_) v *= s;
  return r;
}

BandedMatrix BandedMatrix::shifted(double s) const {
  BandedMatrix r = *this;
  for (std::size_t i = 0; i < n_; ++i) r.data_[r.index(i, i)] += s;
  return r;
}

Eigen::VectorXd BandedMatrix::solve_triangular(const Eigen::VectorXd& b) const {
  if (static_cast<std::size_t>(b.size()) != n_) throw ValidationError("rhs size mismatch");
  Eigen::VectorXd x(b.size());
  if (lower_ == 0) {
    for (std::size_t ii = n_; ii-- > 0;) {
      double s = b[ii];
      std::size_t j1 = std::min(n_ - 1, ii + upper_);
      for (std::size_t j = ii + 1; j <= j1; ++j) s -= data_[index(ii, j)] * x[j];
      x[ii] = s / data_[index(ii, ii)];
    }
  } else if (upper_ == 0) {
    for (std::size_t i = 0; i < n_; ++i) {
      double s = b[i];
      std::size_t j0 = i >= static_cast<std::size_t>(lower_) ? i - lower_ : 0;
      for (std::size_t j = j0; j < i; ++j) s -= data_[index(i, j)] * x[j];
      x[i] = s / data_[index(i, i)];
    }
  } else {
    throw ValidationError("triangular solve on a non-triangular band");
  }
  return x;
}

}  // namespace levysplit
