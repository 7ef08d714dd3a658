#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace levysplit {

// Square band matrix with `lower` sub- and `upper` super-diagonals.
class BandedMatrix {
 public:
  BandedMatrix() = default;
  BandedMatrix(std::size_t n, int lower, int upper);

  std::size_t size() const { return n_; }
  int lower() const { return lower_; }
  int upper() const { return upper_; }

  bool in_band(std::size_t i, std::size_t j) const;
  // Entry (i, j); zero outside the band.
  double operator()(std::size_t i, std::size_t j) const;
  // Mutable entry; (i, j) must lie in the band.
  double& at(std::size_t i, std::size_t j);

  Eigen::VectorXd apply(const Eigen::VectorXd& v) const;
  Eigen::MatrixXd dense() const;

  BandedMatrix operator*(const BandedMatrix& other) const;
  BandedMatrix operator+(const BandedMatrix& other) const;
  BandedMatrix operator*(double s) const;
  // this + s*I
  BandedMatrix shifted(double s) const;

  bool is_upper_triangular() const { return lower_ == 0; }
  bool is_lower_triangular() const { return upper_ == 0; }
  // Solve this * x = b; requires a triangular band.
  Eigen::VectorXd solve_triangular(const Eigen::VectorXd& b) const;

 private:
  std::size_t index(std::size_t i, std::size_t j) const {
    return i * static_cast<std::size_t>(lower_ + upper_ + 1) +
           static_cast<std::size_t>(static_cast<long>(j) - static_cast<long>(i) + lower_);
  }

  std::size_t n_ = 0;
  int lower_ = 0;
  int upper_ = 0;
  std::vector<double> data_;
};

}  // namespace levysplit
