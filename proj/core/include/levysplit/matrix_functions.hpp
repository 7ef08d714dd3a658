#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

namespace levysplit {

enum class Triangle { upper, lower, none };

// Exact-zero test of the strict lower/upper part.
Triangle triangle_of(const Eigen::MatrixXd& m);

struct ExpmInfo {
  int squarings = 0;
  int pade_degree = 0;
};

// exp(t*A) by scaling and squaring with a diagonal Pade approximant of
// degree 3..13. Throws OverflowError if the result is not finite.
Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& a, double t = 1.0,
                                   ExpmInfo* info = nullptr);

// exp(t*A) v without forming A: truncated Taylor series over substeps
// with ||t*A/s||_1 <= 1. `norm1` is an upper bound for ||A||_1.
using LinearMap = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
Eigen::VectorXd exp_action(const LinearMap& a, double norm1, const Eigen::VectorXd& v,
                           double t = 1.0, double tol = 1e-15);

// Coefficients c_0..c_{n-1} of p(z)^alpha and log p(z), p given by its
// coefficients p_0..p_b with p_0 > 0.
std::vector<double> power_series_coefficients(const std::vector<double>& p, double alpha,
                                              std::size_t n);
std::vector<double> log_series_coefficients(const std::vector<double>& p, std::size_t n);

// If m is banded triangular Toeplitz, returns its generating polynomial
// (upper: p_k = m(i, i+k); lower: p_k = m(i+k, i)).
bool toeplitz_band(const Eigen::MatrixXd& m, Triangle tri, std::vector<double>& p);

// M^alpha for triangular M with positive diagonal. Banded Toeplitz input
// is evaluated exactly from the terminating series in the strictly
// triangular part; other input goes through exp(alpha * log M).
Eigen::MatrixXd fractional_power_triangular(const Eigen::MatrixXd& m, double alpha);

// Principal log of a triangular matrix with positive diagonal.
Eigen::MatrixXd matrix_log_triangular(const Eigen::MatrixXd& m);

// The general (non-Toeplitz) paths, exposed for cross-checks.
Eigen::MatrixXd sqrt_triangular(const Eigen::MatrixXd& upper);
Eigen::MatrixXd log_triangular_iss(const Eigen::MatrixXd& upper);
Eigen::MatrixXd power_triangular_iss(const Eigen::MatrixXd& upper, double alpha);

// Text dump: first line "<rows> rows <cols> cols", then one row per line.
void write_matrix_text(const Eigen::MatrixXd& m, std::ostream& os);
Eigen::MatrixXd read_matrix_text(std::istream& is);

}  // namespace levysplit
