#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace levysplit {

struct StructuralOptions {
  double entry_tol = 1e-10;
  double eig_tol = 1e-8;
  // Rows left out of the off-diagonal and diagonal sign tests.
  std::vector<std::size_t> excluded_rows;
  // If set, also report the spectral norm of exp(dt * M).
  std::optional<double> exp_dt;
};

struct StructuralReport {
  bool is_metzler = false;
  bool is_negated_m_matrix = false;
  double max_real_eig = 0.0;
  double min_offdiag = 0.0;  // most negative off-diagonal entry tested
  std::optional<double> spectral_norm_exp;
  std::optional<double> min_exp_entry;
};

StructuralReport structural_checks(const Eigen::MatrixXd& m, const StructuralOptions& opt = {});

double max_real_eigenvalue(const Eigen::MatrixXd& m);
double spectral_norm(const Eigen::MatrixXd& m);

struct EventualNonnegativity {
  bool eventually_nonnegative = false;
  // Smallest k such that (A + bI)^j >= -tol * max|entry| for all k <= j <= k_max.
  int power_index = -1;
  int k_max = 0;
};

// Checks powers of A + bI up to k_max (default N + 3).
EventualNonnegativity eventual_nonnegativity_probe(const Eigen::MatrixXd& a, double b,
                                                   int k_max = -1, double tol = 1e-10);

}  // namespace levysplit
