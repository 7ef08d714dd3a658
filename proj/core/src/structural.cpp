#include "levysplit/structural.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "levysplit/errors.hpp"
#include "levysplit/matrix_functions.hpp"

namespace levysplit {

using Eigen::Index;
using Eigen::MatrixXd;

double max_real_eigenvalue(const MatrixXd& m) {
  if (m.rows() == 0) return 0.0;
  if (triangle_of(m) != Triangle::none) return m.diagonal().maxCoeff();
  Eigen::EigenSolver<MatrixXd> es(m, false);
  if (es.info() != Eigen::Success) throw NumericalError("eigenvalue computation failed");
  return es.eigenvalues().real().maxCoeff();
}

double spectral_norm(const MatrixXd& m) {
  if (m.rows() == 0) return 0.0;
  Eigen::BDCSVD<MatrixXd> svd(m);
  return svd.singularValues()(0);
}

StructuralReport structural_checks(const MatrixXd& m, const StructuralOptions& opt) {
  if (m.rows() != m.cols()) throw ValidationError("structural checks need a square matrix");
  const Index n = m.rows();
  std::vector<bool> skip(static_cast<std::size_t>(n), false);
  for (std::size_t r : opt.excluded_rows)
    if (r < static_cast<std::size_t>(n)) skip[r] = true;

  StructuralReport rep;
  double min_off = std::numeric_limits<double>::infinity();
  double max_diag = -std::numeric_limits<double>::infinity();
  for (Index i = 0; i < n; ++i) {
    if (skip[static_cast<std::size_t>(i)]) continue;
    for (Index j = 0; j < n; ++j) {
      if (i == j) max_diag = std::max(max_diag, m(i, i));
      else min_off = std::min(min_off, m(i, j));
    }
  }
  if (!std::isfinite(min_off)) min_off = 0.0;
  rep.min_offdiag = min_off;
  rep.is_metzler = min_off >= -opt.entry_tol;
  rep.max_real_eig = max_real_eigenvalue(m);
  rep.is_negated_m_matrix =
      rep.is_metzler && max_diag <= opt.entry_tol && rep.max_real_eig <= opt.eig_tol;
  if (opt.exp_dt) {
    MatrixXd e = matrix_exponential(m, *opt.exp_dt);
    rep.spectral_norm_exp = spectral_norm(e);
    rep.min_exp_entry = e.minCoeff();
  }
  return rep;
}

EventualNonnegativity eventual_nonnegativity_probe(const MatrixXd& a, double b, int k_max,
                                                   double tol) {
  const Index n = a.rows();
  if (a.cols() != n) throw ValidationError("probe needs a square matrix");
  if (k_max < 0) k_max = static_cast<int>(n) + 3;
  MatrixXd p = a + b * MatrixXd::Identity(n, n);
  MatrixXd pk = MatrixXd::Identity(n, n);
  EventualNonnegativity out;
  out.k_max = k_max;
  int first_ok = -1;
  for (int k = 1; k <= k_max; ++k) {
    pk = pk * p;
    const double scale = pk.cwiseAbs().maxCoeff();
    if (scale == 0.0 || !std::isfinite(scale)) {
      if (first_ok < 0) first_ok = k;
      continue;
    }
    pk /= scale;
    const bool ok = pk.minCoeff() >= -tol;
    if (ok && first_ok < 0) first_ok = k;
    if (!ok) first_ok = -1;
  }
  out.eventually_nonnegative = first_ok > 0;
  out.power_index = first_ok;
  return out;
}

}  // namespace levysplit
