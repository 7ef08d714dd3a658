#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "levysplit/banded.hpp"
#include "levysplit/grid.hpp"

namespace levysplit {

enum class StencilKind {
  forward1,   // A^F
  backward1,  // A^B
  forward2,   // A^F_2
  backward2,  // A^B_2
  central1,   // A^C
  central2,   // A^C_2, second derivative
};

std::string to_string(StencilKind kind);

// Derivative matrix on a grid. Stencil entries that would fall outside the
// grid are dropped; the rows where that happens are listed in boundary_rows.
struct DiscreteOperator {
  BandedMatrix matrix;
  StencilKind kind = StencilKind::forward1;
  int order = 1;
  std::uint64_t grid_id = 0;
  std::vector<std::size_t> boundary_rows;

  std::size_t size() const { return matrix.size(); }
  Eigen::MatrixXd dense() const { return matrix.dense(); }
  Eigen::VectorXd apply(const Eigen::VectorXd& v) const { return matrix.apply(v); }
};

DiscreteOperator make_operator(StencilKind kind, const Grid& grid);

inline DiscreteOperator forward1(const Grid& g) { return make_operator(StencilKind::forward1, g); }
inline DiscreteOperator backward1(const Grid& g) { return make_operator(StencilKind::backward1, g); }
inline DiscreteOperator forward2(const Grid& g) { return make_operator(StencilKind::forward2, g); }
inline DiscreteOperator backward2(const Grid& g) { return make_operator(StencilKind::backward2, g); }
inline DiscreteOperator central1(const Grid& g) { return make_operator(StencilKind::central1, g); }
inline DiscreteOperator central2(const Grid& g) { return make_operator(StencilKind::central2, g); }

}  // namespace levysplit
