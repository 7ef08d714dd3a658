#include "levysplit/fd_operators.hpp"

#include "levysplit/errors.hpp"

namespace levysplit {

std::string to_string(StencilKind kind) {
  switch (kind) {
    case StencilKind::forward1: return "forward1";
    case StencilKind::backward1: return "backward1";
    case StencilKind::forward2: return "forward2";
    case StencilKind::backward2: return "backward2";
    case StencilKind::central1: return "central1";
    case StencilKind::central2: return "central2";
  }
  return "unknown";
}

namespace {

// Step to the right of node i; past the end, repeat the last step.
double right_step(const Grid& g, std::size_t i) {
  return i + 1 < g.size() ? g.step(i) : g.step(g.size() - 2);
}

double left_step(const Grid& g, std::size_t i) {
  return i > 0 ? g.step(i - 1) : g.step(0);
}

void put(BandedMatrix& m, std::size_t i, long j, double v) {
  if (j < 0 || static_cast<std::size_t>(j) >= m.size()) return;
  m.at(i, static_cast<std::size_t>(j)) = v;
}

}  // namespace

DiscreteOperator make_operator(StencilKind kind, const Grid& g) {
  const std::size_t n = g.size();
  if (n < 3) throw ValidationError("grid too small for derivative stencils");
  DiscreteOperator op;
  op.kind = kind;
  op.grid_id = g.id();

  switch (kind) {
    case StencilKind::forward1: {
      op.order = 1;
      op.matrix = BandedMatrix(n, 0, 1);
      for (std::size_t i = 0; i < n; ++i) {
        double h = right_step(g, i);
        put(op.matrix, i, static_cast<long>(i), -1.0 / h);
        put(op.matrix, i, static_cast<long>(i) + 1, 1.0 / h);
      }
      op.boundary_rows = {n - 1};
      break;
    }
    case StencilKind::backward1: {
      op.order = 1;
      op.matrix = BandedMatrix(n, 1, 0);
      for (std::size_t i = 0; i < n; ++i) {
        double h = left_step(g, i);
        put(op.matrix, i, static_cast<long>(i), 1.0 / h);
        put(op.matrix, i, static_cast<long>(i) - 1, -1.0 / h);
      }
      op.boundary_rows = {0};
      break;
    }
    case StencilKind::forward2: {
      op.order = 2;
      op.matrix = BandedMatrix(n, 0, 2);
      for (std::size_t i = 0; i < n; ++i) {
        double h1 = right_step(g, i);
        double h2 = i + 2 < n ? g.step(i + 1) : h1;
        long ii = static_cast<long>(i);
        put(op.matrix, i, ii, -(2 * h1 + h2) / (h1 * (h1 + h2)));
        put(op.matrix, i, ii + 1, (h1 + h2) / (h1 * h2));
        put(op.matrix, i, ii + 2, -h1 / (h2 * (h1 + h2)));
      }
      op.boundary_rows = {n - 2, n - 1};
      break;
    }
    case StencilKind::backward2: {
      op.order = 2;
      op.matrix = BandedMatrix(n, 2, 0);
      for (std::size_t i = 0; i < n; ++i) {
        double h1 = left_step(g, i);
        double h2 = i >= 2 ? g.step(i - 2) : h1;
        long ii = static_cast<long>(i);
        put(op.matrix, i, ii, (2 * h1 + h2) / (h1 * (h1 + h2)));
        put(op.matrix, i, ii - 1, -(h1 + h2) / (h1 * h2));
        put(op.matrix, i, ii - 2, h1 / (h2 * (h1 + h2)));
      }
      op.boundary_rows = {0, 1};
      break;
    }
    case StencilKind::central1: {
      op.order = 2;
      op.matrix = BandedMatrix(n, 1, 1);
      for (std::size_t i = 0; i < n; ++i) {
        double hl = i > 0 ? g.step(i - 1) : right_step(g, i);
        double hr = i + 1 < n ? g.step(i) : hl;
        long ii = static_cast<long>(i);
        put(op.matrix, i, ii - 1, -hr / (hl * (hl + hr)));
        put(op.matrix, i, ii, (hr - hl) / (hl * hr));
        put(op.matrix, i, ii + 1, hl / (hr * (hl + hr)));
      }
      op.boundary_rows = {0, n - 1};
      break;
    }
    case StencilKind::central2: {
      op.order = 2;
      op.matrix = BandedMatrix(n, 1, 1);
      for (std::size_t i = 0; i < n; ++i) {
        double hl = i > 0 ? g.step(i - 1) : right_step(g, i);
        double hr = i + 1 < n ? g.step(i) : hl;
        long ii = static_cast<long>(i);
        double w = 2.0 / (hl + hr);
        put(op.matrix, i, ii - 1, w / hl);
        put(op.matrix, i, ii, -w * (1.0 / hl + 1.0 / hr));
        put(op.matrix, i, ii + 1, w / hr);
      }
      op.boundary_rows = {0, n - 1};
      break;
    }
  }
  return op;
}

}  // namespace levysplit
