#include "levysplit/jump_generator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include <nlohmann/json.hpp>

#include "levysplit/errors.hpp"
#include "levysplit/fd_operators.hpp"
#include "levysplit/matrix_functions.hpp"
#include "levysplit/structural.hpp"

namespace levysplit {

using Eigen::MatrixXd;
using Eigen::VectorXd;

std::string to_string(FastApply f) {
  switch (f) {
    case FastApply::none: return "none";
    case FastApply::merton_heat: return "merton-heat";
    case FastApply::kou_triangular: return "kou-triangular";
  }
  return "none";
}

std::string to_string(MertonMode m) {
  switch (m) {
    case MertonMode::matrix: return "matrix";
    case MertonMode::heat: return "heat";
    case MertonMode::gaussian: return "gaussian";
  }
  return "heat";
}

std::string RegimeDescriptor::to_json() const {
  nlohmann::json j{{"model", model}, {"stencils", stencils}, {"order", order}};
  if (!right.empty()) j["right"] = right;
  if (!left.empty()) j["left"] = left;
  if (kappa_dump > 0.0) j["kappa_dump"] = kappa_dump;
  return j.dump();
}

namespace {

VectorXd merton_exp_b(const MertonOperator& op, const VectorXd& v) {
  switch (op.mode) {
    case MertonMode::heat:
      return exp_action([&](const VectorXd& x) { return op.b.apply(x); }, op.b_norm1, v);
    case MertonMode::gaussian: {
      const auto& x = op.nodes;
      const std::size_t n = x.size();
      const double mu = op.params.mu_j, s = op.params.sigma_j;
      const double c = 1.0 / (s * std::sqrt(2.0 * std::numbers::pi));
      VectorXd w(static_cast<Eigen::Index>(n));
      for (std::size_t j = 0; j < n; ++j) {
        double left = j > 0 ? x[j] - x[j - 1] : 0.0;
        double right = j + 1 < n ? x[j + 1] - x[j] : 0.0;
        w[j] = 0.5 * (left + right);
      }
      VectorXd out(static_cast<Eigen::Index>(n));
      for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          const double z = (x[j] - x[i] - mu) / s;
          if (std::abs(z) > 40.0) continue;
          acc += w[j] * c * std::exp(-0.5 * z * z) * v[j];
        }
        out[i] = acc;
      }
      return out;
    }
    case MertonMode::matrix: break;
  }
  throw NumericalError("merton matrix mode has no matrix-free apply");
}

void check_same_grid(const JumpGenerator& a, const JumpGenerator& b) {
  if (a.grid_id != b.grid_id || a.n != b.n)
    throw GridMismatchError("jump generators were built on different grids");
}

std::vector<std::size_t> merge_rows(std::vector<std::size_t> a, const std::vector<std::size_t>& b) {
  std::set<std::size_t> s(a.begin(), a.end());
  s.insert(b.begin(), b.end());
  return {s.begin(), s.end()};
}

}  // namespace

VectorXd JumpGenerator::apply(const VectorXd& v) const {
  if (static_cast<std::size_t>(v.size()) != n) throw ValidationError("vector size mismatch");
  if (zero_) return VectorXd::Zero(v.size());
  if (kou_) {
    const KouFactors& k = *kou_;
    VectorXd up = k.m1.solve_triangular(v);
    VectorXd down = k.m2.solve_triangular(v);
    return k.lambda * (-v + (k.p * k.theta1) * up + ((1.0 - k.p) * k.theta2) * down);
  }
  if (merton_ && merton_->mode != MertonMode::matrix) {
    return merton_->lambda * (merton_exp_b(*merton_, v) - v);
  }
  if (dense_) return (*dense_) * v;
  throw NumericalError("jump generator has no representation");
}

MatrixXd JumpGenerator::dense() const {
  if (dense_) return *dense_;
  if (zero_) return MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  if (kou_) {
    MatrixXd out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    VectorXd e = VectorXd::Zero(static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j) {
      e[j] = 1.0;
      out.col(static_cast<Eigen::Index>(j)) = apply(e);
      e[j] = 0.0;
    }
    return out;
  }
  if (merton_) {
    MatrixXd eb = matrix_exponential(merton_->b.dense());
    return merton_->lambda * (eb - MatrixXd::Identity(eb.rows(), eb.cols()));
  }
  throw NumericalError("jump generator has no representation");
}

JumpGenerator JumpGenerator::zero(const Grid& grid, std::string model) {
  JumpGenerator g;
  g.grid_id = grid.id();
  g.n = grid.size();
  g.zero_ = true;
  g.regime.model = std::move(model);
  g.regime.stencils = "none";
  return g;
}

JumpGenerator JumpGenerator::from_dense(const Grid& grid, MatrixXd m) {
  if (static_cast<std::size_t>(m.rows()) != grid.size() || m.rows() != m.cols())
    throw ValidationError("dense generator size does not match grid");
  JumpGenerator g;
  g.grid_id = grid.id();
  g.n = grid.size();
  g.dense_ = std::make_shared<const MatrixXd>(std::move(m));
  g.regime.model = "dense";
  return g;
}

JumpGenerator build_merton(const MertonParams& p, const Grid& grid, MertonMode mode) {
  validate(LevyJumpModel{p});
  if (grid.size() < 3) throw ValidationError("grid too small for central stencils");
  if (p.lambda == 0.0) return JumpGenerator::zero(grid, "merton");
  DiscreteOperator ac = central1(grid);
  DiscreteOperator ac2 = central2(grid);
  auto op = std::make_shared<MertonOperator>();
  op->lambda = p.lambda;
  op->params = p;
  op->mode = mode;
  op->b = ac.matrix * p.mu_j + ac2.matrix * (0.5 * p.sigma_j * p.sigma_j);
  op->b_norm1 = op->b.dense().cwiseAbs().colwise().sum().maxCoeff();
  op->nodes = grid.nodes();

  JumpGenerator g;
  g.grid_id = grid.id();
  g.n = grid.size();
  g.drift_shift = -p.lambda * merton_kappa(p);
  g.boundary_rows = merge_rows(ac.boundary_rows, ac2.boundary_rows);
  g.regime.model = "merton";
  g.regime.stencils = "central1+central2";
  g.regime.order = 2;
  if (mode == MertonMode::matrix) {
    MatrixXd eb = matrix_exponential(op->b.dense());
    g.dense_ = std::make_shared<const MatrixXd>(
        p.lambda * (eb - MatrixXd::Identity(eb.rows(), eb.cols())));
    g.fast_apply = FastApply::none;
  } else {
    g.fast_apply = FastApply::merton_heat;
  }
  g.merton_ = std::move(op);
  return g;
}

JumpGenerator build_kou(const KouParams& p, const Grid& grid) {
  validate(LevyJumpModel{p});
  if (p.lambda == 0.0) return JumpGenerator::zero(grid, "kou");
  const double theta_max = std::max(p.theta1, p.theta2);
  const double hmax = grid.max_step();
  if (!(hmax < 1.0 / theta_max))
    throw StabilityError("Kou discretization needs every grid step h < 1/max(theta1, theta2) = " +
                         std::to_string(1.0 / theta_max) + ", largest step is " +
                         std::to_string(hmax));
  DiscreteOperator af2 = forward2(grid);
  DiscreteOperator ab2 = backward2(grid);
  auto f = std::make_shared<KouFactors>();
  f->lambda = p.lambda;
  f->p = p.p;
  f->theta1 = p.theta1;
  f->theta2 = p.theta2;
  f->m1 = (af2.matrix * -1.0).shifted(p.theta1);
  f->m2 = ab2.matrix.shifted(p.theta2);

  JumpGenerator g;
  g.grid_id = grid.id();
  g.n = grid.size();
  g.drift_shift = -p.lambda * kou_mu0(p);
  g.fast_apply = FastApply::kou_triangular;
  g.boundary_rows = merge_rows(af2.boundary_rows, ab2.boundary_rows);
  g.regime.model = "kou";
  g.regime.stencils = "forward2+backward2";
  g.regime.order = 2;
  g.kou_ = std::move(f);
  return g;
}

JumpGenerator build_gtsp_side(const GtspTail& t, Side side, const Grid& grid, double kappa_dump) {
  {
    GtspParams chk;
    (side == Side::right ? chk.right : chk.left) = t;
    chk.kappa_dump = kappa_dump;
    validate(LevyJumpModel{chk});
  }
  if (t.lambda == 0.0) return JumpGenerator::zero(grid, "gtsp");
  const bool right = side == Side::right;
  const double sgn = right ? -1.0 : 1.0;  // nu I + sgn * A
  const double nu = t.nu;
  const auto n = static_cast<Eigen::Index>(grid.size());
  const MatrixXd id = MatrixXd::Identity(n, n);
  const AlphaRegime regime = alpha_regime(t.alpha);

  JumpGenerator g;
  g.grid_id = grid.id();
  g.n = grid.size();
  g.regime.model = "gtsp";
  (right ? g.regime.right : g.regime.left) = to_string(regime);
  MatrixXd l;

  switch (regime) {
    case AlphaRegime::negative: {
      DiscreteOperator a = right ? forward2(grid) : backward2(grid);
      MatrixXd m = nu * id + sgn * a.dense();
      l = t.lambda * gamma_neg(t.alpha) *
          (fractional_power_triangular(m, t.alpha) - std::pow(nu, t.alpha) * id);
      g.drift_shift = gtsp_drift_coefficient(t, side);
      g.boundary_rows = a.boundary_rows;
      g.regime.stencils = right ? "forward2" : "backward2";
      g.regime.order = 2;
      break;
    }
    case AlphaRegime::zero: {
      DiscreteOperator a = right ? forward2(grid) : backward2(grid);
      MatrixXd m = nu * id + sgn * a.dense();
      l = t.lambda * (std::log(nu) * id - matrix_log_triangular(m));
      g.drift_shift = gtsp_drift_coefficient(t, side);
      g.boundary_rows = a.boundary_rows;
      g.regime.stencils = right ? "forward2" : "backward2";
      g.regime.order = 2;
      break;
    }
    case AlphaRegime::between01: {
      DiscreteOperator a = right ? forward1(grid) : backward1(grid);
      MatrixXd m = nu * id + sgn * a.dense();
      l = t.lambda * gamma_neg(t.alpha) *
          (fractional_power_triangular(m, t.alpha) - std::pow(nu, t.alpha) * id);
      g.drift_shift = gtsp_drift_coefficient(t, side);
      g.boundary_rows = a.boundary_rows;
      g.regime.stencils = right ? "forward1" : "backward1";
      g.regime.order = 1;
      break;
    }
    case AlphaRegime::one: {
      DiscreteOperator a = right ? forward1(grid) : backward1(grid);
      MatrixXd ad = a.dense();
      MatrixXd m = nu * id + sgn * ad;
      const double c = gtsp_alpha1_constant(t, side);
      // right: + kappa c A^F, left: - kappa c A^B
      l = t.lambda * (m * matrix_log_triangular(m) - nu * std::log(nu) * id -
                      sgn * kappa_dump * c * ad);
      g.drift_shift = (1.0 - kappa_dump) * gtsp_drift_coefficient(t, side);
      g.boundary_rows = a.boundary_rows;
      g.regime.stencils = right ? "forward1" : "backward1";
      g.regime.order = 1;
      g.regime.kappa_dump = kappa_dump;
      StructuralOptions so;
      so.excluded_rows = g.boundary_rows;
      const double scale = l.cwiseAbs().maxCoeff();
      so.entry_tol = 1e-10 * std::max(1.0, scale);
      StructuralReport rep = structural_checks(l, so);
      if (!rep.is_metzler)
        throw StabilityError("alpha = 1 generator is not Metzler with kappa_dump = " +
                             std::to_string(kappa_dump) +
                             "; raise kappa_dump (need kappa*c >= 1 + log(nu + 1/h))");
      break;
    }
    case AlphaRegime::between12: {
      DiscreteOperator a2 = right ? forward2(grid) : backward2(grid);
      DiscreteOperator ac = central1(grid);
      DiscreteOperator ac2 = central2(grid);
      MatrixXd m1 = ac2.dense() + nu * nu * id + (right ? -2.0 : 2.0) * nu * ac.dense();
      MatrixXd m2 = fractional_power_triangular(nu * id + sgn * a2.dense(), t.alpha - 2.0);
      l = t.lambda * gamma_neg(t.alpha) * (m1 * m2 - std::pow(nu, t.alpha) * id);
      g.drift_shift = gtsp_drift_coefficient(t, side);
      g.boundary_rows = merge_rows(merge_rows(a2.boundary_rows, ac.boundary_rows),
                                   ac2.boundary_rows);
      g.regime.stencils = std::string(right ? "forward2" : "backward2") + "+central1+central2";
      g.regime.order = 2;
      break;
    }
  }
  if (!l.allFinite()) throw NumericalError("GTSP generator has non-finite entries");
  g.dense_ = std::make_shared<const MatrixXd>(std::move(l));
  return g;
}

JumpGenerator assemble_two_sided(const JumpGenerator& right, const JumpGenerator& left) {
  check_same_grid(right, left);
  if (left.is_zero()) return right;
  if (right.is_zero()) return left;
  JumpGenerator g;
  g.grid_id = right.grid_id;
  g.n = right.n;
  g.drift_shift = right.drift_shift + left.drift_shift;
  g.boundary_rows = merge_rows(right.boundary_rows, left.boundary_rows);
  g.regime.model = right.regime.model;
  g.regime.right = right.regime.right;
  g.regime.left = left.regime.left;
  g.regime.stencils = right.regime.stencils + "|" + left.regime.stencils;
  g.regime.order = std::min(right.regime.order, left.regime.order);
  g.regime.kappa_dump = std::max(right.regime.kappa_dump, left.regime.kappa_dump);
  g.dense_ = std::make_shared<const MatrixXd>(right.dense() + left.dense());
  return g;
}

JumpGenerator build_gtsp(const GtspParams& p, const Grid& grid) {
  validate(LevyJumpModel{p});
  return assemble_two_sided(build_gtsp_side(p.right, Side::right, grid, p.kappa_dump),
                            build_gtsp_side(p.left, Side::left, grid, p.kappa_dump));
}

JumpGenerator build_jump_generator(const LevyJumpModel& m, const Grid& grid,
                                   const GeneratorOptions& opt) {
  if (std::holds_alternative<NoJumps>(m)) return JumpGenerator::zero(grid);
  if (auto* p = std::get_if<MertonParams>(&m)) return build_merton(*p, grid, opt.merton_mode);
  if (auto* p = std::get_if<KouParams>(&m)) return build_kou(*p, grid);
  return build_gtsp(std::get<GtspParams>(m), grid);
}

MatrixXd naive_forward_forward_operator(const GtspTail& t, const Grid& grid) {
  if (alpha_regime(t.alpha) != AlphaRegime::between12)
    throw ValidationError("the forward/forward construction is defined for 1 < alpha < 2");
  const auto n = static_cast<Eigen::Index>(grid.size());
  const MatrixXd id = MatrixXd::Identity(n, n);
  const MatrixXd af = forward1(grid).dense();
  const double nu = t.nu;
  return t.lambda * gamma_neg(t.alpha) *
         (fractional_power_triangular(nu * id - af, t.alpha) - std::pow(nu, t.alpha) * id +
          (std::pow(nu, t.alpha) - std::pow(nu - 1.0, t.alpha)) * af);
}

}  // namespace levysplit
