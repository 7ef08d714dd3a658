#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "levysplit/banded.hpp"
#include "levysplit/grid.hpp"
#include "levysplit/levy_models.hpp"

namespace levysplit {

enum class FastApply { none, merton_heat, kou_triangular };
std::string to_string(FastApply f);

// How Merton's exp(B) is applied.
enum class MertonMode {
  matrix,    // dense exp(B) formed once
  heat,      // z' = B z over s in [0, 1], matrix-free
  gaussian,  // direct convolution with the jump density (continuum kernel)
};
std::string to_string(MertonMode m);

// Which construction produced a generator.
struct RegimeDescriptor {
  std::string model;       // none | merton | kou | gtsp
  std::string right;       // gtsp: regime of the right tail, else empty
  std::string left;        // gtsp: regime of the left tail
  std::string stencils;    // derivative matrices used
  int order = 2;           // spatial order of the construction
  double kappa_dump = 0.0; // alpha = 1 only
  std::string to_json() const;
};

struct KouFactors {
  double lambda = 0.0, p = 0.0, theta1 = 0.0, theta2 = 0.0;
  BandedMatrix m1;  // theta1 I - A^F_2, upper
  BandedMatrix m2;  // theta2 I + A^B_2, lower
};

struct MertonOperator {
  double lambda = 0.0;
  MertonParams params;
  MertonMode mode = MertonMode::heat;
  BandedMatrix b;  // mu_J A^C + sigma_J^2/2 A^C_2
  double b_norm1 = 0.0;
  std::vector<double> nodes;
};

// Discrete jump generator J*; the moved first-derivative coefficient is
// drift_shift and is added to the diffusion drift by the time stepper.
class JumpGenerator {
 public:
  std::uint64_t grid_id = 0;
  std::size_t n = 0;
  double drift_shift = 0.0;
  FastApply fast_apply = FastApply::none;
  RegimeDescriptor regime;
  std::vector<std::size_t> boundary_rows;

  bool is_zero() const { return zero_; }
  bool has_dense() const { return dense_ != nullptr; }

  // J* v, using the structured representation when there is one.
  Eigen::VectorXd apply(const Eigen::VectorXd& v) const;
  // Dense J*; materialized on demand for structured generators.
  Eigen::MatrixXd dense() const;

  static JumpGenerator zero(const Grid& grid, std::string model = "none");
  static JumpGenerator from_dense(const Grid& grid, Eigen::MatrixXd m);

  std::shared_ptr<const Eigen::MatrixXd> dense_;
  std::shared_ptr<const KouFactors> kou_;
  std::shared_ptr<const MertonOperator> merton_;
  bool zero_ = false;
};

JumpGenerator build_merton(const MertonParams& p, const Grid& grid,
                           MertonMode mode = MertonMode::heat);
// Requires every grid step below 1 / max(theta1, theta2).
JumpGenerator build_kou(const KouParams& p, const Grid& grid);
JumpGenerator build_gtsp_side(const GtspTail& tail, Side side, const Grid& grid,
                              double kappa_dump = 5.0);
JumpGenerator assemble_two_sided(const JumpGenerator& right, const JumpGenerator& left);
JumpGenerator build_gtsp(const GtspParams& p, const Grid& grid);

struct GeneratorOptions {
  MertonMode merton_mode = MertonMode::heat;
};
JumpGenerator build_jump_generator(const LevyJumpModel& m, const Grid& grid,
                                   const GeneratorOptions& opt = {});

// The 1<alpha<2 discretization with forward differences in both places,
// lambda Gamma(-alpha) [(nu I - A^F)^alpha - nu^alpha I + (nu^alpha - (nu-1)^alpha) A^F].
// Kept to demonstrate that its diagonal cannot be made non-positive.
Eigen::MatrixXd naive_forward_forward_operator(const GtspTail& right, const Grid& grid);

}  // namespace levysplit
