#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

namespace levysplit {

enum class Spacing { uniform, concentrated };
enum class Extension { geometric, uniform };

// Log-price grid parameters. The diffusion grid covers [x_min, x_max]
// with n nodes; the jump grid extends it geometrically to the jump bounds.
struct GridSpec {
  double x_min = 0.0;
  double x_max = 0.0;
  int n = 0;
  Spacing spacing = Spacing::uniform;
  double focus = 0.0;          // concentrated spacing: densest point
  double concentration = 0.1;  // concentrated spacing: sinh width
  // Upper jump bound; unset means no upper extension.
  std::optional<double> x_max_jump;
  // Lower jump bound; unset mirrors the upper extension length.
  std::optional<double> x_min_jump;
  Extension extension = Extension::geometric;
  double growth = 1.03;  // geometric extension step ratio, > 1
};

class Grid {
 public:
  Grid() = default;
  // nodes strictly increasing; [lo, hi) is the diffusion index range
  Grid(std::vector<double> nodes, std::size_t lo, std::size_t hi);

  const std::vector<double>& nodes() const { return nodes_; }
  double operator[](std::size_t i) const { return nodes_[i]; }
  std::size_t size() const { return nodes_.size(); }
  std::size_t diffusion_begin() const { return lo_; }
  std::size_t diffusion_end() const { return hi_; }
  std::size_t diffusion_size() const { return hi_ - lo_; }

  // x[i+1] - x[i]
  double step(std::size_t i) const { return nodes_[i + 1] - nodes_[i]; }
  double min_step() const;
  double max_step() const;
  // representative diffusion step (the reported h)
  double diffusion_step() const;
  bool is_uniform(double rtol = 1e-9) const;

  // Structural fingerprint of the node values.
  std::uint64_t id() const { return id_; }

  // Largest i with x[i] <= x, clamped to [0, size-2].
  std::size_t locate(double x) const;

 private:
  std::vector<double> nodes_;
  std::size_t lo_ = 0;
  std::size_t hi_ = 0;
  std::uint64_t id_ = 0;
};

void validate(const GridSpec& spec);

Grid build_uniform_grid(double x_min, double x_max, int n);
Grid build_concentrated_grid(double x_min, double x_max, int n, double focus,
                             double concentration);
Grid build_diffusion_grid(const GridSpec& spec);

// Appends nodes with steps h*g, h*g^2, ... (h = adjacent boundary step) until
// both jump bounds are covered.
Grid extend_to_jump_grid(const Grid& diffusion, double x_min_jump, double x_max_jump,
                         double growth);

// Appends nodes at the adjacent boundary step until both bounds are covered.
Grid extend_uniform_to_jump_grid(const Grid& diffusion, double x_min_jump, double x_max_jump);

Grid build_jump_grid(const GridSpec& spec);

// index,x,region rows with region in {lower,diffusion,upper}
void write_csv(const Grid& grid, std::ostream& os);

}  // namespace levysplit
