#include "levysplit/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <ostream>
#include <string>

#include "levysplit/errors.hpp"

namespace levysplit {

namespace {

std::uint64_t fingerprint(const std::vector<double>& v) {
  std::uint64_t h = 1469598103934665603ull;
  for (double x : v) {
    std::uint64_t bits;
    std::memcpy(&bits, &x, sizeof bits);
    for (int k = 0; k < 8; ++k) {
      h ^= (bits >> (8 * k)) & 0xffu;
      h *= 1099511628211ull;
    }
  }
  return h;
}

}  // namespace

Grid::Grid(std::vector<double> nodes, std::size_t lo, std::size_t hi)
    : nodes_(std::move(nodes)), lo_(lo), hi_(hi) {
  if (nodes_.size() < 3) throw ValidationError("grid needs at least 3 nodes");
  if (lo_ >= hi_ || hi_ > nodes_.size())
    throw ValidationError("invalid diffusion index range");
  for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
    if (!(nodes_[i + 1] > nodes_[i]))
      throw ValidationError("grid nodes must be strictly increasing");
  }
  id_ = fingerprint(nodes_);
}

double Grid::min_step() const {
  double m = step(0);
  for (std::size_t i = 1; i + 1 < size(); ++i) m = std::min(m, step(i));
  return m;
}

double Grid::max_step() const {
  double m = step(0);
  for (std::size_t i = 1; i + 1 < size(); ++i) m = std::max(m, step(i));
  return m;
}

double Grid::diffusion_step() const {
  if (diffusion_size() < 2) return step(0);
  return (nodes_[hi_ - 1] - nodes_[lo_]) / static_cast<double>(diffusion_size() - 1);
}

bool Grid::is_uniform(double rtol) const {
  double h0 = step(0);
  for (std::size_t i = 1; i + 1 < size(); ++i) {
    if (std::abs(step(i) - h0) > rtol * h0) return false;
  }
  return true;
}

std::size_t Grid::locate(double x) const {
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
  std::size_t i = it == nodes_.begin() ? 0 : static_cast<std::size_t>(it - nodes_.begin()) - 1;
  return std::min(i, size() - 2);
}

void validate(const GridSpec& s) {
  if (!(std::isfinite(s.x_min) && std::isfinite(s.x_max)) || !(s.x_min < s.x_max))
    throw ValidationError("grid requires x_min < x_max");
  if (s.n < 3) throw ValidationError("grid requires at least 3 nodes, got " + std::to_string(s.n));
  if (!(s.growth > 1.0)) throw ValidationError("growth factor must exceed 1");
  if (s.x_max_jump && *s.x_max_jump < s.x_max)
    throw ValidationError("upper jump bound lies inside the diffusion grid");
  if (s.x_min_jump && *s.x_min_jump > s.x_min)
    throw ValidationError("lower jump bound lies inside the diffusion grid");
  if (s.spacing == Spacing::concentrated && !(s.concentration > 0.0))
    throw ValidationError("concentration must be positive");
}

Grid build_uniform_grid(double x_min, double x_max, int n) {
  if (n < 3) throw ValidationError("grid requires at least 3 nodes");
  if (!(x_min < x_max)) throw ValidationError("grid requires x_min < x_max");
  std::vector<double> x(static_cast<std::size_t>(n));
  double h = (x_max - x_min) / (n - 1);
  for (int i = 0; i < n; ++i) x[i] = x_min + h * i;
  x.back() = x_max;
  return Grid(std::move(x), 0, static_cast<std::size_t>(n));
}

Grid build_concentrated_grid(double x_min, double x_max, int n, double focus,
                             double c) {
  if (n < 3) throw ValidationError("grid requires at least 3 nodes");
  if (!(x_min < x_max)) throw ValidationError("grid requires x_min < x_max");
  if (!(c > 0.0)) throw ValidationError("concentration must be positive");
  double a = std::asinh((x_min - focus) / c);
  double b = std::asinh((x_max - focus) / c);
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double xi = a + (b - a) * i / (n - 1);
    x[i] = focus + c * std::sinh(xi);
  }
  x.front() = x_min;
  x.back() = x_max;
  return Grid(std::move(x), 0, static_cast<std::size_t>(n));
}

Grid build_diffusion_grid(const GridSpec& s) {
  validate(s);
  if (s.spacing == Spacing::uniform) return build_uniform_grid(s.x_min, s.x_max, s.n);
  return build_concentrated_grid(s.x_min, s.x_max, s.n, s.focus, s.concentration);
}

Grid extend_to_jump_grid(const Grid& d, double x_min_jump, double x_max_jump, double g) {
  if (!(g > 1.0)) throw ValidationError("growth factor must exceed 1");
  const auto& x = d.nodes();
  if (x_max_jump < x.back() || x_min_jump > x.front())
    throw ValidationError("jump bounds lie inside the diffusion grid");

  std::vector<double> upper;
  double h = x[x.size() - 1] - x[x.size() - 2];
  double cur = x.back();
  while (cur < x_max_jump) {
    h *= g;
    cur += h;
    upper.push_back(cur);
  }
  std::vector<double> lower;
  h = x[1] - x[0];
  cur = x.front();
  while (cur > x_min_jump) {
    h *= g;
    cur -= h;
    lower.push_back(cur);
  }

  std::vector<double> all;
  all.reserve(lower.size() + x.size() + upper.size());
  all.insert(all.end(), lower.rbegin(), lower.rend());
  all.insert(all.end(), x.begin(), x.end());
  all.insert(all.end(), upper.begin(), upper.end());
  std::size_t lo = lower.size() + d.diffusion_begin();
  std::size_t hi = lower.size() + d.diffusion_end();
  return Grid(std::move(all), lo, hi);
}

Grid extend_uniform_to_jump_grid(const Grid& d, double x_min_jump, double x_max_jump) {
  const auto& x = d.nodes();
  if (x_max_jump < x.back() || x_min_jump > x.front())
    throw ValidationError("jump bounds lie inside the diffusion grid");
  const double hu = x[x.size() - 1] - x[x.size() - 2], hl = x[1] - x[0];
  const auto mu = static_cast<std::size_t>(std::ceil((x_max_jump - x.back()) / hu - 1e-9));
  const auto ml = static_cast<std::size_t>(std::ceil((x.front() - x_min_jump) / hl - 1e-9));
  std::vector<double> all;
  all.reserve(ml + x.size() + mu);
  for (std::size_t k = ml; k >= 1; --k) all.push_back(x.front() - static_cast<double>(k) * hl);
  all.insert(all.end(), x.begin(), x.end());
  for (std::size_t k = 1; k <= mu; ++k) all.push_back(x.back() + static_cast<double>(k) * hu);
  return Grid(std::move(all), ml + d.diffusion_begin(), ml + d.diffusion_end());
}

Grid build_jump_grid(const GridSpec& s) {
  Grid d = build_diffusion_grid(s);
  double up = s.x_max_jump.value_or(s.x_max);
  double down = s.x_min_jump.value_or(s.x_min - (up - s.x_max));
  if (s.extension == Extension::uniform) return extend_uniform_to_jump_grid(d, down, up);
  return extend_to_jump_grid(d, down, up, s.growth);
}

void write_csv(const Grid& grid, std::ostream& os) {
  os << "index,x,region\n";
  os.precision(17);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const char* region = i < grid.diffusion_begin()  ? "lower"
                         : i < grid.diffusion_end() ? "diffusion"
                                                    : "upper";
    os << i << ',' << grid[i] << ',' << region << '\n';
  }
}

}  // namespace levysplit
