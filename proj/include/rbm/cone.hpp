#pragma once

#include "rbm/geometry.hpp"

namespace rbm {

enum class ConeMode { Global, Windowed };

struct ConePointQuery {
  double halfAngle = kPi / 2;
  std::vector<double> axis;  // unit, d entries
  ConeMode mode = ConeMode::Global;
};

// Flat row-major view of a d-dimensional path.
struct PathView {
  std::span<const double> data;
  int dim = 2;
  std::size_t size() const {
    return dim > 0 ? data.size() / static_cast<std::size_t>(dim) : 0;
  }
  std::span<const double> point(std::size_t i) const {
    return data.subspan(i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim));
  }
};

std::vector<double> flatten(std::span<const Point> pts);

// Global mode: the whole past lies in the cone translated to path[t].
// Windowed mode: some window of at least two grid steps before t does.
bool is_cone_point(PathView path, std::size_t t, const ConePointQuery& q);

// All valid indices satisfying is_cone_point. Global mode in d=2 runs in
// O(n) (running minima) for halfAngle <= pi/2 and O(n log n) (dominance
// staircase) above; other dimensions fall back to an early-exit scan.
std::vector<std::size_t> find_cone_points(PathView path, const ConePointQuery& q);

// Windowed detection with the intersection of two cones of the same angle.
std::vector<std::size_t> find_two_cone_times(PathView path, double alpha,
                                             std::span<const double> v,
                                             std::span<const double> w);

// 1 - pi / (2 (pi - angle)); negative values signal the empty-set regime.
double dim_formula(double angle);

}  // namespace rbm
