#pragma once

#include <optional>

#include "rbm/reflect.hpp"

namespace rbm {

struct LocalTimeMeasure {
  PathGrid grid;
  std::vector<double> increments;  // n entries, all >= 0
};

LocalTimeMeasure measure_from_local_time(const PathGrid& grid, std::span<const double> cumulative);
double measure_of(const LocalTimeMeasure& m, std::size_t fromStep, std::size_t toStep);

// First step at which both paths sit in the boundary band and the inward
// normals at their nearest boundary points agree within epsAng.
std::optional<std::size_t> stopping_time_T(const ReflectedPath& px, const ReflectedPath& py,
                                           const DomainSpec& d, double epsBd, double epsAng);

// Bin both measures on [0, upTo*dt) with width h, normalize each to unit
// mass, and return the summed bin-wise minimum: 1 for identical measures,
// 0 for disjoint bin supports.
double overlap_statistic(const LocalTimeMeasure& mx, const LocalTimeMeasure& my, double h,
                         std::size_t upTo);

struct EdgeWindow {
  std::size_t startIndex = 0;
  std::size_t endIndex = 0;  // inclusive
  int edge = -1;
};

// First maximal window on which both paths' band flags point to the
// interior of one common edge.
std::optional<EdgeWindow> same_edge_window(const ReflectedPath& px, const ReflectedPath& py,
                                           const DomainSpec& d, double epsBd);

}  // namespace rbm
