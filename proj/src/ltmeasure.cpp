#include "rbm/ltmeasure.hpp"

#include <algorithm>
#include <cmath>

namespace rbm {

namespace {

// Active non-corner edge of a banded position, or -1.
int banded_edge_of(const DomainSpec& d, Point p, double epsBd) {
  if (signed_boundary_distance(d, p) > epsBd) return -1;
  BoundaryContact c = nearest_boundary_point(d, p);
  if (c.corner) return -1;
  return c.edge;
}

}  // namespace

LocalTimeMeasure measure_from_local_time(const PathGrid& grid, std::span<const double> cumulative) {
  if (cumulative.size() != grid.n + 1) raise(Errc::GridMismatch, "cumulative length != n+1");
  LocalTimeMeasure m;
  m.grid = grid;
  m.increments.resize(grid.n);
  for (std::size_t k = 0; k < grid.n; ++k) {
    double inc = cumulative[k + 1] - cumulative[k];
    if (inc < -1e-12) raise(Errc::RangeError, "decreasing local time");
    m.increments[k] = std::max(0.0, inc);
  }
  return m;
}

double measure_of(const LocalTimeMeasure& m, std::size_t fromStep, std::size_t toStep) {
  if (fromStep > toStep || toStep > m.increments.size())
    raise(Errc::IndexOutOfRange, "bad measure window");
  double s = 0.0;
  for (std::size_t k = fromStep; k < toStep; ++k) s += m.increments[k];
  return s;
}

std::optional<std::size_t> stopping_time_T(const ReflectedPath& px, const ReflectedPath& py,
                                           const DomainSpec& d, double epsBd, double epsAng) {
  if (px.grid.n != py.grid.n || px.grid.dt != py.grid.dt)
    raise(Errc::GridMismatch, "paths on different grids");
  const std::size_t len = px.positions.size();
  for (std::size_t k = 0; k < len; ++k) {
    if (signed_boundary_distance(d, px.positions[k]) > epsBd) continue;
    if (signed_boundary_distance(d, py.positions[k]) > epsBd) continue;
    BoundaryContact cx = nearest_boundary_point(d, px.positions[k]);
    BoundaryContact cy = nearest_boundary_point(d, py.positions[k]);
    if (cx.corner || cy.corner) continue;
    UnitVector nx, ny;
    try {
      nx = inward_normal(d, cx.point);
      ny = inward_normal(d, cy.point);
    } catch (const Error&) {
      continue;
    }
    if (angle_between(nx, ny) < epsAng) return k;
  }
  return std::nullopt;
}

double overlap_statistic(const LocalTimeMeasure& mx, const LocalTimeMeasure& my, double h,
                         std::size_t upTo) {
  if (mx.grid.n != my.grid.n || mx.grid.dt != my.grid.dt)
    raise(Errc::GridMismatch, "measures on different grids");
  if (h < mx.grid.dt) raise(Errc::RangeError, "bin width below grid resolution");
  if (upTo > mx.increments.size()) raise(Errc::IndexOutOfRange, "window beyond horizon");
  if (upTo == 0) raise(Errc::EmptyMeasure, "empty window");
  const double dt = mx.grid.dt;
  const double span = dt * static_cast<double>(upTo);
  const std::size_t bins =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(span / h - 1e-12)));
  std::vector<double> bx(bins, 0.0), by(bins, 0.0);
  double totX = 0.0, totY = 0.0;
  for (std::size_t k = 0; k < upTo; ++k) {
    std::size_t b = std::min(bins - 1, static_cast<std::size_t>(dt * static_cast<double>(k) / h));
    bx[b] += mx.increments[k];
    by[b] += my.increments[k];
    totX += mx.increments[k];
    totY += my.increments[k];
  }
  if (totX <= 0.0 && totY <= 0.0) raise(Errc::EmptyMeasure, "both measures vanish on the window");
  if (totX <= 0.0 || totY <= 0.0) return 0.0;
  double s = 0.0;
  for (std::size_t b = 0; b < bins; ++b) s += std::min(bx[b] / totX, by[b] / totY);
  return s;
}

std::optional<EdgeWindow> same_edge_window(const ReflectedPath& px, const ReflectedPath& py,
                                           const DomainSpec& d, double epsBd) {
  if (!std::holds_alternative<Wedge>(d) && !std::holds_alternative<ConvexPolygon>(d))
    raise(Errc::WrongDomain, "needs a wedge or polygon domain");
  if (px.positions.size() != py.positions.size())
    raise(Errc::GridMismatch, "paths on different grids");
  const std::size_t len = px.positions.size();
  std::optional<EdgeWindow> current;
  for (std::size_t k = 0; k < len; ++k) {
    int ex = banded_edge_of(d, px.positions[k], epsBd);
    int ey = banded_edge_of(d, py.positions[k], epsBd);
    bool common = ex >= 0 && ex == ey;
    if (common) {
      if (!current) current = EdgeWindow{k, k, ex};
      else if (current->edge == ex) current->endIndex = k;
      else return current;  // edge changed; the first window is maximal
    } else if (current) {
      return current;
    }
  }
  return current;
}

}  // namespace rbm
