#include <cmath>
#include <random>

#include "doctest.h"
#include "rbm/ltmeasure.hpp"

using namespace rbm;

namespace {

const DomainSpec kUpper = HalfPlane{Line{{0, 0}, 0.0}, UnitVector{0, 1}};

ReflectedPath synthetic_path(const PathGrid& grid, const std::vector<Point>& pos,
                             const std::vector<double>& lt, double epsBd, const DomainSpec& d) {
  ReflectedPath p;
  p.grid = grid;
  p.positions = pos;
  p.localTime = lt;
  p.epsBd = epsBd;
  p.boundaryFlags.resize(pos.size());
  for (std::size_t k = 0; k < pos.size(); ++k)
    p.boundaryFlags[k] = signed_boundary_distance(d, pos[k]) <= epsBd;
  return p;
}

// Scan oracle straight from the definition.
std::optional<std::size_t> stopping_oracle(const ReflectedPath& px, const ReflectedPath& py,
                                           const DomainSpec& d, double epsBd, double epsAng) {
  for (std::size_t k = 0; k < px.positions.size(); ++k) {
    if (signed_boundary_distance(d, px.positions[k]) > epsBd) continue;
    if (signed_boundary_distance(d, py.positions[k]) > epsBd) continue;
    auto cx = nearest_boundary_point(d, px.positions[k]);
    auto cy = nearest_boundary_point(d, py.positions[k]);
    if (cx.corner || cy.corner) continue;
    UnitVector nx = inward_normal(d, cx.point);
    UnitVector ny = inward_normal(d, cy.point);
    if (angle_between(nx, ny) < epsAng) return k;
  }
  return std::nullopt;
}

}  // namespace

TEST_CASE("measure additivity and construction") {
  PathGrid grid{0.1, 6, 2};
  std::vector<double> L = {0.0, 0.0, 0.5, 0.5, 1.25, 1.25, 2.0};
  auto m = measure_from_local_time(grid, L);
  CHECK(measure_of(m, 0, 6) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(measure_of(m, 0, 3) + measure_of(m, 3, 6) == doctest::Approx(measure_of(m, 0, 6)).epsilon(1e-12));
  CHECK(measure_of(m, 2, 4) == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("overlap statistic extremes and invariances") {
  PathGrid grid{0.01, 100, 2};
  LocalTimeMeasure a{grid, std::vector<double>(100, 0.0)};
  LocalTimeMeasure b{grid, std::vector<double>(100, 0.0)};
  for (std::size_t k = 10; k < 20; ++k) a.increments[k] = 1.0;
  for (std::size_t k = 60; k < 70; ++k) b.increments[k] = 2.0;

  // identical measures overlap fully
  CHECK(overlap_statistic(a, a, 0.25, 100) == doctest::Approx(1.0));
  // disjoint bins overlap not at all
  CHECK(overlap_statistic(a, b, 0.25, 100) == doctest::Approx(0.0));

  // invariant under common rescaling
  LocalTimeMeasure a2 = a;
  LocalTimeMeasure b2 = b;
  for (auto& v : a2.increments) v *= 7.5;
  for (auto& v : b2.increments) v *= 7.5;
  CHECK(overlap_statistic(a2, b2, 0.25, 100) == doctest::Approx(overlap_statistic(a, b, 0.25, 100)));
  CHECK(overlap_statistic(a2, a2, 0.0625, 100) == doctest::Approx(1.0));

  LocalTimeMeasure zero{grid, std::vector<double>(100, 0.0)};
  CHECK(overlap_statistic(a, zero, 0.25, 100) == 0.0);
  CHECK_THROWS_AS(overlap_statistic(zero, zero, 0.25, 100), Error);
  CHECK_THROWS_AS(overlap_statistic(a, b, 1e-5, 100), Error);

  // stays a number in [0, 1] for arbitrary nonnegative inputs
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 50; ++rep) {
    LocalTimeMeasure p{grid, std::vector<double>(100)};
    LocalTimeMeasure q{grid, std::vector<double>(100)};
    for (int k = 0; k < 100; ++k) {
      p.increments[k] = u(rng) < 0.3 ? u(rng) : 0.0;
      q.increments[k] = u(rng) < 0.3 ? u(rng) : 0.0;
    }
    double tot = 0;
    for (double v : p.increments) tot += v;
    if (tot == 0.0) continue;
    double ov = overlap_statistic(p, q, 0.05 + u(rng), 100);
    CHECK(ov >= 0.0);
    CHECK(ov <= 1.0 + 1e-12);
  }
}

TEST_CASE("stopping time on synthetic disk paths") {
  DomainSpec disk = Disk{{0, 0}, 1.0};
  PathGrid grid{0.1, 3, 2};
  // antipodal touches: normals opposed, never triggers at small tolerance
  std::vector<Point> px = {{0.0, 0.0}, {0.995, 0.0}, {0.5, 0.0}, {0.995, 0.0}};
  std::vector<Point> py = {{0.0, 0.0}, {-0.995, 0.0}, {-0.5, 0.0}, {-0.995, 0.0}};
  std::vector<double> L(4, 0.0);
  auto a = synthetic_path(grid, px, L, 0.01, disk);
  auto b = synthetic_path(grid, py, L, 0.01, disk);
  CHECK_FALSE(stopping_time_T(a, b, disk, 0.01, 0.1).has_value());
  // opposed normals trigger once the tolerance covers pi
  CHECK(stopping_time_T(a, b, disk, 0.01, 3.2).value() == 1);

  // same-edge polygon contact triggers at once
  DomainSpec square = ConvexPolygon{{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}};
  std::vector<Point> qx = {{-0.5, -0.995}};
  std::vector<Point> qy = {{0.5, -0.995}};
  std::vector<double> L1(1, 0.0);
  PathGrid g1{0.1, 0, 2};
  auto sx = synthetic_path(g1, qx, L1, 0.01, square);
  auto sy = synthetic_path(g1, qy, L1, 0.01, square);
  CHECK(stopping_time_T(sx, sy, square, 0.01, 0.05).value() == 0);
}

TEST_CASE("stopping time matches the scan oracle and is monotone in tolerance") {
  DomainSpec disk = Disk{{0, 0}, 1.0};
  const std::size_t n = 20000;
  PathGrid grid{1e-3, n, 2};
  for (std::uint64_t t = 0; t < 5; ++t) {
    auto px = simulate_reflected(disk, {0.6, 0.0},
                                 sample_increments({404, t, 0}, grid), 0.05);
    auto py = simulate_reflected(disk, {-0.3, 0.4},
                                 sample_increments({404, t, 1}, grid), 0.05);
    auto got = stopping_time_T(px, py, disk, 0.05, 0.2);
    auto want = stopping_oracle(px, py, disk, 0.05, 0.2);
    CHECK(got == want);
    auto loose = stopping_time_T(px, py, disk, 0.05, 0.8);
    if (got) {
      REQUIRE(loose.has_value());
      CHECK(*loose <= *got);
    }
  }
  PathGrid other{2e-3, n / 2, 2};
  auto px = simulate_reflected(disk, {0.6, 0.0}, sample_increments({404, 9, 0}, grid), 0.05);
  auto py = simulate_reflected(disk, {0.1, 0.0}, sample_increments({404, 9, 1}, other), 0.05);
  CHECK_THROWS_AS(stopping_time_T(px, py, disk, 0.05, 0.2), Error);
}

TEST_CASE("same edge window detection") {
  DomainSpec square = ConvexPolygon{{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}};
  const std::size_t n = 5000;
  PathGrid grid{1e-4, n, 2};
  auto nx = sample_increments({505, 0, 0}, grid);
  auto px = simulate_reflected(square, {-0.1, -0.995}, nx, 0.01);
  auto py = simulate_reflected(square, {0.1, -0.993}, sample_increments({505, 0, 1}, grid), 0.01);
  auto win = same_edge_window(px, py, square, 0.01);
  REQUIRE(win.has_value());
  CHECK(win->edge == 0);
  CHECK(win->startIndex == 0);
  CHECK(win->endIndex >= win->startIndex);

  // paths pinned near different edges never share a window
  auto pa = simulate_reflected(square, {0.0, -0.995}, nx, 0.001);
  auto pb = simulate_reflected(square, {0.0, 0.995}, sample_increments({505, 1, 1}, grid), 0.001);
  CHECK_FALSE(same_edge_window(pa, pb, square, 0.001).has_value());

  // wedge variant reports the first edge
  DomainSpec wedge = Wedge{kPi / 3};
  auto wx = simulate_reflected(wedge, {1.0, 0.005}, nx, 0.01);
  auto wy = simulate_reflected(wedge, {1.2, 0.006}, sample_increments({505, 2, 1}, grid), 0.01);
  auto wwin = same_edge_window(wx, wy, wedge, 0.01);
  REQUIRE(wwin.has_value());
  CHECK(wwin->edge == 0);

  CHECK_THROWS_AS(same_edge_window(px, py, Disk{{0, 0}, 1.0}, 0.01), Error);
}

TEST_CASE("same-edge local time agrees with the one-dimensional oracle") {
  // synchronously driven pair pinned to the bottom edge of the square
  DomainSpec square = ConvexPolygon{{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}};
  const std::size_t n = 20000;
  PathGrid grid{1e-5, n, 2};
  int found = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto noise = sample_increments({606, seed, 0}, grid);
    auto px = simulate_reflected(square, {-0.05, -1.0 + 0.004}, noise, 0.01);
    auto py = simulate_reflected(square, {0.05, -1.0 + 0.007}, noise, 0.01);
    auto win = same_edge_window(px, py, square, 0.01);
    if (!win || win->edge != 0 || win->endIndex <= win->startIndex) continue;
    ++found;
    const std::size_t a = win->startIndex, b = win->endIndex;
    // distance-to-edge coordinates follow the scalar reflection map exactly
    auto oracle = [&](double u0) {
      double u = u0, L = 0.0;
      std::vector<double> lt(b - a + 1, 0.0);
      for (std::size_t k = a; k < b; ++k) {
        u += noise.at(k, 1);
        if (u < 0) {
          L += -u;
          u = 0.0;
        }
        lt[k - a + 1] = L;
      }
      return lt;
    };
    auto ox = oracle(px.positions[a].y + 1.0);
    auto oy = oracle(py.positions[a].y + 1.0);
    CHECK(std::fabs((px.localTime[b] - px.localTime[a]) - ox.back()) < 1e-10);
    CHECK(std::fabs((py.localTime[b] - py.localTime[a]) - oy.back()) < 1e-10);
    // shared driver: cumulative difference bounded by the start separation
    double gap = std::fabs((px.localTime[b] - px.localTime[a]) - (py.localTime[b] - py.localTime[a]));
    double bound = std::fabs(px.positions[a].y - py.positions[a].y) + 4.0 * std::sqrt(grid.dt);
    CHECK(gap <= bound);
  }
  CHECK(found >= 6);
}
