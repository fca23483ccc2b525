#include <cmath>

#include "doctest.h"
#include "rbm/reflect.hpp"

using namespace rbm;

namespace {

const DomainSpec kUpper = HalfPlane{Line{{0, 0}, 0.0}, UnitVector{0, 1}};

// Explicit one-dimensional reflection map driven by the same increments.
std::vector<double> skorokhod_formula(double y0, const IncrementStream& noise, int comp) {
  std::vector<double> out(noise.grid.n + 1);
  out[0] = y0;
  double b = 0.0, m = 0.0;  // running free sum and running minimum of (y0 + b)
  for (std::size_t k = 0; k < noise.grid.n; ++k) {
    b += noise.at(k, comp);
    m = std::min(m, y0 + b);
    out[k + 1] = y0 + b - std::min(0.0, m);
  }
  return out;
}

}  // namespace

TEST_CASE("step_reflect basics") {
  auto s1 = step_reflect(kUpper, {0.0, 0.1}, {0.0, -0.3});
  CHECK(s1.position.x == doctest::Approx(0.0));
  CHECK(s1.position.y == doctest::Approx(0.0));
  CHECK(s1.localTimeIncrement == doctest::Approx(0.2).epsilon(1e-12));

  DomainSpec disk = Disk{{0, 0}, 1.0};
  auto s2 = step_reflect(disk, {0.9, 0.0}, {0.3, 0.0});
  CHECK(s2.position.x == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s2.localTimeIncrement == doctest::Approx(0.2).epsilon(1e-12));

  auto s3 = step_reflect(disk, {0.1, 0.2}, {0.05, -0.1});
  CHECK(s3.localTimeIncrement == 0.0);

  CHECK_THROWS_AS(step_reflect(kUpper, {0.0, -1.0}, {0, 0}), Error);

  DomainSpec wedge = Wedge{kPi / 2};
  auto s4 = step_reflect(wedge, {0.05, 0.05}, {-0.2, -0.2});
  CHECK(s4.corner);
  CHECK(norm(s4.position) < 1e-12);
}

TEST_CASE("half-plane normal coordinate equals the explicit reflection map") {
  const std::size_t n = 20000;
  for (std::uint64_t trial = 0; trial < 5; ++trial) {
    auto noise = sample_increments({101, trial, 0}, {1e-4, n, 2});
    auto path = simulate_reflected(kUpper, {0.0, 0.5}, noise, 0.01);
    auto oracle = skorokhod_formula(0.5, noise, 1);
    double worst = 0.0;
    for (std::size_t k = 0; k <= n; ++k)
      worst = std::max(worst, std::fabs(path.positions[k].y - oracle[k]));
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("reflected path invariants") {
  DomainSpec disk = Disk{{0, 0}, 1.0};
  const std::size_t n = 50000;
  auto noise = sample_increments({55, 2, 0}, {1e-3, n, 2});
  auto path = simulate_reflected(disk, {0.2, 0.1}, noise, 0.01);
  // decomposition: each step's push vector has the recorded magnitude, and
  // position - start - free increments equals the accumulated push vector
  Point pushSum{0, 0};
  double worstMag = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    CHECK(signed_boundary_distance(disk, path.positions[k + 1]) >= -1e-9);
    CHECK(path.localTime[k + 1] >= path.localTime[k]);
    Point pv = path.positions[k + 1] - path.positions[k] - Point{noise.at(k, 0), noise.at(k, 1)};
    pushSum = pushSum + pv;
    worstMag = std::max(worstMag, std::fabs(norm(pv) - (path.localTime[k + 1] - path.localTime[k])));
  }
  CHECK(worstMag < 1e-12);
  Point freeSum = Point{0.2, 0.1} + pushSum;
  for (std::size_t k = 0; k < n; ++k) freeSum = freeSum + Point{noise.at(k, 0), noise.at(k, 1)};
  CHECK(dist(path.positions[n], freeSum) < 1e-10);
  CHECK(path.localTime[n] > 0.0);

  // the local time moves only while the path sits in the boundary band
  for (std::size_t k = 0; k < n; ++k)
    if (path.localTime[k + 1] > path.localTime[k]) CHECK(path.boundaryFlags[k + 1]);

  // zero noise keeps an interior start fixed
  IncrementStream zero{{1e-3, 10, 2}, std::vector<double>(20, 0.0)};
  auto still = simulate_reflected(disk, {0.3, -0.4}, zero, 0.01);
  for (auto p : still.positions) CHECK(dist(p, {0.3, -0.4}) == 0.0);
  CHECK(still.localTime.back() == 0.0);
}

TEST_CASE("band occupation scales linearly in the band width") {
  DomainSpec disk = Disk{{0, 0}, 1.0};
  const std::size_t n = 500000;
  std::vector<double> eps = {0.02, 0.04, 0.08};
  std::vector<double> frac(eps.size(), 0.0);
  const int trials = 20;
  for (int t = 0; t < trials; ++t) {
    auto noise = sample_increments({77, static_cast<std::uint64_t>(t), 0}, {1e-4, n, 2});
    auto path = simulate_reflected(disk, {0.0, 0.0}, noise, 0.01);
    for (std::size_t e = 0; e < eps.size(); ++e) {
      std::size_t cnt = 0;
      for (auto p : path.positions)
        if (signed_boundary_distance(disk, p) <= eps[e]) ++cnt;
      frac[e] += static_cast<double>(cnt) / static_cast<double>(n + 1) / trials;
    }
  }
  // least squares line through the three (eps, frac) points
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t e = 0; e < eps.size(); ++e) {
    sx += eps[e];
    sy += frac[e];
    sxx += eps[e] * eps[e];
    sxy += eps[e] * frac[e];
  }
  double m = 3.0;
  double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  double intercept = (sy - slope * sx) / m;
  CHECK(slope > 0.0);
  CHECK(std::fabs(intercept) < 0.025);
}

TEST_CASE("synchronous flow keeps interior differences constant") {
  DomainSpec disk = Disk{{0, 0}, 1.0};
  auto noise = sample_increments({13, 0, 0}, {1e-4, 2000, 2});
  std::vector<Point> starts = {{0.1, 0.0}, {0.15, 0.05}};
  auto flow = simulate_flow(disk, starts, noise, 0.01);
  Point d0 = flow.members[0].positions[0] - flow.members[1].positions[0];
  bool interiorOnly = true;
  for (std::size_t k = 0; k < flow.members[0].positions.size(); ++k) {
    for (const auto& m : flow.members) interiorOnly = interiorOnly && !m.boundaryFlags[k];
    if (!interiorOnly) break;
    Point dk = flow.members[0].positions[k] - flow.members[1].positions[k];
    CHECK(dist(dk, d0) < 1e-10);
  }

  auto same = simulate_flow(disk, std::vector<Point>{{0.2, 0.2}, {0.2, 0.2}}, noise, 0.01);
  for (std::size_t k = 0; k < same.members[0].positions.size(); ++k)
    CHECK(dist(same.members[0].positions[k], same.members[1].positions[k]) == 0.0);
}

TEST_CASE("synchronous flow pairwise spread diagnostic") {
  // time-averaged pairwise distances of a 3x3 grid flow; boundary pushes
  // can only pull members together, so the spread should not blow up
  DomainSpec disk = Disk{{0, 0}, 1.0};
  const std::size_t n = 20000;
  auto noise = sample_increments({14, 0, 0}, {1e-3, n, 2});
  std::vector<Point> starts;
  for (int i = -1; i <= 1; ++i)
    for (int j = -1; j <= 1; ++j) starts.push_back({0.2 + 0.03 * i, 0.03 * j});
  auto flow = simulate_flow(disk, starts, noise, 0.01);
  auto meanPairDist = [&](std::size_t k) {
    double s = 0.0;
    int c = 0;
    for (std::size_t a = 0; a < flow.members.size(); ++a)
      for (std::size_t b = a + 1; b < flow.members.size(); ++b) {
        s += dist(flow.members[a].positions[k], flow.members[b].positions[k]);
        ++c;
      }
    return s / c;
  };
  double early = 0.0, late = 0.0;
  for (std::size_t k = 0; k < 100; ++k) early += meanPairDist(k) / 100.0;
  for (std::size_t k = n - 99; k <= n; ++k) late += meanPairDist(k) / 100.0;
  MESSAGE("mean pairwise distance: first 100 steps ", early, ", last 100 steps ", late);
  CHECK(late <= early * 1.5 + 1e-12);
}

TEST_CASE("simultaneous boundary detector") {
  DomainSpec disk = Disk{{0, 0}, 1.0};
  auto noise = sample_increments({21, 4, 0}, {1e-3, 20000, 2});
  auto flow = simulate_flow(disk, std::vector<Point>{{0.1, 0.2}}, noise, 0.01);
  auto hit = detect_simultaneous_boundary(flow, 0.01);
  REQUIRE(hit.has_value());
  // matches the first flagged index of the single member
  std::size_t first = 0;
  while (!flow.members[0].boundaryFlags[first]) ++first;
  CHECK(*hit == first);

  // two opposite starts over a tiny horizon never flag together
  auto shortNoise = sample_increments({21, 5, 0}, {1e-6, 100, 2});
  auto flow2 = simulate_flow(disk, std::vector<Point>{{0.99, 0.0}, {-0.99, 0.0}}, shortNoise, 1e-4);
  CHECK_FALSE(detect_simultaneous_boundary(flow2, 1e-4).has_value());
}

TEST_CASE("modulus exponent estimates") {
  const std::size_t n = 200000;
  const double dt = 1e-4;
  std::vector<double> lin(n + 1), root(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    double t = dt * static_cast<double>(k);
    lin[k] = t;
    root[k] = std::sqrt(t);
  }
  CHECK(holder_exponent_estimate(lin, dt) == doctest::Approx(1.0).epsilon(0.05));
  CHECK(holder_exponent_estimate(root, dt) == doctest::Approx(0.5).epsilon(0.1));

  // single-path estimates scatter widely; the Monte Carlo mean settles
  double sum = 0.0;
  int valid = 0;
  for (std::uint64_t s = 0; s < 12; ++s) {
    auto noise = sample_increments({31, s, 0}, {dt, n, 2});
    auto path = simulate_reflected(kUpper, {0.0, 0.01}, noise, 0.01);
    try {
      sum += holder_exponent_estimate(path.localTime, dt);
      ++valid;
    } catch (const Error&) {
      // a path that never worked the boundary carries no information
    }
  }
  REQUIRE(valid >= 8);
  double mean = sum / valid;
  CHECK(mean > 0.35);
  CHECK(mean < 0.55);

  std::vector<double> flat(n + 1, 2.0);
  CHECK_THROWS_AS(holder_exponent_estimate(flat, dt), Error);
}
