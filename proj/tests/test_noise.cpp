#include <cmath>
#include <numeric>

#include "doctest.h"
#include "rbm/noise.hpp"

using namespace rbm;

TEST_CASE("increment streams are deterministic and distinct across trials") {
  PathGrid g{1e-3, 256, 2};
  auto a = sample_increments({42, 0, 0}, g);
  auto b = sample_increments({42, 0, 0}, g);
  CHECK(a.data == b.data);
  auto c = sample_increments({42, 1, 0}, g);
  CHECK(a.data != c.data);
  auto d = sample_increments({42, 0, 1}, g);
  CHECK(a.data != d.data);
}

TEST_CASE("increment stream moments") {
  const std::size_t n = 100000;
  const double dt = 1e-3;
  auto s = sample_increments({7, 0, 0}, {dt, n, 1});
  double mean = std::accumulate(s.data.begin(), s.data.end(), 0.0) / static_cast<double>(n);
  CHECK(std::fabs(mean) <= 4.0 * std::sqrt(dt / static_cast<double>(n)));
  double var = 0.0;
  for (double v : s.data) var += (v - mean) * (v - mean);
  var /= static_cast<double>(n - 1);
  CHECK(std::fabs(var - dt) <= 5.0 * dt * std::sqrt(2.0 / static_cast<double>(n)));
}

TEST_CASE("radial process from forced increments") {
  PathGrid g{1.0, 3, 2};
  IncrementStream zero{g, std::vector<double>(6, 0.0)};
  auto r = bessel2_from_increments(1.7, zero);
  for (double v : r) CHECK(v == doctest::Approx(1.7));

  IncrementStream one{{1.0, 1, 2}, {3.0, 4.0}};
  auto r2 = bessel2_from_increments(0.0, one);
  CHECK(r2[0] == doctest::Approx(0.0));
  CHECK(r2[1] == doctest::Approx(5.0));
}

TEST_CASE("radial second moment matches the exact value") {
  // E R_T^2 = r0^2 + 2T for the planar modulus representation
  const double r0 = 0.7, T = 0.5, dt = 1e-2;
  const auto n = static_cast<std::size_t>(T / dt);
  const std::size_t trials = 100000;
  double sum = 0.0, sumsq = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    auto r = simulate_bessel2(r0, {11, t, 0}, {dt, n, 2});
    double v = r.back() * r.back();
    sum += v;
    sumsq += v * v;
  }
  const double mean = sum / trials;
  const double var = sumsq / trials - mean * mean;
  const double se = std::sqrt(var / trials);
  CHECK(std::fabs(mean - (r0 * r0 + 2.0 * T)) <= 3.0 * se);
}

TEST_CASE("two-sided fold: single step conventions") {
  PathGrid g{1.0, 1, 1};
  {
    IncrementStream drv{g, {-1.0}};
    auto f = skorokhod_interval(0.5, drv);
    CHECK(f.path[1] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(f.lowerLT[1] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(f.upperLT[1] == 0.0);
  }
  {
    IncrementStream drv{g, {0.2}};
    auto f = skorokhod_interval(0.5, drv);
    CHECK(f.path[1] == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(f.lowerLT[1] == 0.0);
    CHECK(f.upperLT[1] == 0.0);
  }
  {
    IncrementStream drv{g, {0.3}};
    auto f = skorokhod_interval(kPi, drv);
    CHECK(f.path[1] == doctest::Approx(kPi - 0.3).epsilon(1e-12));
    CHECK(f.upperLT[1] == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(f.lowerLT[1] == 0.0);
  }
}

TEST_CASE("fold path properties and free-path reconstruction") {
  const std::size_t n = 20000;
  auto drv = sample_increments({5, 3, 0}, {2e-3, n, 1});
  // widen the excursions so both walls are hit
  for (auto& v : drv.data) v *= 6.0;
  auto f = skorokhod_interval(1.0, drv);
  double free = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    CHECK(f.path[k + 1] >= 0.0);
    CHECK(f.path[k + 1] <= kPi);
    CHECK(f.lowerLT[k + 1] >= f.lowerLT[k]);
    CHECK(f.upperLT[k + 1] >= f.upperLT[k]);
    free += drv.data[k];
    // pushes only at steps whose proposal left the interval
    double proposal = f.path[k] + drv.data[k];
    if (f.lowerLT[k + 1] > f.lowerLT[k] && f.upperLT[k + 1] == f.upperLT[k])
      CHECK(proposal < 0.0);
    if (f.upperLT[k + 1] > f.upperLT[k] && f.lowerLT[k + 1] == f.lowerLT[k])
      CHECK(proposal > kPi);
  }
  CHECK(f.upperLT[n] > 0.0);
  CHECK(f.lowerLT[n] > 0.0);
  double recon = f.path[n] - (f.lowerLT[n] - f.upperLT[n]);
  CHECK(std::fabs(recon - free) < 1e-10);
}

TEST_CASE("coarse fold converges to the fine-grid limit") {
  // Replace every coarse step by 1000 linear sub-steps and compare.
  auto run = [](double dt, std::size_t n, double& supPos, double& supLT) {
    auto drv = sample_increments({9, 1, 0}, {dt, n, 1});
    for (auto& v : drv.data) v *= 3.0;
    auto coarse = skorokhod_interval(1.2, drv);
    const int sub = 1000;
    double pos = 1.2, lo = 0.0, hi = 0.0;
    supPos = 0.0;
    supLT = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      double step = drv.data[k] / sub;
      for (int j = 0; j < sub; ++j) pos = fold_step(pos + step, lo, hi);
      supPos = std::max(supPos, std::fabs(pos - coarse.path[k + 1]));
      supLT = std::max(supLT, std::fabs((lo - hi) - (coarse.lowerLT[k + 1] - coarse.upperLT[k + 1])));
    }
  };
  double posA, ltA, posB, ltB;
  run(4e-2, 250, posA, ltA);   // horizon 10
  run(1e-2, 1000, posB, ltB);  // same horizon, 4x finer
  CHECK(posB < posA);          // refinement shrinks the gap to the limit map
  // the driver is scaled by 3, so the per-step overshoot scale is 3 sqrt(dt)
  CHECK(posA < 6.0 * 3.0 * std::sqrt(4e-2));
  CHECK(posB < 6.0 * 3.0 * std::sqrt(1e-2));
  CHECK(ltA < 6.0 * 3.0 * std::sqrt(4e-2));
  CHECK(ltB < 6.0 * 3.0 * std::sqrt(1e-2));
}

TEST_CASE("clock integral") {
  {
    std::vector<double> r(101, 1.0);
    auto c = clock_sigma(r, 0.01);
    CHECK(c.values[100] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.values[50] == doctest::Approx(0.5).epsilon(1e-12));
  }
  {
    std::vector<double> r(101, 2.0);
    auto c = clock_sigma(r, 0.01);
    CHECK(c.values[100] == doctest::Approx(0.25).epsilon(1e-12));
  }
  {
    const double dt = 1e-4, T = 1.0;
    const auto n = static_cast<std::size_t>(T / dt);
    std::vector<double> r(n + 1);
    for (std::size_t k = 0; k <= n; ++k) r[k] = std::sqrt(1.0 + dt * static_cast<double>(k));
    auto c = clock_sigma(r, dt);
    CHECK(std::fabs(c.values[n] - std::log(1.0 + T)) <= dt * T);
    for (std::size_t k = 0; k < n; ++k) CHECK(c.values[k + 1] > c.values[k]);
  }
  std::vector<double> bad = {1.0, 0.0, 1.0};
  double junk = 0.01;
  CHECK_THROWS_AS(clock_sigma(bad, junk), Error);
}

TEST_CASE("sampling a path at clock times") {
  std::vector<double> path(101);
  for (std::size_t k = 0; k <= 100; ++k) path[k] = 0.01 * static_cast<double>(k);
  ClockPath idclock;
  for (std::size_t k = 0; k <= 100; ++k) idclock.values.push_back(0.01 * static_cast<double>(k));
  auto out = sample_at_clock(path, 0.01, idclock);
  for (std::size_t k = 0; k <= 100; ++k) CHECK(out[k] == doctest::Approx(path[k]).epsilon(1e-12));

  std::vector<double> flat(101, 3.25);
  auto out2 = sample_at_clock(flat, 0.01, idclock);
  for (double v : out2) CHECK(v == doctest::Approx(3.25));

  // linear path at a slowed clock
  ClockPath quarter;
  for (std::size_t k = 0; k <= 100; ++k) quarter.values.push_back(0.0025 * static_cast<double>(k));
  auto out3 = sample_at_clock(path, 0.01, quarter);
  for (std::size_t k = 0; k <= 100; ++k)
    CHECK(out3[k] == doctest::Approx(0.0025 * static_cast<double>(k)).epsilon(1e-10));

  ClockPath far;
  far.values = {2.0};
  CHECK_THROWS_AS(sample_at_clock(path, 0.01, far), Error);
}
