#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rbm/geometry.hpp"

namespace rbm {

// Identifies one reproducible Gaussian stream. Distinct triples give
// independent streams, identical triples give bit-identical ones.
struct SeedSpec {
  std::uint64_t masterSeed = 0;
  std::uint64_t trialIndex = 0;
  std::uint32_t streamLabel = 0;
};

// Counter-based N(0,1) source: draw i is a pure function of (seed, i), so
// streams can be consumed out of order and in parallel.
class NormalSource {
 public:
  explicit NormalSource(const SeedSpec& seed);
  double uniform(std::uint64_t i) const;  // in (0, 1]
  double normal(std::uint64_t i) const;
  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
};

struct PathGrid {
  double dt = 1e-3;
  std::size_t n = 0;
  int dim = 1;
  double horizon() const { return dt * static_cast<double>(n); }
};

struct IncrementStream {
  PathGrid grid;
  std::vector<double> data;  // n*dim entries, each N(0, dt)
  double at(std::size_t step, int component) const {
    return data[step * static_cast<std::size_t>(grid.dim) + static_cast<std::size_t>(component)];
  }
};

IncrementStream sample_increments(const SeedSpec& seed, const PathGrid& grid);

// Planar-modulus representation of the 2-d radial process: exact in law,
// no drift singularity at zero. Returns n+1 radii including r0.
std::vector<double> simulate_bessel2(double r0, const SeedSpec& seed, const PathGrid& grid);
std::vector<double> bessel2_from_increments(double r0, const IncrementStream& s);

// One reflection-fold step into [0, pi]. Adds the wall displacements to the
// cumulative push totals; final == proposal + pushLow - pushHigh.
double fold_step(double proposal, double& pushLow, double& pushHigh);

struct FoldedPath {
  std::vector<double> path;     // n+1 values in [0, pi]
  std::vector<double> lowerLT;  // cumulative push at 0
  std::vector<double> upperLT;  // cumulative push at pi
};
FoldedPath skorokhod_interval(double start, const IncrementStream& driver);

struct ClockPath {
  std::vector<double> values;  // sigma(t_k), k = 0..n, sigma(0) = 0
};
// Left-endpoint rule: sigma(t_k) = sum_{j<k} radii[j]^-2 * dt.
ClockPath clock_sigma(std::span<const double> radii, double dt);

// Evaluate a path sampled on a uniform grid of spacing pathDt at the clock
// times, with linear interpolation between nodes.
std::vector<double> sample_at_clock(std::span<const double> path, double pathDt, const ClockPath& clock);

}  // namespace rbm
