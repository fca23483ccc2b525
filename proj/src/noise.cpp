#include "rbm/noise.hpp"

#include <cmath>

namespace rbm {

namespace {

constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

NormalSource::NormalSource(const SeedSpec& seed) {
  std::uint64_t k = mix64(seed.masterSeed + kGamma);
  k = mix64(k ^ (seed.trialIndex * 0xbf58476d1ce4e5b9ULL + 0x94d049bb133111ebULL));
  k = mix64(k ^ (static_cast<std::uint64_t>(seed.streamLabel) * 0xd6e8feb86659fd93ULL + kGamma));
  key_ = k;
}

double NormalSource::uniform(std::uint64_t i) const {
  std::uint64_t v = mix64(key_ ^ (i * kGamma + 0x632be59bd9b4e019ULL));
  return (static_cast<double>(v >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
}

double NormalSource::normal(std::uint64_t i) const {
  double u1 = uniform(2 * i);
  double u2 = uniform(2 * i + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

IncrementStream sample_increments(const SeedSpec& seed, const PathGrid& grid) {
  if (grid.n < 1) raise(Errc::RangeError, "grid needs at least one step");
  if (grid.dim < 1 || grid.dim > 2) raise(Errc::RangeError, "grid dimension must be 1 or 2");
  if (!(grid.dt > 0.0)) raise(Errc::RangeError, "grid dt must be positive");
  NormalSource src(seed);
  IncrementStream out;
  out.grid = grid;
  out.data.resize(grid.n * static_cast<std::size_t>(grid.dim));
  const double s = std::sqrt(grid.dt);
  for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] = s * src.normal(i);
  return out;
}

std::vector<double> bessel2_from_increments(double r0, const IncrementStream& s) {
  if (r0 < 0.0) raise(Errc::RangeError, "negative start radius");
  if (s.grid.dim != 2) raise(Errc::GridMismatch, "radial driver must be 2-dimensional");
  std::vector<double> radii(s.grid.n + 1);
  double wx = r0, wy = 0.0;
  radii[0] = r0;
  for (std::size_t k = 0; k < s.grid.n; ++k) {
    wx += s.at(k, 0);
    wy += s.at(k, 1);
    radii[k + 1] = std::hypot(wx, wy);
  }
  return radii;
}

std::vector<double> simulate_bessel2(double r0, const SeedSpec& seed, const PathGrid& grid) {
  PathGrid g = grid;
  g.dim = 2;
  return bessel2_from_increments(r0, sample_increments(seed, g));
}

double fold_step(double proposal, double& pushLow, double& pushHigh) {
  double p = proposal;
  int guard = 0;
  while (p < 0.0 || p > kPi) {
    if (p < 0.0) {
      double q = -p;
      pushLow += q - p;
      p = q;
    } else {
      double q = 2.0 * kPi - p;
      pushHigh += p - q;
      p = q;
    }
    if (++guard > 1000000) raise(Errc::RangeError, "fold did not terminate");
  }
  return p;
}

FoldedPath skorokhod_interval(double start, const IncrementStream& driver) {
  if (driver.grid.dim != 1) raise(Errc::GridMismatch, "interval driver must be 1-dimensional");
  if (start < 0.0 || start > kPi) raise(Errc::RangeError, "start outside [0, pi]");
  const std::size_t n = driver.grid.n;
  FoldedPath out;
  out.path.resize(n + 1);
  out.lowerLT.assign(n + 1, 0.0);
  out.upperLT.assign(n + 1, 0.0);
  out.path[0] = start;
  for (std::size_t k = 0; k < n; ++k) {
    double pl = out.lowerLT[k];
    double ph = out.upperLT[k];
    out.path[k + 1] = fold_step(out.path[k] + driver.data[k], pl, ph);
    out.lowerLT[k + 1] = pl;
    out.upperLT[k + 1] = ph;
  }
  return out;
}

ClockPath clock_sigma(std::span<const double> radii, double dt) {
  if (radii.empty()) raise(Errc::RangeError, "empty radius array");
  if (!(dt > 0.0)) raise(Errc::RangeError, "dt must be positive");
  for (double r : radii)
    if (r <= 1e-12) raise(Errc::ZeroRadius, "radius at or below tolerance");
  ClockPath out;
  out.values.resize(radii.size());
  out.values[0] = 0.0;
  for (std::size_t k = 1; k < radii.size(); ++k)
    out.values[k] = out.values[k - 1] + dt / (radii[k - 1] * radii[k - 1]);
  return out;
}

std::vector<double> sample_at_clock(std::span<const double> path, double pathDt, const ClockPath& clock) {
  if (path.size() < 2) raise(Errc::RangeError, "path needs at least two nodes");
  if (!(pathDt > 0.0)) raise(Errc::RangeError, "pathDt must be positive");
  const double span = pathDt * static_cast<double>(path.size() - 1);
  std::vector<double> out(clock.values.size());
  for (std::size_t k = 0; k < clock.values.size(); ++k) {
    double s = clock.values[k];
    if (s < -1e-12 || s > span + 1e-12)
      raise(Errc::ClockOutOfRange, "clock time outside the sampled span");
    double u = std::min(std::max(s, 0.0), span) / pathDt;
    std::size_t i = std::min(static_cast<std::size_t>(u), path.size() - 2);
    double frac = u - static_cast<double>(i);
    out[k] = path[i] + frac * (path[i + 1] - path[i]);
  }
  return out;
}

}  // namespace rbm
