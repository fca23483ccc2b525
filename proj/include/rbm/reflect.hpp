#pragma once

#include <iosfwd>
#include <optional>

#include "rbm/geometry.hpp"
#include "rbm/noise.hpp"

namespace rbm {

struct ReflectedPath {
  PathGrid grid;
  std::vector<Point> positions;     // n+1
  std::vector<double> localTime;    // n+1, cumulative, non-decreasing
  std::vector<char> boundaryFlags;  // n+1, within epsBd of the boundary
  double epsBd = 0.0;
};

struct StepResult {
  Point position;
  double localTimeIncrement = 0.0;
  bool corner = false;  // projection landed on a wedge/polygon vertex
};

// One Euler step with Euclidean projection onto the closure; the push
// magnitude |q - p| is the local time increment.
StepResult step_reflect(const DomainSpec& d, Point x, Point db);

ReflectedPath simulate_reflected(const DomainSpec& d, Point x0, const IncrementStream& noise,
                                 double epsBd);

// Synchronous coupling: every member consumes the same increments.
struct FlowState {
  DomainSpec domain;
  std::vector<Point> starts;
  std::vector<ReflectedPath> members;
};
FlowState simulate_flow(const DomainSpec& d, std::span<const Point> starts,
                        const IncrementStream& noise, double epsBd);

// Smallest step index at which every member sits within epsBd of the boundary.
std::optional<std::size_t> detect_simultaneous_boundary(const FlowState& flow, double epsBd);

// Regression slope of log max-oscillation against log window length over
// dyadic windows; a modulus-of-continuity exponent estimate.
double holder_exponent_estimate(std::span<const double> localTime, double dt);

void write_csv(const ReflectedPath& path, std::ostream& os);

}  // namespace rbm
