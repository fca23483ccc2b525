#pragma once

#include <iosfwd>
#include <optional>

#include "rbm/geometry.hpp"
#include "rbm/noise.hpp"

namespace rbm {

enum class PhaseKind { FreePlane, HalfPlaneEdge };

enum class PhaseEnd {
  NextPhase,
  BothOnBoundary,
  Coupled,
  HorizonEnd,
  PhaseCap,
  Accumulation,
  DegenerateMirror,
};

const char* phase_end_name(PhaseEnd e);

struct MirrorPhase {
  PhaseKind kind = PhaseKind::FreePlane;
  std::size_t startIndex = 0;
  std::size_t endIndex = 0;  // last recorded index of the phase
  int edge = -1;             // active edge for HalfPlaneEdge
  Line guide;                // line carrying the active edge
  bool flipped = false;      // canonical chart conjugates
  PhaseEnd endReason = PhaseEnd::HorizonEnd;
};

struct MirrorTrajectory {
  PathGrid grid;  // grid.n equals the number of recorded steps
  std::optional<DomainSpec> domain;
  std::vector<Point> X, Y;                  // n+1 entries
  std::vector<double> Lx, Ly;               // n+1, cumulative boundary local time
  std::vector<std::optional<Line>> mirror;  // n+1, set while X != Y
  std::vector<std::optional<Point>> hinge;  // n+1, set in half-plane phases
  std::vector<double> beta;                 // n+1, canonical mirror angle vs the active line (NaN if undefined)
  // Per-step angular fold magnitudes at the two canonical walls (n entries).
  std::vector<double> pushLowX, pushHighX, pushLowY, pushHighY;
  std::vector<int> phaseId;  // n+1
  std::vector<MirrorPhase> phases;
  std::optional<std::size_t> coupledAt;
};

// Whole-plane coupling: X is the free path, Y its image across the fixed
// perpendicular bisector until the first crossing, then Y = X.
MirrorTrajectory simulate_plane_mirror(Point x, Point y, const IncrementStream& noise);

// Half-plane coupling via the radial/angular construction run directly on
// the clock increments. Starts must be at a common distance from the hinge
// within 1e-9 (the pair is symmetrized to that radius). Consumes stream
// labels seed.streamLabel (radial) and seed.streamLabel+1 (angular).
MirrorTrajectory simulate_halfplane_mirror(const DomainSpec& hp, Point x, Point y,
                                           const SeedSpec& seed, const PathGrid& grid);

// Phase machine over a wedge/convex polygon: free-plane coupling until a
// band entry, then half-plane couplings per active edge. Terminates when
// both paths sit in boundary bands, on coupling (continues as one reflected
// path), on phase-count/accumulation caps, or at the horizon.
MirrorTrajectory simulate_polygon_mirror(const DomainSpec& d, Point x, Point y,
                                         const SeedSpec& seed, const PathGrid& grid,
                                         std::size_t kMax, double epsBd);

struct Theorem3Event {
  bool occurred = false;
  std::optional<std::size_t> stepIndex;
  double xEdgeDist = 0.0;
  double yEdgeDist = 0.0;
  double radialGap = 0.0;
};

// First index with the pair in bands of the two distinct wedge edges, radial
// gap and pair separation above delta, and the mirror line at least delta
// from the origin.
Theorem3Event detect_theorem3_event(const MirrorTrajectory& tr, double alpha, double epsBd,
                                    double delta);

struct WedgePair {
  Point x, y;
};
// Start pair for the wedge experiment: x sits `height` above the E_X vertex
// image of the frame (alpha, hinge, beta0); y is its mirror image.
WedgePair wedge_event_pair(double alpha, double hinge, double beta0, double height);

void write_csv(const MirrorTrajectory& tr, std::ostream& os);

}  // namespace rbm
