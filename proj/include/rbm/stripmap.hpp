#pragma once

#include <optional>

#include "rbm/geometry.hpp"
#include "rbm/mirror.hpp"

namespace rbm {

// Analytic frame of a tilted mirror over the wedge: the mirror through
// (H, 0) at inclination beta determines H' on the other edge line and the
// reflected-edge intersections A (on the first edge) and A' (on the other).
struct WedgeMirrorFrame {
  double alpha = 0.0;
  double H = 0.0;
  double beta = 0.0;
  double gamma = 0.0;  // beta - alpha
  double A = 0.0;
  double HprimeAbs = 0.0;
  double AprimeAbs = 0.0;
  Point Hprime{};
  Point Aprime{};
};

// Requires 0 < alpha < pi/2, H > 0, alpha < beta <= pi/4 + alpha/2 (the
// upper endpoint is admissible: the wedge of the log map degenerates only
// beyond it).
WedgeMirrorFrame build_frame(double alpha, double H, double beta);
// Same frame parametrized from the other edge: |H'| and gamma fixed.
WedgeMirrorFrame build_frame_from_eY(double alpha, double HprimeAbs, double gamma);

// Closed wedge with vertex A whose sides pass through H and H'.
bool in_wedge_W(const WedgeMirrorFrame& fr, Complex z);
// Closed wedge with vertex A' whose sides pass through H and H'.
bool in_wedge_Wprime(const WedgeMirrorFrame& fr, Complex z);

// Logarithmic maps onto the strip {0 <= Im <= pi}.
Complex eval_f(const WedgeMirrorFrame& fr, Complex z);  // OutsideWedgeW / VertexSingularity
Complex eval_g(const WedgeMirrorFrame& fr, Complex z);  // OutsideWedgeWprime / VertexSingularity

// |g(z) - f(S(z))| where S reflects across the mirror line of the frame.
double symmetry_residual(const WedgeMirrorFrame& fr, Complex z);

double dfdbeta(const WedgeMirrorFrame& fr, double r);       // H < r < A
double dfdtheta_abs(const WedgeMirrorFrame& fr, double r);  // arc-length normal derivative
double dgdgamma(const WedgeMirrorFrame& fr, double r);      // |A'| < r < |H'|
double dgdtheta_abs(const WedgeMirrorFrame& fr, double r);

// Per-step frames reconstructed from the recorded mirror lines; steps with
// no mirror or an inadmissible inclination give nullopt.
std::vector<std::optional<WedgeMirrorFrame>> frames_along(const MirrorTrajectory& tr, double alpha);

struct StripProcess {
  std::vector<std::optional<Complex>> z;    // strip point per step
  std::vector<double> rhoTilde;             // cumulative conformal clock
  std::vector<double> consistencyResidual;  // |g(frame, Y) - f(frame, X)|, NaN where skipped
  std::size_t evaluated = 0;
  std::size_t skipped = 0;
};
StripProcess strip_process(const MirrorTrajectory& tr,
                           std::span<const std::optional<WedgeMirrorFrame>> frames);

struct DriftReport {
  std::size_t pushSteps = 0;      // steps with a positive local time increment
  std::size_t checked = 0;        // steps entering the mirror-rotation identity check
  std::size_t offSide = 0;        // pushes at the unexpected canonical wall
  std::size_t outOfRange = 0;     // window or radius filters
  double maxBetaResidual = 0.0;   // identity residual over checked steps
  std::size_t ratioChecked = 0;
  std::size_t ratioNonPositive = 0;
  std::size_t ratioFirstEdge = 0;   // pushes on the unflipped (first-edge) chart
  std::size_t ratioSecondEdge = 0;  // pushes on the conjugated chart
  double ratioMin = 0.0;
  double ratioMax = 0.0;
  double fracNonPositive() const {
    return ratioChecked == 0 ? 0.0 : static_cast<double>(ratioNonPositive) / static_cast<double>(ratioChecked);
  }
};
// Verifies the push-to-rotation identity on every in-window push step and
// reports the oblique-reflection ratio dfdbeta / (|X-H| dfdtheta) (and the
// gamma analogue on the other edge).
DriftReport drift_bound_check(const MirrorTrajectory& tr,
                              std::span<const std::optional<WedgeMirrorFrame>> frames,
                              double betaLo, double betaHi);

}  // namespace rbm
