#include "rbm/stripmap.hpp"

#include <cmath>
#include <limits>

namespace rbm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kAngTol = 1e-9;

// Argument of z - vertex with points within rounding of the negative real
// side snapped onto the ray (a reflected path sits on an edge up to rounding).
double arg_from(Complex z, Complex vertex, double& absw) {
  Complex w = z - vertex;
  absw = std::abs(w);
  if (w.real() < 0.0 && std::fabs(w.imag()) <= 1e-13 * std::max(1.0, std::fabs(w.real())))
    return kPi;
  return std::arg(w);
}

}  // namespace

WedgeMirrorFrame build_frame(double alpha, double H, double beta) {
  if (!(alpha > 0.0 && alpha < kPi / 2.0))
    raise(Errc::ParameterOutOfRange, "alpha outside (0, pi/2)");
  if (!(H > 0.0)) raise(Errc::ParameterOutOfRange, "H must be positive");
  if (!(beta > alpha && beta <= kPi / 4.0 + alpha / 2.0 + 1e-15))
    raise(Errc::ParameterOutOfRange, "beta outside (alpha, pi/4 + alpha/2]");
  WedgeMirrorFrame fr;
  fr.alpha = alpha;
  fr.H = H;
  fr.beta = beta;
  fr.gamma = beta - alpha;
  fr.A = H * (1.0 + std::sin(alpha) / std::sin(2.0 * beta - alpha));
  fr.HprimeAbs = H * std::sin(beta) / std::sin(fr.gamma);
  fr.AprimeAbs = fr.HprimeAbs * (1.0 - std::sin(alpha) / std::sin(2.0 * fr.gamma + alpha));
  fr.Hprime = {fr.HprimeAbs * std::cos(alpha), fr.HprimeAbs * std::sin(alpha)};
  fr.Aprime = {fr.AprimeAbs * std::cos(alpha), fr.AprimeAbs * std::sin(alpha)};
  return fr;
}

WedgeMirrorFrame build_frame_from_eY(double alpha, double HprimeAbs, double gamma) {
  if (!(HprimeAbs > 0.0)) raise(Errc::ParameterOutOfRange, "|H'| must be positive");
  if (!(gamma > 0.0)) raise(Errc::ParameterOutOfRange, "gamma must be positive");
  const double beta = gamma + alpha;
  const double H = HprimeAbs * std::sin(gamma) / std::sin(beta);
  return build_frame(alpha, H, beta);
}

bool in_wedge_W(const WedgeMirrorFrame& fr, Complex z) {
  double absw = 0.0;
  double ang = arg_from(z, {fr.A, 0.0}, absw);
  if (absw == 0.0) return true;  // the vertex belongs to the closed wedge
  return ang >= 2.0 * fr.beta - fr.alpha - kAngTol && ang <= kPi + kAngTol;
}

bool in_wedge_Wprime(const WedgeMirrorFrame& fr, Complex z) {
  double absw = 0.0;
  double ang = arg_from(z, to_complex(fr.Aprime), absw);
  if (absw == 0.0) return true;
  return ang >= 2.0 * fr.beta - kPi - kAngTol && ang <= fr.alpha + kAngTol;
}

Complex eval_f(const WedgeMirrorFrame& fr, Complex z) {
  if (!in_wedge_W(fr, z)) raise(Errc::OutsideWedgeW, "point outside the log-map wedge");
  double absw = 0.0;
  double ang = arg_from(z, {fr.A, 0.0}, absw);
  if (absw < 1e-14) raise(Errc::VertexSingularity, "point at the wedge vertex");
  const double scale = kPi / (kPi + fr.alpha - 2.0 * fr.beta);
  Complex lw{std::log(absw), ang};
  return (lw + Complex{0.0, fr.alpha - 2.0 * fr.beta}) * scale;
}

Complex eval_g(const WedgeMirrorFrame& fr, Complex z) {
  if (!in_wedge_Wprime(fr, z)) raise(Errc::OutsideWedgeWprime, "point outside the log-map wedge");
  double absw = 0.0;
  double ang = arg_from(z, to_complex(fr.Aprime), absw);
  if (absw < 1e-14) raise(Errc::VertexSingularity, "point at the wedge vertex");
  const double scale = kPi / (kPi - fr.alpha - 2.0 * fr.gamma);
  Complex lw{std::log(absw), ang};
  return std::conj((lw - Complex{0.0, fr.alpha}) * scale);
}

double symmetry_residual(const WedgeMirrorFrame& fr, Complex z) {
  Line mirror{{fr.H, 0.0}, fr.beta};
  Complex g = eval_g(fr, z);
  Complex f = eval_f(fr, to_complex(reflect_across(mirror, to_point(z))));
  return std::abs(g - f);
}

double dfdbeta(const WedgeMirrorFrame& fr, double r) {
  if (!(r > fr.H && r < fr.A)) raise(Errc::RangeError, "radius outside (H, A)");
  const double t = 2.0 * fr.beta - fr.alpha;
  const double den = kPi + fr.alpha - 2.0 * fr.beta;
  const double first =
      -2.0 * kPi * fr.H * std::sin(fr.alpha) * (std::cos(t) / std::sin(t)) / std::sin(t) /
      (den * (fr.A - r));
  const double second = 2.0 * kPi * std::log(fr.A - r) / (den * den);
  return first + second;
}

double dfdtheta_abs(const WedgeMirrorFrame& fr, double r) {
  if (!(r > fr.H && r < fr.A)) raise(Errc::RangeError, "radius outside (H, A)");
  return kPi / ((kPi + fr.alpha - 2.0 * fr.beta) * (fr.A - r));
}

double dgdgamma(const WedgeMirrorFrame& fr, double r) {
  if (!(r > fr.AprimeAbs && r < fr.HprimeAbs)) raise(Errc::RangeError, "radius outside (|A'|, |H'|)");
  const double t = 2.0 * fr.gamma + fr.alpha;
  const double den = kPi - fr.alpha - 2.0 * fr.gamma;
  const double first =
      -2.0 * kPi * fr.HprimeAbs * std::sin(fr.alpha) * (std::cos(t) / std::sin(t)) / std::sin(t) /
      (den * (r - fr.AprimeAbs));
  const double second = 2.0 * kPi * std::log(r - fr.AprimeAbs) / (den * den);
  return first + second;
}

double dgdtheta_abs(const WedgeMirrorFrame& fr, double r) {
  if (!(r > fr.AprimeAbs && r < fr.HprimeAbs)) raise(Errc::RangeError, "radius outside (|A'|, |H'|)");
  return kPi / ((kPi - fr.alpha - 2.0 * fr.gamma) * (r - fr.AprimeAbs));
}

std::vector<std::optional<WedgeMirrorFrame>> frames_along(const MirrorTrajectory& tr,
                                                          double alpha) {
  std::vector<std::optional<WedgeMirrorFrame>> out(tr.X.size());
  const Line eX{{0.0, 0.0}, 0.0};
  for (std::size_t k = 0; k < tr.X.size(); ++k) {
    if (!tr.mirror[k]) continue;
    const double beta = tr.mirror[k]->angle;
    if (!(beta > alpha + 1e-12 && beta <= kPi / 4.0 + alpha / 2.0)) continue;
    Point hx;
    try {
      hx = intersect(*tr.mirror[k], eX);
    } catch (const Error&) {
      continue;
    }
    if (!(hx.x > 0.0)) continue;
    try {
      out[k] = build_frame(alpha, hx.x, beta);
    } catch (const Error&) {
      continue;
    }
  }
  return out;
}

StripProcess strip_process(const MirrorTrajectory& tr,
                           std::span<const std::optional<WedgeMirrorFrame>> frames) {
  if (!tr.domain || !std::holds_alternative<Wedge>(*tr.domain))
    raise(Errc::WrongDomain, "trajectory was not simulated in a wedge");
  if (frames.size() != tr.X.size()) raise(Errc::GridMismatch, "frames/trajectory length mismatch");
  StripProcess sp;
  const std::size_t len = tr.X.size();
  sp.z.assign(len, std::nullopt);
  sp.rhoTilde.assign(len, 0.0);
  sp.consistencyResidual.assign(len, kNaN);
  for (std::size_t k = 0; k < len; ++k) {
    double density = 0.0;
    if (frames[k]) {
      const WedgeMirrorFrame& fr = *frames[k];
      Complex zx = to_complex(tr.X[k]);
      try {
        Complex zs = eval_f(fr, zx);
        sp.z[k] = zs;
        ++sp.evaluated;
        const double dFdz =
            kPi / ((kPi + fr.alpha - 2.0 * fr.beta) * std::abs(zx - Complex{fr.A, 0.0}));
        density = dFdz * dFdz;
        try {
          Complex zg = eval_g(fr, to_complex(tr.Y[k]));
          sp.consistencyResidual[k] = std::abs(zg - zs);
        } catch (const Error&) {
          // Y outside its wedge; residual stays NaN
        }
      } catch (const Error&) {
        ++sp.skipped;
      }
    }
    if (k + 1 < len) sp.rhoTilde[k + 1] = sp.rhoTilde[k] + density * tr.grid.dt;
  }
  return sp;
}

DriftReport drift_bound_check(const MirrorTrajectory& tr,
                              std::span<const std::optional<WedgeMirrorFrame>> frames,
                              double betaLo, double betaHi) {
  DriftReport rep;
  bool first = true;
  for (const MirrorPhase& ph : tr.phases) {
    if (ph.kind != PhaseKind::HalfPlaneEdge) continue;
    // Steps ending exactly at a phase hand-off are skipped: the shared index
    // is re-recorded in the next phase's canonical coordinates.
    std::size_t hi = ph.endIndex;
    if (ph.endReason == PhaseEnd::NextPhase && hi > ph.startIndex) --hi;
    for (std::size_t k = ph.startIndex; k < hi; ++k) {
      const double dLx = tr.Lx[k + 1] - tr.Lx[k];
      const double dLy = tr.Ly[k + 1] - tr.Ly[k];
      if (dLx <= 0.0 && dLy <= 0.0) continue;
      ++rep.pushSteps;
      const bool expectedLow = !ph.flipped;  // E_X-like charts push at the 0 wall
      const double offPush = expectedLow ? tr.pushHighX[k] + tr.pushHighY[k]
                                         : tr.pushLowX[k] + tr.pushLowY[k];
      if (offPush > 0.0) {
        ++rep.offSide;
        continue;
      }
      if (!frames[k] || !frames[k + 1] || !tr.hinge[k + 1]) {
        ++rep.outOfRange;
        continue;
      }
      const double betaIncl = frames[k]->beta;
      if (betaIncl < betaLo || betaIncl > betaHi) {
        ++rep.outOfRange;
        continue;
      }
      if (std::isnan(tr.beta[k]) || std::isnan(tr.beta[k + 1])) {
        ++rep.outOfRange;
        continue;
      }
      const double orient = ph.flipped ? -1.0 : 1.0;
      const double dBeta = orient * (tr.beta[k + 1] - tr.beta[k]);
      const Point hingeP = *tr.hinge[k + 1];
      const double R = dist(tr.X[k + 1], hingeP);
      const double residual = std::fabs(dBeta - (dLx + dLy) / (2.0 * R));
      rep.maxBetaResidual = std::max(rep.maxBetaResidual, residual);
      ++rep.checked;

      const WedgeMirrorFrame& fr = *frames[k];
      auto note_ratio = [&rep, &first, &ph](double ratio) {
        if (first) {
          rep.ratioMin = rep.ratioMax = ratio;
          first = false;
        } else {
          rep.ratioMin = std::min(rep.ratioMin, ratio);
          rep.ratioMax = std::max(rep.ratioMax, ratio);
        }
        ++rep.ratioChecked;
        if (ph.flipped) ++rep.ratioSecondEdge;
        else ++rep.ratioFirstEdge;
        if (ratio <= 0.0) ++rep.ratioNonPositive;
      };
      if (dLx > 0.0 && dLy <= 0.0) {
        const Point p = tr.X[k + 1];
        const double r = norm(p);
        if (!ph.flipped) {
          if (r > fr.H && r < fr.A)
            note_ratio(dfdbeta(fr, r) / (dist(p, {fr.H, 0.0}) * dfdtheta_abs(fr, r)));
          else
            ++rep.outOfRange;
        } else {
          if (r > fr.AprimeAbs && r < fr.HprimeAbs)
            note_ratio(dgdgamma(fr, r) / (dist(p, fr.Hprime) * dgdtheta_abs(fr, r)));
          else
            ++rep.outOfRange;
        }
      } else if (dLy > 0.0 && dLx <= 0.0) {
        const Point p = tr.Y[k + 1];
        const double r = norm(p);
        if (!ph.flipped) {
          if (r > fr.H && r < fr.A)
            note_ratio(dfdbeta(fr, r) / (dist(p, {fr.H, 0.0}) * dfdtheta_abs(fr, r)));
          else
            ++rep.outOfRange;
        } else {
          if (r > fr.AprimeAbs && r < fr.HprimeAbs)
            note_ratio(dgdgamma(fr, r) / (dist(p, fr.Hprime) * dgdtheta_abs(fr, r)));
          else
            ++rep.outOfRange;
        }
      }
      // simultaneous expected-side pushes of both paths: identity checked above,
      // no single-sided ratio to attribute
    }
  }
  return rep;
}

}  // namespace rbm
