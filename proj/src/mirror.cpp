#include "rbm/mirror.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "rbm/reflect.hpp"

namespace rbm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double angle_gap(double a, double b) {
  double d = std::fabs(normalize_line_angle(a) - normalize_line_angle(b));
  return std::min(d, kPi - d);
}

// Isometry between the plane and the canonical upper half-plane with the
// hinge at the origin and the guide line on the real axis.
struct Chart {
  Complex shift;
  Complex rot;  // e^{i * guide angle}
  bool flip = false;

  Complex to(Point p) const {
    Complex w = (to_complex(p) - shift) * std::conj(rot);
    return flip ? std::conj(w) : w;
  }
  Point from(Complex w) const {
    if (flip) w = std::conj(w);
    return to_point(shift + w * rot);
  }
  double lineAngle(double canonicalAngle) const {
    double a = flip ? -canonicalAngle : canonicalAngle;
    return normalize_line_angle(std::arg(rot) + a);
  }
};

Chart make_chart(const Line& guide, const UnitVector& inward, Point hingeP) {
  Chart c;
  c.shift = to_complex(hingeP);
  c.rot = {std::cos(guide.angle), std::sin(guide.angle)};
  Complex nin = Complex{inward.ux, inward.uy} * std::conj(c.rot);
  c.flip = nin.imag() < 0.0;
  return c;
}

struct SegState {
  Chart chart;
  Point hingeP;
  double wx = 0.0, wy = 0.0;  // underlying planar point for the radial process
  double Rprev = 0.0;
  double thx = 0.0, thy = 0.0;
  std::uint64_t j = 0;  // local draw counter
};

void alloc_arrays(MirrorTrajectory& tr, std::size_t n) {
  tr.X.resize(n + 1);
  tr.Y.resize(n + 1);
  tr.Lx.assign(n + 1, 0.0);
  tr.Ly.assign(n + 1, 0.0);
  tr.mirror.assign(n + 1, std::nullopt);
  tr.hinge.assign(n + 1, std::nullopt);
  tr.beta.assign(n + 1, kNaN);
  tr.pushLowX.assign(n, 0.0);
  tr.pushHighX.assign(n, 0.0);
  tr.pushLowY.assign(n, 0.0);
  tr.pushHighY.assign(n, 0.0);
  tr.phaseId.assign(n + 1, 0);
}

void truncate_arrays(MirrorTrajectory& tr, std::size_t last) {
  tr.X.resize(last + 1);
  tr.Y.resize(last + 1);
  tr.Lx.resize(last + 1);
  tr.Ly.resize(last + 1);
  tr.mirror.resize(last + 1);
  tr.hinge.resize(last + 1);
  tr.beta.resize(last + 1);
  tr.pushLowX.resize(last);
  tr.pushHighX.resize(last);
  tr.pushLowY.resize(last);
  tr.pushHighY.resize(last);
  tr.phaseId.resize(last + 1);
  tr.grid.n = last;
}

// One grid step of the coupled half-plane construction, recorded at s+1.
// Returns true when the pair couples at this step.
bool halfplane_step(MirrorTrajectory& tr, const NormalSource& rsrc, const NormalSource& tsrc,
                    SegState& st, std::size_t s, bool coupled, double dt, int phase) {
  const double sdt = std::sqrt(dt);
  const double dbx = rsrc.normal(2 * st.j) * sdt;
  const double dby = rsrc.normal(2 * st.j + 1) * sdt;
  const double z = tsrc.normal(st.j);
  ++st.j;

  st.wx += dbx;
  st.wy += dby;
  const double Rnew = std::hypot(st.wx, st.wy);
  const double dsig = dt / (st.Rprev * st.Rprev);
  const double sq = std::sqrt(dsig);
  const double inc = z * sq;

  double plx = 0, phx = 0, ply = 0, phy = 0;
  bool justCoupled = false;
  if (!coupled) {
    const double d0 = st.thx - st.thy;
    double fx = fold_step(st.thx + inc, plx, phx);
    double fy = fold_step(st.thy - inc, ply, phy);
    const double d1 = fx - fy;
    if (std::fabs(d1) <= 2.0 * sq || (d0 != 0.0 && (d0 > 0.0) != (d1 > 0.0))) {
      justCoupled = true;
      fy = fx;
    }
    st.thx = fx;
    st.thy = fy;
  } else {
    double fx = fold_step(st.thx + inc, plx, phx);
    st.thx = fx;
    st.thy = fx;
    ply = plx;
    phy = phx;
  }
  st.Rprev = Rnew;

  tr.Lx[s + 1] = tr.Lx[s] + Rnew * (plx + phx);
  tr.Ly[s + 1] = tr.Ly[s] + Rnew * (ply + phy);
  tr.pushLowX[s] = plx;
  tr.pushHighX[s] = phx;
  tr.pushLowY[s] = ply;
  tr.pushHighY[s] = phy;

  tr.X[s + 1] = st.chart.from(std::polar(Rnew, st.thx));
  tr.Y[s + 1] = st.chart.from(std::polar(Rnew, st.thy));
  const bool nowCoupled = coupled || justCoupled;
  if (!nowCoupled) {
    const double bc = 0.5 * (st.thx + st.thy);
    tr.mirror[s + 1] = Line{st.hingeP, st.chart.lineAngle(bc)};
    tr.beta[s + 1] = bc;
  }
  tr.hinge[s + 1] = st.hingeP;
  tr.phaseId[s + 1] = phase;
  return justCoupled;
}

// Band membership for phase switching: within epsBd of an edge, or outside
// the closure entirely (a free step can overshoot the band).
int banded_edge(const DomainSpec& d, Point p, double eps) {
  if (signed_boundary_distance(d, p) > eps) return -1;
  return nearest_boundary_point(d, p).edge;
}

SegState open_segment(const Line& guide, const UnitVector& inward, Point hingeP, Point x, Point y,
                      double tol) {
  Chart chart = make_chart(guide, inward, hingeP);
  Complex xc = chart.to(x);
  Complex yc = chart.to(y);
  const double rx = std::abs(xc);
  const double ry = std::abs(yc);
  if (std::fabs(rx - ry) > tol * std::max(1.0, std::max(rx, ry)))
    raise(Errc::AsymmetricStart, "starts at different distances from the hinge");
  double junkL = 0, junkH = 0;
  SegState st;
  st.chart = chart;
  st.hingeP = hingeP;
  const double r = 0.5 * (rx + ry);
  st.wx = r;
  st.wy = 0.0;
  st.Rprev = r;
  st.thx = fold_step(std::arg(xc), junkL, junkH);
  st.thy = fold_step(std::arg(yc), junkL, junkH);
  return st;
}

void record_segment_start(MirrorTrajectory& tr, const SegState& st, std::size_t s, int phase) {
  tr.X[s] = st.chart.from(std::polar(st.Rprev, st.thx));
  tr.Y[s] = st.chart.from(std::polar(st.Rprev, st.thy));
  const double bc = 0.5 * (st.thx + st.thy);
  tr.mirror[s] = Line{st.hingeP, st.chart.lineAngle(bc)};
  tr.beta[s] = bc;
  tr.hinge[s] = st.hingeP;
  tr.phaseId[s] = phase;
}

}  // namespace

const char* phase_end_name(PhaseEnd e) {
  switch (e) {
    case PhaseEnd::NextPhase: return "nextPhase";
    case PhaseEnd::BothOnBoundary: return "bothOnBoundary";
    case PhaseEnd::Coupled: return "coupled";
    case PhaseEnd::HorizonEnd: return "horizonEnd";
    case PhaseEnd::PhaseCap: return "phaseCap";
    case PhaseEnd::Accumulation: return "accumulation";
    case PhaseEnd::DegenerateMirror: return "degenerateMirror";
  }
  return "unknown";
}

MirrorTrajectory simulate_plane_mirror(Point x, Point y, const IncrementStream& noise) {
  if (noise.grid.dim != 2) raise(Errc::GridMismatch, "plane coupling needs a 2-d stream");
  Line M = mirror_line(x, y);  // CoincidentPoints on x == y
  const std::size_t n = noise.grid.n;
  MirrorTrajectory tr;
  tr.grid = noise.grid;
  alloc_arrays(tr, n);

  tr.X[0] = x;
  tr.Y[0] = y;
  tr.mirror[0] = M;
  const double s0 = line_signed_distance(M, x);
  const double crossTol = std::sqrt(noise.grid.dt) * 1e-3;
  bool coupled = false;
  for (std::size_t k = 0; k < n; ++k) {
    Point xn = tr.X[k] + Point{noise.at(k, 0), noise.at(k, 1)};
    tr.X[k + 1] = xn;
    if (!coupled) {
      double sd = line_signed_distance(M, xn);
      if (std::fabs(sd) <= crossTol || (sd > 0.0) != (s0 > 0.0)) {
        coupled = true;
        tr.coupledAt = k + 1;
      }
    }
    tr.Y[k + 1] = coupled ? xn : reflect_across(M, xn);
    if (!coupled) tr.mirror[k + 1] = M;
  }
  MirrorPhase ph;
  ph.kind = PhaseKind::FreePlane;
  ph.startIndex = 0;
  ph.endIndex = n;
  ph.endReason = coupled ? PhaseEnd::Coupled : PhaseEnd::HorizonEnd;
  tr.phases.push_back(ph);
  return tr;
}

MirrorTrajectory simulate_halfplane_mirror(const DomainSpec& hp, Point x, Point y,
                                           const SeedSpec& seed, const PathGrid& grid) {
  const auto* H = std::get_if<HalfPlane>(&hp);
  if (!H) raise(Errc::WrongDomain, "needs a half-plane domain");
  validate_domain(hp);
  if (signed_boundary_distance(hp, x) < -1e-9 || signed_boundary_distance(hp, y) < -1e-9)
    raise(Errc::StartOutsideDomain, "starts must lie in the closed half-plane");
  Line M = mirror_line(x, y);
  if (angle_gap(M.angle, H->boundary.angle) <= 1e-12)
    raise(Errc::MirrorParallelBoundary, "mirror parallel to the boundary");
  Point hingeP = intersect(M, H->boundary);

  MirrorTrajectory tr;
  tr.grid = grid;
  tr.grid.dim = 2;
  tr.domain = hp;
  const std::size_t n = grid.n;
  alloc_arrays(tr, n);

  SegState st = open_segment(H->boundary, H->inward, hingeP, x, y, 1e-9);
  record_segment_start(tr, st, 0, 0);

  NormalSource rsrc(SeedSpec{seed.masterSeed, seed.trialIndex, seed.streamLabel});
  NormalSource tsrc(SeedSpec{seed.masterSeed, seed.trialIndex, seed.streamLabel + 1});
  bool coupled = false;
  for (std::size_t k = 0; k < n; ++k) {
    if (halfplane_step(tr, rsrc, tsrc, st, k, coupled, grid.dt, 0)) {
      coupled = true;
      tr.coupledAt = k + 1;
    }
  }
  MirrorPhase ph;
  ph.kind = PhaseKind::HalfPlaneEdge;
  ph.startIndex = 0;
  ph.endIndex = n;
  ph.edge = 0;
  ph.guide = H->boundary;
  ph.flipped = st.chart.flip;
  ph.endReason = coupled ? PhaseEnd::Coupled : PhaseEnd::HorizonEnd;
  tr.phases.push_back(ph);
  return tr;
}

MirrorTrajectory simulate_polygon_mirror(const DomainSpec& d, Point x, Point y,
                                         const SeedSpec& seed, const PathGrid& grid,
                                         std::size_t kMax, double epsBd) {
  if (!std::holds_alternative<Wedge>(d) && !std::holds_alternative<ConvexPolygon>(d))
    raise(Errc::WrongDomain, "needs a wedge or convex polygon");
  validate_domain(d);
  if (signed_boundary_distance(d, x) < -1e-9 || signed_boundary_distance(d, y) < -1e-9)
    raise(Errc::StartOutsideDomain, "starts outside the closure");
  if (signed_boundary_distance(d, x) <= 1e-12 || signed_boundary_distance(d, y) <= 1e-12)
    raise(Errc::StartOnBoundary, "starts must be interior");
  if (dist(x, y) <= 1e-12) raise(Errc::CoincidentPoints, "starts coincide");
  if (kMax < 1) raise(Errc::RangeError, "kMax must be positive");

  const std::size_t n = grid.n;
  const double dt = grid.dt;
  const double sdt = std::sqrt(dt);
  MirrorTrajectory tr;
  tr.grid = grid;
  tr.grid.dim = 2;
  tr.domain = d;
  alloc_arrays(tr, n);

  auto stream_for = [&seed](std::uint32_t offset) {
    return NormalSource(SeedSpec{seed.masterSeed, seed.trialIndex, seed.streamLabel + offset});
  };

  std::size_t s = 0;
  bool done = false;
  bool coupled = false;

  auto open_phase = [&tr](PhaseKind kind, std::size_t start, int edge) {
    MirrorPhase ph;
    ph.kind = kind;
    ph.startIndex = start;
    ph.endIndex = start;
    ph.edge = edge;
    tr.phases.push_back(ph);
    return tr.phases.size() - 1;
  };
  auto close_phase = [&tr](std::size_t idx, std::size_t end, PhaseEnd why) {
    tr.phases[idx].endIndex = end;
    tr.phases[idx].endReason = why;
  };

  // Free-plane phase.
  std::size_t cur = open_phase(PhaseKind::FreePlane, 0, -1);
  tr.X[0] = x;
  tr.Y[0] = y;
  Line M0 = mirror_line(x, y);
  tr.mirror[0] = M0;
  tr.phaseId[0] = 0;

  // Starts already in a band count as an immediate hitting index.
  {
    int bx0 = banded_edge(d, x, epsBd);
    int by0 = banded_edge(d, y, epsBd);
    if (bx0 >= 0 && by0 >= 0) {
      close_phase(cur, 0, PhaseEnd::BothOnBoundary);
      done = true;
    } else if (bx0 >= 0 || by0 >= 0) {
      close_phase(cur, 0, PhaseEnd::NextPhase);
      cur = open_phase(PhaseKind::HalfPlaneEdge, 0, bx0 >= 0 ? bx0 : by0);
    }
  }

  if (!done && tr.phases[cur].kind == PhaseKind::FreePlane) {
    NormalSource fsrc = stream_for(2);
    const double s0 = line_signed_distance(M0, x);
    const double crossTol = sdt * 1e-3;
    std::uint64_t j = 0;
    bool moved = false;
    while (s < n) {
      Point xn = tr.X[s] + Point{fsrc.normal(2 * j) * sdt, fsrc.normal(2 * j + 1) * sdt};
      ++j;
      double sd = line_signed_distance(M0, xn);
      bool justCoupled = std::fabs(sd) <= crossTol || (sd > 0.0) != (s0 > 0.0);
      tr.X[s + 1] = xn;
      tr.Y[s + 1] = justCoupled ? xn : reflect_across(M0, xn);
      if (!justCoupled) tr.mirror[s + 1] = M0;
      tr.Lx[s + 1] = tr.Lx[s];
      tr.Ly[s + 1] = tr.Ly[s];
      tr.phaseId[s + 1] = static_cast<int>(cur);
      ++s;
      if (justCoupled) {
        coupled = true;
        tr.coupledAt = s;
        close_phase(cur, s, PhaseEnd::Coupled);
        break;
      }
      int bx = banded_edge(d, tr.X[s], epsBd);
      int by = banded_edge(d, tr.Y[s], epsBd);
      if (bx >= 0 && by >= 0) {
        close_phase(cur, s, PhaseEnd::BothOnBoundary);
        done = true;
        break;
      }
      if (bx >= 0 || by >= 0) {
        close_phase(cur, s, PhaseEnd::NextPhase);
        cur = open_phase(PhaseKind::HalfPlaneEdge, s, bx >= 0 ? bx : by);
        moved = true;
        break;
      }
    }
    if (!done && !coupled && !moved && s >= n) {
      close_phase(cur, s, PhaseEnd::HorizonEnd);
      done = true;
    }
  }

  // Half-plane phases.
  while (!done && !coupled && s < n && tr.phases[cur].kind == PhaseKind::HalfPlaneEdge) {
    const int edge = tr.phases[cur].edge;
    const Line guide = edge_line(d, edge);
    tr.phases[cur].guide = guide;
    UnitVector inward = edge_inward_normal(d, edge);
    Line M = mirror_line(tr.X[s], tr.Y[s]);
    if (angle_gap(M.angle, guide.angle) <= 1e-12) {
      close_phase(cur, s, PhaseEnd::DegenerateMirror);
      done = true;
      break;
    }
    Point hingeP = intersect(M, guide);
    SegState st = open_segment(guide, inward, hingeP, tr.X[s], tr.Y[s], 1e-6);
    tr.phases[cur].flipped = st.chart.flip;
    record_segment_start(tr, st, s, static_cast<int>(cur));

    const std::uint32_t base = 2 + 2 * static_cast<std::uint32_t>(cur);
    NormalSource rsrc = stream_for(base);
    NormalSource tsrc = stream_for(base + 1);

    bool advanced = false;
    while (s < n) {
      bool justCoupled = halfplane_step(tr, rsrc, tsrc, st, s, false, dt, static_cast<int>(cur));
      ++s;
      if (justCoupled) {
        coupled = true;
        tr.coupledAt = s;
        close_phase(cur, s, PhaseEnd::Coupled);
        break;
      }
      int bx = banded_edge(d, tr.X[s], epsBd);
      int by = banded_edge(d, tr.Y[s], epsBd);
      if (bx >= 0 && by >= 0) {
        close_phase(cur, s, PhaseEnd::BothOnBoundary);
        done = true;
        break;
      }
      int next = -1;
      if (bx >= 0 && bx != edge) next = bx;
      else if (by >= 0 && by != edge) next = by;
      if (next >= 0) {
        if (s - tr.phases[cur].startIndex < 2) {
          close_phase(cur, s, PhaseEnd::Accumulation);
          done = true;
        } else if (tr.phases.size() >= kMax) {
          close_phase(cur, s, PhaseEnd::PhaseCap);
          done = true;
        } else {
          close_phase(cur, s, PhaseEnd::NextPhase);
          cur = open_phase(PhaseKind::HalfPlaneEdge, s, next);
          advanced = true;
        }
        break;
      }
    }
    if (!done && !coupled && !advanced && s >= n) {
      close_phase(cur, s, PhaseEnd::HorizonEnd);
      done = true;
    }
  }

  // Coupled tail: one reflected path carries both labels to the horizon.
  if (coupled && s < n) {
    NormalSource tailsrc = stream_for(1);
    std::uint64_t j = 0;
    const int phaseIdx = static_cast<int>(tr.phases.size()) - 1;
    while (s < n) {
      StepResult r = step_reflect(d, tr.X[s],
                                  {tailsrc.normal(2 * j) * sdt, tailsrc.normal(2 * j + 1) * sdt});
      ++j;
      tr.X[s + 1] = r.position;
      tr.Y[s + 1] = r.position;
      tr.Lx[s + 1] = tr.Lx[s] + r.localTimeIncrement;
      tr.Ly[s + 1] = tr.Ly[s] + r.localTimeIncrement;
      tr.phaseId[s + 1] = phaseIdx;
      ++s;
    }
  }

  truncate_arrays(tr, s);
  return tr;
}

Theorem3Event detect_theorem3_event(const MirrorTrajectory& tr, double alpha, double epsBd,
                                    double delta) {
  if (!tr.domain || !std::holds_alternative<Wedge>(*tr.domain))
    raise(Errc::WrongDomain, "trajectory was not simulated in a wedge");
  if (std::fabs(std::get<Wedge>(*tr.domain).alpha - alpha) > 1e-12)
    raise(Errc::WrongDomain, "wedge angle mismatch");
  const DomainSpec& d = *tr.domain;
  Theorem3Event ev;
  const std::size_t len = tr.X.size();
  for (std::size_t k = 0; k < len; ++k) {
    if (tr.coupledAt && k >= *tr.coupledAt) break;
    const Point X = tr.X[k];
    const Point Y = tr.Y[k];
    const double aX = edge_distance(d, 0, X), aY = edge_distance(d, 1, Y);
    const double bX = edge_distance(d, 1, X), bY = edge_distance(d, 0, Y);
    const bool caseA = aX <= epsBd && aY <= epsBd;
    const bool caseB = bX <= epsBd && bY <= epsBd;
    if (!caseA && !caseB) continue;
    const double gap = std::fabs(norm(X) - norm(Y));
    if (gap <= delta) continue;
    if (dist(X, Y) <= delta) continue;
    if (!tr.mirror[k]) continue;
    if (std::fabs(line_signed_distance(*tr.mirror[k], {0.0, 0.0})) <= delta) continue;
    ev.occurred = true;
    ev.stepIndex = k;
    if (caseA) {
      ev.xEdgeDist = aX;
      ev.yEdgeDist = aY;
    } else {
      ev.xEdgeDist = bY;
      ev.yEdgeDist = bX;
    }
    ev.radialGap = gap;
    return ev;
  }
  if (!tr.X.empty()) {
    const std::size_t k = len - 1;
    ev.xEdgeDist = edge_distance(d, 0, tr.X[k]);
    ev.yEdgeDist = edge_distance(d, 1, tr.Y[k]);
    ev.radialGap = std::fabs(norm(tr.X[k]) - norm(tr.Y[k]));
  }
  return ev;
}

WedgePair wedge_event_pair(double alpha, double hinge, double beta0, double height) {
  if (!(alpha > 0.0 && alpha < kPi / 2.0)) raise(Errc::ParameterOutOfRange, "alpha outside (0, pi/2)");
  if (!(hinge > 0.0)) raise(Errc::ParameterOutOfRange, "hinge must be positive");
  if (!(beta0 > alpha && beta0 < kPi / 4.0 + alpha / 2.0))
    raise(Errc::ParameterOutOfRange, "beta0 outside (alpha, pi/4 + alpha/2)");
  if (!(height > 0.0)) raise(Errc::ParameterOutOfRange, "height must be positive");
  const double A = hinge * (1.0 + std::sin(alpha) / std::sin(2.0 * beta0 - alpha));
  Point x{A, height};
  Point y = reflect_across(Line{{hinge, 0.0}, beta0}, x);
  return {x, y};
}

void write_csv(const MirrorTrajectory& tr, std::ostream& os) {
  os << "t,Xx,Xy,Yx,Yy,Lx,Ly,hingeX,hingeY,beta,phaseId\n";
  char buf[360];
  for (std::size_t k = 0; k < tr.X.size(); ++k) {
    const double hx = tr.hinge[k] ? tr.hinge[k]->x : kNaN;
    const double hy = tr.hinge[k] ? tr.hinge[k]->y : kNaN;
    std::snprintf(buf, sizeof(buf),
                  "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n",
                  tr.grid.dt * static_cast<double>(k), tr.X[k].x, tr.X[k].y, tr.Y[k].x, tr.Y[k].y,
                  tr.Lx[k], tr.Ly[k], hx, hy, tr.beta[k], tr.phaseId[k]);
    os << buf;
  }
}

}  // namespace rbm
