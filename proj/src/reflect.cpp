#include "rbm/reflect.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace rbm {

StepResult step_reflect(const DomainSpec& d, Point x, Point db) {
  if (signed_boundary_distance(d, x) < -1e-9)
    raise(Errc::StartOutsideDomain, "step from outside the closure");
  Point p = x + db;
  if (signed_boundary_distance(d, p) >= 0.0) return {p, 0.0, false};
  Projection proj = project_to_closure(d, p);
  return {proj.point, dist(proj.point, p), proj.corner};
}

ReflectedPath simulate_reflected(const DomainSpec& d, Point x0, const IncrementStream& noise,
                                 double epsBd) {
  if (noise.grid.dim != 2) raise(Errc::GridMismatch, "planar simulation needs a 2-d stream");
  const std::size_t n = noise.grid.n;
  ReflectedPath out;
  out.grid = noise.grid;
  out.epsBd = epsBd;
  out.positions.resize(n + 1);
  out.localTime.resize(n + 1);
  out.boundaryFlags.resize(n + 1);
  if (signed_boundary_distance(d, x0) < -1e-9)
    raise(Errc::StartOutsideDomain, "start outside the closure");
  out.positions[0] = x0;
  out.localTime[0] = 0.0;
  out.boundaryFlags[0] = signed_boundary_distance(d, x0) <= epsBd;
  for (std::size_t k = 0; k < n; ++k) {
    StepResult s = step_reflect(d, out.positions[k], {noise.at(k, 0), noise.at(k, 1)});
    out.positions[k + 1] = s.position;
    out.localTime[k + 1] = out.localTime[k] + s.localTimeIncrement;
    out.boundaryFlags[k + 1] = signed_boundary_distance(d, s.position) <= epsBd;
  }
  return out;
}

FlowState simulate_flow(const DomainSpec& d, std::span<const Point> starts,
                        const IncrementStream& noise, double epsBd) {
  if (starts.empty()) raise(Errc::RangeError, "flow needs at least one start");
  FlowState flow;
  flow.domain = d;
  flow.starts.assign(starts.begin(), starts.end());
  flow.members.reserve(starts.size());
  for (Point s : starts) flow.members.push_back(simulate_reflected(d, s, noise, epsBd));
  return flow;
}

std::optional<std::size_t> detect_simultaneous_boundary(const FlowState& flow, double epsBd) {
  if (flow.members.empty()) raise(Errc::RangeError, "empty flow");
  const std::size_t len = flow.members.front().positions.size();
  for (std::size_t k = 0; k < len; ++k) {
    bool all = true;
    for (const auto& m : flow.members) {
      if (signed_boundary_distance(flow.domain, m.positions[k]) > epsBd) {
        all = false;
        break;
      }
    }
    if (all) return k;
  }
  return std::nullopt;
}

double holder_exponent_estimate(std::span<const double> localTime, double dt) {
  const std::size_t m = localTime.size();
  if (m < 10001) raise(Errc::RangeError, "need at least 1e4 samples");
  if (!(localTime.back() - localTime.front() > 0.0))
    raise(Errc::DegenerateInput, "constant local time");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t cnt = 0;
  // Window range: above the single-push floor, and small enough relative to
  // the horizon that the running maximum samples many independent windows.
  for (std::size_t w = 16; w <= (m - 1) / 64; w *= 2) {
    double maxOsc = 0.0;
    for (std::size_t i = 0; i + w < m; ++i)
      maxOsc = std::max(maxOsc, localTime[i + w] - localTime[i]);
    if (maxOsc <= 0.0) continue;
    double x = std::log(static_cast<double>(w) * dt);
    double y = std::log(maxOsc);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++cnt;
  }
  if (cnt < 3) raise(Errc::DegenerateInput, "not enough usable windows");
  double nn = static_cast<double>(cnt);
  return (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
}

void write_csv(const ReflectedPath& path, std::ostream& os) {
  os << "t,x,y,L,onBoundary\n";
  char buf[160];
  for (std::size_t k = 0; k < path.positions.size(); ++k) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%d\n",
                  path.grid.dt * static_cast<double>(k), path.positions[k].x, path.positions[k].y,
                  path.localTime[k], path.boundaryFlags[k] ? 1 : 0);
    os << buf;
  }
}

}  // namespace rbm
