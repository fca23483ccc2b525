#include "rbm/cone.hpp"

#include <cmath>
#include <map>

namespace rbm {

namespace {

// Strict membership of z in the open cone of half-angle `alpha` about `axis`.
bool in_cone(double alpha, std::span<const double> axis, std::span<const double> z) {
  double along = 0.0, n2 = 0.0;
  for (std::size_t i = 0; i < axis.size(); ++i) {
    along += z[i] * axis[i];
    n2 += z[i] * z[i];
  }
  double perp2 = std::max(0.0, n2 - along * along);
  double cot = std::cos(alpha) / std::sin(alpha);
  return along > cot * std::sqrt(perp2);
}

bool past_in_cone(PathView path, std::size_t t, std::size_t s, double alpha,
                  std::span<const double> axis) {
  auto pt = path.point(t);
  auto ps = path.point(s);
  double z[8];
  const int d = path.dim;
  for (int i = 0; i < d; ++i) z[i] = ps[i] - pt[i];
  return in_cone(alpha, axis, std::span<const double>(z, static_cast<std::size_t>(d)));
}

void validate_query(PathView path, const ConePointQuery& q) {
  if (path.dim < 1 || path.dim > 8) raise(Errc::RangeError, "unsupported dimension");
  if (static_cast<int>(q.axis.size()) != path.dim)
    raise(Errc::DegenerateInput, "axis dimension mismatch");
  if (!(q.halfAngle > 0.0 && q.halfAngle < kPi))
    raise(Errc::ParameterOutOfRange, "half-angle must lie in (0, pi)");
}

// d=2, halfAngle <= pi/2: the open sector is the intersection of two open
// half-planes, so the whole-past condition reduces to two running minima.
std::vector<std::size_t> global_two_minima(PathView path, const ConePointQuery& q) {
  const double phi = std::atan2(q.axis[1], q.axis[0]);
  const double off = kPi / 2.0 - q.halfAngle;
  const Point up{std::cos(phi - off), std::sin(phi - off)};
  const Point um{std::cos(phi + off), std::sin(phi + off)};
  std::vector<std::size_t> out;
  auto p0 = path.point(0);
  double mPlus = p0[0] * up.x + p0[1] * up.y;
  double mMinus = p0[0] * um.x + p0[1] * um.y;
  for (std::size_t t = 1; t < path.size(); ++t) {
    auto p = path.point(t);
    double a = p[0] * up.x + p[1] * up.y;
    double b = p[0] * um.x + p[1] * um.y;
    if (a < mPlus && b < mMinus) out.push_back(t);
    mPlus = std::min(mPlus, a);
    mMinus = std::min(mMinus, b);
  }
  return out;
}

// d=2, halfAngle > pi/2: t fails iff some past point dominates it in the
// coordinates of the closed complementary sector; keep the Pareto staircase
// of past minima.
std::vector<std::size_t> global_staircase(PathView path, const ConePointQuery& q) {
  const double phi = std::atan2(q.axis[1], q.axis[0]);
  const double delta = kPi - q.halfAngle;  // complementary sector half-angle, < pi/2
  const double off = kPi / 2.0 - delta;
  const Point wp{std::cos(phi + off), std::sin(phi + off)};
  const Point wm{std::cos(phi - off), std::sin(phi - off)};

  std::map<double, double> stair;  // xi -> eta, Pareto-minimal, eta decreasing in xi
  auto dominated = [&stair](double xi, double eta) {
    auto it = stair.upper_bound(xi);
    if (it == stair.begin()) return false;
    return std::prev(it)->second <= eta;
  };
  auto insert = [&stair, &dominated](double xi, double eta) {
    if (dominated(xi, eta)) return;
    auto it = stair.lower_bound(xi);
    while (it != stair.end() && it->second >= eta) it = stair.erase(it);
    stair.emplace(xi, eta);
  };

  std::vector<std::size_t> out;
  auto coords = [&](std::size_t i, double& xi, double& eta) {
    auto p = path.point(i);
    xi = p[0] * wp.x + p[1] * wp.y;
    eta = p[0] * wm.x + p[1] * wm.y;
  };
  double xi, eta;
  coords(0, xi, eta);
  insert(xi, eta);
  for (std::size_t t = 1; t < path.size(); ++t) {
    coords(t, xi, eta);
    if (!dominated(xi, eta)) out.push_back(t);
    insert(xi, eta);
  }
  return out;
}

}  // namespace

std::vector<double> flatten(std::span<const Point> pts) {
  std::vector<double> out;
  out.reserve(2 * pts.size());
  for (Point p : pts) {
    out.push_back(p.x);
    out.push_back(p.y);
  }
  return out;
}

bool is_cone_point(PathView path, std::size_t t, const ConePointQuery& q) {
  validate_query(path, q);
  if (t < 1 || t >= path.size()) raise(Errc::IndexOutOfRange, "index outside (0, n)");
  if (q.mode == ConeMode::Global) {
    for (std::size_t s = t; s-- > 0;)
      if (!past_in_cone(path, t, s, q.halfAngle, q.axis)) return false;
    return true;
  }
  // Windowed: some window [t4, t) works; the shortest candidate spans the
  // two grid nodes t-1 and t.
  return past_in_cone(path, t, t - 1, q.halfAngle, q.axis);
}

std::vector<std::size_t> find_cone_points(PathView path, const ConePointQuery& q) {
  validate_query(path, q);
  if (path.size() < 2) raise(Errc::RangeError, "path needs at least two points");
  if (q.mode == ConeMode::Windowed) {
    std::vector<std::size_t> out;
    for (std::size_t t = 1; t < path.size(); ++t)
      if (past_in_cone(path, t, t - 1, q.halfAngle, q.axis)) out.push_back(t);
    return out;
  }
  if (path.dim == 2) {
    if (q.halfAngle <= kPi / 2.0) return global_two_minima(path, q);
    return global_staircase(path, q);
  }
  std::vector<std::size_t> out;
  for (std::size_t t = 1; t < path.size(); ++t) {
    bool ok = true;
    for (std::size_t s = t; s-- > 0;) {
      if (!past_in_cone(path, t, s, q.halfAngle, q.axis)) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(t);
  }
  return out;
}

std::vector<std::size_t> find_two_cone_times(PathView path, double alpha,
                                             std::span<const double> v,
                                             std::span<const double> w) {
  if (static_cast<int>(v.size()) != path.dim || static_cast<int>(w.size()) != path.dim)
    raise(Errc::DegenerateInput, "axis dimension mismatch");
  if (!(alpha > 0.0 && alpha < kPi))
    raise(Errc::ParameterOutOfRange, "half-angle must lie in (0, pi)");
  std::vector<std::size_t> out;
  for (std::size_t t = 1; t < path.size(); ++t) {
    auto pt = path.point(t);
    auto ps = path.point(t - 1);
    double z[8];
    for (int i = 0; i < path.dim; ++i) z[i] = ps[i] - pt[i];
    std::span<const double> zs(z, static_cast<std::size_t>(path.dim));
    if (in_cone(alpha, v, zs) && in_cone(alpha, w, zs)) out.push_back(t);
  }
  return out;
}

double dim_formula(double angle) {
  if (!(angle >= 0.0) || angle >= kPi) raise(Errc::AngleOutOfRange, "angle must lie in [0, pi)");
  return 1.0 - kPi / (2.0 * (kPi - angle));
}

}  // namespace rbm
