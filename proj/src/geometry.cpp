#include "rbm/geometry.hpp"

#include <algorithm>
#include <limits>

namespace rbm {

namespace {

constexpr double kBoundaryTol = 1e-9;
constexpr double kParallelTol = 1e-12;

// Distance from p to the ray {t*u : t >= 0} from the origin, u unit.
double ray_distance(Point u, Point p) {
  double s = dot(p, u);
  if (s <= 0.0) return norm(p);
  return dist(p, s * u);
}

// Clamped projection of p onto the ray; corner = clamped at the origin.
Point ray_project(Point u, Point p, bool& corner) {
  double s = dot(p, u);
  if (s <= 0.0) {
    corner = true;
    return {0.0, 0.0};
  }
  corner = false;
  return s * u;
}

double segment_distance(Point a, Point b, Point p) {
  Point e = b - a;
  double len2 = dot(e, e);
  double t = len2 > 0.0 ? dot(p - a, e) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return dist(p, a + t * e);
}

Point segment_project(Point a, Point b, Point p, bool& corner) {
  Point e = b - a;
  double len2 = dot(e, e);
  double t = len2 > 0.0 ? dot(p - a, e) / len2 : 0.0;
  if (t <= 0.0) {
    corner = true;
    return a;
  }
  if (t >= 1.0) {
    corner = true;
    return b;
  }
  corner = false;
  return a + t * e;
}

bool polygon_inside(const ConvexPolygon& poly, Point p) {
  const auto& v = poly.vertices;
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    Point e = v[(i + 1) % n] - v[i];
    if (cross(e, p - v[i]) < 0.0) return false;
  }
  return true;
}

bool wedge_inside(const Wedge& w, Point p) {
  if (p.x == 0.0 && p.y == 0.0) return false;
  double th = std::atan2(p.y, p.x);
  return th >= 0.0 && th <= w.alpha;
}

Point wedge_edge_dir(const Wedge& w, int edge) {
  if (edge == 0) return {1.0, 0.0};
  return {std::cos(w.alpha), std::sin(w.alpha)};
}

}  // namespace

UnitVector UnitVector::of(double dx, double dy) {
  double n = std::hypot(dx, dy);
  if (n < 1e-300) raise(Errc::DegenerateInput, "zero-length direction");
  return {dx / n, dy / n};
}

double angle_between(const UnitVector& v, const UnitVector& w) {
  double c = v.ux * w.ux + v.uy * w.uy;
  return std::acos(std::clamp(c, -1.0, 1.0));
}

double normalize_line_angle(double raw) {
  double a = std::fmod(raw, kPi);
  if (a < 0.0) a += kPi;
  if (a >= kPi) a -= kPi;
  return a;
}

Line line_with_angle(Point base, double rawAngle) { return {base, normalize_line_angle(rawAngle)}; }

Line line_through(Point a, Point b) {
  if (dist(a, b) < 1e-12) raise(Errc::CoincidentPoints, "line through coincident points");
  return line_with_angle(a, std::atan2(b.y - a.y, b.x - a.x));
}

double line_signed_distance(const Line& l, Point p) { return dot(p - l.base, l.normal()); }

Point reflect_across(const Line& line, Point p) {
  Complex w = to_complex(p) - to_complex(line.base);
  Complex rot{std::cos(2.0 * line.angle), std::sin(2.0 * line.angle)};
  return to_point(to_complex(line.base) + rot * std::conj(w));
}

Point intersect(const Line& a, const Line& b) {
  double diff = std::fabs(a.angle - b.angle);
  diff = std::min(diff, kPi - diff);
  if (diff <= kParallelTol) raise(Errc::ParallelLines, "lines are parallel within tolerance");
  Point da = a.direction(), db = b.direction();
  double denom = cross(da, db);
  double r = cross(b.base - a.base, db) / denom;
  return a.base + r * da;
}

Line mirror_line(Point x, Point y) {
  if (dist(x, y) <= 1e-12) raise(Errc::CoincidentPoints, "mirror of coincident points");
  Point mid = 0.5 * (x + y);
  double a = std::atan2(y.y - x.y, y.x - x.x) + kPi / 2.0;
  return line_with_angle(mid, a);
}

ConeSpec make_cone(std::vector<double> vertex, std::vector<double> axis, double halfAngle) {
  if (vertex.size() != axis.size() || axis.empty())
    raise(Errc::DegenerateInput, "cone vertex/axis dimension mismatch");
  if (!(halfAngle > 0.0 && halfAngle < kPi))
    raise(Errc::ParameterOutOfRange, "cone half-angle must lie in (0, pi)");
  double n2 = 0.0;
  for (double a : axis) n2 += a * a;
  double n = std::sqrt(n2);
  if (n < 1e-300) raise(Errc::DegenerateInput, "zero cone axis");
  for (double& a : axis) a /= n;
  return {std::move(vertex), std::move(axis), halfAngle};
}

bool cone_contains(const ConeSpec& c, std::span<const double> p) {
  const std::size_t d = c.axis.size();
  if (p.size() != d) raise(Errc::DegenerateInput, "point dimension mismatch");
  double along = 0.0, n2 = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    double z = p[i] - c.vertex[i];
    along += z * c.axis[i];
    n2 += z * z;
  }
  double perp2 = std::max(0.0, n2 - along * along);
  double cot = std::cos(c.halfAngle) / std::sin(c.halfAngle);
  return along > cot * std::sqrt(perp2);
}

bool cone_contains(const ConeSpec& c, Point p) {
  const double buf[2] = {p.x, p.y};
  return cone_contains(c, std::span<const double>(buf, 2));
}

void validate_domain(const DomainSpec& d) {
  if (const auto* hp = std::get_if<HalfPlane>(&d)) {
    double along = dot(hp->inward.vec(), hp->boundary.direction());
    if (std::fabs(along) > 1e-9)
      raise(Errc::ParameterOutOfRange, "half-plane inward normal not orthogonal to boundary");
  } else if (const auto* disk = std::get_if<Disk>(&d)) {
    if (!(disk->radius > 0.0)) raise(Errc::ParameterOutOfRange, "disk radius must be positive");
  } else if (const auto* w = std::get_if<Wedge>(&d)) {
    if (!(w->alpha > 0.0 && w->alpha < kPi))
      raise(Errc::ParameterOutOfRange, "wedge angle must lie in (0, pi)");
  } else if (const auto* poly = std::get_if<ConvexPolygon>(&d)) {
    const auto& v = poly->vertices;
    if (v.size() < 3) raise(Errc::ParameterOutOfRange, "polygon needs at least 3 vertices");
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
      Point e0 = v[(i + 1) % n] - v[i];
      Point e1 = v[(i + 2) % n] - v[(i + 1) % n];
      if (cross(e0, e1) <= 1e-12)
        raise(Errc::ParameterOutOfRange, "polygon must be strictly convex and counterclockwise");
    }
  }
}

double signed_boundary_distance(const DomainSpec& d, Point p) {
  if (const auto* hp = std::get_if<HalfPlane>(&d)) {
    return dot(p - hp->boundary.base, hp->inward.vec());
  }
  if (const auto* disk = std::get_if<Disk>(&d)) {
    return disk->radius - dist(p, disk->center);
  }
  if (const auto* w = std::get_if<Wedge>(&d)) {
    double m = std::min(ray_distance(wedge_edge_dir(*w, 0), p), ray_distance(wedge_edge_dir(*w, 1), p));
    return wedge_inside(*w, p) ? m : -m;
  }
  const auto& poly = std::get<ConvexPolygon>(d);
  const auto& v = poly.vertices;
  const std::size_t n = v.size();
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) m = std::min(m, segment_distance(v[i], v[(i + 1) % n], p));
  return polygon_inside(poly, p) ? m : -m;
}

Projection project_to_closure(const DomainSpec& d, Point p) {
  if (const auto* hp = std::get_if<HalfPlane>(&d)) {
    double s = dot(p - hp->boundary.base, hp->inward.vec());
    if (s >= 0.0) return {p, false};
    return {p - s * hp->inward.vec(), false};
  }
  if (const auto* disk = std::get_if<Disk>(&d)) {
    double r = dist(p, disk->center);
    if (r <= disk->radius) return {p, false};
    return {disk->center + (disk->radius / r) * (p - disk->center), false};
  }
  if (const auto* w = std::get_if<Wedge>(&d)) {
    if (wedge_inside(*w, p)) return {p, false};
    bool c0 = false, c1 = false;
    Point q0 = ray_project(wedge_edge_dir(*w, 0), p, c0);
    Point q1 = ray_project(wedge_edge_dir(*w, 1), p, c1);
    if (dist(p, q0) <= dist(p, q1)) return {q0, c0};
    return {q1, c1};
  }
  const auto& poly = std::get<ConvexPolygon>(d);
  if (polygon_inside(poly, p)) return {p, false};
  const auto& v = poly.vertices;
  const std::size_t n = v.size();
  Projection best{{0, 0}, false};
  double bestDist = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    bool c = false;
    Point q = segment_project(v[i], v[(i + 1) % n], p, c);
    double dd = dist(p, q);
    if (dd < bestDist) {
      bestDist = dd;
      best = {q, c};
    }
  }
  return best;
}

BoundaryContact nearest_boundary_point(const DomainSpec& d, Point p) {
  if (const auto* hp = std::get_if<HalfPlane>(&d)) {
    double s = dot(p - hp->boundary.base, hp->inward.vec());
    return {p - s * hp->inward.vec(), 0, false};
  }
  if (const auto* disk = std::get_if<Disk>(&d)) {
    Point rel = p - disk->center;
    double r = norm(rel);
    if (r < 1e-300) return {disk->center + Point{disk->radius, 0.0}, -1, false};
    return {disk->center + (disk->radius / r) * rel, -1, false};
  }
  if (const auto* w = std::get_if<Wedge>(&d)) {
    bool c0 = false, c1 = false;
    Point q0 = ray_project(wedge_edge_dir(*w, 0), p, c0);
    Point q1 = ray_project(wedge_edge_dir(*w, 1), p, c1);
    if (dist(p, q0) <= dist(p, q1)) return {q0, 0, c0};
    return {q1, 1, c1};
  }
  const auto& poly = std::get<ConvexPolygon>(d);
  const auto& v = poly.vertices;
  const std::size_t n = v.size();
  BoundaryContact best;
  double bestDist = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    bool c = false;
    Point q = segment_project(v[i], v[(i + 1) % n], p, c);
    double dd = dist(p, q);
    if (dd < bestDist) {
      bestDist = dd;
      best = {q, static_cast<int>(i), c};
    }
  }
  return best;
}

UnitVector inward_normal(const DomainSpec& d, Point p) {
  if (std::fabs(signed_boundary_distance(d, p)) > kBoundaryTol)
    raise(Errc::NotOnBoundary, "point not within tolerance of the boundary");
  if (const auto* hp = std::get_if<HalfPlane>(&d)) return hp->inward;
  if (const auto* disk = std::get_if<Disk>(&d)) {
    return UnitVector::of(disk->center.x - p.x, disk->center.y - p.y);
  }
  BoundaryContact c = nearest_boundary_point(d, p);
  if (c.corner) raise(Errc::CornerPoint, "normal undefined at a corner");
  if (const auto* w = std::get_if<Wedge>(&d)) {
    if (norm(p) <= kBoundaryTol) raise(Errc::CornerPoint, "normal undefined at the wedge vertex");
    return edge_inward_normal(*w, c.edge);
  }
  return edge_inward_normal(d, c.edge);
}

int edge_count(const DomainSpec& d) {
  if (std::holds_alternative<HalfPlane>(d)) return 1;
  if (std::holds_alternative<Disk>(d)) return 0;
  if (std::holds_alternative<Wedge>(d)) return 2;
  return static_cast<int>(std::get<ConvexPolygon>(d).vertices.size());
}

Line edge_line(const DomainSpec& d, int edge) {
  if (edge < 0 || edge >= edge_count(d)) raise(Errc::IndexOutOfRange, "edge id out of range");
  if (const auto* hp = std::get_if<HalfPlane>(&d)) return hp->boundary;
  if (const auto* w = std::get_if<Wedge>(&d)) {
    return edge == 0 ? Line{{0, 0}, 0.0} : line_with_angle({0, 0}, w->alpha);
  }
  const auto& v = std::get<ConvexPolygon>(d).vertices;
  return line_through(v[edge], v[(edge + 1) % v.size()]);
}

UnitVector edge_inward_normal(const DomainSpec& d, int edge) {
  if (edge < 0 || edge >= edge_count(d)) raise(Errc::IndexOutOfRange, "edge id out of range");
  if (const auto* hp = std::get_if<HalfPlane>(&d)) return hp->inward;
  if (const auto* w = std::get_if<Wedge>(&d)) {
    if (edge == 0) return {0.0, 1.0};
    return {std::sin(w->alpha), -std::cos(w->alpha)};
  }
  const auto& v = std::get<ConvexPolygon>(d).vertices;
  Point e = v[(edge + 1) % v.size()] - v[edge];
  return UnitVector::of(-e.y, e.x);
}

double edge_distance(const DomainSpec& d, int edge, Point p) {
  if (edge < 0 || edge >= edge_count(d)) raise(Errc::IndexOutOfRange, "edge id out of range");
  if (const auto* hp = std::get_if<HalfPlane>(&d))
    return std::fabs(line_signed_distance(hp->boundary, p));
  if (const auto* w = std::get_if<Wedge>(&d)) return ray_distance(wedge_edge_dir(*w, edge), p);
  const auto& v = std::get<ConvexPolygon>(d).vertices;
  return segment_distance(v[edge], v[(edge + 1) % v.size()], p);
}

}  // namespace rbm
