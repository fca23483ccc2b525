#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <variant>
#include <vector>

#include "rbm/errors.hpp"

namespace rbm {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

using Complex = std::complex<double>;

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline Complex to_complex(Point p) { return {p.x, p.y}; }
inline Point to_point(Complex z) { return {z.real(), z.imag()}; }
inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point p) { return std::hypot(p.x, p.y); }
inline double dist(Point a, Point b) { return norm(a - b); }

struct UnitVector {
  double ux = 1.0;
  double uy = 0.0;
  Point vec() const { return {ux, uy}; }
  // Normalizes (dx,dy); throws DegenerateInput on a near-zero vector.
  static UnitVector of(double dx, double dy);
};

double angle_between(const UnitVector& v, const UnitVector& w);

// Undirected line through `base`, direction angle in [0, pi).
struct Line {
  Point base{};
  double angle = 0.0;
  Point direction() const { return {std::cos(angle), std::sin(angle)}; }
  Point normal() const { return {-std::sin(angle), std::cos(angle)}; }
};

double normalize_line_angle(double raw);  // reduce mod pi into [0, pi)
Line line_with_angle(Point base, double rawAngle);
Line line_through(Point a, Point b);                  // throws CoincidentPoints
double line_signed_distance(const Line& l, Point p);  // along l.normal()

Point reflect_across(const Line& line, Point p);
Point intersect(const Line& a, const Line& b);  // throws ParallelLines
Line mirror_line(Point x, Point y);             // perpendicular bisector; throws CoincidentPoints

// Open d-dimensional cone about `axis` from `vertex`.
struct ConeSpec {
  std::vector<double> vertex;
  std::vector<double> axis;  // unit length
  double halfAngle = kPi / 2;
};

ConeSpec make_cone(std::vector<double> vertex, std::vector<double> axis, double halfAngle);
bool cone_contains(const ConeSpec& c, std::span<const double> p);
bool cone_contains(const ConeSpec& c, Point p);

struct HalfPlane {
  Line boundary;
  UnitVector inward;  // unit normal pointing into the domain
};
struct Disk {
  Point center{};
  double radius = 1.0;
};
// Planar wedge anchored at the origin: {r e^{i theta} : r > 0, 0 < theta < alpha}.
// Edge 0 is the positive real axis, edge 1 the ray at angle alpha.
struct Wedge {
  double alpha = kPi / 4;
};
struct ConvexPolygon {
  std::vector<Point> vertices;  // counterclockwise, strictly convex
};

using DomainSpec = std::variant<HalfPlane, Disk, Wedge, ConvexPolygon>;

void validate_domain(const DomainSpec& d);

UnitVector inward_normal(const DomainSpec& d, Point p);  // NotOnBoundary / CornerPoint
double signed_boundary_distance(const DomainSpec& d, Point p);

struct Projection {
  Point point;
  bool corner = false;  // landed on a wedge/polygon vertex
};
// Euclidean projection onto the closure; identity for inside points.
Projection project_to_closure(const DomainSpec& d, Point p);

struct BoundaryContact {
  Point point;      // nearest boundary point
  int edge = -1;    // edge id for half-plane/wedge/polygon, -1 for disk
  bool corner = false;
};
BoundaryContact nearest_boundary_point(const DomainSpec& d, Point p);

int edge_count(const DomainSpec& d);  // halfplane 1, disk 0, wedge 2, polygon n
Line edge_line(const DomainSpec& d, int edge);
UnitVector edge_inward_normal(const DomainSpec& d, int edge);
double edge_distance(const DomainSpec& d, int edge, Point p);  // to the edge set (line/ray/segment)

}  // namespace rbm
