#pragma once

#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace lifts {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Closed interval [lower, upper] on the real line.
struct Interval {
  double lower;
  double upper;
};

/// Axis-aligned box, lower < upper componentwise.
struct Box {
  Vector lower;
  Vector upper;
};

struct Ball {
  Vector center;
  double radius;
};

struct Ellipsoid {
  Vector center;
  Vector semi_axes;
};

/// Polytope { x : normals.row(j) . x <= offsets(j) }.
struct HalfspaceIntersection {
  Matrix normals;
  Vector offsets;
};

using DomainShape = std::variant<Interval, Box, Ball, Ellipsoid, HalfspaceIntersection>;

/// Absolute tolerance, in units of the domain scale, under which a point
/// counts as lying on the boundary.
inline constexpr double kBoundaryTolerance = 1e-8;
/// Two constraints active within this (scaled) residual make a corner.
inline constexpr double kCornerTolerance = 1e-10;

/**
 * A closed convex subset of R^d with exact boundary queries.
 *
 * Instances are immutable after construction. All validation happens in the
 * named constructors, which throw std::invalid_argument on malformed input
 * (inverted bounds, nonpositive radii, unbounded or empty polytopes).
 */
class ConvexDomain {
 public:
  static ConvexDomain interval(double lower, double upper);
  static ConvexDomain box(Vector lower, Vector upper);
  static ConvexDomain ball(Vector center, double radius);
  static ConvexDomain ellipsoid(Vector center, Vector semi_axes);
  static ConvexDomain halfspaces(Matrix normals, Vector offsets);

  int dimension() const { return dimension_; }
  const DomainShape& shape() const { return shape_; }

  /// Characteristic length used to normalise tolerances (the diameter).
  double scale() const { return scale_; }

  /// A point in the interior (center, or Chebyshev center for polytopes).
  const Vector& interior_point() const { return interior_point_; }

  /// Vertices of a polytope; empty for the other variants.
  const std::vector<Vector>& vertices() const { return vertices_; }

  bool is_interval() const { return std::holds_alternative<Interval>(shape_); }
  bool is_box() const { return std::holds_alternative<Box>(shape_); }

  /// Axis-aligned extents for Interval/Box (lower, upper); throws otherwise.
  std::pair<Vector, Vector> bounds() const;

  std::string describe() const;

 private:
  ConvexDomain(DomainShape shape, int dimension);

  DomainShape shape_;
  int dimension_;
  double scale_ = 1.0;
  Vector interior_point_;
  std::vector<Vector> vertices_;
};

/// Event produced when a straight ray leaves the domain.
struct BoundaryHit {
  double time_to_hit = 0.0;
  Vector point;
  Vector normal;
  /// Every face normal active at `point` (more than one at a corner).
  std::vector<Vector> active_normals;

  bool is_corner() const { return active_normals.size() > 1; }
};

/// Signed constraint value: <= 0 inside, 0 on the boundary, > 0 outside.
/// Measured in length units (exact distance for balls and polytope faces).
double constraint_value(const ConvexDomain& domain, const Vector& x);

bool contains(const ConvexDomain& domain, const Vector& x);

/// Unit outward normal at a boundary point. Throws if x is farther than the
/// boundary tolerance from the boundary or sits on a corner.
Vector outward_normal(const ConvexDomain& domain, const Vector& x);

/// First exit of x + t v for x strictly inside and v != 0.
BoundaryHit ray_exit(const ConvexDomain& domain, const Vector& x, const Vector& v);

/// Specular reflection v - 2 <n, v> n; n must be a unit vector.
Vector reflect(const Vector& v, const Vector& n);

double diameter(const ConvexDomain& domain);

namespace detail {

/// Same as ray_exit but accepts a start on (or within rounding of) the
/// boundary, as long as the ray does not point straight out of an active
/// face. Used by the event-driven simulators after a reflection.
BoundaryHit next_hit(const ConvexDomain& domain, const Vector& x, const Vector& v);

/// Outward normal of the face nearest to x, with no boundary-distance check.
/// Used to reflect after root-finding has located a crossing.
std::vector<Vector> nearest_face_normals(const ConvexDomain& domain, const Vector& x);

/// Snap a point that has drifted out by rounding back onto the domain.
Vector snap_inside(const ConvexDomain& domain, const Vector& x);

}  // namespace detail

}  // namespace lifts
