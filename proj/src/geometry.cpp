#include "lifts/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "lifts/linprog.hpp"

namespace lifts {
namespace {

constexpr double kContainsSlack = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_dimension(const ConvexDomain& domain, const Vector& x) {
  if (x.size() != domain.dimension()) {
    std::ostringstream msg;
    msg << "dimension mismatch: domain has dimension " << domain.dimension() << ", point has "
        << x.size();
    throw std::invalid_argument(msg.str());
  }
}

// Per-face signed residuals (length units) for the polyhedral variants.
std::vector<double> face_residuals(const ConvexDomain& domain, const Vector& x) {
  return std::visit(
      Overloaded{
          [&](const Interval& s) { return std::vector<double>{s.lower - x(0), x(0) - s.upper}; },
          [&](const Box& s) {
            std::vector<double> r;
            r.reserve(2 * s.lower.size());
            for (Eigen::Index i = 0; i < s.lower.size(); ++i) {
              r.push_back(s.lower(i) - x(i));
              r.push_back(x(i) - s.upper(i));
            }
            return r;
          },
          [&](const HalfspaceIntersection& s) {
            std::vector<double> r(s.offsets.size());
            for (Eigen::Index j = 0; j < s.offsets.size(); ++j)
              r[j] = (s.normals.row(j).dot(x) - s.offsets(j)) / s.normals.row(j).norm();
            return r;
          },
          [&](const auto&) { return std::vector<double>{constraint_value(domain, x)}; },
      },
      domain.shape());
}

// Outward unit normal of polyhedral face `face` (index into face_residuals).
Vector face_normal(const ConvexDomain& domain, std::size_t face) {
  return std::visit(
      Overloaded{
          [&](const Interval&) {
            Vector n(1);
            n(0) = face == 0 ? -1.0 : 1.0;
            return n;
          },
          [&](const Box& s) {
            Vector n = Vector::Zero(s.lower.size());
            n(static_cast<Eigen::Index>(face / 2)) = face % 2 == 0 ? -1.0 : 1.0;
            return n;
          },
          [&](const HalfspaceIntersection& s) {
            Vector n = s.normals.row(static_cast<Eigen::Index>(face)).transpose();
            return Vector(n / n.norm());
          },
          [&](const auto&) -> Vector { throw std::logic_error("face_normal on smooth domain"); },
      },
      domain.shape());
}

bool is_polyhedral(const ConvexDomain& domain) {
  return !std::holds_alternative<Ball>(domain.shape()) &&
         !std::holds_alternative<Ellipsoid>(domain.shape());
}

Vector smooth_normal(const ConvexDomain& domain, const Vector& x) {
  return std::visit(
      Overloaded{
          [&](const Ball& s) { return Vector((x - s.center).normalized()); },
          [&](const Ellipsoid& s) {
            Vector g = (x - s.center).cwiseQuotient(s.semi_axes.cwiseProduct(s.semi_axes));
            return Vector(g.normalized());
          },
          [&](const auto&) -> Vector { throw std::logic_error("smooth_normal on polytope"); },
      },
      domain.shape());
}

// Larger root of |y + t w|^2 = 1 for |y| <= 1 (up to rounding).
double unit_sphere_exit(const Vector& y, const Vector& w) {
  const double a = w.squaredNorm();
  const double b = y.dot(w);
  const double c = y.squaredNorm() - 1.0;
  const double disc = std::max(b * b - a * c, 0.0);
  const double root = std::sqrt(disc);
  double t = b <= 0.0 ? (-b + root) / a : -c / (b + root);
  return std::max(t, 0.0);
}

void enumerate_vertices(const Matrix& A, const Vector& b, double tol, std::vector<Vector>& out) {
  const int m = static_cast<int>(A.rows());
  const int d = static_cast<int>(A.cols());
  std::vector<int> pick(d);
  for (int i = 0; i < d; ++i) pick[i] = i;
  if (m < d) return;
  for (;;) {
    Matrix sub(d, d);
    Vector rhs(d);
    for (int i = 0; i < d; ++i) {
      sub.row(i) = A.row(pick[i]);
      rhs(i) = b(pick[i]);
    }
    Eigen::FullPivLU<Matrix> lu(sub);
    if (lu.isInvertible()) {
      Vector x = lu.solve(rhs);
      if (((A * x - b).array() <= tol).all()) {
        const bool dup = std::any_of(out.begin(), out.end(),
                                     [&](const Vector& v) { return (v - x).norm() <= tol; });
        if (!dup) out.push_back(x);
      }
    }
    int i = d - 1;
    while (i >= 0 && pick[i] == m - d + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < d; ++j) pick[j] = pick[j - 1] + 1;
  }
}

std::string join(const Vector& v) {
  std::ostringstream os;
  os.precision(17);
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? "," : "") << v(i);
  return os.str();
}

}  // namespace

ConvexDomain::ConvexDomain(DomainShape shape, int dimension)
    : shape_(std::move(shape)), dimension_(dimension) {}

ConvexDomain ConvexDomain::interval(double lower, double upper) {
  if (!(std::isfinite(lower) && std::isfinite(upper) && lower < upper))
    throw std::invalid_argument("interval requires finite lower < upper");
  ConvexDomain d(Interval{lower, upper}, 1);
  d.scale_ = upper - lower;
  d.interior_point_ = Vector::Constant(1, 0.5 * (lower + upper));
  return d;
}

ConvexDomain ConvexDomain::box(Vector lower, Vector upper) {
  if (lower.size() == 0 || lower.size() != upper.size())
    throw std::invalid_argument("box bounds must be nonempty and of equal dimension");
  if (!lower.allFinite() || !upper.allFinite() || !(lower.array() < upper.array()).all())
    throw std::invalid_argument("box requires finite lower < upper componentwise");
  const int dim = static_cast<int>(lower.size());
  Vector mid = 0.5 * (lower + upper);
  double scale = (upper - lower).norm();
  ConvexDomain d(Box{std::move(lower), std::move(upper)}, dim);
  d.scale_ = scale;
  d.interior_point_ = std::move(mid);
  return d;
}

ConvexDomain ConvexDomain::ball(Vector center, double radius) {
  if (center.size() == 0 || !center.allFinite())
    throw std::invalid_argument("ball center must be a finite nonempty vector");
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw std::invalid_argument("ball radius must be positive");
  const int dim = static_cast<int>(center.size());
  Vector c = center;
  ConvexDomain d(Ball{std::move(center), radius}, dim);
  d.scale_ = 2.0 * radius;
  d.interior_point_ = std::move(c);
  return d;
}

ConvexDomain ConvexDomain::ellipsoid(Vector center, Vector semi_axes) {
  if (center.size() == 0 || center.size() != semi_axes.size())
    throw std::invalid_argument("ellipsoid center and semi-axes must have equal dimension");
  if (!center.allFinite() || !semi_axes.allFinite() || !(semi_axes.array() > 0.0).all())
    throw std::invalid_argument("ellipsoid semi-axes must be positive");
  const int dim = static_cast<int>(center.size());
  Vector c = center;
  double scale = 2.0 * semi_axes.maxCoeff();
  ConvexDomain d(Ellipsoid{std::move(center), std::move(semi_axes)}, dim);
  d.scale_ = scale;
  d.interior_point_ = std::move(c);
  return d;
}

ConvexDomain ConvexDomain::halfspaces(Matrix normals, Vector offsets) {
  if (normals.rows() == 0 || normals.cols() == 0 || normals.rows() != offsets.size())
    throw std::invalid_argument("halfspace normals/offsets have inconsistent shapes");
  if (!normals.allFinite() || !offsets.allFinite())
    throw std::invalid_argument("halfspace data must be finite");
  for (Eigen::Index j = 0; j < normals.rows(); ++j)
    if (normals.row(j).norm() == 0.0) throw std::invalid_argument("halfspace normal is zero");
  const int dim = static_cast<int>(normals.cols());

  // Boundedness: the support function must be finite along every axis.
  Vector lo(dim), hi(dim);
  for (int i = 0; i < dim; ++i) {
    for (double sign : {1.0, -1.0}) {
      Vector c = Vector::Zero(dim);
      c(i) = sign;
      const auto lp = detail::maximize(c, normals, offsets);
      if (lp.status == detail::LpStatus::infeasible)
        throw std::invalid_argument("halfspace intersection is empty");
      if (lp.status == detail::LpStatus::unbounded)
        throw std::invalid_argument("halfspace intersection is unbounded");
      (sign > 0 ? hi(i) : lo(i)) = sign * lp.value;
    }
  }
  const double extent = (hi - lo).norm();

  // Interior certificate: Chebyshev center with radius > 0.
  Matrix cheb(normals.rows(), dim + 1);
  cheb.leftCols(dim) = normals;
  for (Eigen::Index j = 0; j < normals.rows(); ++j) cheb(j, dim) = normals.row(j).norm();
  Vector objective = Vector::Zero(dim + 1);
  objective(dim) = 1.0;
  const auto center = detail::maximize(objective, cheb, offsets);
  if (center.status != detail::LpStatus::optimal || center.value <= 1e-12 * extent)
    throw std::invalid_argument("halfspace intersection has empty interior");

  std::vector<Vector> vertices;
  enumerate_vertices(normals, offsets, 1e-9 * std::max(1.0, extent), vertices);

  ConvexDomain d(HalfspaceIntersection{std::move(normals), std::move(offsets)}, dim);
  d.interior_point_ = center.x.head(dim);
  d.vertices_ = std::move(vertices);
  double diam = 0.0;
  for (std::size_t i = 0; i < d.vertices_.size(); ++i)
    for (std::size_t j = i + 1; j < d.vertices_.size(); ++j)
      diam = std::max(diam, (d.vertices_[i] - d.vertices_[j]).norm());
  d.scale_ = diam;
  return d;
}

std::pair<Vector, Vector> ConvexDomain::bounds() const {
  if (const auto* s = std::get_if<Interval>(&shape_))
    return {Vector::Constant(1, s->lower), Vector::Constant(1, s->upper)};
  if (const auto* s = std::get_if<Box>(&shape_)) return {s->lower, s->upper};
  throw std::invalid_argument("bounds() is only defined for interval and box domains");
}

std::string ConvexDomain::describe() const {
  std::ostringstream os;
  os.precision(17);
  std::visit(Overloaded{
                 [&](const Interval& s) { os << "interval:" << s.lower << "," << s.upper; },
                 [&](const Box& s) {
                   os << "box:";
                   for (Eigen::Index i = 0; i < s.lower.size(); ++i)
                     os << (i ? "," : "") << s.lower(i) << "," << s.upper(i);
                 },
                 [&](const Ball& s) { os << "ball:" << s.radius << ";" << join(s.center); },
                 [&](const Ellipsoid& s) {
                   os << "ellipsoid:" << join(s.semi_axes) << ";" << join(s.center);
                 },
                 [&](const HalfspaceIntersection& s) {
                   os << "halfspaces:";
                   for (Eigen::Index j = 0; j < s.normals.rows(); ++j) {
                     os << (j ? ";" : "") << join(s.normals.row(j).transpose()) << ","
                        << s.offsets(j);
                   }
                 },
             },
             shape_);
  return os.str();
}

double constraint_value(const ConvexDomain& domain, const Vector& x) {
  require_dimension(domain, x);
  return std::visit(
      Overloaded{
          [&](const Interval& s) { return std::max(s.lower - x(0), x(0) - s.upper); },
          [&](const Box& s) {
            return std::max((s.lower - x).maxCoeff(), (x - s.upper).maxCoeff());
          },
          [&](const Ball& s) { return (x - s.center).norm() - s.radius; },
          [&](const Ellipsoid& s) {
            const double r = (x - s.center).cwiseQuotient(s.semi_axes).norm();
            return (r - 1.0) * s.semi_axes.minCoeff();
          },
          [&](const HalfspaceIntersection& s) {
            double worst = -kInf;
            for (Eigen::Index j = 0; j < s.offsets.size(); ++j)
              worst = std::max(worst,
                               (s.normals.row(j).dot(x) - s.offsets(j)) / s.normals.row(j).norm());
            return worst;
          },
      },
      domain.shape());
}

bool contains(const ConvexDomain& domain, const Vector& x) {
  return constraint_value(domain, x) <= kContainsSlack * domain.scale();
}

Vector outward_normal(const ConvexDomain& domain, const Vector& x) {
  const double tol = kBoundaryTolerance * domain.scale();
  const double g = constraint_value(domain, x);
  if (std::abs(g) > tol) throw std::invalid_argument("outward_normal: point is not on the boundary");
  if (!is_polyhedral(domain)) return smooth_normal(domain, x);
  const auto residuals = face_residuals(domain, x);
  std::size_t active = 0, face = 0;
  for (std::size_t j = 0; j < residuals.size(); ++j) {
    if (std::abs(residuals[j]) <= tol) {
      ++active;
      face = j;
    }
  }
  if (active > 1) throw std::invalid_argument("outward_normal: point is a corner");
  return face_normal(domain, face);
}

Vector reflect(const Vector& v, const Vector& n) {
  if (v.size() != n.size()) throw std::invalid_argument("reflect: dimension mismatch");
  if (std::abs(n.norm() - 1.0) > 1e-12) throw std::invalid_argument("reflect: normal is not a unit vector");
  Vector r = v - (2.0 * n.dot(v) / n.squaredNorm()) * n;
  // Restore |v| exactly so rounding does not accumulate over long flights.
  const double rn = r.norm();
  if (rn > 0.0) r *= v.norm() / rn;
  return r;
}

double diameter(const ConvexDomain& domain) { return domain.scale(); }

BoundaryHit ray_exit(const ConvexDomain& domain, const Vector& x, const Vector& v) {
  require_dimension(domain, x);
  require_dimension(domain, v);
  if (v.norm() == 0.0) throw std::invalid_argument("ray_exit: zero direction");
  if (!(constraint_value(domain, x) < -kBoundaryTolerance * domain.scale()))
    throw std::invalid_argument("ray_exit: start point is not strictly interior");
  return detail::next_hit(domain, x, v);
}

namespace detail {

BoundaryHit next_hit(const ConvexDomain& domain, const Vector& x, const Vector& v) {
  if (v.norm() == 0.0) throw std::invalid_argument("next_hit: zero direction");
  BoundaryHit hit;
  const double corner_tol = kCornerTolerance * domain.scale();

  if (is_polyhedral(domain)) {
    // Linear crossing per face; only faces the ray moves toward can be hit.
    std::vector<double> times;
    std::vector<Vector> normals;
    std::visit(Overloaded{
                   [&](const Interval& s) {
                     if (v(0) > 0) {
                       times.push_back((s.upper - x(0)) / v(0));
                       normals.push_back(Vector::Constant(1, 1.0));
                     } else {
                       times.push_back((s.lower - x(0)) / v(0));
                       normals.push_back(Vector::Constant(1, -1.0));
                     }
                   },
                   [&](const Box& s) {
                     for (Eigen::Index i = 0; i < x.size(); ++i) {
                       if (v(i) == 0.0) continue;
                       Vector n = Vector::Zero(x.size());
                       n(i) = v(i) > 0 ? 1.0 : -1.0;
                       times.push_back(((v(i) > 0 ? s.upper(i) : s.lower(i)) - x(i)) / v(i));
                       normals.push_back(std::move(n));
                     }
                   },
                   [&](const HalfspaceIntersection& s) {
                     for (Eigen::Index j = 0; j < s.offsets.size(); ++j) {
                       const double rate = s.normals.row(j).dot(v);
                       if (rate <= 0.0) continue;
                       times.push_back((s.offsets(j) - s.normals.row(j).dot(x)) / rate);
                       normals.push_back(s.normals.row(j).transpose() / s.normals.row(j).norm());
                     }
                   },
                   [](const auto&) {},
               },
               domain.shape());
    if (times.empty()) throw std::runtime_error("next_hit: ray never leaves the domain");
    std::size_t best = 0;
    for (std::size_t j = 1; j < times.size(); ++j)
      if (times[j] < times[best]) best = j;
    hit.time_to_hit = std::max(times[best], 0.0);
    hit.point = x + hit.time_to_hit * v;
    hit.normal = normals[best];

    // Collect every face the hit point sits on; pin axis-aligned faces exactly.
    const auto residuals = face_residuals(domain, hit.point);
    for (std::size_t j = 0; j < residuals.size(); ++j) {
      if (std::abs(residuals[j]) > corner_tol) continue;
      Vector n = face_normal(domain, j);
      if (n.dot(v) <= 0.0) continue;
      hit.active_normals.push_back(n);
    }
    if (hit.active_normals.empty()) hit.active_normals.push_back(hit.normal);
    if (domain.is_box() || domain.is_interval()) {
      auto [lower, upper] = domain.bounds();
      for (const auto& n : hit.active_normals) {
        Eigen::Index axis;
        n.cwiseAbs().maxCoeff(&axis);
        hit.point(axis) = n(axis) > 0 ? upper(axis) : lower(axis);
      }
    }
    return hit;
  }

  std::visit(Overloaded{
                 [&](const Ball& s) {
                   const Vector y = (x - s.center) / s.radius;
                   const Vector w = v / s.radius;
                   hit.time_to_hit = unit_sphere_exit(y, w);
                   Vector p = y + hit.time_to_hit * w;
                   p.normalize();
                   hit.point = s.center + s.radius * p;
                   hit.normal = p;
                 },
                 [&](const Ellipsoid& s) {
                   const Vector y = (x - s.center).cwiseQuotient(s.semi_axes);
                   const Vector w = v.cwiseQuotient(s.semi_axes);
                   hit.time_to_hit = unit_sphere_exit(y, w);
                   Vector p = y + hit.time_to_hit * w;
                   p.normalize();
                   hit.point = s.center + s.semi_axes.cwiseProduct(p);
                   hit.normal = p.cwiseQuotient(s.semi_axes).normalized();
                 },
                 [](const auto&) {},
             },
             domain.shape());
  hit.active_normals.push_back(hit.normal);
  return hit;
}

std::vector<Vector> nearest_face_normals(const ConvexDomain& domain, const Vector& x) {
  if (!is_polyhedral(domain)) return {smooth_normal(domain, x)};
  const auto residuals = face_residuals(domain, x);
  const double top = *std::max_element(residuals.begin(), residuals.end());
  std::vector<Vector> out;
  for (std::size_t j = 0; j < residuals.size(); ++j)
    if (residuals[j] >= top - kCornerTolerance * domain.scale()) out.push_back(face_normal(domain, j));
  return out;
}

Vector snap_inside(const ConvexDomain& domain, const Vector& x) {
  return std::visit(
      Overloaded{
          [&](const Interval& s) {
            return Vector(Vector::Constant(1, std::clamp(x(0), s.lower, s.upper)));
          },
          [&](const Box& s) { return Vector(x.cwiseMax(s.lower).cwiseMin(s.upper)); },
          [&](const Ball& s) {
            const double r = (x - s.center).norm();
            return r <= s.radius ? x : Vector(s.center + (x - s.center) * (s.radius / r));
          },
          [&](const Ellipsoid& s) {
            const double r = (x - s.center).cwiseQuotient(s.semi_axes).norm();
            return r <= 1.0 ? x : Vector(s.center + (x - s.center) / r);
          },
          [&](const HalfspaceIntersection& s) {
            Vector y = x;
            for (int pass = 0; pass < 8; ++pass) {
              bool moved = false;
              for (Eigen::Index j = 0; j < s.offsets.size(); ++j) {
                const double excess = s.normals.row(j).dot(y) - s.offsets(j);
                if (excess > 0.0) {
                  y -= excess / s.normals.row(j).squaredNorm() * s.normals.row(j).transpose();
                  moved = true;
                }
              }
              if (!moved) break;
            }
            return y;
          },
      },
      domain.shape());
}

}  // namespace detail

}  // namespace lifts
