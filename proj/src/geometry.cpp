#include "touchmap/geometry.hpp"

#include <algorithm>
#include <array>
#include <limits>

#include <fmt/format.h>

#include "touchmap/errors.hpp"

namespace touchmap {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool polygon_strictly_contains(const ConvexPolygon& poly, Vec2 p) {
  const auto& v = poly.vertices;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec2 a = v[i];
    const Vec2 b = v[(i + 1) % v.size()];
    if ((b - a).cross(p - a) <= 0.0) return false;
  }
  return true;
}

// Projection interval of a point set onto an axis.
template <class Range>
std::pair<double, double> project(const Range& pts, Vec2 axis) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const Vec2& p : pts) {
    const double d = p.dot(axis);
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  return {lo, hi};
}

}  // namespace

double euclidean(Vec2 a, Vec2 b) { return (a - b).norm(); }

double distance_point_to_segment(Vec2 p, Vec2 a, Vec2 b) {
  return euclidean(p, closest_point_on_segment(p, a, b));
}

Vec2 closest_point_on_segment(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = ab.dot(ab);
  if (len2 == 0.0) return a;
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return a + ab * t;
}

double distance_point_to_rect(Vec2 p, const AxisAlignedRect& r) {
  const double dx = std::max({r.min.x - p.x, 0.0, p.x - r.max.x});
  const double dy = std::max({r.min.y - p.y, 0.0, p.y - r.max.y});
  return std::hypot(dx, dy);
}

void validate_shape(const Shape& s) {
  std::visit(
      Overloaded{
          [](const Circle& c) {
            if (!c.center.is_finite() || !std::isfinite(c.radius) || c.radius <= 0.0)
              throw InvalidParam(fmt::format("circle radius must be positive and finite, got {}", c.radius));
          },
          [](const AxisAlignedRect& r) {
            if (!r.min.is_finite() || !r.max.is_finite() || !(r.min.x < r.max.x) || !(r.min.y < r.max.y))
              throw InvalidParam("rectangle requires min < max componentwise");
          },
          [](const ConvexPolygon& poly) {
            const auto& v = poly.vertices;
            if (v.size() < 3) throw InvalidParam("polygon needs at least 3 vertices");
            for (std::size_t i = 0; i < v.size(); ++i) {
              if (!v[i].is_finite()) throw InvalidParam("polygon vertex is not finite");
              const Vec2 a = v[i];
              const Vec2 b = v[(i + 1) % v.size()];
              const Vec2 c = v[(i + 2) % v.size()];
              if ((b - a).cross(c - b) <= 0.0)
                throw InvalidParam(fmt::format("polygon is not strictly convex and counter-clockwise at vertex {}",
                                               (i + 1) % v.size()));
            }
            // Local left turns everywhere still admit self-winding stars; the
            // total turning must be exactly one revolution.
            double turning = 0.0;
            for (std::size_t i = 0; i < v.size(); ++i) {
              const Vec2 e0 = v[(i + 1) % v.size()] - v[i];
              const Vec2 e1 = v[(i + 2) % v.size()] - v[(i + 1) % v.size()];
              turning += std::atan2(e0.cross(e1), e0.dot(e1));
            }
            if (std::abs(turning - 2.0 * M_PI) > 1e-6) throw InvalidParam("polygon winds more than once");
          },
      },
      s);
}

double distance_point_to_shape(Vec2 p, const Shape& s) {
  return std::visit(
      Overloaded{
          [p](const Circle& c) { return euclidean(p, c.center) - c.radius; },
          [p](const AxisAlignedRect& r) {
            const bool inside = p.x > r.min.x && p.x < r.max.x && p.y > r.min.y && p.y < r.max.y;
            if (!inside) return distance_point_to_rect(p, r);
            return -std::min({p.x - r.min.x, r.max.x - p.x, p.y - r.min.y, r.max.y - p.y});
          },
          [p](const ConvexPolygon& poly) {
            const auto& v = poly.vertices;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < v.size(); ++i)
              best = std::min(best, distance_point_to_segment(p, v[i], v[(i + 1) % v.size()]));
            return polygon_strictly_contains(poly, p) ? -best : best;
          },
      },
      s);
}

Vec2 nearest_boundary_point(Vec2 p, const Shape& s) {
  return std::visit(
      Overloaded{
          [p](const Circle& c) {
            const Vec2 d = p - c.center;
            const Vec2 dir = d.norm() > 0.0 ? d.normalized() : Vec2{1.0, 0.0};
            return c.center + dir * c.radius;
          },
          [p](const AxisAlignedRect& r) {
            const bool inside = p.x > r.min.x && p.x < r.max.x && p.y > r.min.y && p.y < r.max.y;
            if (!inside) return Vec2{std::clamp(p.x, r.min.x, r.max.x), std::clamp(p.y, r.min.y, r.max.y)};
            const std::array<double, 4> gaps{p.x - r.min.x, r.max.x - p.x, p.y - r.min.y, r.max.y - p.y};
            const auto k = std::min_element(gaps.begin(), gaps.end()) - gaps.begin();
            switch (k) {
              case 0: return Vec2{r.min.x, p.y};
              case 1: return Vec2{r.max.x, p.y};
              case 2: return Vec2{p.x, r.min.y};
              default: return Vec2{p.x, r.max.y};
            }
          },
          [p](const ConvexPolygon& poly) {
            const auto& v = poly.vertices;
            Vec2 best_pt = v.front();
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < v.size(); ++i) {
              const Vec2 q = closest_point_on_segment(p, v[i], v[(i + 1) % v.size()]);
              const double d = euclidean(p, q);
              if (d < best) {
                best = d;
                best_pt = q;
              }
            }
            return best_pt;
          },
      },
      s);
}

bool shape_intersects_rect(const Shape& s, const AxisAlignedRect& r) {
  return std::visit(
      Overloaded{
          [&r](const Circle& c) { return distance_point_to_rect(c.center, r) <= c.radius; },
          [&r](const AxisAlignedRect& o) {
            return o.min.x <= r.max.x && r.min.x <= o.max.x && o.min.y <= r.max.y && r.min.y <= o.max.y;
          },
          [&r](const ConvexPolygon& poly) {
            // Separating axis test over both shapes' edge normals.
            const std::array<Vec2, 4> corners{r.min, Vec2{r.max.x, r.min.y}, r.max, Vec2{r.min.x, r.max.y}};
            std::vector<Vec2> axes{{1.0, 0.0}, {0.0, 1.0}};
            const auto& v = poly.vertices;
            for (std::size_t i = 0; i < v.size(); ++i) {
              const Vec2 e = v[(i + 1) % v.size()] - v[i];
              axes.push_back({-e.y, e.x});
            }
            for (const Vec2& axis : axes) {
              const auto [a_lo, a_hi] = project(v, axis);
              const auto [b_lo, b_hi] = project(corners, axis);
              if (a_hi < b_lo || b_hi < a_lo) return false;
            }
            return true;
          },
      },
      s);
}

}  // namespace touchmap
