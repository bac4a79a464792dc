#pragma once

#include <cmath>
#include <variant>
#include <vector>

namespace touchmap {

/// Planar vector in meters.
struct Vec2 {
  double x{0.0};
  double y{0.0};

  constexpr Vec2() = default;
  constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

  constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator-() const { return {-x, -y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Vec2& operator+=(Vec2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr bool operator==(const Vec2&) const = default;

  constexpr double dot(Vec2 o) const { return x * o.x + y * o.y; }
  constexpr double cross(Vec2 o) const { return x * o.y - y * o.x; }
  double norm() const { return std::sqrt(x * x + y * y); }
  bool is_finite() const { return std::isfinite(x) && std::isfinite(y); }

  /// Unit vector, or (0,0) when the norm is zero.
  Vec2 normalized() const {
    const double n = norm();
    return n > 0.0 ? Vec2{x / n, y / n} : Vec2{};
  }
};

constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }

/// ‖a − b‖₂.
double euclidean(Vec2 a, Vec2 b);

struct Circle {
  Vec2 center;
  double radius{0.0};
};

struct AxisAlignedRect {
  Vec2 min;
  Vec2 max;

  Vec2 center() const { return (min + max) * 0.5; }
  double width() const { return max.x - min.x; }
  double height() const { return max.y - min.y; }
};

/// Vertices counter-clockwise, strictly convex.
struct ConvexPolygon {
  std::vector<Vec2> vertices;
};

using Shape = std::variant<Circle, AxisAlignedRect, ConvexPolygon>;

/// Throws InvalidParam if the shape breaks its invariants (positive radius,
/// ordered rect corners, CCW strictly convex polygon with >= 3 vertices).
void validate_shape(const Shape& s);

/// Signed distance from p to the boundary of s: negative strictly inside,
/// zero on the boundary, positive outside.
double distance_point_to_shape(Vec2 p, const Shape& s);

/// Closest point of the boundary of s to p.
Vec2 nearest_boundary_point(Vec2 p, const Shape& s);

/// Distance from p to the closest point of segment [a, b].
double distance_point_to_segment(Vec2 p, Vec2 a, Vec2 b);
Vec2 closest_point_on_segment(Vec2 p, Vec2 a, Vec2 b);

/// Distance from p to the closed rectangle (zero when inside).
double distance_point_to_rect(Vec2 p, const AxisAlignedRect& r);

/// True when the shape and the rectangle share at least one point.
bool shape_intersects_rect(const Shape& s, const AxisAlignedRect& r);

}  // namespace touchmap
