#pragma once

#include <algorithm>
#include <array>
#include <cmath>

namespace zipshoe {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

inline double euclidean(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }
inline double max_norm(Point a, Point b) {
  return std::max(std::abs(a.x - b.x), std::abs(a.y - b.y));
}

/// Closed interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  double center() const { return 0.5 * (lo + hi); }
  bool contains(double v, double tol = 0.0) const { return v >= lo - tol && v <= hi + tol; }
  bool contains(const Interval& o, double tol = 0.0) const {
    return o.lo >= lo - tol && o.hi <= hi + tol;
  }
  static Interval spanning(double a, double b) { return a <= b ? Interval{a, b} : Interval{b, a}; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Axis-aligned rectangle.
struct Box {
  Interval x;
  Interval y;

  Point center() const { return {x.center(), y.center()}; }
  double diagonal() const { return std::hypot(x.width(), y.width()); }
  bool contains(Point p, double tol = 0.0) const { return x.contains(p.x, tol) && y.contains(p.y, tol); }
  bool contains(const Box& o, double tol = 0.0) const { return x.contains(o.x, tol) && y.contains(o.y, tol); }
  bool disjoint_interior(const Box& o) const {
    return x.hi <= o.x.lo || o.x.hi <= x.lo || y.hi <= o.y.lo || o.y.hi <= y.lo;
  }

  static Box hull(const std::array<Point, 4>& pts) {
    Box b{{pts[0].x, pts[0].x}, {pts[0].y, pts[0].y}};
    for (const Point& p : pts) {
      b.x.lo = std::min(b.x.lo, p.x);
      b.x.hi = std::max(b.x.hi, p.x);
      b.y.lo = std::min(b.y.lo, p.y);
      b.y.hi = std::max(b.y.hi, p.y);
    }
    return b;
  }

  friend bool operator==(const Box&, const Box&) = default;
};

/// Tangent vector.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

/// Row-major 2x2 matrix, used for derivatives of the branch maps.
struct Mat2 {
  double a = 1.0, b = 0.0;
  double c = 0.0, d = 1.0;

  static Mat2 diag(double p, double q) { return {p, 0.0, 0.0, q}; }
  double det() const { return a * d - b * c; }
  Vec2 operator*(Vec2 v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
  Mat2 operator*(const Mat2& m) const {
    return {a * m.a + b * m.c, a * m.b + b * m.d, c * m.a + d * m.c, c * m.b + d * m.d};
  }
  Mat2 inverse() const {
    const double k = 1.0 / det();
    return {d * k, -b * k, -c * k, a * k};
  }
  double max_abs_diff(const Mat2& m) const {
    return std::max({std::abs(a - m.a), std::abs(b - m.b), std::abs(c - m.c), std::abs(d - m.d)});
  }

  friend bool operator==(const Mat2&, const Mat2&) = default;
};

}  // namespace zipshoe
