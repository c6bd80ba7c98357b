#pragma once

// Lipschitz graphs over [0,1] and the strips bounded by them.
//
// A horizontal curve is y = h(x), a vertical curve is x = v(y). Both are
// stored as an evaluator on the free coordinate together with a declared
// Lipschitz bound.

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "zipshoe/planar.hpp"

namespace zipshoe::geometry {

enum class Orientation { horizontal, vertical };

inline constexpr std::size_t kDefaultGrid = 1025;
inline constexpr double kDefaultTolFix = 1e-12;
inline constexpr std::size_t kDefaultMaxIter = 200;

/// Uniform grid of `n` points on [0,1] (n >= 2).
std::vector<double> unit_grid(std::size_t n);

class LipschitzCurve {
 public:
  using Evaluator = std::function<double(double)>;

  LipschitzCurve(Orientation o, Evaluator f, double lipschitz_bound);

  static LipschitzCurve constant(Orientation o, double c);
  /// c0 + c1 * t; the bound is |c1|.
  static LipschitzCurve affine(Orientation o, double c0, double c1);
  /// Piecewise linear interpolation of samples on unit_grid(values.size());
  /// the bound is the largest slope between consecutive samples.
  static LipschitzCurve sampled(Orientation o, std::vector<double> values);

  double operator()(double t) const { return f_(t); }
  Orientation orientation() const { return orientation_; }
  double lipschitz() const { return lipschitz_; }

  struct Check {
    bool in_range = true;
    bool lipschitz_ok = true;
    double max_quotient = 0.0;
  };
  /// Sampled range and difference-quotient check on a uniform grid.
  Check check(std::size_t grid = kDefaultGrid, double tol = 1e-12) const;

 private:
  Orientation orientation_;
  Evaluator f_;
  double lipschitz_;
};

/// max over the grid of |a(t) - b(t)|.
double sup_distance(const LipschitzCurve& a, const LipschitzCurve& b, std::size_t grid = kDefaultGrid);

class Strip {
 public:
  /// Throws PreconditionError unless lower < upper at every grid point and
  /// both curves share the strip orientation.
  Strip(LipschitzCurve lower, LipschitzCurve upper, std::size_t grid = kDefaultGrid);

  static Strip rectangle(Orientation o, double lo, double hi);

  Orientation orientation() const { return lower_.orientation(); }
  const LipschitzCurve& lower() const { return lower_; }
  const LipschitzCurve& upper() const { return upper_; }
  double mu() const { return std::max(lower_.lipschitz(), upper_.lipschitz()); }

  /// True when `p` lies between the boundaries.
  bool contains(Point p, double tol = 0.0) const;

 private:
  LipschitzCurve lower_;
  LipschitzCurve upper_;
};

/// Largest boundary separation found on the grid.
double strip_width(const Strip& s, std::size_t grid = kDefaultGrid);

/// Amount by which the true width may exceed strip_width on that grid.
double strip_width_slack(const Strip& s, std::size_t grid = kDefaultGrid);

struct FixedPointOptions {
  double tol_fix = kDefaultTolFix;
  std::size_t max_iter = kDefaultMaxIter;
  double x0 = 0.5;
  bool keep_trace = true;
};

struct Intersection {
  Point point;
  std::size_t iterations = 0;
  /// Iterates x_0, x_1, ... of x -> v(h(x)).
  std::vector<double> trace;
};

/// Unique point of h and v, found by iterating x -> v(h(x)).
Intersection curve_intersection(const LipschitzCurve& h, const LipschitzCurve& v,
                                const FixedPointOptions& opt = {});

struct GapReport {
  Point z1;
  Point z2;
  double gap = 0.0;           ///< Euclidean |z1 - z2|
  double gap_max_norm = 0.0;  ///< max(|dx|, |dy|)
  double bound = 0.0;         ///< (|v - v'| + |h - h'|) / (1 - mu_h mu_v)
  bool holds = false;         ///< gap <= bound + tol
  bool holds_max_norm = false;
};

/// z1 = lower h ∩ lower v, z2 = upper h ∩ upper v.
GapReport intersection_gap_bound(const Strip& hs, const Strip& vs, double tol = 1e-9,
                                 std::size_t grid = kDefaultGrid, const FixedPointOptions& opt = {});

/// Same measurement for two arbitrary curve pairs (h, h') and (v, v'), which
/// need not be ordered.
GapReport intersection_gap_bound(const LipschitzCurve& h, const LipschitzCurve& h2, const LipschitzCurve& v,
                                 const LipschitzCurve& v2, double tol = 1e-9, std::size_t grid = kDefaultGrid,
                                 const FixedPointOptions& opt = {});

struct NestedLimit {
  LipschitzCurve curve;
  double error = 0.0;
};

/// Midcurve of the last strip of a nested, width-decreasing sequence.
NestedLimit nested_limit(const std::vector<Strip>& strips, std::size_t grid = kDefaultGrid,
                         double tol = 1e-12);

/// Root of f on [lo, hi] where f(lo) and f(hi) have opposite signs (or one is
/// zero). Returns nullopt when the bracket is invalid.
std::optional<double> bracketed_root(const std::function<double(double)>& f, double lo, double hi,
                                     double tol = 1e-14);

}  // namespace zipshoe::geometry
