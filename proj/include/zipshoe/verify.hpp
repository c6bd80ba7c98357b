#pragma once

// Strip-mapping and cone-field verifiers. They work on any model exposing
// branch maps, their derivatives and the boundary curves of the domain and
// target strips, so the affine horseshoe and its perturbations share them.

#include <array>
#include <cmath>
#include <concepts>
#include <limits>
#include <sstream>
#include <string>

#include "zipshoe/error.hpp"
#include "zipshoe/geometry.hpp"
#include "zipshoe/planar.hpp"
#include "zipshoe/report.hpp"
#include "zipshoe/symbolic.hpp"

namespace zipshoe::horseshoe {

template <class M>
concept StripModel = requires(const M& m, symbolic::Symbol s, Point p, double t) {
  { m.zip_system() } -> std::convertible_to<const symbolic::ZipSystem&>;
  { m.apply_branch(s, p) } -> std::same_as<Point>;
  { m.jacobian(s, p) } -> std::same_as<Mat2>;
  { m.domain_left(s, t) } -> std::same_as<double>;
  { m.domain_right(s, t) } -> std::same_as<double>;
  { m.target_lower(s, t) } -> std::same_as<double>;
  { m.target_upper(s, t) } -> std::same_as<double>;
};

struct VerifyOptions {
  std::size_t grid = 65;
  double tol = 1e-9;
};

namespace detail {

inline std::string fmt_point(Point p) {
  std::ostringstream os;
  os.precision(17);
  os << "(" << p.x << ", " << p.y << ")";
  return os.str();
}

inline CheckItem item(std::string name, double margin, std::string witness) {
  return {std::move(name), margin >= 0.0, margin, std::move(witness)};
}

}  // namespace detail

/// Every branch maps its vertical strip onto the horizontal strip of its
/// leg, vertical boundaries onto x' in {0,1}, horizontal boundaries onto the
/// target boundaries; domain strips and target strips are pairwise disjoint.
template <StripModel M>
Report verify_assumption1(const M& m, const VerifyOptions& opt = {}) {
  const symbolic::ZipSystem& sys = m.zip_system();
  const auto grid = geometry::unit_grid(opt.grid);
  Report r;

  for (const symbolic::Symbol s : sys.s_symbols()) {
    const std::string& label = sys.name(s);
    const symbolic::Symbol z = sys.tau(s);

    // corners
    const std::array<Point, 4> dom{Point{m.domain_left(s, 0.0), 0.0}, Point{m.domain_right(s, 0.0), 0.0},
                                   Point{m.domain_left(s, 1.0), 1.0}, Point{m.domain_right(s, 1.0), 1.0}};
    const std::array<Point, 4> tgt{Point{0.0, m.target_lower(z, 0.0)}, Point{1.0, m.target_lower(z, 1.0)},
                                   Point{0.0, m.target_upper(z, 0.0)}, Point{1.0, m.target_upper(z, 1.0)}};
    double worst = 0.0;
    std::string witness;
    std::array<int, 4> hits{};
    for (const Point& c : dom) {
      const Point img = m.apply_branch(s, c);
      double best = std::numeric_limits<double>::infinity();
      int which = 0;
      for (int t = 0; t < 4; ++t) {
        const double d = max_norm(img, tgt[t]);
        if (d < best) best = d, which = t;
      }
      ++hits[which];
      if (best > worst) worst = best, witness = detail::fmt_point(c) + " -> " + detail::fmt_point(img);
    }
    double margin = opt.tol - worst;
    for (int h : hits) {
      if (h != 1) margin = std::min(margin, -1.0), witness = "two corners map to the same target corner";
    }
    r.items.push_back(detail::item("corners[" + label + "]", margin, witness));

    // vertical boundaries go to x' = 0 and x' = 1
    const double x_left = m.apply_branch(s, dom[0]).x;
    const double want_left = x_left < 0.5 ? 0.0 : 1.0;
    worst = 0.0;
    witness.clear();
    for (double y : grid) {
      const Point pl{m.domain_left(s, y), y};
      const Point pr{m.domain_right(s, y), y};
      const double dl = std::abs(m.apply_branch(s, pl).x - want_left);
      const double dr = std::abs(m.apply_branch(s, pr).x - (1.0 - want_left));
      if (dl > worst) worst = dl, witness = detail::fmt_point(pl);
      if (dr > worst) worst = dr, witness = detail::fmt_point(pr);
    }
    r.items.push_back(detail::item("vertical_boundaries[" + label + "]", opt.tol - worst, witness));

    // horizontal boundaries go to the target boundary curves
    const double y_bottom = m.apply_branch(s, dom[0]).y;
    const bool bottom_to_lower =
        std::abs(y_bottom - m.target_lower(z, m.apply_branch(s, dom[0]).x)) <=
        std::abs(y_bottom - m.target_upper(z, m.apply_branch(s, dom[0]).x));
    worst = 0.0;
    witness.clear();
    for (double y_edge : {0.0, 1.0}) {
      const bool to_lower = (y_edge == 0.0) == bottom_to_lower;
      const double lo = m.domain_left(s, y_edge);
      const double hi = m.domain_right(s, y_edge);
      for (double t : grid) {
        const Point p{lo + (hi - lo) * t, y_edge};
        const Point img = m.apply_branch(s, p);
        const double target = to_lower ? m.target_lower(z, img.x) : m.target_upper(z, img.x);
        const double d = std::abs(img.y - target);
        if (d > worst) worst = d, witness = detail::fmt_point(p);
      }
    }
    r.items.push_back(detail::item("horizontal_boundaries[" + label + "]", opt.tol - worst, witness));

    // local homeomorphism: the derivative keeps a sign
    double min_det = std::numeric_limits<double>::infinity();
    double sign = 0.0;
    bool flips = false;
    for (double y : grid) {
      const double lo = m.domain_left(s, y);
      const double hi = m.domain_right(s, y);
      for (double t : {0.0, 0.5, 1.0}) {
        const Point p{lo + (hi - lo) * t, y};
        const double d = m.jacobian(s, p).det();
        if (sign == 0.0) sign = d > 0 ? 1.0 : -1.0;
        if (d * sign <= 0.0) flips = true, witness = detail::fmt_point(p);
        min_det = std::min(min_det, std::abs(d));
      }
    }
    r.items.push_back(detail::item("homeomorphism[" + label + "]", flips ? -1.0 : min_det, flips ? witness : ""));
  }

  // vertical strips pairwise disjoint and inside Q
  {
    double margin = std::numeric_limits<double>::infinity();
    std::string witness;
    for (double y : grid) {
      for (const symbolic::Symbol s : sys.s_symbols()) {
        margin = std::min({margin, m.domain_left(s, y), 1.0 - m.domain_right(s, y)});
        for (const symbolic::Symbol t : sys.s_symbols()) {
          if (t.index <= s.index) continue;
          const double gap = std::max(m.domain_left(t, y) - m.domain_right(s, y),
                                      m.domain_left(s, y) - m.domain_right(t, y));
          if (gap < margin) margin = gap, witness = sys.name(s) + " vs " + sys.name(t) + " at y=" + std::to_string(y);
        }
      }
    }
    r.items.push_back(detail::item("vertical_strips_disjoint", margin, margin < 0 ? witness : ""));
  }

  // horizontal strips pairwise disjoint and inside Q
  {
    double margin = std::numeric_limits<double>::infinity();
    std::string witness;
    for (double x : grid) {
      for (const symbolic::Symbol a : sys.z_symbols()) {
        margin = std::min({margin, m.target_lower(a, x), 1.0 - m.target_upper(a, x)});
        for (const symbolic::Symbol b : sys.z_symbols()) {
          if (b.index <= a.index) continue;
          const double gap = std::max(m.target_lower(b, x) - m.target_upper(a, x),
                                      m.target_lower(a, x) - m.target_upper(b, x));
          if (gap < margin) margin = gap, witness = sys.name(a) + " vs " + sys.name(b) + " at x=" + std::to_string(x);
        }
      }
    }
    r.items.push_back(detail::item("horizontal_strips_disjoint", margin, margin <= 0 ? witness : ""));
    r.items.back().passed = margin > 0.0;
  }
  return r;
}

struct ConeOptions {
  double mu = 0.0;    ///< growth constant, 0 < mu < 1 - mu_h * mu_v
  double mu_h = 0.3;  ///< aperture of the unstable cone |w_y| <= mu_h |w_x|
  double mu_v = 0.3;  ///< aperture of the stable cone |w_x| <= mu_v |w_y|
  std::size_t grid = 17;
  double tol = 1e-12;
};

/// Unstable cones around the x-axis must map into themselves under df with
/// |w_x| growing by 1/mu; stable cones around the y-axis likewise under the
/// inverse branch derivative.
template <StripModel M>
Report verify_cones(const M& m, const ConeOptions& opt) {
  if (!(opt.mu > 0.0 && opt.mu < 1.0 - opt.mu_h * opt.mu_v)) {
    throw PreconditionError("cone check needs 0 < mu < 1 - mu_h * mu_v");
  }
  const symbolic::ZipSystem& sys = m.zip_system();
  const auto grid = geometry::unit_grid(opt.grid);

  struct Worst {
    double margin = std::numeric_limits<double>::infinity();
    std::string witness;
    void see(double v, const std::string& label, Point p) {
      if (v < margin) margin = v, witness = label + " at " + detail::fmt_point(p);
    }
  } u_inv, u_grow, s_inv, s_grow;

  for (const symbolic::Symbol s : sys.s_symbols()) {
    const std::string& label = sys.name(s);
    for (double y : grid) {
      const double lo = m.domain_left(s, y);
      const double hi = m.domain_right(s, y);
      for (double t : grid) {
        const Point p{lo + (hi - lo) * t, y};
        const Mat2 J = m.jacobian(s, p);
        const Mat2 Ji = J.inverse();

        const Vec2 u1 = J * Vec2{1.0, opt.mu_h};
        const Vec2 u2 = J * Vec2{1.0, -opt.mu_h};
        double inv = std::min(opt.mu_h * std::abs(u1.x) - std::abs(u1.y), opt.mu_h * std::abs(u2.x) - std::abs(u2.y));
        if (std::signbit(u1.x) != std::signbit(u2.x)) inv = std::min(inv, -1.0);
        u_inv.see(inv, label, p);
        u_grow.see(std::min(std::abs(u1.x), std::abs(u2.x)) * opt.mu - 1.0, label, p);

        const Vec2 s1 = Ji * Vec2{opt.mu_v, 1.0};
        const Vec2 s2 = Ji * Vec2{-opt.mu_v, 1.0};
        inv = std::min(opt.mu_v * std::abs(s1.y) - std::abs(s1.x), opt.mu_v * std::abs(s2.y) - std::abs(s2.x));
        if (std::signbit(s1.y) != std::signbit(s2.y)) inv = std::min(inv, -1.0);
        s_inv.see(inv, label, p);
        s_grow.see(std::min(std::abs(s1.y), std::abs(s2.y)) * opt.mu - 1.0, label, p);
      }
    }
  }

  Report r;
  for (auto [name, w] : {std::pair{"unstable_cone_invariance", &u_inv}, std::pair{"unstable_growth", &u_grow},
                         std::pair{"stable_cone_invariance", &s_inv}, std::pair{"stable_growth", &s_grow}}) {
    CheckItem c{name, w->margin >= -opt.tol, w->margin, w->witness};
    r.items.push_back(std::move(c));
  }
  return r;
}

}  // namespace zipshoe::horseshoe
