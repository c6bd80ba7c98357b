#include "zipshoe/geometry.hpp"

#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <cstdint>

#include "zipshoe/error.hpp"

namespace zipshoe::geometry {

std::vector<double> unit_grid(std::size_t n) {
  if (n < 2) throw PreconditionError("grid needs at least two points");
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = static_cast<double>(i) / static_cast<double>(n - 1);
  g.back() = 1.0;
  return g;
}

LipschitzCurve::LipschitzCurve(Orientation o, Evaluator f, double lipschitz_bound)
    : orientation_(o), f_(std::move(f)), lipschitz_(lipschitz_bound) {
  if (!f_) throw PreconditionError("curve evaluator is empty");
  if (!(lipschitz_bound >= 0.0) || !std::isfinite(lipschitz_bound)) {
    throw PreconditionError("Lipschitz bound must be finite and nonnegative");
  }
}

LipschitzCurve LipschitzCurve::constant(Orientation o, double c) {
  return LipschitzCurve(o, [c](double) { return c; }, 0.0);
}

LipschitzCurve LipschitzCurve::affine(Orientation o, double c0, double c1) {
  return LipschitzCurve(o, [c0, c1](double t) { return c0 + c1 * t; }, std::abs(c1));
}

LipschitzCurve LipschitzCurve::sampled(Orientation o, std::vector<double> values) {
  if (values.size() < 2) throw PreconditionError("sampled curve needs at least two samples");
  const double n = static_cast<double>(values.size() - 1);
  double lip = 0.0;
  for (std::size_t i = 1; i < values.size(); ++i) lip = std::max(lip, std::abs(values[i] - values[i - 1]) * n);
  auto data = std::make_shared<const std::vector<double>>(std::move(values));
  return LipschitzCurve(
      o,
      [data, n](double t) {
        const auto& v = *data;
        const double s = std::clamp(t, 0.0, 1.0) * n;
        const auto i = std::min(static_cast<std::size_t>(s), v.size() - 2);
        const double f = s - static_cast<double>(i);
        return v[i] + (v[i + 1] - v[i]) * f;
      },
      lip);
}

LipschitzCurve::Check LipschitzCurve::check(std::size_t grid, double tol) const {
  Check c;
  const auto g = unit_grid(grid);
  double prev = f_(g[0]);
  c.in_range = prev >= -tol && prev <= 1.0 + tol;
  for (std::size_t i = 1; i < g.size(); ++i) {
    const double cur = f_(g[i]);
    if (cur < -tol || cur > 1.0 + tol) c.in_range = false;
    c.max_quotient = std::max(c.max_quotient, std::abs(cur - prev) / (g[i] - g[i - 1]));
    prev = cur;
  }
  c.lipschitz_ok = c.max_quotient <= lipschitz_ + tol * static_cast<double>(grid);
  return c;
}

double sup_distance(const LipschitzCurve& a, const LipschitzCurve& b, std::size_t grid) {
  double m = 0.0;
  for (double t : unit_grid(grid)) m = std::max(m, std::abs(a(t) - b(t)));
  return m;
}

Strip::Strip(LipschitzCurve lower, LipschitzCurve upper, std::size_t grid)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.orientation() != upper_.orientation()) throw PreconditionError("strip boundaries differ in orientation");
  for (double t : unit_grid(grid)) {
    if (!(lower_(t) < upper_(t))) throw PreconditionError("strip boundaries touch or cross");
  }
}

Strip Strip::rectangle(Orientation o, double lo, double hi) {
  return Strip(LipschitzCurve::constant(o, lo), LipschitzCurve::constant(o, hi), 2);
}

bool Strip::contains(Point p, double tol) const {
  const double t = orientation() == Orientation::horizontal ? p.x : p.y;
  const double s = orientation() == Orientation::horizontal ? p.y : p.x;
  return s >= lower_(t) - tol && s <= upper_(t) + tol;
}

double strip_width(const Strip& s, std::size_t grid) { return sup_distance(s.lower(), s.upper(), grid); }

double strip_width_slack(const Strip& s, std::size_t grid) {
  // Between grid points the separation moves by at most (mu_lo + mu_up) * t.
  const double spacing = 1.0 / static_cast<double>(grid - 1);
  return 0.5 * (s.lower().lipschitz() + s.upper().lipschitz()) * spacing;
}

Intersection curve_intersection(const LipschitzCurve& h, const LipschitzCurve& v, const FixedPointOptions& opt) {
  if (h.orientation() != Orientation::horizontal || v.orientation() != Orientation::vertical) {
    throw PreconditionError("curve_intersection expects a horizontal and a vertical curve");
  }
  if (!(h.lipschitz() * v.lipschitz() < 1.0)) {
    throw PreconditionError("curves are not a contraction pair (mu_h * mu_v >= 1)");
  }
  Intersection r;
  double x = opt.x0;
  if (opt.keep_trace) r.trace.push_back(x);
  for (std::size_t it = 1; it <= opt.max_iter; ++it) {
    const double next = v(h(x));
    if (opt.keep_trace) r.trace.push_back(next);
    const bool done = std::abs(next - x) <= opt.tol_fix;
    x = next;
    if (done) {
      const double y = h(x);
      if (std::abs(x - v(y)) <= opt.tol_fix) {
        r.point = {x, y};
        r.iterations = it;
        return r;
      }
    }
  }
  throw NumericError("fixed-point iteration did not converge in " + std::to_string(opt.max_iter) + " steps");
}

namespace {

GapReport gap_report(const LipschitzCurve& h, const LipschitzCurve& h2, const LipschitzCurve& v,
                     const LipschitzCurve& v2, double mu, double tol, std::size_t grid, const FixedPointOptions& opt) {
  if (!(mu < 1.0)) throw PreconditionError("mu_h * mu_v must be < 1");
  GapReport r;
  r.z1 = curve_intersection(h, v, opt).point;
  r.z2 = curve_intersection(h2, v2, opt).point;
  r.gap = euclidean(r.z1, r.z2);
  r.gap_max_norm = max_norm(r.z1, r.z2);
  r.bound = (sup_distance(v, v2, grid) + sup_distance(h, h2, grid)) / (1.0 - mu);
  r.holds = r.gap <= r.bound + tol;
  r.holds_max_norm = r.gap_max_norm <= r.bound + tol;
  return r;
}

}  // namespace

GapReport intersection_gap_bound(const Strip& hs, const Strip& vs, double tol, std::size_t grid,
                                 const FixedPointOptions& opt) {
  if (hs.orientation() != Orientation::horizontal || vs.orientation() != Orientation::vertical) {
    throw PreconditionError("intersection_gap_bound expects a horizontal and a vertical strip");
  }
  return gap_report(hs.lower(), hs.upper(), vs.lower(), vs.upper(), hs.mu() * vs.mu(), tol, grid, opt);
}

GapReport intersection_gap_bound(const LipschitzCurve& h, const LipschitzCurve& h2, const LipschitzCurve& v,
                                 const LipschitzCurve& v2, double tol, std::size_t grid,
                                 const FixedPointOptions& opt) {
  const double mu = std::max(h.lipschitz(), h2.lipschitz()) * std::max(v.lipschitz(), v2.lipschitz());
  return gap_report(h, h2, v, v2, mu, tol, grid, opt);
}

NestedLimit nested_limit(const std::vector<Strip>& strips, std::size_t grid, double tol) {
  if (strips.empty()) throw PreconditionError("nested_limit needs at least one strip");
  const auto g = unit_grid(grid);
  for (std::size_t k = 1; k < strips.size(); ++k) {
    const Strip& parent = strips[k - 1];
    const Strip& child = strips[k];
    if (child.orientation() != parent.orientation()) throw PreconditionError("strips differ in orientation");
    for (double t : g) {
      if (child.lower()(t) < parent.lower()(t) - tol || child.upper()(t) > parent.upper()(t) + tol) {
        throw PreconditionError("strip " + std::to_string(k) + " is not nested in its predecessor");
      }
    }
    if (!(strip_width(child, grid) < strip_width(parent, grid))) {
      throw PreconditionError("strip widths are not strictly decreasing at " + std::to_string(k));
    }
  }
  const Strip& last = strips.back();
  LipschitzCurve lo = last.lower();
  LipschitzCurve up = last.upper();
  const double lip = 0.5 * (lo.lipschitz() + up.lipschitz());
  LipschitzCurve mid(last.orientation(), [lo, up](double t) { return 0.5 * (lo(t) + up(t)); }, lip);
  return {std::move(mid), 0.5 * strip_width(last, grid) + strip_width_slack(last, grid)};
}

std::optional<double> bracketed_root(const std::function<double(double)>& f, double lo, double hi, double tol) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (std::signbit(flo) == std::signbit(fhi) || !std::isfinite(flo) || !std::isfinite(fhi)) return std::nullopt;
  std::uintmax_t max_iter = 200;
  auto stop = [tol](double a, double b) { return std::abs(b - a) <= tol; };
  const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, stop, max_iter);
  return 0.5 * (a + b);
}

}  // namespace zipshoe::geometry
