#include "zipshoe/stability.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "zipshoe/error.hpp"

namespace zipshoe::stability {

using geometry::LipschitzCurve;
using geometry::Orientation;
using geometry::Strip;

DisplacementField DisplacementField::sin2pi(double c1, double c2) {
  constexpr double tau = 2.0 * std::numbers::pi;
  DisplacementField f;
  f.name = "sin2pi";
  f.c1 = c1;
  f.c2 = c2;
  f.value = [c1, c2](Point q) { return Vec2{c1 * std::sin(tau * q.y), c2 * std::sin(tau * q.x)}; };
  f.derivative = [c1, c2](Point q) {
    return Mat2{0.0, c1 * tau * std::cos(tau * q.y), c2 * tau * std::cos(tau * q.x), 0.0};
  };
  f.value_bound = std::max(std::abs(c1), std::abs(c2));
  f.derivative_bound = tau * f.value_bound;
  return f;
}

DisplacementField DisplacementField::named(const std::string& name, double c1, double c2) {
  if (name == "sin2pi") return sin2pi(c1, c2);
  throw ConfigError("unknown perturbation shape '" + name + "'");
}

PerturbedModel::PerturbedModel(HorseshoeModel base, double eta, DisplacementField shape)
    : base_(std::move(base)), eta_(eta), shape_(std::move(shape)) {}

Point PerturbedModel::phi(Point q) const {
  if (eta_ == 0.0) return q;
  const Vec2 d = shape_.value(q);
  return {q.x + eta_ * d.x, q.y + eta_ * d.y};
}

Mat2 PerturbedModel::dphi(Point q) const {
  if (eta_ == 0.0) return Mat2{};
  const Mat2 d = shape_.derivative(q);
  return {1.0 + eta_ * d.a, eta_ * d.b, eta_ * d.c, 1.0 + eta_ * d.d};
}

Point PerturbedModel::phi_inverse(Point q) const {
  if (eta_ == 0.0) return q;
  // u = q - eta * shape(u) is a contraction with rate eta * derivative_bound.
  Point u = q;
  for (int it = 0; it < 500; ++it) {
    const Vec2 d = shape_.value(u);
    const Point next{q.x - eta_ * d.x, q.y - eta_ * d.y};
    const bool done = max_norm(next, u) <= 1e-16;
    u = next;
    if (done) return u;
  }
  throw NumericError("inverse of the perturbation did not converge");
}

Mat2 PerturbedModel::jacobian(Symbol s, Point p) const {
  if (eta_ == 0.0) return base_.jacobian(s, p);
  return dphi(base_.apply_branch(s, p)) * base_.jacobian(s, p);
}

Interval PerturbedModel::fold_band(Symbol s) const {
  const double n = static_cast<double>(base_.params().N);
  const int k = base_.branch(s).fold;
  return {k / n, (k + 1) / n};
}

std::optional<Symbol> PerturbedModel::locate(Point p) const {
  if (eta_ == 0.0) return base_.locate(p);
  if (p.y < 0.0 || p.y > 1.0) return std::nullopt;
  for (const Symbol s : zip_system().s_symbols()) {
    if (!fold_band(s).contains(p.x)) continue;
    const double gx = apply_branch(s, p).x;
    if (gx >= 0.0 && gx <= 1.0) return s;
  }
  return std::nullopt;
}

Step PerturbedModel::apply(Point p) const {
  if (eta_ == 0.0) return base_.apply(p);
  const auto s = locate(p);
  if (!s) {
    throw EscapeError("point (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                      ") lies outside every perturbed vertical strip");
  }
  return {apply_branch(*s, p), *s};
}

Point PerturbedModel::apply_inverse(Point q, Symbol label) const {
  if (eta_ == 0.0) return base_.apply_inverse(q, label);
  constexpr double tol = 1e-12;
  const horseshoe::BranchMap& b = base_.branch(label);
  if (!Interval{0.0, 1.0}.contains(q.x, tol)) {
    throw DomainError("point is not in the image strip of branch " + b.label);
  }
  const Point u = phi_inverse(q);
  if (!b.image_y().contains(u.y, tol)) throw DomainError("point is not in the image strip of branch " + b.label);
  const Point p = b.inverse(u);
  if (!fold_band(label).contains(p.x, tol)) throw DomainError("preimage leaves the fold band of branch " + b.label);
  return p;
}

std::optional<double> PerturbedModel::solve_domain(Symbol s, double y, double t) const {
  // The bracket reaches past the band so that a boundary pushed out of it is
  // still found and reported by the verifier instead of failing here.
  const Interval band = fold_band(s);
  const double pad = 0.25 * band.width();
  return geometry::bracketed_root([&](double x) { return apply_branch(s, {x, y}).x - t; }, band.lo - pad,
                                  band.hi + pad);
}

std::optional<double> PerturbedModel::solve_target(double v0, double x) const {
  const double r = eta_ * shape_.value_bound + 1e-9;
  const auto u = geometry::bracketed_root([&](double u) { return phi({u, v0}).x - x; }, x - r, x + r);
  if (!u) return std::nullopt;
  return phi({*u, v0}).y;
}

double PerturbedModel::domain_left(Symbol s, double y) const {
  if (eta_ == 0.0) return base_.domain_left(s, y);
  const auto a = solve_domain(s, y, 0.0);
  const auto b = solve_domain(s, y, 1.0);
  if (!a || !b) throw DomainError("strip boundary of " + zip_system().name(s) + " not found");
  return std::min(*a, *b);
}

double PerturbedModel::domain_right(Symbol s, double y) const {
  if (eta_ == 0.0) return base_.domain_right(s, y);
  const auto a = solve_domain(s, y, 0.0);
  const auto b = solve_domain(s, y, 1.0);
  if (!a || !b) throw DomainError("strip boundary of " + zip_system().name(s) + " not found");
  return std::max(*a, *b);
}

double PerturbedModel::target_lower(Symbol z, double x) const {
  if (eta_ == 0.0) return base_.target_lower(z, x);
  const auto y = solve_target(base_.h_strip(z).lo, x);
  if (!y) throw DomainError("target boundary not found");
  return *y;
}

double PerturbedModel::target_upper(Symbol z, double x) const {
  if (eta_ == 0.0) return base_.target_upper(z, x);
  const auto y = solve_target(base_.h_strip(z).hi, x);
  if (!y) throw DomainError("target boundary not found");
  return *y;
}

namespace {

void check_disjoint(const std::vector<Strip>& strips, const std::vector<double>& grid, const char* what) {
  for (double t : grid) {
    std::vector<Interval> at;
    for (const Strip& s : strips) at.push_back({s.lower()(t), s.upper()(t)});
    std::sort(at.begin(), at.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    for (std::size_t i = 1; i < at.size(); ++i) {
      if (!(at[i - 1].hi < at[i].lo)) throw PerturbationTooLarge(std::string(what) + " strips overlap");
    }
  }
}

}  // namespace

PerturbedModel perturb(const HorseshoeModel& base, double eta, DisplacementField shape, const StabilityOptions& opt) {
  if (!(eta >= 0.0) || !std::isfinite(eta)) throw PreconditionError("eta must be a nonnegative number");
  if (!shape.value || !shape.derivative) throw PreconditionError("displacement field is incomplete");
  if (eta * shape.derivative_bound >= 1.0) {
    throw PerturbationTooLarge("eta * derivative bound = " + std::to_string(eta * shape.derivative_bound) +
                               " >= 1, the perturbation may fold the square");
  }
  PerturbedModel pm(base, eta, std::move(shape));
  const ZipSystem& sys = base.zip_system();

  if (eta == 0.0) {
    for (const Symbol s : sys.s_symbols()) {
      const Interval d = base.branch(s).domain_x;
      pm.vstrips_.push_back(Strip::rectangle(Orientation::vertical, d.lo, d.hi));
    }
    for (const Symbol z : sys.z_symbols()) {
      const Interval h = base.h_strip(z);
      pm.hstrips_.push_back(Strip::rectangle(Orientation::horizontal, h.lo, h.hi));
    }
    return pm;
  }

  const auto grid = geometry::unit_grid(opt.strip_samples);
  try {
    for (const Symbol s : sys.s_symbols()) {
      std::vector<double> lo, hi;
      for (double y : grid) {
        lo.push_back(pm.domain_left(s, y));
        hi.push_back(pm.domain_right(s, y));
        const Interval d = base.branch(s).domain_x;
        pm.displacement_ = std::max({pm.displacement_, std::abs(lo.back() - d.lo), std::abs(hi.back() - d.hi)});
      }
      pm.vstrips_.emplace_back(LipschitzCurve::sampled(Orientation::vertical, std::move(lo)),
                               LipschitzCurve::sampled(Orientation::vertical, std::move(hi)));
    }
    for (const Symbol z : sys.z_symbols()) {
      std::vector<double> lo, hi;
      for (double x : grid) {
        lo.push_back(pm.target_lower(z, x));
        hi.push_back(pm.target_upper(z, x));
        const Interval h = base.h_strip(z);
        pm.displacement_ = std::max({pm.displacement_, std::abs(lo.back() - h.lo), std::abs(hi.back() - h.hi)});
      }
      pm.hstrips_.emplace_back(LipschitzCurve::sampled(Orientation::horizontal, std::move(lo)),
                               LipschitzCurve::sampled(Orientation::horizontal, std::move(hi)));
    }
  } catch (const DomainError& e) {
    throw PerturbationTooLarge(std::string("strip recovery failed: ") + e.what());
  } catch (const PreconditionError& e) {
    throw PerturbationTooLarge(std::string("recovered strip is degenerate: ") + e.what());
  }
  check_disjoint(pm.vstrips_, grid, "vertical");
  check_disjoint(pm.hstrips_, grid, "horizontal");
  return pm;
}

PerturbedModel relabeled(const PerturbedModel& pm, Symbol a, Symbol b, const StabilityOptions& opt) {
  return perturb(horseshoe::swap_branches(pm.base(), a, b), pm.eta(), pm.shape(), opt);
}

PerturbedReport verify_perturbed(const PerturbedModel& pm, double mu, double aperture,
                                 const horseshoe::VerifyOptions& vopt) {
  PerturbedReport r;
  horseshoe::ConeOptions copt;
  copt.mu = mu;
  copt.mu_h = aperture;
  copt.mu_v = aperture;
  r.cones = horseshoe::verify_cones(pm, copt);
  r.assumption1 = horseshoe::verify_assumption1(pm, vopt);

  for (const Strip& s : pm.vertical_strips()) r.mu_v_g = std::max(r.mu_v_g, s.mu());
  for (const Strip& s : pm.horizontal_strips()) r.mu_h_g = std::max(r.mu_h_g, s.mu());
  r.mu_g = r.mu_h_g * r.mu_v_g;
  r.extra.items.push_back({"vertical_boundary_slopes", r.mu_v_g <= aperture, aperture - r.mu_v_g, ""});
  r.extra.items.push_back({"horizontal_boundary_slopes", r.mu_h_g <= aperture, aperture - r.mu_h_g, ""});

  // |Dg - Df| <= |DPhi - I| |Df| <= eta * derivative_bound * alpha entrywise.
  const double bound = pm.eta() * pm.shape().derivative_bound * pm.base().params().alpha() + 1e-15;
  double dev = 0.0;
  const auto grid = geometry::unit_grid(copt.grid);
  for (const Symbol s : pm.zip_system().s_symbols()) {
    for (double y : grid) {
      const double lo = pm.domain_left(s, y);
      const double hi = pm.domain_right(s, y);
      for (double t : grid) {
        const Point p{lo + (hi - lo) * t, y};
        dev = std::max(dev, pm.jacobian(s, p).max_abs_diff(pm.base().jacobian(s, p)));
      }
    }
  }
  r.extra.items.push_back({"derivative_deviation", dev <= bound, bound - dev, ""});
  return r;
}

// ------------------------------------------------------------------ tree

namespace {

double interp(const std::vector<double>& v, double t) {
  const double n = static_cast<double>(v.size() - 1);
  const double s = std::clamp(t, 0.0, 1.0) * n;
  const auto i = std::min(static_cast<std::size_t>(s), v.size() - 2);
  const double f = s - static_cast<double>(i);
  return v[i] + (v[i + 1] - v[i]) * f;
}

double max_gap(const std::vector<double>& lo, const std::vector<double>& hi) {
  double w = 0.0;
  for (std::size_t i = 0; i < lo.size(); ++i) w = std::max(w, hi[i] - lo[i]);
  return w;
}

std::vector<double> constant(std::size_t n, double v) { return std::vector<double>(n, v); }

}  // namespace

CurvedTree refine(const PerturbedModel& pm, std::size_t k, std::size_t samples, std::uint64_t cap) {
  const ZipSystem& sys = pm.zip_system();
  const std::size_t ns = sys.s_size();
  const std::size_t nz = sys.z_size();
  CurvedTree t;
  t.depth = k;
  t.samples = samples;

  if (pm.eta() == 0.0) {
    const horseshoe::RefinementTree bt = horseshoe::refine(pm.base(), k, cap);
    t.forward.resize(k + 1);
    t.backward.resize(k + 1);
    for (std::size_t j = 0; j <= k; ++j) {
      for (const Interval& v : bt.forward[j]) t.forward[j].push_back({constant(samples, v.lo), constant(samples, v.hi)});
      for (const Interval& h : bt.backward[j]) t.backward[j].push_back({constant(samples, h.lo), constant(samples, h.hi)});
    }
    t.alpha_V = bt.alpha_V;
    t.alpha_H = bt.alpha_H;
    return t;
  }

  std::uint64_t count = 1;
  for (std::size_t j = 0; j <= k; ++j) {
    if (count > cap / ns) throw CapExceeded("refinement depth " + std::to_string(k) + " exceeds the enumeration cap");
    count *= ns;
  }

  const auto grid = geometry::unit_grid(samples);
  t.forward.resize(k + 1);
  t.backward.resize(k + 1);
  for (const Symbol s : sys.s_symbols()) {
    CurvedTree::VNode v;
    for (double y : grid) {
      v.left.push_back(pm.domain_left(s, y));
      v.right.push_back(pm.domain_right(s, y));
    }
    t.forward[0].push_back(std::move(v));
  }
  for (const Symbol z : sys.z_symbols()) {
    CurvedTree::HNode h;
    for (double x : grid) {
      h.lower.push_back(pm.target_lower(z, x));
      h.upper.push_back(pm.target_upper(z, x));
    }
    t.backward[0].push_back(std::move(h));
  }

  const std::size_t mid = samples / 2;
  for (std::size_t j = 1; j <= k; ++j) {
    // V^{s_0 w}: points of the band of s_0 whose image lies on a boundary of V^w.
    t.forward[j].reserve(t.forward[j - 1].size() * ns);
    for (const Symbol s0 : sys.s_symbols()) {
      const Interval band = pm.fold_band(s0);
      for (const CurvedTree::VNode& w : t.forward[j - 1]) {
        std::array<std::vector<double>, 2> curves;
        for (int c = 0; c < 2; ++c) {
          const std::vector<double>& target = c == 0 ? w.left : w.right;
          for (double y : grid) {
            const auto x = geometry::bracketed_root(
                [&](double x) {
                  const Point q = pm.apply_branch(s0, {x, y});
                  return q.x - interp(target, q.y);
                },
                band.lo, band.hi);
            if (!x) throw NumericError("pull-back of a vertical strip boundary failed");
            curves[c].push_back(*x);
          }
        }
        if (curves[0][mid] > curves[1][mid]) std::swap(curves[0], curves[1]);
        t.forward[j].push_back({std::move(curves[0]), std::move(curves[1])});
      }
    }
    // H_{w z} = g_z(H_w) through the lowest branch of the fiber of z.
    t.backward[j].resize(t.backward[j - 1].size() * nz);
    for (std::size_t wi = 0; wi < t.backward[j - 1].size(); ++wi) {
      const CurvedTree::HNode& w = t.backward[j - 1][wi];
      for (const Symbol z : sys.z_symbols()) {
        const Symbol rep = pm.base().representative(z);
        const Interval band = pm.fold_band(rep);
        std::array<std::vector<double>, 2> curves;
        for (int c = 0; c < 2; ++c) {
          const std::vector<double>& source = c == 0 ? w.lower : w.upper;
          for (double xt : grid) {
            const auto x = geometry::bracketed_root(
                [&](double x) { return pm.apply_branch(rep, {x, interp(source, x)}).x - xt; }, band.lo, band.hi);
            if (!x) throw NumericError("push-forward of a horizontal strip boundary failed");
            curves[c].push_back(pm.apply_branch(rep, {*x, interp(source, *x)}).y);
          }
        }
        if (curves[0][mid] > curves[1][mid]) std::swap(curves[0], curves[1]);
        t.backward[j][wi * nz + z.index] = {std::move(curves[0]), std::move(curves[1])};
      }
    }
  }

  if (k >= 1) {
    double av = 0.0, ah = 0.0;
    for (std::size_t j = 1; j <= k; ++j) {
      for (std::size_t i = 0; i < t.forward[j].size(); ++i) {
        const auto& c = t.forward[j][i];
        const auto& p = t.forward[j - 1][horseshoe::RefinementTree::forward_parent(i, ns)];
        av = std::max(av, max_gap(c.left, c.right) / max_gap(p.left, p.right));
      }
      for (std::size_t i = 0; i < t.backward[j].size(); ++i) {
        const auto& c = t.backward[j][i];
        const auto& p = t.backward[j - 1][horseshoe::RefinementTree::backward_parent(i, nz, j)];
        ah = std::max(ah, max_gap(c.lower, c.upper) / max_gap(p.lower, p.upper));
      }
    }
    t.alpha_V = av;
    t.alpha_H = ah;
  }
  return t;
}

namespace {

struct NodeCurves {
  LipschitzCurve lo;
  LipschitzCurve hi;
};

NodeCurves curves_of(const CurvedTree::VNode& v) {
  return {LipschitzCurve::sampled(Orientation::vertical, v.left), LipschitzCurve::sampled(Orientation::vertical, v.right)};
}

NodeCurves curves_of(const CurvedTree::HNode& h) {
  return {LipschitzCurve::sampled(Orientation::horizontal, h.lower),
          LipschitzCurve::sampled(Orientation::horizontal, h.upper)};
}

Box hull_of(const NodeCurves& h, const NodeCurves& v) {
  geometry::FixedPointOptions opt;
  opt.keep_trace = false;
  return Box::hull({geometry::curve_intersection(h.lo, v.lo, opt).point, geometry::curve_intersection(h.lo, v.hi, opt).point,
                    geometry::curve_intersection(h.hi, v.lo, opt).point, geometry::curve_intersection(h.hi, v.hi, opt).point});
}

NodeCurves unit(Orientation o) { return {LipschitzCurve::constant(o, 0.0), LipschitzCurve::constant(o, 1.0)}; }

}  // namespace

Box decode(const CurvedTree& t, std::span<const Symbol> backward, std::span<const Symbol> forward, std::size_t s_size,
           std::size_t z_size) {
  if (forward.size() > t.depth + 1 || backward.size() > t.depth + 1) {
    throw PreconditionError("word is deeper than the refinement tree");
  }
  const NodeCurves v = forward.empty()
                           ? unit(Orientation::vertical)
                           : curves_of(t.forward[forward.size() - 1][horseshoe::word_index(forward, s_size)]);
  const NodeCurves h = backward.empty()
                           ? unit(Orientation::horizontal)
                           : curves_of(t.backward[backward.size() - 1][horseshoe::word_index(backward, z_size)]);
  return hull_of(h, v);
}

MatchReport match_conjugacy(const HorseshoeModel& base, const PerturbedModel& pm, std::size_t depth,
                            std::size_t samples) {
  MatchReport r;
  r.depth = depth;
  const ZipSystem& bs = base.zip_system();
  const ZipSystem& ps = pm.zip_system();
  auto mismatch = [&](std::string what) {
    ++r.mismatches;
    if (r.details.size() < 20) r.details.push_back(std::move(what));
  };

  auto fiber_sizes = [](const ZipSystem& sys) {
    std::vector<std::size_t> v;
    for (const Symbol z : sys.z_symbols()) v.push_back(sys.fiber(z).size());
    std::sort(v.begin(), v.end());
    return v;
  };
  if (bs.s_size() != ps.s_size() || bs.z_size() != ps.z_size() || fiber_sizes(bs) != fiber_sizes(ps)) {
    mismatch("the zip systems differ in #S, #Z or fiber sizes");
    return r;
  }
  const std::size_t ns = bs.s_size();
  const std::size_t nz = bs.z_size();

  const horseshoe::RefinementTree bt = horseshoe::refine(base, depth);
  const CurvedTree ct = refine(pm, depth, samples);
  const std::size_t mid = samples / 2;

  // Label permutation from the depth-0 strips.
  std::vector<std::size_t> perm(ns);
  std::vector<bool> used(ns, false);
  for (std::size_t i = 0; i < ns; ++i) {
    const auto& v = ct.forward[0][i];
    const double c = 0.5 * (v.left[mid] + v.right[mid]);
    std::size_t best = 0;
    for (std::size_t b = 1; b < ns; ++b) {
      if (std::abs(bt.forward[0][b].center() - c) < std::abs(bt.forward[0][best].center() - c)) best = b;
    }
    perm[i] = best;
    const std::string pn = ps.s_names()[i];
    const std::string bn = bs.s_names()[best];
    r.permutation.emplace_back(pn, bn);
    if (pn != bn) r.identity = false;
    if (used[best]) mismatch("strips " + pn + " and another both sit on base strip " + bn);
    used[best] = true;
    if (ps.name(ps.tau(ps.s(i))) != bs.name(bs.tau(bs.s(best)))) {
      mismatch("label " + pn + " maps to " + bn + " across different horizontal strips");
    }
  }
  for (std::size_t z = 0; z < nz; ++z) {
    if (ps.z_names()[z] != bs.z_names()[z]) mismatch("horizontal strip names differ");
  }

  // Node counts, emptiness and nesting, level by level.
  for (std::size_t j = 0; j <= depth; ++j) {
    if (ct.forward[j].size() != bt.forward[j].size() || ct.backward[j].size() != bt.backward[j].size()) {
      mismatch("node counts differ at level " + std::to_string(j));
      return r;
    }
    for (std::size_t i = 0; i < ct.forward[j].size(); ++i) {
      const auto& v = ct.forward[j][i];
      for (std::size_t q = 0; q < samples; ++q) {
        if (!(v.left[q] < v.right[q])) {
          mismatch("empty vertical node at level " + std::to_string(j));
          break;
        }
      }
      if (!(bt.forward[j][i].width() > 0.0)) mismatch("empty base vertical node at level " + std::to_string(j));
      if (j == 0) continue;
      const auto& p = ct.forward[j - 1][horseshoe::RefinementTree::forward_parent(i, ns)];
      for (std::size_t q = 0; q < samples; ++q) {
        if (v.left[q] < p.left[q] - 1e-9 || v.right[q] > p.right[q] + 1e-9) {
          mismatch("vertical node not nested at level " + std::to_string(j));
          break;
        }
      }
      if (!bt.forward[j - 1][horseshoe::RefinementTree::forward_parent(i, ns)].contains(bt.forward[j][i], 1e-12)) {
        mismatch("base vertical node not nested at level " + std::to_string(j));
      }
    }
    for (std::size_t i = 0; i < ct.backward[j].size(); ++i) {
      const auto& h = ct.backward[j][i];
      for (std::size_t q = 0; q < samples; ++q) {
        if (!(h.lower[q] < h.upper[q])) {
          mismatch("empty horizontal node at level " + std::to_string(j));
          break;
        }
      }
      if (j == 0) continue;
      const auto& p = ct.backward[j - 1][horseshoe::RefinementTree::backward_parent(i, nz, j)];
      for (std::size_t q = 0; q < samples; ++q) {
        if (h.lower[q] < p.lower[q] - 1e-9 || h.upper[q] > p.upper[q] + 1e-9) {
          mismatch("horizontal node not nested at level " + std::to_string(j));
          break;
        }
      }
    }
  }

  // Distinct words give disjoint strips at the deepest level.
  {
    std::vector<std::size_t> order(ct.forward[depth].size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    const auto& f = ct.forward[depth];
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return f[a].left[mid] < f[b].left[mid]; });
    for (std::size_t i = 1; i < order.size(); ++i) {
      for (std::size_t q = 0; q < samples; ++q) {
        if (!(f[order[i - 1]].right[q] < f[order[i]].left[q])) {
          mismatch("vertical nodes overlap at the deepest level");
          break;
        }
      }
    }
  }

  // Word-by-word pairing of the deepest boxes.
  const std::size_t nf = ct.forward[depth].size();
  const std::size_t nb = ct.backward[depth].size();
  std::vector<std::size_t> fmap(nf);
  for (std::size_t i = 0; i < nf; ++i) {
    std::size_t rest = i, mapped = 0, scale = 1;
    for (std::size_t d = 0; d <= depth; ++d) {
      mapped += perm[rest % ns] * scale;
      rest /= ns;
      scale *= ns;
    }
    fmap[i] = mapped;
  }
  std::vector<NodeCurves> vcurves, hcurves;
  vcurves.reserve(nf);
  for (const auto& v : ct.forward[depth]) vcurves.push_back(curves_of(v));
  for (const auto& h : ct.backward[depth]) hcurves.push_back(curves_of(h));
  for (std::size_t b = 0; b < nb; ++b) {
    for (std::size_t f = 0; f < nf; ++f) {
      Box pbox;
      try {
        pbox = hull_of(hcurves[b], vcurves[f]);
      } catch (const Error& e) {
        mismatch(std::string("box intersection failed: ") + e.what());
        continue;
      }
      const Box bbox{bt.forward[depth][fmap[f]], bt.backward[depth][b]};
      ++r.pairs;
      r.max_box_diameter = std::max(r.max_box_diameter, pbox.diagonal());
      r.max_base_box_diameter = std::max(r.max_base_box_diameter, bbox.diagonal());
      r.max_displacement = std::max(r.max_displacement, euclidean(pbox.center(), bbox.center()));
    }
  }
  return r;
}

Threshold failure_threshold(const HorseshoeModel& base, const DisplacementField& shape, double mu, double aperture,
                            double tol) {
  auto first_failure = [&](double eta) -> std::optional<std::string> {
    try {
      const PerturbedReport rep = verify_perturbed(perturb(base, eta, shape), mu, aperture);
      for (const Report* part : {&rep.assumption1, &rep.cones, &rep.extra}) {
        const auto f = part->failures();
        if (!f.empty()) return f.front()->name;
      }
      return std::nullopt;
    } catch (const PerturbationTooLarge&) {
      return std::string("perturbation_too_large");
    } catch (const Error& e) {
      return std::string("numeric_failure: ") + e.what();
    }
  };
  Threshold t;
  if (first_failure(0.0)) throw PreconditionError("the unperturbed model already fails verification");
  t.eta_pass = 0.0;
  t.eta_fail = shape.derivative_bound > 0.0 ? 1.0 / shape.derivative_bound : 1.0;
  t.failing_check = first_failure(t.eta_fail).value_or("");
  if (t.failing_check.empty()) throw PreconditionError("no failure below the derivative bound");
  while (t.eta_fail - t.eta_pass > tol) {
    const double m = 0.5 * (t.eta_pass + t.eta_fail);
    if (auto f = first_failure(m)) {
      t.eta_fail = m;
      t.failing_check = *f;
    } else {
      t.eta_pass = m;
    }
  }
  return t;
}

}  // namespace zipshoe::stability
