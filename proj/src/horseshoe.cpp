#include "zipshoe/horseshoe.hpp"

#include <cmath>

#include "zipshoe/error.hpp"

namespace zipshoe::horseshoe {

HorseshoeParams HorseshoeParams::with_defaults(int N, double eps) {
  HorseshoeParams p;
  p.N = N;
  p.eps = eps;
  if (N >= 1 && eps > 0.0 && p.y_b + p.beta() >= 1.0) {
    const double gap = (1.0 - 2.0 * p.beta()) / 3.0;
    p.y_a = gap;
    p.y_b = 2.0 * gap + p.beta();
  }
  return p;
}

void HorseshoeParams::validate() const {
  if (N < 1) throw ConfigError("N must be >= 1");
  if (!(eps > 0.0) || !std::isfinite(eps)) throw ConfigError("eps must be a positive number");
  const double b = beta();
  for (auto [name, y] : {std::pair{"y_a", y_a}, std::pair{"y_b", y_b}}) {
    if (!(y >= 0.0) || !(y + b < 1.0)) {
      throw ConfigError(std::string(name) + " must satisfy 0 <= " + name + " and " + name + " + beta < 1");
    }
  }
}

ZipSystem horseshoe_zip_system(int N) {
  std::vector<std::string> s;
  std::vector<std::uint16_t> tau;
  for (int k = 1; k <= N; ++k) {
    s.push_back(std::to_string(k));
    tau.push_back(0);
  }
  for (int k = 1; k <= N; ++k) {
    s.push_back(std::to_string(k) + "p");
    tau.push_back(1);
  }
  return ZipSystem(std::move(s), {"a", "b"}, std::move(tau));
}

HorseshoeModel::HorseshoeModel(HorseshoeParams p, std::vector<BranchMap> b, ZipSystem sys)
    : params_(p), branches_(std::move(b)), sys_(std::move(sys)) {}

HorseshoeModel HorseshoeModel::build(const HorseshoeParams& p) {
  p.validate();
  const double a = p.alpha();
  const double b = p.beta();
  const double n = static_cast<double>(p.N);
  const double d0 = p.delta0();
  const double d1 = p.delta1();

  std::vector<BranchMap> branches;
  for (Leg leg : {Leg::a, Leg::b}) {
    for (int k = 0; k < p.N; ++k) {
      BranchMap m;
      m.fold = k;
      m.leg = leg;
      const bool even = k % 2 == 0;
      if (leg == Leg::a) {
        m.label = std::to_string(k + 1);
        m.ax = even ? a : -a;
        m.cx = even ? -k * a / n - d0 : (k + 1) * a / n - d0;
        m.ay = b;
        m.cy = p.y_a;
      } else {
        m.label = std::to_string(k + 1) + "p";
        m.ax = even ? -a : a;
        m.cx = even ? d1 + 1.0 + k * a / n : d1 + 1.0 - (k + 1) * a / n;
        m.ay = -b;
        m.cy = p.y_b + b;
      }
      m.domain_x = Interval::spanning((0.0 - m.cx) / m.ax, (1.0 - m.cx) / m.ax);
      branches.push_back(m);
    }
  }
  return HorseshoeModel(p, std::move(branches), horseshoe_zip_system(p.N));
}

HorseshoeModel HorseshoeModel::from_parts(const HorseshoeParams& params, std::vector<BranchMap> branches,
                                          ZipSystem sys) {
  if (branches.size() != sys.s_size()) throw ConfigError("one branch per S symbol is required");
  if (sys.z_size() != 2) throw ConfigError("the horseshoe has exactly two horizontal strips");
  for (std::size_t i = 0; i < branches.size(); ++i) {
    if (branches[i].label != sys.s_names()[i]) {
      throw ConfigError("branch " + std::to_string(i) + " is labelled '" + branches[i].label + "', expected '" +
                        sys.s_names()[i] + "'");
    }
  }
  return HorseshoeModel(params, std::move(branches), std::move(sys));
}

const BranchMap& HorseshoeModel::branch(Symbol label) const {
  if (label.alphabet != symbolic::Alphabet::S || label.index >= branches_.size()) {
    throw AlphabetError("not a branch label");
  }
  return branches_[label.index];
}

Interval HorseshoeModel::h_strip(Symbol z) const {
  if (z.alphabet != symbolic::Alphabet::Z || z.index > 1) throw AlphabetError("not a horizontal strip name");
  const double y = z.index == 0 ? params_.y_a : params_.y_b;
  return {y, y + params_.beta()};
}

std::optional<Symbol> HorseshoeModel::locate(Point p) const {
  if (p.y < 0.0 || p.y > 1.0) return std::nullopt;
  for (std::size_t i = 0; i < branches_.size(); ++i) {
    if (branches_[i].domain_x.contains(p.x)) return sys_.s(i);
  }
  return std::nullopt;
}

Step HorseshoeModel::apply(Point p) const {
  const auto label = locate(p);
  if (!label) {
    throw EscapeError("point (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                      ") lies outside every vertical strip");
  }
  return {branch(*label).apply(p), *label};
}

Point HorseshoeModel::apply_inverse(Point q, Symbol label) const {
  const BranchMap& m = branch(label);
  constexpr double tol = 1e-12;
  if (!Interval{0.0, 1.0}.contains(q.x, tol) || !m.image_y().contains(q.y, tol)) {
    throw DomainError("point (" + std::to_string(q.x) + ", " + std::to_string(q.y) +
                      ") is not in the image strip of branch " + m.label);
  }
  return m.inverse(q);
}

HorseshoeModel swap_branches(const HorseshoeModel& m, Symbol a, Symbol b) {
  std::vector<BranchMap> branches = m.branches();
  BranchMap& x = branches.at(a.index);
  BranchMap& y = branches.at(b.index);
  std::swap(x, y);
  std::swap(x.label, y.label);
  return HorseshoeModel::from_parts(m.params(), std::move(branches), m.zip_system());
}

std::size_t word_index(std::span<const Symbol> w, std::size_t base) {
  std::size_t i = 0;
  for (const Symbol& s : w) i = i * base + s.index;
  return i;
}

Word word_at(std::size_t index, std::size_t length, symbolic::Alphabet alphabet, std::size_t base) {
  Word w(length);
  for (std::size_t j = length; j-- > 0;) {
    w[j] = Symbol{alphabet, static_cast<std::uint16_t>(index % base)};
    index /= base;
  }
  return w;
}

std::size_t RefinementTree::backward_parent(std::size_t index, std::size_t z_size, std::size_t level) {
  std::size_t mod = 1;
  for (std::size_t j = 0; j < level; ++j) mod *= z_size;
  return index % mod;
}

namespace {

Interval pull_back_x(const BranchMap& m, const Interval& target) {
  return Interval::spanning((target.lo - m.cx) / m.ax, (target.hi - m.cx) / m.ax);
}

Interval push_y(const BranchMap& m, const Interval& source) {
  return Interval::spanning(m.ay * source.lo + m.cy, m.ay * source.hi + m.cy);
}

std::optional<double> max_ratio(const std::vector<std::vector<Interval>>& levels, auto parent_of) {
  if (levels.size() < 2) return std::nullopt;
  double r = 0.0;
  for (std::size_t j = 1; j < levels.size(); ++j) {
    for (std::size_t i = 0; i < levels[j].size(); ++i) {
      r = std::max(r, levels[j][i].width() / levels[j - 1][parent_of(i, j)].width());
    }
  }
  return r;
}

}  // namespace

RefinementTree refine(const HorseshoeModel& m, std::size_t k, std::uint64_t cap) {
  const ZipSystem& sys = m.zip_system();
  const std::size_t ns = sys.s_size();
  const std::size_t nz = sys.z_size();
  std::uint64_t count = 1;
  for (std::size_t j = 0; j <= k; ++j) {
    if (count > cap / ns) throw CapExceeded("refinement depth " + std::to_string(k) + " exceeds the enumeration cap");
    count *= ns;
  }

  RefinementTree t;
  t.depth = k;
  t.forward.resize(k + 1);
  t.backward.resize(k + 1);
  for (std::size_t i = 0; i < ns; ++i) t.forward[0].push_back(m.branches()[i].domain_x);
  for (std::size_t z = 0; z < nz; ++z) t.backward[0].push_back(m.h_strip(sys.z(z)));

  for (std::size_t j = 1; j <= k; ++j) {
    // V^{s_0 w} = f_{s_0}^{-1}(V^w) with |w| = j.
    const auto& prev = t.forward[j - 1];
    auto& cur = t.forward[j];
    cur.reserve(prev.size() * ns);
    for (std::size_t s0 = 0; s0 < ns; ++s0) {
      for (const Interval& w : prev) cur.push_back(pull_back_x(m.branches()[s0], w));
    }
    // H_{w z} = f_z(H_w).
    const auto& bprev = t.backward[j - 1];
    auto& bcur = t.backward[j];
    bcur.resize(bprev.size() * nz);
    for (std::size_t wi = 0; wi < bprev.size(); ++wi) {
      for (std::size_t z = 0; z < nz; ++z) {
        bcur[wi * nz + z] = push_y(m.branch(m.representative(sys.z(z))), bprev[wi]);
      }
    }
  }
  t.alpha_V = max_ratio(t.forward, [ns](std::size_t i, std::size_t) { return RefinementTree::forward_parent(i, ns); });
  t.alpha_H = max_ratio(t.backward, [nz](std::size_t i, std::size_t j) {
    return RefinementTree::backward_parent(i, nz, j);
  });
  return t;
}

Box decode(const HorseshoeModel& m, std::span<const Symbol> backward, std::span<const Symbol> forward) {
  Interval x{0.0, 1.0};
  for (std::size_t j = forward.size(); j-- > 0;) x = pull_back_x(m.branch(forward[j]), x);
  Interval y{0.0, 1.0};
  for (const Symbol& z : backward) y = push_y(m.branch(m.representative(z)), y);
  return {x, y};
}

}  // namespace zipshoe::horseshoe
