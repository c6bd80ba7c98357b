#pragma once

// Piecewise-affine N-to-1 horseshoe on Q = [0,1]^2.
//
// The square is stretched by alpha = 2N + eps in x and squeezed by
// beta = 1/alpha in y, folded into N tent bands and bent into two legs. Leg a
// lands on H_a = [0,1] x [y_a, y_a + beta], leg b on H_b = [0,1] x [y_b, y_b + beta]
// with both coordinates reversed. Branch (k, a) is labelled "k+1" and (k, b)
// "(k+1)p".

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zipshoe/planar.hpp"
#include "zipshoe/symbolic.hpp"

namespace zipshoe::horseshoe {

using symbolic::Symbol;
using symbolic::Word;
using symbolic::ZipSystem;

struct HorseshoeParams {
  int N = 2;
  double eps = 0.1;
  double y_a = 0.2;
  double y_b = 0.7;

  double alpha() const { return 2.0 * N + eps; }
  double beta() const { return 1.0 / alpha(); }
  double delta0() const { return (alpha() / N - 2.0) / 3.0; }
  double delta1() const { return 1.0 + 2.0 * (alpha() / N - 2.0) / 3.0; }

  /// Throws ConfigError on N < 1, eps <= 0, or a leg leaving [0,1].
  /// Separation of H_a and H_b is left to verify_assumption1.
  void validate() const;

  /// y_a = 0.2, y_b = 0.7 when both legs fit; otherwise (small N) the legs
  /// are spaced with three equal gaps of (1 - 2 beta) / 3.
  static HorseshoeParams with_defaults(int N, double eps);

  friend bool operator==(const HorseshoeParams&, const HorseshoeParams&) = default;
};

enum class Leg : std::uint8_t { a = 0, b = 1 };

/// x' = ax * x + cx, y' = ay * y + cy on domain_x x [0,1].
struct BranchMap {
  std::string label;
  int fold = 0;
  Leg leg = Leg::a;
  Interval domain_x;
  double ax = 1.0, cx = 0.0;
  double ay = 1.0, cy = 0.0;

  Point apply(Point p) const { return {ax * p.x + cx, ay * p.y + cy}; }
  Point inverse(Point q) const { return {(q.x - cx) / ax, (q.y - cy) / ay}; }
  Mat2 jacobian() const { return Mat2::diag(ax, ay); }
  /// y-range of the image of the domain.
  Interval image_y() const { return Interval::spanning(cy, ay + cy); }

  friend bool operator==(const BranchMap&, const BranchMap&) = default;
};

struct Step {
  Point point;
  Symbol label;
};

class HorseshoeModel {
 public:
  static HorseshoeModel build(const HorseshoeParams& params);

  /// Assembles a model from explicit branches; branches[i] is the branch of
  /// the i-th S symbol of `sys`. No geometric validation is done, so broken
  /// models can be fed to the verifiers.
  static HorseshoeModel from_parts(const HorseshoeParams& params, std::vector<BranchMap> branches,
                                   ZipSystem sys);

  const HorseshoeParams& params() const { return params_; }
  const std::vector<BranchMap>& branches() const { return branches_; }
  const ZipSystem& zip_system() const { return sys_; }
  const BranchMap& branch(Symbol label) const;
  std::size_t branch_count() const { return branches_.size(); }

  /// Lowest label whose closed domain strip contains p.
  std::optional<Symbol> locate(Point p) const;

  /// Throws EscapeError when p is in no domain strip.
  Step apply(Point p) const;
  /// Applies the affine formula of `label` without a membership check.
  Point apply_branch(Symbol label, Point p) const { return branch(label).apply(p); }
  Mat2 jacobian(Symbol label, Point) const { return branch(label).jacobian(); }

  /// Throws DomainError unless q lies in the image strip of `label`.
  Point apply_inverse(Point q, Symbol label) const;

  /// Boundaries of the domain strip of `label` as functions of y.
  double domain_left(Symbol label, double) const { return branch(label).domain_x.lo; }
  double domain_right(Symbol label, double) const { return branch(label).domain_x.hi; }

  /// Boundaries of the horizontal strip H_z as functions of x.
  double target_lower(Symbol z, double) const { return h_strip(z).lo; }
  double target_upper(Symbol z, double) const { return h_strip(z).hi; }
  Interval h_strip(Symbol z) const;

  /// Lowest label of the fiber of z; its y-map is used to push horizontal strips.
  Symbol representative(Symbol z) const { return sys_.fiber(z).front(); }

 private:
  HorseshoeModel(HorseshoeParams p, std::vector<BranchMap> b, ZipSystem sys);

  HorseshoeParams params_;
  std::vector<BranchMap> branches_;
  ZipSystem sys_;
};

/// The same model with the geometry of branches `a` and `b` exchanged while
/// labels and tau stay put.
HorseshoeModel swap_branches(const HorseshoeModel& m, Symbol a, Symbol b);

/// S = 1..N, 1p..Np; Z = a, b; tau by leg.
ZipSystem horseshoe_zip_system(int N);

/// Index of a word in lexicographic order with the first letter most significant.
std::size_t word_index(std::span<const Symbol> w, std::size_t base);
/// Inverse of word_index.
Word word_at(std::size_t index, std::size_t length, symbolic::Alphabet alphabet, std::size_t base);

/// Nested strip families up to a fixed depth. forward[j][i] is the x-range
/// of V^{s_0 ... s_j} for the i-th word of length j+1; backward[j][i] is the
/// y-range of H_{s_{-j-1} ... s_{-1}}.
struct RefinementTree {
  std::size_t depth = 0;
  std::vector<std::vector<Interval>> forward;
  std::vector<std::vector<Interval>> backward;
  /// Largest child/parent width ratio; empty at depth 0.
  std::optional<double> alpha_V;
  std::optional<double> alpha_H;

  /// Parent of a node one level up: forward drops s_k, backward drops s_{-k-1}.
  static std::size_t forward_parent(std::size_t index, std::size_t s_size) { return index / s_size; }
  static std::size_t backward_parent(std::size_t index, std::size_t z_size, std::size_t level);
};

RefinementTree refine(const HorseshoeModel& m, std::size_t k,
                      std::uint64_t cap = symbolic::kDefaultEnumerationCap);

/// H_{backward} ∩ V^{forward}. backward is in index order s_{-m} ... s_{-1}.
Box decode(const HorseshoeModel& m, std::span<const Symbol> backward, std::span<const Symbol> forward);

}  // namespace zipshoe::horseshoe
