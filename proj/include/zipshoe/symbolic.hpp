#pragma once

// Full zip shift spaces: two alphabets S (forward) and Z (backward) tied by a
// surjection tau: S -> Z, bi-infinite sequences with x_i in Z for i < 0 and
// x_i in S for i >= 0, and the zip shift pushing tau(x_0) into the left half.
//
// Sequences are eventually periodic in both directions, so equality, the
// 2^-M metric and the shift are all computed exactly.

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace zipshoe::symbolic {

enum class Alphabet : std::uint8_t { Z = 0, S = 1 };

/// A letter tagged with the alphabet it belongs to.
struct Symbol {
  Alphabet alphabet = Alphabet::S;
  std::uint16_t index = 0;

  friend auto operator<=>(const Symbol&, const Symbol&) = default;
};

using Word = std::vector<Symbol>;

inline constexpr std::uint64_t kDefaultEnumerationCap = 10'000'000;

class ZipSystem {
 public:
  /// `tau[k]` is the Z-index of the image of the k-th S symbol. Throws
  /// ConfigError when tau is not surjective, #Z > #S or names collide.
  ZipSystem(std::vector<std::string> s_names, std::vector<std::string> z_names,
            std::vector<std::uint16_t> tau);

  static ZipSystem from_names(std::vector<std::string> s_names, std::vector<std::string> z_names,
                              const std::map<std::string, std::string>& tau);

  /// One-sided full shift on `k` symbols "0".."k-1" as a zip shift with Z = {a}.
  static ZipSystem one_sided(std::size_t k);

  std::size_t s_size() const { return s_names_.size(); }
  std::size_t z_size() const { return z_names_.size(); }
  Symbol s(std::size_t i) const;
  Symbol z(std::size_t i) const;
  Word s_symbols() const;
  Word z_symbols() const;

  Symbol tau(Symbol s) const;
  /// tau^{-1}(z) in alphabet order.
  const Word& fiber(Symbol z) const;

  const std::string& name(Symbol sym) const;
  Symbol parse_s(std::string_view name) const;
  Symbol parse_z(std::string_view name) const;
  bool valid(Symbol sym) const;

  const std::vector<std::string>& s_names() const { return s_names_; }
  const std::vector<std::string>& z_names() const { return z_names_; }
  const std::vector<std::uint16_t>& tau_table() const { return tau_; }

  friend bool operator==(const ZipSystem&, const ZipSystem&) = default;

 private:
  std::vector<std::string> s_names_;
  std::vector<std::string> z_names_;
  std::vector<std::uint16_t> tau_;
  std::vector<Word> fibers_;
};

/// Position-wise image of an S-word under tau.
Word tau_apply(const ZipSystem& sys, std::span<const Symbol> u);

/// Render a word as space separated symbol names.
std::string to_string(const ZipSystem& sys, std::span<const Symbol> w);

/// Eventually periodic bi-infinite sequence
///   ... left_tail left_tail left . right right_tail right_tail ...
/// with index 0 the first symbol of `right` (or of `right_tail` if `right` is
/// empty). Tails are written in reading order. The stored form is canonical:
/// primitive tails and minimal finite parts.
class ZipSequence {
 public:
  ZipSequence(Word left_tail, Word left, Word right, Word right_tail);

  /// (overline{tau(b)} . overline{b})
  static ZipSequence periodic(const ZipSystem& sys, const Word& block);

  Symbol at(std::int64_t i) const;

  const Word& left_tail() const { return left_tail_; }
  const Word& left() const { return left_; }
  const Word& right() const { return right_; }
  const Word& right_tail() const { return right_tail_; }

  /// Bound B such that two sequences differing somewhere differ at some |i| < B.
  std::size_t comparison_horizon(const ZipSequence& other) const;

  friend auto operator<=>(const ZipSequence&, const ZipSequence&) = default;

 private:
  Word left_tail_;
  Word left_;
  Word right_;
  Word right_tail_;
};

/// Throws AlphabetError if a symbol is not part of `sys`.
void validate(const ZipSystem& sys, const ZipSequence& x);

std::string to_string(const ZipSystem& sys, const ZipSequence& x);

ZipSequence shift(const ZipSystem& sys, const ZipSequence& x);
ZipSequence shift_n(const ZipSystem& sys, ZipSequence x, std::size_t n);

/// All x with shift(x) == y, ordered by x_0.
std::vector<ZipSequence> preimages(const ZipSystem& sys, const ZipSequence& y);

/// Exact value of the metric: either 0 or 2^-M.
class Distance {
 public:
  static Distance zero() { return Distance{}; }
  static Distance pow2_neg(std::uint64_t m) { return Distance{m}; }

  bool is_zero() const { return !exponent_.has_value(); }
  std::optional<std::uint64_t> exponent() const { return exponent_; }
  double value() const;
  std::string to_string() const;

  friend bool operator==(const Distance&, const Distance&) = default;
  friend std::strong_ordering operator<=>(const Distance& a, const Distance& b);

 private:
  Distance() = default;
  explicit Distance(std::uint64_t m) : exponent_(m) {}
  std::optional<std::uint64_t> exponent_;
};

/// M(x, y) = min{|i| : x_i != y_i}; nullopt when x == y.
std::optional<std::uint64_t> separation(const ZipSequence& x, const ZipSequence& y);
Distance distance(const ZipSystem& sys, const ZipSequence& x, const ZipSequence& y);

/// Cylinder [w_0 ... w_l] placed at indices start ... start + l.
struct CylinderSpec {
  std::int64_t start = 0;
  Word word;

  std::int64_t last() const { return start + static_cast<std::int64_t>(word.size()) - 1; }
};

void validate(const ZipSystem& sys, const CylinderSpec& c);
bool cylinder_contains(const ZipSystem& sys, const CylinderSpec& c, const ZipSequence& x);

/// Periodic point inside `c`, following the three constructions of the
/// density argument. Free choices take the least symbol in alphabet order.
ZipSequence periodic_point_in_cylinder(const ZipSystem& sys, const CylinderSpec& c);

/// Length of the block produced by periodic_point_in_cylinder (a period of it).
std::size_t constructed_period(const CylinderSpec& c);

/// Periodic point whose forward block lists every S-word of length 1..n in
/// lexicographic order.
ZipSequence dense_orbit_prefix(const ZipSystem& sys, std::size_t n,
                               std::uint64_t cap = kDefaultEnumerationCap);

/// All (#S)^n fixed points of shift^n, in lexicographic order of their blocks.
std::vector<ZipSequence> enumerate_periodic(const ZipSystem& sys, std::size_t n,
                                            std::uint64_t cap = kDefaultEnumerationCap);

/// True when shift^k(q) == p for the given k > 0.
bool is_preperiodic_of(const ZipSystem& sys, const ZipSequence& q, const ZipSequence& p,
                       std::size_t k);

/// Minimum distance between the depth-`depth` preimage sets of x and y.
Distance preimage_set_distance(const ZipSystem& sys, const ZipSequence& x, const ZipSequence& y,
                               std::size_t depth);

/// An n with d(shift^n x, shift^n y) = 1, using preimage sets for n < 0.
/// nullopt iff x == y.
std::optional<std::int64_t> expansivity_witness(const ZipSystem& sys, const ZipSequence& x,
                                                const ZipSequence& y);

/// Distance at a witness returned by expansivity_witness.
Distance distance_at_iterate(const ZipSystem& sys, const ZipSequence& x, const ZipSequence& y,
                             std::int64_t n);

struct PreimageHit {
  std::size_t depth = 0;
  ZipSequence point;
};

/// Searches iterated preimages of x (depth 0..max_depth) for one lying in c.
std::optional<PreimageHit> preimage_into_cylinder(const ZipSystem& sys, const ZipSequence& x,
                                                  const CylinderSpec& c, std::size_t max_depth);

/// Smallest k >= 0 with shift^k(x) in c, searching k <= max_k.
std::optional<std::size_t> forward_hit(const ZipSystem& sys, const ZipSequence& x,
                                       const CylinderSpec& c, std::size_t max_k);

}  // namespace zipshoe::symbolic
