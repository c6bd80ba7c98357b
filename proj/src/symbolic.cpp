#include "zipshoe/symbolic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "zipshoe/error.hpp"

namespace zipshoe::symbolic {

namespace {

Word primitive_root(const Word& w) {
  const std::size_t n = w.size();
  for (std::size_t p = 1; p < n; ++p) {
    if (n % p != 0) continue;
    bool ok = true;
    for (std::size_t i = p; i < n && ok; ++i) ok = w[i] == w[i - p];
    if (ok) return Word(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(p));
  }
  return w;
}

void require_alphabet(const Word& w, Alphabet a, const char* what) {
  for (const Symbol& s : w) {
    if (s.alphabet != a) {
      throw AlphabetError(std::string(what) + (a == Alphabet::S ? " must be over S" : " must be over Z"));
    }
  }
}

std::uint64_t checked_pow(std::uint64_t base, std::size_t exp, std::uint64_t cap) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && r > cap / base) return cap + 1;
    r *= base;
  }
  return r;
}

}  // namespace

// ---------------------------------------------------------------- ZipSystem

ZipSystem::ZipSystem(std::vector<std::string> s_names, std::vector<std::string> z_names,
                     std::vector<std::uint16_t> tau)
    : s_names_(std::move(s_names)), z_names_(std::move(z_names)), tau_(std::move(tau)) {
  if (s_names_.empty() || z_names_.empty()) throw ConfigError("alphabets must be nonempty");
  if (z_names_.size() > s_names_.size()) throw ConfigError("#Z must not exceed #S");
  if (s_names_.size() > std::numeric_limits<std::uint16_t>::max()) throw ConfigError("alphabet too large");
  if (tau_.size() != s_names_.size()) throw ConfigError("tau must be defined on every symbol of S");
  std::set<std::string> seen;
  for (const auto* names : {&s_names_, &z_names_}) {
    for (const std::string& n : *names) {
      if (n.empty()) throw ConfigError("empty symbol name");
      if (!seen.insert(n).second) throw ConfigError("duplicate symbol name '" + n + "'");
    }
  }
  fibers_.assign(z_names_.size(), {});
  for (std::size_t k = 0; k < tau_.size(); ++k) {
    if (tau_[k] >= z_names_.size()) throw ConfigError("tau maps outside Z");
    fibers_[tau_[k]].push_back(Symbol{Alphabet::S, static_cast<std::uint16_t>(k)});
  }
  for (std::size_t z = 0; z < fibers_.size(); ++z) {
    if (fibers_[z].empty()) throw ConfigError("tau is not surjective: '" + z_names_[z] + "' has no preimage");
  }
}

ZipSystem ZipSystem::from_names(std::vector<std::string> s_names, std::vector<std::string> z_names,
                                const std::map<std::string, std::string>& tau) {
  std::vector<std::uint16_t> table;
  table.reserve(s_names.size());
  for (const std::string& s : s_names) {
    auto it = tau.find(s);
    if (it == tau.end()) throw ConfigError("tau undefined on '" + s + "'");
    auto z = std::find(z_names.begin(), z_names.end(), it->second);
    if (z == z_names.end()) throw ConfigError("tau('" + s + "') = '" + it->second + "' is not in Z");
    table.push_back(static_cast<std::uint16_t>(z - z_names.begin()));
  }
  for (const auto& [k, v] : tau) {
    if (std::find(s_names.begin(), s_names.end(), k) == s_names.end()) {
      throw ConfigError("tau given on unknown symbol '" + k + "'");
    }
  }
  return ZipSystem(std::move(s_names), std::move(z_names), std::move(table));
}

ZipSystem ZipSystem::one_sided(std::size_t k) {
  std::vector<std::string> s;
  for (std::size_t i = 0; i < k; ++i) s.push_back(std::to_string(i));
  return ZipSystem(std::move(s), {"a"}, std::vector<std::uint16_t>(k, 0));
}

Symbol ZipSystem::s(std::size_t i) const {
  if (i >= s_size()) throw AlphabetError("S index out of range");
  return {Alphabet::S, static_cast<std::uint16_t>(i)};
}

Symbol ZipSystem::z(std::size_t i) const {
  if (i >= z_size()) throw AlphabetError("Z index out of range");
  return {Alphabet::Z, static_cast<std::uint16_t>(i)};
}

Word ZipSystem::s_symbols() const {
  Word w;
  for (std::size_t i = 0; i < s_size(); ++i) w.push_back(s(i));
  return w;
}

Word ZipSystem::z_symbols() const {
  Word w;
  for (std::size_t i = 0; i < z_size(); ++i) w.push_back(z(i));
  return w;
}

bool ZipSystem::valid(Symbol sym) const {
  return sym.alphabet == Alphabet::S ? sym.index < s_size() : sym.index < z_size();
}

Symbol ZipSystem::tau(Symbol s) const {
  if (s.alphabet != Alphabet::S || s.index >= s_size()) throw AlphabetError("tau applied to a symbol not in S");
  return {Alphabet::Z, tau_[s.index]};
}

const Word& ZipSystem::fiber(Symbol z) const {
  if (z.alphabet != Alphabet::Z || z.index >= z_size()) throw AlphabetError("fiber of a symbol not in Z");
  return fibers_[z.index];
}

const std::string& ZipSystem::name(Symbol sym) const {
  if (!valid(sym)) throw AlphabetError("unknown symbol");
  return sym.alphabet == Alphabet::S ? s_names_[sym.index] : z_names_[sym.index];
}

Symbol ZipSystem::parse_s(std::string_view n) const {
  auto it = std::find(s_names_.begin(), s_names_.end(), n);
  if (it == s_names_.end()) throw AlphabetError("'" + std::string(n) + "' is not a symbol of S");
  return {Alphabet::S, static_cast<std::uint16_t>(it - s_names_.begin())};
}

Symbol ZipSystem::parse_z(std::string_view n) const {
  auto it = std::find(z_names_.begin(), z_names_.end(), n);
  if (it == z_names_.end()) throw AlphabetError("'" + std::string(n) + "' is not a symbol of Z");
  return {Alphabet::Z, static_cast<std::uint16_t>(it - z_names_.begin())};
}

Word tau_apply(const ZipSystem& sys, std::span<const Symbol> u) {
  Word out;
  out.reserve(u.size());
  for (const Symbol& s : u) out.push_back(sys.tau(s));
  return out;
}

std::string to_string(const ZipSystem& sys, std::span<const Symbol> w) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ' ';
    out += sys.name(w[i]);
  }
  return out;
}

// -------------------------------------------------------------- ZipSequence

ZipSequence::ZipSequence(Word left_tail, Word left, Word right, Word right_tail)
    : left_tail_(std::move(left_tail)),
      left_(std::move(left)),
      right_(std::move(right)),
      right_tail_(std::move(right_tail)) {
  if (left_tail_.empty() || right_tail_.empty()) throw PreconditionError("sequence tails must be nonempty");
  require_alphabet(left_tail_, Alphabet::Z, "left tail");
  require_alphabet(left_, Alphabet::Z, "left part");
  require_alphabet(right_, Alphabet::S, "right part");
  require_alphabet(right_tail_, Alphabet::S, "right tail");

  right_tail_ = primitive_root(right_tail_);
  while (!right_.empty() && right_.back() == right_tail_.back()) {
    std::rotate(right_tail_.rbegin(), right_tail_.rbegin() + 1, right_tail_.rend());
    right_.pop_back();
  }

  left_tail_ = primitive_root(left_tail_);
  std::size_t absorbed = 0;
  while (absorbed < left_.size() && left_[absorbed] == left_tail_.front()) {
    std::rotate(left_tail_.begin(), left_tail_.begin() + 1, left_tail_.end());
    ++absorbed;
  }
  left_.erase(left_.begin(), left_.begin() + static_cast<std::ptrdiff_t>(absorbed));
}

ZipSequence ZipSequence::periodic(const ZipSystem& sys, const Word& block) {
  if (block.empty()) throw PreconditionError("periodic block must be nonempty");
  return ZipSequence(tau_apply(sys, block), {}, {}, block);
}

Symbol ZipSequence::at(std::int64_t i) const {
  if (i >= 0) {
    const auto k = static_cast<std::uint64_t>(i);
    if (k < right_.size()) return right_[k];
    return right_tail_[(k - right_.size()) % right_tail_.size()];
  }
  const auto k = static_cast<std::uint64_t>(-i);  // 1-based distance to the left of 0
  const std::size_t m = left_.size();
  if (k <= m) return left_[m - k];
  const std::size_t l = left_tail_.size();
  return left_tail_[l - 1 - ((k - m - 1) % l)];
}

std::size_t ZipSequence::comparison_horizon(const ZipSequence& o) const {
  // Two periodic words with periods p and q agreeing on p + q consecutive
  // positions agree everywhere (Fine and Wilf).
  const std::size_t pre = std::max({left_.size(), o.left_.size(), right_.size(), o.right_.size()});
  return pre + left_tail_.size() + o.left_tail_.size() + right_tail_.size() + o.right_tail_.size() + 1;
}

void validate(const ZipSystem& sys, const ZipSequence& x) {
  for (const Word* w : {&x.left_tail(), &x.left(), &x.right(), &x.right_tail()}) {
    for (const Symbol& s : *w) {
      if (!sys.valid(s)) throw AlphabetError("sequence uses a symbol outside the zip system");
    }
  }
}

std::string to_string(const ZipSystem& sys, const ZipSequence& x) {
  std::ostringstream os;
  os << "(~" << to_string(sys, x.left_tail()) << "~";
  if (!x.left().empty()) os << ' ' << to_string(sys, x.left());
  os << " .";
  if (!x.right().empty()) os << ' ' << to_string(sys, x.right());
  os << " ~" << to_string(sys, x.right_tail()) << "~)";
  return os.str();
}

ZipSequence shift(const ZipSystem& sys, const ZipSequence& x) {
  Word right = x.right();
  Word tail = x.right_tail();
  Symbol s0;
  if (!right.empty()) {
    s0 = right.front();
    right.erase(right.begin());
  } else {
    s0 = tail.front();
    std::rotate(tail.begin(), tail.begin() + 1, tail.end());
  }
  Word left = x.left();
  left.push_back(sys.tau(s0));
  return ZipSequence(x.left_tail(), std::move(left), std::move(right), std::move(tail));
}

ZipSequence shift_n(const ZipSystem& sys, ZipSequence x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x = shift(sys, x);
  return x;
}

std::vector<ZipSequence> preimages(const ZipSystem& sys, const ZipSequence& y) {
  const Symbol y_minus1 = y.at(-1);
  Word left = y.left();
  Word left_tail = y.left_tail();
  if (!left.empty()) {
    left.pop_back();
  } else {
    std::rotate(left_tail.rbegin(), left_tail.rbegin() + 1, left_tail.rend());
  }
  std::vector<ZipSequence> out;
  for (const Symbol& c : sys.fiber(y_minus1)) {
    Word right;
    right.reserve(y.right().size() + 1);
    right.push_back(c);
    right.insert(right.end(), y.right().begin(), y.right().end());
    out.emplace_back(left_tail, left, std::move(right), y.right_tail());
  }
  return out;
}

// ----------------------------------------------------------------- metric

double Distance::value() const {
  return exponent_ ? std::ldexp(1.0, -static_cast<int>(std::min<std::uint64_t>(*exponent_, 2000))) : 0.0;
}

std::string Distance::to_string() const {
  if (!exponent_) return "0";
  if (*exponent_ == 0) return "1";
  return "2^-" + std::to_string(*exponent_);
}

std::strong_ordering operator<=>(const Distance& a, const Distance& b) {
  if (a.is_zero() || b.is_zero()) return !a.is_zero() <=> !b.is_zero();
  return *b.exponent_ <=> *a.exponent_;
}

std::optional<std::uint64_t> separation(const ZipSequence& x, const ZipSequence& y) {
  if (x == y) return std::nullopt;
  const std::size_t horizon = x.comparison_horizon(y);
  for (std::size_t m = 0; m <= horizon; ++m) {
    const auto i = static_cast<std::int64_t>(m);
    if (x.at(i) != y.at(i)) return m;
    if (m > 0 && x.at(-i) != y.at(-i)) return m;
  }
  throw std::logic_error("canonical forms differ but no differing index found");
}

Distance distance(const ZipSystem& sys, const ZipSequence& x, const ZipSequence& y) {
  validate(sys, x);
  validate(sys, y);
  const auto m = separation(x, y);
  return m ? Distance::pow2_neg(*m) : Distance::zero();
}

// --------------------------------------------------------------- cylinders

void validate(const ZipSystem& sys, const CylinderSpec& c) {
  if (c.word.empty()) throw PreconditionError("cylinder word must be nonempty");
  for (std::size_t j = 0; j < c.word.size(); ++j) {
    const std::int64_t pos = c.start + static_cast<std::int64_t>(j);
    const Alphabet want = pos < 0 ? Alphabet::Z : Alphabet::S;
    if (c.word[j].alphabet != want || !sys.valid(c.word[j])) {
      throw AlphabetError("cylinder symbol at index " + std::to_string(pos) + " has the wrong alphabet");
    }
  }
}

bool cylinder_contains(const ZipSystem& sys, const CylinderSpec& c, const ZipSequence& x) {
  validate(sys, c);
  for (std::size_t j = 0; j < c.word.size(); ++j) {
    if (x.at(c.start + static_cast<std::int64_t>(j)) != c.word[j]) return false;
  }
  return true;
}

std::size_t constructed_period(const CylinderSpec& c) {
  if (c.start >= 0) return static_cast<std::size_t>(c.last() + 1);
  if (c.last() < 0) return static_cast<std::size_t>(-c.start);
  return c.word.size();
}

ZipSequence periodic_point_in_cylinder(const ZipSystem& sys, const CylinderSpec& c) {
  validate(sys, c);
  const std::int64_t i = c.start;
  const std::int64_t last = c.last();
  const auto n = static_cast<std::int64_t>(constructed_period(c));
  const Symbol filler = sys.s(0);
  auto least_preimage = [&](Symbol z) { return sys.fiber(z).front(); };

  Word block(static_cast<std::size_t>(n), filler);
  if (i >= 0) {
    for (std::size_t j = 0; j < c.word.size(); ++j) block[static_cast<std::size_t>(i) + j] = c.word[j];
  } else {
    // Position pos < 0 of the periodic point reads tau(block[n + pos]).
    for (std::int64_t pos = i; pos <= last; ++pos) {
      const Symbol s = c.word[static_cast<std::size_t>(pos - i)];
      if (pos >= 0) {
        block[static_cast<std::size_t>(pos)] = s;
      } else {
        block[static_cast<std::size_t>(n + pos)] = least_preimage(s);
      }
    }
  }
  return ZipSequence::periodic(sys, block);
}

// ---------------------------------------------------- transitivity & periods

namespace {

/// Calls f(word) for every S-word of length n in lexicographic order.
template <class F>
void for_each_word(const ZipSystem& sys, std::size_t n, F&& f) {
  std::vector<std::size_t> digits(n, 0);
  Word w(n, sys.s(0));
  const std::size_t k = sys.s_size();
  while (true) {
    f(static_cast<const Word&>(w));
    std::size_t pos = n;
    while (pos > 0) {
      --pos;
      if (++digits[pos] < k) {
        w[pos] = sys.s(digits[pos]);
        break;
      }
      digits[pos] = 0;
      w[pos] = sys.s(0);
      if (pos == 0) return;
    }
    if (n == 0) return;
  }
}

}  // namespace

ZipSequence dense_orbit_prefix(const ZipSystem& sys, std::size_t n, std::uint64_t cap) {
  if (n < 1) throw PreconditionError("dense orbit depth must be >= 1");
  std::uint64_t total = 0;
  for (std::size_t m = 1; m <= n; ++m) {
    total += checked_pow(sys.s_size(), m, cap) * m;
    if (total > cap) throw CapExceeded("dense orbit prefix exceeds the enumeration cap");
  }
  Word forward;
  forward.reserve(static_cast<std::size_t>(total));
  for (std::size_t m = 1; m <= n; ++m) {
    for_each_word(sys, m, [&](const Word& w) { forward.insert(forward.end(), w.begin(), w.end()); });
  }
  return ZipSequence::periodic(sys, forward);
}

std::vector<ZipSequence> enumerate_periodic(const ZipSystem& sys, std::size_t n, std::uint64_t cap) {
  if (n < 1) throw PreconditionError("period must be >= 1");
  const std::uint64_t count = checked_pow(sys.s_size(), n, cap);
  if (count > cap) {
    throw CapExceeded("(#S)^n = " + std::to_string(sys.s_size()) + "^" + std::to_string(n) +
                      " exceeds the enumeration cap " + std::to_string(cap));
  }
  std::vector<ZipSequence> out;
  out.reserve(static_cast<std::size_t>(count));
  for_each_word(sys, n, [&](const Word& w) { out.push_back(ZipSequence::periodic(sys, w)); });
  return out;
}

bool is_preperiodic_of(const ZipSystem& sys, const ZipSequence& q, const ZipSequence& p, std::size_t k) {
  return k > 0 && shift_n(sys, q, k) == p;
}

// ---------------------------------------------------------------- expansivity

namespace {

/// The depth-k preimage of x taking the least fiber element at every free slot.
ZipSequence least_preimage(const ZipSystem& sys, ZipSequence x, std::size_t k) {
  for (std::size_t t = 0; t < k; ++t) x = preimages(sys, x).front();
  return x;
}

}  // namespace

Distance preimage_set_distance(const ZipSystem& sys, const ZipSequence& x, const ZipSequence& y,
                               std::size_t depth) {
  // Free slots of the two preimage sets can be chosen equal exactly where the
  // fibers coincide, i.e. where x and y carry the same Z symbol. Taking the
  // least fiber element on both sides realises the closest pair.
  return distance(sys, least_preimage(sys, x, depth), least_preimage(sys, y, depth));
}

std::optional<std::int64_t> expansivity_witness(const ZipSystem& sys, const ZipSequence& x,
                                                const ZipSequence& y) {
  validate(sys, x);
  validate(sys, y);
  if (x == y) return std::nullopt;
  const std::size_t horizon = x.comparison_horizon(y);
  for (std::size_t i = 0; i <= horizon; ++i) {
    if (x.at(static_cast<std::int64_t>(i)) != y.at(static_cast<std::int64_t>(i))) {
      return static_cast<std::int64_t>(i);
    }
  }
  for (std::size_t j = 1; j <= horizon; ++j) {
    const auto i = -static_cast<std::int64_t>(j);
    if (x.at(i) != y.at(i)) return i;
  }
  throw std::logic_error("distinct sequences without a differing index");
}

Distance distance_at_iterate(const ZipSystem& sys, const ZipSequence& x, const ZipSequence& y,
                             std::int64_t n) {
  if (n >= 0) {
    const auto k = static_cast<std::size_t>(n);
    return distance(sys, shift_n(sys, x, k), shift_n(sys, y, k));
  }
  return preimage_set_distance(sys, x, y, static_cast<std::size_t>(-n));
}

// ------------------------------------------------------------ orbit searches

std::optional<PreimageHit> preimage_into_cylinder(const ZipSystem& sys, const ZipSequence& x,
                                                  const CylinderSpec& c, std::size_t max_depth) {
  validate(sys, c);
  validate(sys, x);
  for (std::size_t k = 0; k <= max_depth; ++k) {
    const auto kk = static_cast<std::int64_t>(k);
    // y in shift^{-k}(x): y_p = x_{p-k} off the window [0, k), and
    // y_p in tau^{-1}(x_{p-k}) inside it.
    bool feasible = true;
    for (std::size_t j = 0; j < c.word.size() && feasible; ++j) {
      const std::int64_t p = c.start + static_cast<std::int64_t>(j);
      const Symbol want = c.word[j];
      if (p >= 0 && p < kk) {
        feasible = sys.tau(want) == x.at(p - kk);
      } else {
        feasible = x.at(p - kk) == want;
      }
    }
    if (!feasible) continue;

    ZipSequence y = x;
    for (std::size_t t = 1; t <= k; ++t) {
      const auto final_pos = static_cast<std::int64_t>(k - t);
      const auto choices = preimages(sys, y);
      std::size_t pick = 0;
      if (final_pos >= c.start && final_pos <= c.last()) {
        const Symbol want = c.word[static_cast<std::size_t>(final_pos - c.start)];
        for (std::size_t q = 0; q < choices.size(); ++q) {
          if (choices[q].at(0) == want) pick = q;
        }
      }
      y = choices[pick];
    }
    if (shift_n(sys, y, k) == x && cylinder_contains(sys, c, y)) return PreimageHit{k, std::move(y)};
  }
  return std::nullopt;
}

std::optional<std::size_t> forward_hit(const ZipSystem& sys, const ZipSequence& x, const CylinderSpec& c,
                                       std::size_t max_k) {
  ZipSequence y = x;
  for (std::size_t k = 0; k <= max_k; ++k) {
    if (cylinder_contains(sys, c, y)) return k;
    y = shift(sys, y);
  }
  return std::nullopt;
}

}  // namespace zipshoe::symbolic
