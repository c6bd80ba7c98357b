#include <doctest.h>

#include <cmath>
#include <set>

#include "support/gen.hpp"
#include "zipshoe/error.hpp"
#include "zipshoe/horseshoe.hpp"
#include "zipshoe/symbolic.hpp"

using namespace zipshoe;
using namespace zipshoe::symbolic;

namespace {

ZipSystem n2() { return horseshoe::horseshoe_zip_system(2); }

Word S(const ZipSystem& sys, std::initializer_list<const char*> names) {
  Word w;
  for (const char* n : names) w.push_back(sys.parse_s(n));
  return w;
}

Word Zw(const ZipSystem& sys, std::initializer_list<const char*> names) {
  Word w;
  for (const char* n : names) w.push_back(sys.parse_z(n));
  return w;
}

/// Raw parts, indexed without any canonicalisation.
struct Naive {
  Word lt, left, right, rt;

  Symbol at(std::int64_t i) const {
    const auto nl = static_cast<std::int64_t>(left.size());
    const auto nr = static_cast<std::int64_t>(right.size());
    if (i >= 0) {
      if (i < nr) return right[static_cast<std::size_t>(i)];
      return rt[static_cast<std::size_t>((i - nr) % static_cast<std::int64_t>(rt.size()))];
    }
    if (i >= -nl) return left[static_cast<std::size_t>(nl + i)];
    const auto k = static_cast<std::int64_t>(lt.size());
    return lt[static_cast<std::size_t>(((i + nl) % k + k) % k)];
  }
  ZipSequence seq() const { return ZipSequence(lt, left, right, rt); }
};

Naive naive(testgen::Rng& rng, const ZipSystem& sys) {
  const auto z = sys.z_symbols();
  const auto s = sys.s_symbols();
  return {testgen::word(rng, z, 1 + testgen::uniform_index(rng, 4)), testgen::word(rng, z, testgen::uniform_index(rng, 5)),
          testgen::word(rng, s, testgen::uniform_index(rng, 5)), testgen::word(rng, s, 1 + testgen::uniform_index(rng, 4))};
}

/// min |i| with x_i != y_i by direct scan.
std::optional<std::uint64_t> naive_separation(const ZipSequence& x, const ZipSequence& y, std::int64_t reach) {
  for (std::int64_t m = 0; m <= reach; ++m) {
    if (x.at(m) != y.at(m) || x.at(-m) != y.at(-m)) return static_cast<std::uint64_t>(m);
  }
  return std::nullopt;
}

}  // namespace

TEST_CASE("zip system construction and tau") {
  const auto sys = n2();
  CHECK(sys.s_names() == std::vector<std::string>{"1", "2", "1p", "2p"});
  CHECK(sys.z_names() == std::vector<std::string>{"a", "b"});
  CHECK(tau_apply(sys, S(sys, {"1", "2", "1p"})) == Zw(sys, {"a", "a", "b"}));
  CHECK(tau_apply(sys, Word{}).empty());
  CHECK(sys.fiber(sys.parse_z("a")) == S(sys, {"1", "2"}));

  // The alphabet of the text examples, where primes share the letter.
  const auto ex = ZipSystem::from_names({"1", "2", "1p", "2p"}, {"a", "b"},
                                        {{"1", "a"}, {"1p", "a"}, {"2", "b"}, {"2p", "b"}});
  CHECK(tau_apply(ex, S(ex, {"1", "2", "1p"})) == Zw(ex, {"a", "b", "a"}));

  const auto dbl = ZipSystem::one_sided(2);
  CHECK(tau_apply(dbl, S(dbl, {"0", "1", "1", "0"})) == Zw(dbl, {"a", "a", "a", "a"}));

  CHECK_THROWS_AS(sys.parse_s("3"), AlphabetError);
  CHECK_THROWS_AS(sys.parse_s("a"), AlphabetError);
  CHECK_THROWS_AS(ZipSystem::from_names({"1", "2"}, {"a", "b"}, {{"1", "a"}, {"2", "a"}}), ConfigError);
  CHECK_THROWS_AS(ZipSystem::from_names({"1"}, {"a", "b"}, {{"1", "a"}}), ConfigError);
  CHECK_THROWS_AS(ZipSystem::from_names({"a", "2"}, {"a"}, {{"a", "a"}, {"2", "a"}}), ConfigError);
  CHECK_THROWS_AS(tau_apply(sys, Zw(sys, {"a"})), AlphabetError);
}

TEST_CASE("canonical form makes structural and sequence equality agree") {
  const auto sys = n2();
  testgen::Rng rng(11);
  for (int t = 0; t < 500; ++t) {
    const Naive x = naive(rng, sys);
    // Unroll one period of each tail into the finite parts and double the tails.
    Naive y = x;
    y.left.insert(y.left.begin(), x.lt.begin(), x.lt.end());
    y.right.insert(y.right.end(), x.rt.begin(), x.rt.end());
    y.lt.insert(y.lt.end(), x.lt.begin(), x.lt.end());
    y.rt.insert(y.rt.end(), x.rt.begin(), x.rt.end());
    CHECK(x.seq() == y.seq());
    for (std::int64_t i = -25; i <= 25; ++i) REQUIRE(x.seq().at(i) == x.at(i));
  }
  const auto a = sys.parse_z("a");
  const auto one = sys.parse_s("1");
  const auto two = sys.parse_s("2");
  CHECK(ZipSequence({a}, {a, a}, {one, two}, {one, two}) == ZipSequence({a}, {}, {}, {one, two}));
  CHECK(ZipSequence({a, a}, {}, {}, {one, two, one, two}).right_tail().size() == 2);
  CHECK_THROWS_AS(ZipSequence({}, {}, {}, {one}), PreconditionError);
  CHECK_THROWS_AS(validate(sys, ZipSequence({one}, {}, {}, {one})), AlphabetError);
}

TEST_CASE("shift examples") {
  const auto ex = ZipSystem::from_names({"1", "2", "1p", "2p"}, {"a", "b"},
                                        {{"1", "a"}, {"1p", "a"}, {"2", "b"}, {"2p", "b"}});
  const ZipSequence x({ex.parse_z("a")}, Zw(ex, {"a", "b", "a", "b", "b"}), S(ex, {"1", "2", "1p", "1", "2p"}),
                      {ex.parse_s("1")});
  const ZipSequence y = shift(ex, x);
  const Word left = Zw(ex, {"a", "b", "a", "b", "b", "a"});
  for (std::size_t j = 0; j < left.size(); ++j) CHECK(y.at(static_cast<std::int64_t>(j) - 6) == left[j]);
  const Word right = S(ex, {"2", "1p", "1", "2p"});
  for (std::size_t j = 0; j < right.size(); ++j) CHECK(y.at(static_cast<std::int64_t>(j)) == right[j]);

  const auto fixed = ZipSequence::periodic(ex, S(ex, {"1"}));
  CHECK(shift(ex, fixed) == fixed);

  const auto p = ZipSequence({ex.parse_z("a"), ex.parse_z("b")}, {}, {}, S(ex, {"1", "2"}));
  const auto q = ZipSequence({ex.parse_z("b"), ex.parse_z("a")}, {}, {}, S(ex, {"2", "1"}));
  CHECK(shift(ex, p) == q);
  CHECK(shift_n(ex, p, 2) == p);
}

TEST_CASE("shift matches the index rule on random sequences") {
  const auto sys = n2();
  testgen::Rng rng(5);
  for (int t = 0; t < 1000; ++t) {
    const Naive x = naive(rng, sys);
    const ZipSequence y = shift(sys, x.seq());
    for (std::int64_t i = -20; i <= 20; ++i) {
      const Symbol expect = i == -1 ? sys.tau(x.at(0)) : x.at(i + 1);
      REQUIRE(y.at(i) == expect);
    }
  }
}

TEST_CASE("preimages are sections of the shift") {
  const auto sys = n2();
  testgen::Rng rng(6);
  for (int t = 0; t < 500; ++t) {
    const auto y = testgen::sequence(rng, sys);
    const auto pre = preimages(sys, y);
    REQUIRE(pre.size() == sys.fiber(y.at(-1)).size());
    for (const auto& x : pre) CHECK(shift(sys, x) == y);
  }
  const auto ex = ZipSystem::from_names({"1", "2", "1p", "2p"}, {"a", "b"},
                                        {{"1", "a"}, {"1p", "a"}, {"2", "b"}, {"2p", "b"}});
  const auto fixed = ZipSequence::periodic(ex, S(ex, {"1"}));
  const auto pre = preimages(ex, fixed);
  REQUIRE(pre.size() == 2);
  CHECK(pre[0].at(0) == ex.parse_s("1"));
  CHECK(pre[1].at(0) == ex.parse_s("1p"));

  const auto dbl = ZipSystem::one_sided(2);
  testgen::Rng r2(8);
  for (int t = 0; t < 50; ++t) CHECK(preimages(dbl, testgen::sequence(r2, dbl)).size() == 2);
}

TEST_CASE("distance is exact and ultrametric") {
  const auto sys = n2();
  testgen::Rng rng(9);
  for (int t = 0; t < 2000; ++t) {
    const auto x = testgen::sequence(rng, sys);
    const auto y = t % 2 ? testgen::perturbed_copy(rng, sys, x, static_cast<int>(testgen::uniform_index(rng, 6)))
                         : testgen::sequence(rng, sys);
    const auto z = testgen::perturbed_copy(rng, sys, x, static_cast<int>(testgen::uniform_index(rng, 6)));
    const auto m = separation(x, y);
    REQUIRE(m == naive_separation(x, y, 200));
    const Distance dxy = distance(sys, x, y);
    CHECK(dxy == distance(sys, y, x));
    CHECK(dxy.is_zero() == (x == y));
    if (m) CHECK(dxy.value() == std::ldexp(1.0, -static_cast<int>(*m)));
    CHECK(distance(sys, x, z) <= std::max(dxy, distance(sys, y, z)));
  }
  const auto ex = ZipSystem::from_names({"1", "2", "1p", "2p"}, {"a", "b"},
                                        {{"1", "a"}, {"1p", "a"}, {"2", "b"}, {"2p", "b"}});
  const auto ab = Zw(ex, {"a", "b"});
  CHECK(distance(ex, ZipSequence(ab, {}, {}, S(ex, {"1", "2"})), ZipSequence(ab, {}, {}, S(ex, {"1p", "2p"}))).value() ==
        1.0);
  const auto one = ex.parse_s("1");
  const auto x = ZipSequence::periodic(ex, {one});
  const auto y = ZipSequence({ex.parse_z("a")}, {}, {one, one, one, one, ex.parse_s("2")}, {one});
  CHECK(distance(ex, x, y) == Distance::pow2_neg(4));
  CHECK(distance(ex, x, x).is_zero());
}

TEST_CASE("lemma on distances holds on random eventually periodic pairs") {
  const auto sys = n2();
  testgen::Rng rng(21);
  for (int t = 0; t < 2000; ++t) {
    const auto s = testgen::sequence(rng, sys);
    const int m = static_cast<int>(testgen::uniform_index(rng, 8));
    const auto u = t % 3 ? testgen::perturbed_copy(rng, sys, s, m) : testgen::sequence(rng, sys);
    const double d = distance(sys, s, u).value();
    const auto M = static_cast<std::int64_t>(m);
    if (d < std::ldexp(1.0, -(m + 1))) {
      for (std::int64_t i = -M + 1; i < M; ++i) REQUIRE(s.at(i) == u.at(i));
    }
    bool agree = true;
    for (std::int64_t i = -M; i <= M; ++i) agree = agree && s.at(i) == u.at(i);
    if (agree) REQUIRE(d <= std::ldexp(1.0, -m));
  }
}

TEST_CASE("cylinders and the density constructions") {
  const auto ex = ZipSystem::from_names({"1", "2", "1p", "2p"}, {"a", "b"},
                                        {{"1", "a"}, {"1p", "a"}, {"2", "b"}, {"2p", "b"}});
  const auto ab = Zw(ex, {"a", "b"});
  const auto p12 = ZipSequence(ab, {}, {}, S(ex, {"1", "2"}));
  CHECK(cylinder_contains(ex, {0, S(ex, {"1", "2"})}, p12));
  CHECK_FALSE(cylinder_contains(ex, {-1, Zw(ex, {"a"})}, p12));
  CHECK(periodic_point_in_cylinder(ex, {0, S(ex, {"1", "2"})}) == p12);

  const auto back = periodic_point_in_cylinder(ex, {-2, ab});
  CHECK(cylinder_contains(ex, {-2, ab}, back));
  CHECK(back.at(0) == ex.parse_s("1"));
  CHECK(back.at(1) == ex.parse_s("2"));

  const CylinderSpec straddle{-1, {ex.parse_z("b"), ex.parse_s("1")}};
  const auto st = periodic_point_in_cylinder(ex, straddle);
  CHECK(cylinder_contains(ex, straddle, st));
  CHECK(shift_n(ex, st, constructed_period(straddle)) == st);

  CHECK_THROWS_AS(validate(ex, CylinderSpec{-1, {ex.parse_s("1")}}), AlphabetError);

  // Monotonicity of containment under matching extension.
  testgen::Rng rng(3);
  for (int t = 0; t < 300; ++t) {
    const auto x = testgen::sequence(rng, ex);
    const auto start = static_cast<std::int64_t>(testgen::uniform_index(rng, 7)) - 3;
    CylinderSpec c{start, {x.at(start)}};
    for (int k = 0; k < 4; ++k) {
      REQUIRE(cylinder_contains(ex, c, x));
      c.word.push_back(x.at(c.last() + 1));
    }
  }
}

TEST_CASE("periodic enumeration") {
  const auto sys = n2();
  const auto fixed = enumerate_periodic(sys, 1);
  REQUIRE(fixed.size() == 4);
  for (const auto& p : fixed) CHECK(shift(sys, p) == p);
  const auto two = enumerate_periodic(sys, 2);
  CHECK(two.size() == 16);
  CHECK(std::set<ZipSequence>(two.begin(), two.end()).size() == 16);
  for (const auto& p : two) {
    CHECK(shift_n(sys, p, 2) == p);
    CHECK(is_preperiodic_of(sys, p, p, 2));
  }
  CHECK(enumerate_periodic(ZipSystem::one_sided(2), 1).size() == 2);
  CHECK_THROWS_AS(enumerate_periodic(sys, 6, 1000), CapExceeded);
  CHECK_THROWS_AS(enumerate_periodic(sys, 0), PreconditionError);
}

TEST_CASE("dense orbit prefix") {
  const auto sys = n2();
  const auto x = dense_orbit_prefix(sys, 1);
  const Word head = S(sys, {"1", "2", "1p", "2p"});
  for (std::size_t i = 0; i < head.size(); ++i) CHECK(x.at(static_cast<std::int64_t>(i)) == head[i]);

  const auto dbl = ZipSystem::one_sided(2);
  const auto d = dense_orbit_prefix(dbl, 2);
  const Word expect = S(dbl, {"0", "1", "0", "0", "0", "1", "1", "0", "1", "1"});
  for (std::size_t i = 0; i < expect.size(); ++i) CHECK(d.at(static_cast<std::int64_t>(i)) == expect[i]);
  for (const auto& w : {S(dbl, {"0", "0"}), S(dbl, {"0", "1"}), S(dbl, {"1", "0"}), S(dbl, {"1", "1"})}) {
    CHECK(forward_hit(dbl, d, {0, w}, 64).has_value());
  }
}

TEST_CASE("expansivity witnesses") {
  const auto ex = ZipSystem::from_names({"1", "2", "1p", "2p"}, {"a", "b"},
                                        {{"1", "a"}, {"1p", "a"}, {"2", "b"}, {"2p", "b"}});
  const auto one = ex.parse_s("1");
  const auto x = ZipSequence::periodic(ex, {one});
  const auto y = ZipSequence({ex.parse_z("a")}, {}, {ex.parse_s("2")}, {one});
  CHECK(expansivity_witness(ex, x, y) == std::optional<std::int64_t>(0));
  CHECK_FALSE(expansivity_witness(ex, x, x).has_value());
  Word r(7, one);
  r.push_back(ex.parse_s("2"));
  const auto z = ZipSequence({ex.parse_z("a")}, {}, r, {one});
  const auto n = expansivity_witness(ex, x, z);
  REQUIRE(n.has_value());
  CHECK(distance_at_iterate(ex, x, z, *n).value() == 1.0);
  CHECK(distance(ex, shift_n(ex, x, 7), shift_n(ex, z, 7)).value() == 1.0);

  // Pairs differing only in the backward half need a negative iterate.
  const auto sys = n2();
  testgen::Rng rng(17);
  for (int t = 0; t < 500; ++t) {
    const auto u = testgen::sequence(rng, sys);
    const auto v = testgen::sequence(rng, sys);
    const auto w = expansivity_witness(sys, u, v);
    REQUIRE(w.has_value() == (u != v));
    if (w) REQUIRE(distance_at_iterate(sys, u, v, *w).value() == 1.0);
  }
}

TEST_CASE("preimage search reaches backward cylinders") {
  const auto sys = n2();
  const auto x = dense_orbit_prefix(sys, 2);
  const CylinderSpec c{-2, Zw(sys, {"b", "a"})};
  const auto hit = preimage_into_cylinder(sys, x, c, 4);
  REQUIRE(hit.has_value());
  CHECK(cylinder_contains(sys, c, hit->point));
  CHECK(shift_n(sys, hit->point, hit->depth) == x);
}
