// One line per acceptance criterion. Exit status is 0 when every criterion
// has the recorded outcome (criterion 5 is a known FAIL); pass --strict to
// make any FAIL fatal.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "support/gen.hpp"
#include "zipshoe/conjugacy.hpp"
#include "zipshoe/error.hpp"
#include "zipshoe/geometry.hpp"
#include "zipshoe/horseshoe.hpp"
#include "zipshoe/stability.hpp"
#include "zipshoe/symbolic.hpp"
#include "zipshoe/verify.hpp"

using namespace zipshoe;
using horseshoe::HorseshoeModel;
using horseshoe::HorseshoeParams;
using symbolic::Alphabet;
using symbolic::CylinderSpec;
using symbolic::Word;
using symbolic::ZipSequence;
using symbolic::ZipSystem;

namespace {

// Tolerances.
constexpr double kEntropyTol = 1e-12;
constexpr double kWidthTol = 1e-12;
constexpr double kGapTol = 1e-9;
constexpr double kBoxTol = 1e-12;
constexpr double kRuntimeCounts = 30.0;
constexpr double kRuntimeConjugacy = 60.0;

// Criteria whose recorded outcome is FAIL.
const std::set<int> kExpectedFail = {5};

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

HorseshoeModel model(int N) { return HorseshoeModel::build(HorseshoeParams::with_defaults(N, 0.1)); }

Outcome periodic_counts() {
  const auto t0 = std::chrono::steady_clock::now();
  std::string bad;
  for (int N = 1; N <= 3; ++N) {
    const auto m = model(N);
    const auto& sys = m.zip_system();
    const std::size_t ns = sys.s_size();
    for (std::size_t k = 1; k <= 5; ++k) {
      const auto expected = static_cast<std::size_t>(std::llround(std::pow(2.0 * N, double(k))));
      const auto sym = symbolic::enumerate_periodic(sys, k);
      std::set<std::pair<double, double>> points;
      std::size_t in_box = 0;
      const std::size_t M = std::max<std::size_t>(k, 4);
      for (std::size_t i = 0; i < expected; ++i) {
        const Word w = horseshoe::word_at(i, k, Alphabet::S, ns);
        const Point p = conjugacy::periodic_orbit_solve(m, w);
        conjugacy::check_periodic(m, w, p);
        points.insert({p.x, p.y});
        Word bw(M);
        Word fw(M + 1);
        for (std::size_t j = 0; j < M; ++j) bw[j] = sys.tau(w[(j + k * M - M) % k]);
        for (std::size_t j = 0; j <= M; ++j) fw[j] = w[j % k];
        if (horseshoe::decode(m, bw, fw).contains(p, kBoxTol)) ++in_box;
      }
      if (sym.size() != expected || points.size() != expected || in_box != expected) {
        bad += " N=" + std::to_string(N) + ",k=" + std::to_string(k);
      }
    }
  }
  const double t = seconds_since(t0);
  if (t >= kRuntimeCounts) bad += " runtime";
  return {bad.empty(), "(2N)^k symbolic and geometric for N=1..3, k=1..5" +
                           (bad.empty() ? std::string() : ";" + bad) + fmt(", %.2f s", t)};
}

Outcome entropy() {
  double worst = 0;
  for (int N = 1; N <= 3; ++N) {
    const auto m = model(N);
    for (std::size_t k = 1; k <= 6; ++k) {
      worst = std::max(worst, std::abs(conjugacy::entropy_estimate(m, k) - std::log(2.0 * N)));
    }
  }
  return {worst <= kEntropyTol, "max |h_k - log 2N| = " + fmt("%.3g", worst) + " over N=1..3, k=1..6"};
}

Outcome conjugacy_diagram() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto m = HorseshoeModel::build({});
  const auto& sys = m.zip_system();
  const auto r = conjugacy::conjugacy_check(m, 8, 1000, 42);
  const auto mutant = conjugacy::label_swap_mutant(m, sys.parse_s("2"), sys.parse_s("2p"));
  const auto rm = conjugacy::conjugacy_check(mutant, 8, 1000, 42);
  const double t = seconds_since(t0);
  const bool ok = r.failures == 0 && r.samples == 1000 && rm.failures > 0 && t < kRuntimeConjugacy;
  return {ok, std::to_string(r.failures) + " failures on the model, " + std::to_string(rm.failures) +
                  " on the label-swap mutant" + fmt(", %.2f s", t)};
}

Outcome distance_lemma() {
  const auto sys = horseshoe::horseshoe_zip_system(2);
  testgen::Rng rng(41);
  std::size_t violations = 0;
  for (int t = 0; t < 10000; ++t) {
    const auto s = testgen::sequence(rng, sys);
    const auto u = t % 4 ? testgen::perturbed_copy(rng, sys, s, static_cast<int>(testgen::uniform_index(rng, 10)))
                         : testgen::sequence(rng, sys);
    const double d = symbolic::distance(sys, s, u).value();
    for (int M = 0; M <= 12; ++M) {
      if (d < std::ldexp(1.0, -(M + 1))) {
        for (std::int64_t i = -M + 1; i < M; ++i) violations += s.at(i) != u.at(i);
      }
      bool agree = true;
      for (std::int64_t i = -M; i <= M; ++i) agree = agree && s.at(i) == u.at(i);
      if (agree && d > std::ldexp(1.0, -M)) ++violations;
    }
  }
  return {violations == 0, "both implications, M=0..12, 10^4 pairs: " + std::to_string(violations) + " violations"};
}

Outcome gap_bound() {
  using geometry::Orientation;
  std::size_t violations = 0;
  std::size_t max_norm_violations = 0;
  double worst = 0;
  std::string where;
  for (double mh : {0.1, 0.3, 0.6}) {
    for (double mv : {0.1, 0.3, 0.6}) {
      testgen::Rng rng(7);
      std::size_t v = 0;
      for (int k = 0; k < 1000; ++k) {
        const auto r = geometry::intersection_gap_bound(testgen::strip(rng, Orientation::horizontal, mh),
                                                        testgen::strip(rng, Orientation::vertical, mv), kGapTol);
        if (!r.holds) ++v;
        if (!r.holds_max_norm) ++max_norm_violations;
        if (r.bound > 0) worst = std::max(worst, r.gap / r.bound);
      }
      violations += v;
      if (v > 0) where += fmt(" (%.1f,", mh) + fmt("%.1f)", mv) + "x" + std::to_string(v);
    }
  }
  // Parallel translate of h with v fixed: Euclidean gap = bound * sqrt(1 + mu^2).
  const double mu = 0.6;
  const auto h = geometry::LipschitzCurve::affine(Orientation::horizontal, 0.2, mu);
  const auto h2 = geometry::LipschitzCurve::affine(Orientation::horizontal, 0.25, mu);
  const auto v = geometry::LipschitzCurve::affine(Orientation::vertical, 0.1, mu);
  const auto cx = geometry::intersection_gap_bound(h, h2, v, v, kGapTol);
  std::string detail = std::to_string(violations) + "/9000 Euclidean violations" + where +
                       fmt(", worst gap/bound %.4f", worst) + "; max-norm form " +
                       (max_norm_violations == 0 ? "holds on all 9000" : "violated") +
                       fmt("; translate counterexample gap/bound %.4f", cx.gap / cx.bound);
  return {violations == 0 && cx.holds, detail};
}

Outcome width_decay() {
  double worst = 0;
  bool bound_ok = true;
  std::string detail;
  for (int N = 1; N <= 3; ++N) {
    const auto m = model(N);
    const double alpha = m.params().alpha();
    const auto t = horseshoe::refine(m, 5);
    for (std::size_t k = 0; k <= 5; ++k) {
      for (const auto& x : t.forward[k]) worst = std::max(worst, std::abs(x.width() - std::pow(alpha, -double(k + 1))));
      for (const auto& y : t.backward[k]) worst = std::max(worst, std::abs(y.width() - std::pow(alpha, -double(k + 1))));
    }
    horseshoe::ConeOptions c;
    c.mu = m.params().beta();
    const bool cert = horseshoe::verify_cones(m, c).passed();
    const double bound = c.mu / (1 - c.mu_h * c.mu_v);
    bound_ok = bound_ok && cert && t.alpha_V && *t.alpha_V <= bound;
    if (N == 2) detail = fmt("; N=2 alpha_V %.6f", *t.alpha_V) + fmt(" <= %.6f", bound);
  }
  const auto base = HorseshoeModel::build({});
  const auto pm = stability::perturb(base, 1e-3);
  const auto vr = stability::verify_perturbed(pm, 0.3, 0.3);
  const auto ct = stability::refine(pm, 4);
  const double pbound = 0.3 / (1 - vr.mu_g);
  bound_ok = bound_ok && vr.passed() && ct.alpha_V && *ct.alpha_V <= pbound;
  detail += fmt("; eta=1e-3 alpha_V %.6f", ct.alpha_V.value_or(-1)) + fmt(" <= %.6f", pbound);
  return {worst <= kWidthTol && bound_ok, fmt("max width error %.3g", worst) + detail};
}

/// Calls f on every cylinder [start, start + len) with |start| <= 4 and len <= 4.
void for_each_cylinder(const ZipSystem& sys, const std::function<void(const CylinderSpec&)>& f) {
  for (std::int64_t start = -4; start <= 4; ++start) {
    for (std::size_t len = 1; len <= 4; ++len) {
      std::vector<Word> words{Word{}};
      for (std::size_t j = 0; j < len; ++j) {
        const Word alpha = start + static_cast<std::int64_t>(j) < 0 ? sys.z_symbols() : sys.s_symbols();
        std::vector<Word> next;
        for (const Word& w : words) {
          for (const auto s : alpha) {
            Word e = w;
            e.push_back(s);
            next.push_back(std::move(e));
          }
        }
        words = std::move(next);
      }
      for (Word& w : words) f(CylinderSpec{start, std::move(w)});
    }
  }
}

Outcome density() {
  const auto sys = horseshoe::horseshoe_zip_system(2);
  std::size_t total = 0;
  std::size_t failures = 0;
  for_each_cylinder(sys, [&](const CylinderSpec& c) {
    ++total;
    const auto p = symbolic::periodic_point_in_cylinder(sys, c);
    const bool ok = symbolic::cylinder_contains(sys, c, p) &&
                    symbolic::shift_n(sys, p, symbolic::constructed_period(c)) == p;
    failures += ok ? 0 : 1;
  });
  return {failures == 0, std::to_string(total) + " cylinders, " + std::to_string(failures) + " failures"};
}

Outcome transitivity() {
  const auto sys = horseshoe::horseshoe_zip_system(2);
  const auto x = symbolic::dense_orbit_prefix(sys, 4);
  const std::size_t period = x.right_tail().size();
  std::vector<ZipSequence> orbit{x};
  for (std::size_t k = 1; k < period + 8; ++k) orbit.push_back(symbolic::shift(sys, orbit.back()));
  const bool periodic = symbolic::shift(sys, orbit.back()) == orbit[(period + 8) % period];

  std::size_t total = 0;
  std::size_t missed_fwd = 0;
  std::size_t missed_pre = 0;
  std::size_t max_pre = 0;
  std::size_t cases[3] = {0, 0, 0};
  for_each_cylinder(sys, [&](const CylinderSpec& c) {
    ++total;
    ++cases[c.last() < 0 ? 0 : (c.start < 0 ? 1 : 2)];
    bool hit = false;
    for (const auto& y : orbit) {
      if (symbolic::cylinder_contains(sys, c, y)) {
        hit = true;
        break;
      }
    }
    missed_fwd += hit ? 0 : 1;
    const auto pre = symbolic::preimage_into_cylinder(sys, x, c, 2 * period);
    if (pre) {
      max_pre = std::max(max_pre, pre->depth);
    } else {
      ++missed_pre;
    }
  });
  const bool ok = periodic && missed_fwd == 0 && missed_pre == 0 && cases[0] > 0 && cases[1] > 0 && cases[2] > 0;
  return {ok, std::to_string(total) + " cylinders (" + std::to_string(cases[0]) + " backward, " +
                  std::to_string(cases[1]) + " straddling, " + std::to_string(cases[2]) + " forward); missed " +
                  std::to_string(missed_fwd) + " forward, " + std::to_string(missed_pre) +
                  " by preimages; deepest preimage " + std::to_string(max_pre) + ", period " + std::to_string(period)};
}

Outcome expansivity() {
  const auto sys = horseshoe::horseshoe_zip_system(2);
  testgen::Rng rng(43);
  std::size_t distinct = 0;
  std::size_t failures = 0;
  while (distinct < 10000) {
    const auto x = testgen::sequence(rng, sys);
    const auto y = distinct % 3 ? testgen::sequence(rng, sys)
                                : testgen::perturbed_copy(rng, sys, x, static_cast<int>(testgen::uniform_index(rng, 8)));
    const auto w = symbolic::expansivity_witness(sys, x, y);
    if (x == y) {
      failures += w.has_value();
      continue;
    }
    ++distinct;
    if (!w || symbolic::distance_at_iterate(sys, x, y, *w).value() != 1.0) ++failures;
    if (symbolic::expansivity_witness(sys, x, x).has_value()) ++failures;
  }
  return {failures == 0, "10^4 distinct pairs, " + std::to_string(failures) + " failures"};
}

bool same(const Report& a, const Report& b) {
  if (a.items.size() != b.items.size()) return false;
  for (std::size_t i = 0; i < a.items.size(); ++i) {
    if (a.items[i].name != b.items[i].name || a.items[i].passed != b.items[i].passed ||
        a.items[i].margin != b.items[i].margin) {
      return false;
    }
  }
  return true;
}

Outcome stability_experiment() {
  const auto base = HorseshoeModel::build({});
  const auto pm = stability::perturb(base, 1e-3);
  const auto vr = stability::verify_perturbed(pm, 0.3, 0.3);
  const auto mr = stability::match_conjugacy(base, pm, 6);

  const auto p0 = stability::perturb(base, 0.0);
  const auto v0 = stability::verify_perturbed(p0, 0.3, 0.3);
  horseshoe::ConeOptions c;
  c.mu = 0.3;
  const auto m0 = stability::match_conjugacy(base, p0, 6);
  const bool zero = same(v0.assumption1, horseshoe::verify_assumption1(base)) &&
                    same(v0.cones, horseshoe::verify_cones(base, c)) && m0.mismatches == 0 && m0.identity &&
                    m0.max_displacement == 0.0 && m0.max_box_diameter == m0.max_base_box_diameter;
  const bool ok = vr.passed() && mr.mismatches == 0 && mr.identity && zero;
  return {ok, std::string("eta=1e-3 verify ") + (vr.passed() ? "passed" : "failed") + ", depth 6: " +
                  std::to_string(mr.pairs) + " pairs, " + std::to_string(mr.mismatches) + " mismatches" +
                  fmt(", max displacement %.3g", mr.max_displacement) + "; eta=0 " +
                  (zero ? "identical to the base model" : "differs from the base model")};
}

}  // namespace

int main(int argc, char** argv) {
  const bool strict = argc > 1 && std::strcmp(argv[1], "--strict") == 0;
  const std::vector<std::pair<const char*, Outcome (*)()>> criteria = {
      {"periodic point counts", periodic_counts},
      {"entropy", entropy},
      {"conjugacy diagram", conjugacy_diagram},
      {"distance lemma", distance_lemma},
      {"intersection gap bound", gap_bound},
      {"width decay", width_decay},
      {"density constructions", density},
      {"transitivity", transitivity},
      {"expansivity", expansivity},
      {"stability experiment", stability_experiment},
  };
  int passed = 0;
  int unexpected = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    passed += o.pass;
    if (o.pass == kExpectedFail.contains(id)) ++unexpected;
    std::printf("%-4s criterion %2d %-24s %s\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu passed, %d unexpected outcome(s)\n", passed, criteria.size(), unexpected);
  if (strict) return passed == static_cast<int>(criteria.size()) ? 0 : 1;
  return unexpected == 0 ? 0 : 1;
}
