#pragma once

// Itinerary coding of the horseshoe into its zip shift and finite-depth
// checks of f(phi^{-1}(x)) = phi^{-1}(shift(x)).
//
// f is not invertible, so the backward half of a code is only defined once a
// preimage history is chosen. history[0] is the label of the branch taking the
// first preimage to p, history[1] the one before it, and so on; the backward
// word lists tau of those labels in index order s_{-m} ... s_{-1}.

#include <cmath>
#include <concepts>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "zipshoe/error.hpp"
#include "zipshoe/horseshoe.hpp"
#include "zipshoe/planar.hpp"
#include "zipshoe/symbolic.hpp"

namespace zipshoe::conjugacy {

using symbolic::Symbol;
using symbolic::Word;
using symbolic::ZipSystem;

template <class M>
concept CodingModel = requires(const M& m, Symbol s, Point p) {
  { m.zip_system() } -> std::convertible_to<const ZipSystem&>;
  { m.apply(p) } -> std::same_as<horseshoe::Step>;
  { m.apply_inverse(p, s) } -> std::same_as<Point>;
  { m.apply_branch(s, p) } -> std::same_as<Point>;
  { m.jacobian(s, p) } -> std::same_as<Mat2>;
};

template <class D>
concept Decoder = std::invocable<const D&, std::span<const Symbol>, std::span<const Symbol>> &&
                  std::same_as<std::invoke_result_t<const D&, std::span<const Symbol>, std::span<const Symbol>>, Box>;

struct CodedPoint {
  Word backward;
  Word forward;
  Box box;
};

/// Forward labels s_0 ... s_{n_fwd} of p and the backward word of `history`.
/// The box is filled in by the caller's decoder.
template <CodingModel M>
CodedPoint itinerary_words(const M& m, Point p, std::size_t n_fwd, std::span<const Symbol> history) {
  const ZipSystem& sys = m.zip_system();
  CodedPoint c;
  c.backward.resize(history.size());
  Point back = p;
  for (std::size_t j = 0; j < history.size(); ++j) {
    try {
      back = m.apply_inverse(back, history[j]);
    } catch (const DomainError& e) {
      throw DomainError("invalid history at position " + std::to_string(j) + ": " + e.what());
    }
    c.backward[history.size() - 1 - j] = sys.tau(history[j]);
  }
  Point cur = p;
  for (std::size_t i = 0; i <= n_fwd; ++i) {
    try {
      const horseshoe::Step s = m.apply(cur);
      c.forward.push_back(s.label);
      cur = s.point;
    } catch (const EscapeError& e) {
      throw EscapeError("forward orbit escapes at step " + std::to_string(i) + ": " + e.what());
    }
  }
  return c;
}

template <CodingModel M, Decoder D>
CodedPoint itinerary(const M& m, const D& decode, Point p, std::size_t n_fwd, std::span<const Symbol> history) {
  CodedPoint c = itinerary_words(m, p, n_fwd, history);
  c.box = decode(c.backward, c.forward);
  return c;
}

struct ConjugacyReport {
  std::size_t depth = 0;
  std::size_t samples = 0;
  std::size_t failures = 0;
  double max_box_diag = 0.0;
  std::vector<std::string> examples;  ///< first few failure descriptions
};

namespace detail {

inline Word random_word(std::mt19937_64& rng, const Word& alphabet, std::size_t n) {
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  Word w(n);
  for (auto& s : w) s = alphabet[pick(rng)];
  return w;
}

}  // namespace detail

/// Samples coded points at the given depth (backward length depth, forward
/// length depth + 1), maps each box centre p to q = f(p) and compares the
/// code of q with the zip shift of the code of p on the shared window. q must
/// also lie in the box of the shifted code.
template <CodingModel M, Decoder D>
ConjugacyReport conjugacy_check(const M& m, const D& decode, std::size_t depth, std::size_t samples,
                                std::uint64_t seed, double tol = 1e-9) {
  if (depth < 1) throw PreconditionError("conjugacy depth must be >= 1");
  const ZipSystem& sys = m.zip_system();
  std::mt19937_64 rng(seed);
  ConjugacyReport r;
  r.depth = depth;
  r.samples = samples;
  const Word s_alpha = sys.s_symbols();
  const Word z_alpha = sys.z_symbols();

  auto fail = [&](std::string what) {
    ++r.failures;
    if (r.examples.size() < 5) r.examples.push_back(std::move(what));
  };

  for (std::size_t n = 0; n < samples; ++n) {
    const Word bw = detail::random_word(rng, z_alpha, depth);
    const Word fw = detail::random_word(rng, s_alpha, depth + 1);
    Word history(depth);
    for (std::size_t j = 0; j < depth; ++j) {
      const Word& fiber = sys.fiber(bw[depth - 1 - j]);
      history[j] = fiber[std::uniform_int_distribution<std::size_t>(0, fiber.size() - 1)(rng)];
    }
    const std::string tag = symbolic::to_string(sys, bw) + " . " + symbolic::to_string(sys, fw);
    try {
      const Box box = decode(bw, fw);
      r.max_box_diag = std::max(r.max_box_diag, box.diagonal());
      const Point p = box.center();

      const CodedPoint cp = itinerary_words(m, p, depth, history);
      if (cp.backward != bw || cp.forward != fw) {
        fail("itinerary of the box centre differs from " + tag);
        continue;
      }

      const horseshoe::Step step = m.apply(p);
      Word qh;
      qh.reserve(depth + 1);
      qh.push_back(step.label);
      qh.insert(qh.end(), history.begin(), history.end());
      const CodedPoint cq = itinerary_words(m, step.point, depth - 1, qh);

      const symbolic::ZipSequence x({sys.z(0)}, bw, fw, {sys.s(0)});
      const symbolic::ZipSequence y = symbolic::shift(sys, x);
      bool same = cq.backward.size() == depth + 1 && cq.forward.size() == depth;
      for (std::size_t j = 0; same && j < cq.backward.size(); ++j) {
        same = cq.backward[j] == y.at(static_cast<std::int64_t>(j) - static_cast<std::int64_t>(depth + 1));
      }
      for (std::size_t j = 0; same && j < cq.forward.size(); ++j) {
        same = cq.forward[j] == y.at(static_cast<std::int64_t>(j));
      }
      if (!same) {
        fail("code of f(p) is not the shifted code for " + tag);
        continue;
      }
      if (!decode(cq.backward, cq.forward).contains(step.point, tol)) {
        fail("f(p) lies outside the box of the shifted code for " + tag);
      }
    } catch (const Error& e) {
      fail(tag + ": " + e.what());
    }
  }
  return r;
}

/// p with f^n(p) = p following `word` (n = word length), by Newton's method
/// on the n-fold branch composition from `start`.
template <CodingModel M>
Point periodic_orbit_newton(const M& m, std::span<const Symbol> word, Point start, double tol = 1e-13,
                            std::size_t max_iter = 50) {
  if (word.empty()) throw PreconditionError("periodic word must be nonempty");
  Point p = start;
  for (std::size_t it = 0; it < max_iter; ++it) {
    Point q = p;
    Mat2 J;
    for (const Symbol& s : word) {
      J = m.jacobian(s, q) * J;
      q = m.apply_branch(s, q);
    }
    const Vec2 F{q.x - p.x, q.y - p.y};
    if (std::max(std::abs(F.x), std::abs(F.y)) <= tol) return p;
    const Mat2 A{J.a - 1.0, J.b, J.c, J.d - 1.0};
    const Vec2 d = A.inverse() * F;
    p = {p.x - d.x, p.y - d.y};
  }
  throw NumericError("periodic orbit solve did not converge for word of length " + std::to_string(word.size()));
}

/// max |f^n(p) - p| along the orbit and whether the orbit labels reproduce
/// the word; throws NumericError otherwise.
template <CodingModel M>
void check_periodic(const M& m, std::span<const Symbol> word, Point p, double tol = 1e-10) {
  Point cur = p;
  for (std::size_t i = 0; i < word.size(); ++i) {
    const horseshoe::Step s = m.apply(cur);
    if (s.label != word[i]) {
      throw NumericError("periodic orbit visits " + m.zip_system().name(s.label) + " at step " + std::to_string(i) +
                         " instead of " + m.zip_system().name(word[i]));
    }
    cur = s.point;
  }
  if (max_norm(cur, p) > tol) throw NumericError("periodic orbit residual exceeds tolerance");
}

// Affine model.

CodedPoint itinerary(const horseshoe::HorseshoeModel& m, Point p, std::size_t n_fwd,
                     std::span<const Symbol> history);

ConjugacyReport conjugacy_check(const horseshoe::HorseshoeModel& m, std::size_t depth, std::size_t samples,
                                std::uint64_t seed);

/// Closed-form fixed point of the n-fold affine composition.
Point periodic_orbit_solve(const horseshoe::HorseshoeModel& m, std::span<const Symbol> word);

/// log(#nonempty forward words of length k) / k.
double entropy_estimate(const horseshoe::HorseshoeModel& m, std::size_t k,
                        std::uint64_t cap = symbolic::kDefaultEnumerationCap);

/// The same model with the geometry of branches `a` and `b` exchanged while
/// labels and tau stay put.
horseshoe::HorseshoeModel label_swap_mutant(const horseshoe::HorseshoeModel& m, Symbol a, Symbol b);

}  // namespace zipshoe::conjugacy
