#pragma once

// Hand-rolled random generators for property tests.

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "zipshoe/geometry.hpp"
#include "zipshoe/symbolic.hpp"

namespace zipshoe::testgen {

using Rng = std::mt19937_64;

inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

inline symbolic::Word word(Rng& rng, const symbolic::Word& alphabet, std::size_t len) {
  symbolic::Word w(len);
  for (auto& s : w) s = alphabet[uniform_index(rng, alphabet.size())];
  return w;
}

/// Eventually periodic sequence with short random parts.
inline symbolic::ZipSequence sequence(Rng& rng, const symbolic::ZipSystem& sys, std::size_t max_part = 4) {
  const auto z = sys.z_symbols();
  const auto s = sys.s_symbols();
  return symbolic::ZipSequence(word(rng, z, 1 + uniform_index(rng, max_part)), word(rng, z, uniform_index(rng, max_part + 1)),
                               word(rng, s, uniform_index(rng, max_part + 1)), word(rng, s, 1 + uniform_index(rng, max_part)));
}

/// y agrees with x on |i| <= m (when m >= 0) and is otherwise random; the
/// result is built by copying a window of x and attaching random tails.
inline symbolic::ZipSequence perturbed_copy(Rng& rng, const symbolic::ZipSystem& sys, const symbolic::ZipSequence& x,
                                            int m, std::size_t max_part = 4) {
  symbolic::Word left;
  symbolic::Word right;
  const int keep = m + 1 + static_cast<int>(uniform_index(rng, 3));
  for (int i = -keep; i < 0; ++i) left.push_back(x.at(i));
  for (int i = 0; i < keep; ++i) right.push_back(x.at(i));
  auto lt = word(rng, sys.z_symbols(), 1 + uniform_index(rng, max_part));
  auto rt = word(rng, sys.s_symbols(), 1 + uniform_index(rng, max_part));
  auto extra_l = word(rng, sys.z_symbols(), uniform_index(rng, max_part + 1));
  auto extra_r = word(rng, sys.s_symbols(), uniform_index(rng, max_part + 1));
  extra_l.insert(extra_l.end(), left.begin(), left.end());
  right.insert(right.end(), extra_r.begin(), extra_r.end());
  return symbolic::ZipSequence(std::move(lt), std::move(extra_l), std::move(right), std::move(rt));
}

/// Random curve with Lipschitz bound at most `mu`, values inside [lo, hi].
/// Families: affine, sinusoidal and piecewise linear.
inline geometry::LipschitzCurve curve(Rng& rng, geometry::Orientation o, double mu, double lo, double hi) {
  const int family = static_cast<int>(uniform_index(rng, 3));
  const double span = hi - lo;
  if (family == 0) {
    const double smax = std::min(mu, span);
    const double slope = uniform(rng, -smax, smax);
    const double room = std::max(0.0, span - std::abs(slope));
    const double base = lo + (slope < 0 ? -slope : 0.0) + uniform(rng, 0.0, room);
    return geometry::LipschitzCurve(o, [base, slope](double t) { return base + slope * t; }, mu);
  }
  if (family == 1) {
    const double freq = 1.0 + static_cast<double>(uniform_index(rng, 3));
    const double amp = std::min(span / 2.0, mu / (2.0 * std::numbers::pi * freq)) * uniform(rng, 0.2, 1.0);
    const double mid = lo + amp + uniform(rng, 0.0, span - 2.0 * amp);
    const double phase = uniform(rng, 0.0, 2.0 * std::numbers::pi);
    return geometry::LipschitzCurve(
        o, [=](double t) { return mid + amp * std::sin(2.0 * std::numbers::pi * freq * t + phase); }, mu);
  }
  std::vector<double> v(9);
  v[0] = uniform(rng, lo, hi);
  for (std::size_t i = 1; i < v.size(); ++i) {
    const double step = uniform(rng, -mu, mu) / 8.0;
    v[i] = std::clamp(v[i - 1] + step, lo, hi);
  }
  auto c = geometry::LipschitzCurve::sampled(o, std::move(v));
  return geometry::LipschitzCurve(o, [c](double t) { return c(t); }, mu);
}

}  // namespace zipshoe::testgen

namespace zipshoe::testgen {

/// Random strip whose boundaries both have Lipschitz bound at most `mu`.
/// Half of the draws are constant-width translates of one curve, the rest
/// have independent boundaries.
inline geometry::Strip strip(Rng& rng, geometry::Orientation o, double mu) {
  if (uniform_index(rng, 2) == 0) {
    const double w = uniform(rng, 0.01, 0.3);
    auto lo = curve(rng, o, mu, 0.05, 0.95 - w);
    auto up = geometry::LipschitzCurve(o, [lo, w](double t) { return lo(t) + w; }, mu);
    return geometry::Strip(std::move(lo), std::move(up));
  }
  auto lo = curve(rng, o, mu, 0.05, 0.5);
  auto up = curve(rng, o, mu, 0.5 + 1e-3, 0.95);
  return geometry::Strip(std::move(lo), std::move(up));
}

}  // namespace zipshoe::testgen
