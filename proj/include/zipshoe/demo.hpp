#pragma once

// The doubling map f(x) = 2x mod 1 as the zip shift with S = {0, 1}, Z = {a}.

#include <cstdint>
#include <string>
#include <vector>

#include "zipshoe/symbolic.hpp"

namespace zipshoe::demo {

/// S = {"0", "1"}, Z = {"a"}.
symbolic::ZipSystem doubling_system();

/// Code of the rational p/q in [0,1): binary digits forward, constant `a`
/// backward. Dyadic rationals take the expansion ending in zeros.
symbolic::ZipSequence doubling_code(std::uint64_t p, std::uint64_t q);

/// First n digits of the orbit of x under f, 0 on [0,1/2) and 1 on [1/2,1).
std::string doubling_itinerary(double x, std::size_t n);

struct DoublingLine {
  std::uint64_t p = 0;
  std::uint64_t q = 1;
  std::string itinerary;
  std::string code;
};

struct DoublingReport {
  std::size_t samples = 0;
  std::size_t steps = 0;
  /// Samples where code(f(x)) != shift(code(x)) or the floating itinerary
  /// disagrees with the exact code.
  std::size_t mismatches = 0;
  std::vector<DoublingLine> lines;
};

/// Seeded rational samples p/q with q <= 2^12; steps <= 32 keeps the floating
/// orbit exact.
DoublingReport doubling_demo(std::size_t samples, std::size_t steps, std::uint64_t seed);

}  // namespace zipshoe::demo
