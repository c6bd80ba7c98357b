#include "zipshoe/demo.hpp"

#include <random>
#include <unordered_map>

#include "zipshoe/error.hpp"

namespace zipshoe::demo {

using symbolic::Alphabet;
using symbolic::Symbol;
using symbolic::Word;

symbolic::ZipSystem doubling_system() { return symbolic::ZipSystem::one_sided(2); }

symbolic::ZipSequence doubling_code(std::uint64_t p, std::uint64_t q) {
  if (q == 0 || p >= q) throw PreconditionError("doubling_code needs 0 <= p < q");
  if (q > (std::uint64_t{1} << 62)) throw PreconditionError("denominator too large");
  Word digits;
  std::unordered_map<std::uint64_t, std::size_t> seen;
  std::uint64_t r = p;
  while (!seen.contains(r)) {
    seen.emplace(r, digits.size());
    r *= 2;
    const bool one = r >= q;
    if (one) r -= q;
    digits.push_back(Symbol{Alphabet::S, static_cast<std::uint16_t>(one ? 1 : 0)});
  }
  const auto start = static_cast<std::ptrdiff_t>(seen.at(r));
  Word pre(digits.begin(), digits.begin() + start);
  Word tail(digits.begin() + start, digits.end());
  return symbolic::ZipSequence({Symbol{Alphabet::Z, 0}}, {}, std::move(pre), std::move(tail));
}

std::string doubling_itinerary(double x, std::size_t n) {
  std::string out;
  for (std::size_t i = 0; i < n; ++i) {
    const bool one = x >= 0.5;
    out += one ? '1' : '0';
    x = 2.0 * x - (one ? 1.0 : 0.0);
  }
  return out;
}

DoublingReport doubling_demo(std::size_t samples, std::size_t steps, std::uint64_t seed) {
  if (steps > 32) throw PreconditionError("doubling demo supports at most 32 steps");
  const auto sys = doubling_system();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> qdist(1, std::uint64_t{1} << 12);
  DoublingReport rep;
  rep.samples = samples;
  rep.steps = steps;
  for (std::size_t k = 0; k < samples; ++k) {
    const std::uint64_t q = qdist(rng);
    const std::uint64_t p = std::uniform_int_distribution<std::uint64_t>(0, q - 1)(rng);
    const auto code = doubling_code(p, q);
    const auto image = doubling_code((2 * p) % q, q);
    std::string exact;
    for (std::size_t i = 0; i < steps; ++i) exact += sys.name(code.at(static_cast<std::int64_t>(i)));
    DoublingLine line{p, q, doubling_itinerary(static_cast<double>(p) / static_cast<double>(q), steps),
                      symbolic::to_string(sys, code)};
    if (!(symbolic::shift(sys, code) == image) || line.itinerary != exact) ++rep.mismatches;
    rep.lines.push_back(std::move(line));
  }
  return rep;
}

}  // namespace zipshoe::demo
