#include "zipshoe/conjugacy.hpp"

namespace zipshoe::conjugacy {

namespace {

auto exact_decoder(const horseshoe::HorseshoeModel& m) {
  return [&m](std::span<const Symbol> bw, std::span<const Symbol> fw) { return horseshoe::decode(m, bw, fw); };
}

}  // namespace

CodedPoint itinerary(const horseshoe::HorseshoeModel& m, Point p, std::size_t n_fwd,
                     std::span<const Symbol> history) {
  return itinerary(m, exact_decoder(m), p, n_fwd, history);
}

ConjugacyReport conjugacy_check(const horseshoe::HorseshoeModel& m, std::size_t depth, std::size_t samples,
                                std::uint64_t seed) {
  return conjugacy_check(m, exact_decoder(m), depth, samples, seed);
}

Point periodic_orbit_solve(const horseshoe::HorseshoeModel& m, std::span<const Symbol> word) {
  if (word.empty()) throw PreconditionError("periodic word must be nonempty");
  // f_w(p) = (Ax x + Cx, Ay y + Cy) for the composition along the word.
  double ax = 1.0, cx = 0.0, ay = 1.0, cy = 0.0;
  for (const Symbol& s : word) {
    const horseshoe::BranchMap& b = m.branch(s);
    ax *= b.ax;
    cx = b.ax * cx + b.cx;
    ay *= b.ay;
    cy = b.ay * cy + b.cy;
  }
  const Point p{cx / (1.0 - ax), cy / (1.0 - ay)};
  check_periodic(m, word, p);
  return p;
}

double entropy_estimate(const horseshoe::HorseshoeModel& m, std::size_t k, std::uint64_t cap) {
  if (k < 1) throw PreconditionError("entropy depth must be >= 1");
  const horseshoe::RefinementTree t = horseshoe::refine(m, k - 1, cap);
  std::size_t count = 0;
  for (const Interval& v : t.forward.back()) {
    if (v.width() > 0.0) ++count;
  }
  return std::log(static_cast<double>(count)) / static_cast<double>(k);
}

horseshoe::HorseshoeModel label_swap_mutant(const horseshoe::HorseshoeModel& m, Symbol a, Symbol b) {
  return horseshoe::swap_branches(m, a, b);
}

}  // namespace zipshoe::conjugacy
