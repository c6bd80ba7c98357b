#pragma once

// Small N-to-1 perturbations of the affine horseshoe.
//
// Each branch becomes g_i = Phi o f_i with Phi(q) = q + eta * shape(q). All
// branches of one leg still share their image strip, so g stays N-to-1 onto
// two curved horizontal strips. Domain strips become curved vertical strips
// whose boundaries solve g_x = 0 and g_x = 1 inside the fold band.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "zipshoe/geometry.hpp"
#include "zipshoe/horseshoe.hpp"
#include "zipshoe/planar.hpp"
#include "zipshoe/report.hpp"
#include "zipshoe/verify.hpp"

namespace zipshoe::stability {

using horseshoe::HorseshoeModel;
using horseshoe::Step;
using symbolic::Symbol;
using symbolic::Word;
using symbolic::ZipSystem;

/// Smooth displacement with declared bounds on |value| and on the entries of
/// its derivative.
struct DisplacementField {
  std::string name;
  double c1 = 0.0;
  double c2 = 0.0;
  std::function<Vec2(Point)> value;
  std::function<Mat2(Point)> derivative;
  double value_bound = 0.0;
  double derivative_bound = 0.0;

  /// (c1 sin 2 pi y, c2 sin 2 pi x).
  static DisplacementField sin2pi(double c1 = 1.0, double c2 = 1.0);
  /// Looks up a shape by name; throws ConfigError for unknown names.
  static DisplacementField named(const std::string& name, double c1, double c2);
};

struct StabilityOptions {
  /// Samples per boundary curve of the recovered strips.
  std::size_t strip_samples = 129;
};

class PerturbedModel {
 public:
  const HorseshoeModel& base() const { return base_; }
  double eta() const { return eta_; }
  const DisplacementField& shape() const { return shape_; }
  const ZipSystem& zip_system() const { return base_.zip_system(); }

  Point phi(Point q) const;
  Point phi_inverse(Point q) const;
  Mat2 dphi(Point q) const;

  Point apply_branch(Symbol s, Point p) const { return phi(base_.apply_branch(s, p)); }
  Mat2 jacobian(Symbol s, Point p) const;

  /// Lowest label whose curved domain contains p.
  std::optional<Symbol> locate(Point p) const;
  Step apply(Point p) const;
  Point apply_inverse(Point q, Symbol label) const;

  /// Exact boundary evaluation by root solving.
  double domain_left(Symbol s, double y) const;
  double domain_right(Symbol s, double y) const;
  double target_lower(Symbol z, double x) const;
  double target_upper(Symbol z, double x) const;

  /// x-range of the fold band hosting branch s.
  Interval fold_band(Symbol s) const;

  /// Sampled domain strips (one per S symbol) and target strips (one per Z symbol).
  const std::vector<geometry::Strip>& vertical_strips() const { return vstrips_; }
  const std::vector<geometry::Strip>& horizontal_strips() const { return hstrips_; }

  /// Largest displacement of a strip boundary from its affine position.
  double max_strip_displacement() const { return displacement_; }

 private:
  friend PerturbedModel perturb(const HorseshoeModel&, double, DisplacementField, const StabilityOptions&);
  PerturbedModel(HorseshoeModel base, double eta, DisplacementField shape);

  /// Root of g_x(x, y) = t in the fold band of s.
  std::optional<double> solve_domain(Symbol s, double y, double t) const;
  /// Point Phi(u, v0) with first coordinate x.
  std::optional<double> solve_target(double v0, double x) const;

  HorseshoeModel base_;
  double eta_;
  DisplacementField shape_;
  std::vector<geometry::Strip> vstrips_;
  std::vector<geometry::Strip> hstrips_;
  double displacement_ = 0.0;
};

/// Throws PreconditionError for eta < 0 and PerturbationTooLarge when
/// eta * derivative_bound >= 1, a boundary cannot be recovered or strips overlap.
PerturbedModel perturb(const HorseshoeModel& base, double eta, DisplacementField shape = DisplacementField::sin2pi(),
                       const StabilityOptions& opt = {});

/// The same perturbation applied after exchanging the geometry of branches a and b.
PerturbedModel relabeled(const PerturbedModel& pm, Symbol a, Symbol b, const StabilityOptions& opt = {});

struct PerturbedReport {
  Report assumption1;
  Report cones;
  Report extra;  ///< boundary slopes and derivative deviation
  double mu_h_g = 0.0;
  double mu_v_g = 0.0;
  double mu_g = 0.0;

  bool passed() const { return assumption1.passed() && cones.passed() && extra.passed(); }
};

PerturbedReport verify_perturbed(const PerturbedModel& pm, double mu, double aperture,
                                 const horseshoe::VerifyOptions& vopt = {});

/// Vertical strips sampled at `samples` heights, horizontal strips at
/// `samples` abscissae, indexed like horseshoe::RefinementTree.
struct CurvedTree {
  struct VNode {
    std::vector<double> left;
    std::vector<double> right;
  };
  struct HNode {
    std::vector<double> lower;
    std::vector<double> upper;
  };
  std::size_t depth = 0;
  std::size_t samples = 0;
  std::vector<std::vector<VNode>> forward;
  std::vector<std::vector<HNode>> backward;
  std::optional<double> alpha_V;
  std::optional<double> alpha_H;
};

/// At eta = 0 the nodes are the affine tree's intervals.
CurvedTree refine(const PerturbedModel& pm, std::size_t k, std::size_t samples = 65,
                  std::uint64_t cap = symbolic::kDefaultEnumerationCap);

/// Hull of the four boundary intersections of H_{backward} and V^{forward}
/// at the given tree levels (backward.size() - 1 and forward.size() - 1).
Box decode(const CurvedTree& t, std::span<const Symbol> backward, std::span<const Symbol> forward,
           std::size_t s_size, std::size_t z_size);

struct MatchReport {
  std::size_t depth = 0;
  std::size_t pairs = 0;
  std::size_t mismatches = 0;
  std::vector<std::string> details;
  /// pm label -> base label, by nearest depth-0 strip.
  std::vector<std::pair<std::string, std::string>> permutation;
  bool identity = true;
  double max_box_diameter = 0.0;       ///< perturbed boxes
  double max_base_box_diameter = 0.0;  ///< affine boxes
  double max_displacement = 0.0;       ///< between paired box centres
};

MatchReport match_conjugacy(const HorseshoeModel& base, const PerturbedModel& pm, std::size_t depth,
                            std::size_t samples = 65);

struct Threshold {
  double eta_pass = 0.0;
  double eta_fail = 0.0;
  std::string failing_check;
};

/// Bisection on eta for the first failure of perturb + verify_perturbed.
Threshold failure_threshold(const HorseshoeModel& base, const DisplacementField& shape, double mu, double aperture,
                            double tol = 1e-4);

}  // namespace zipshoe::stability
