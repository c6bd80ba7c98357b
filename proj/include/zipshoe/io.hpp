#pragma once

// JSON and CSV exchange formats. Objects are emitted with sorted keys and
// floating point values with 17 significant digits, so equal inputs give
// byte-identical files.

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "zipshoe/conjugacy.hpp"
#include "zipshoe/geometry.hpp"
#include "zipshoe/horseshoe.hpp"
#include "zipshoe/report.hpp"
#include "zipshoe/stability.hpp"
#include "zipshoe/symbolic.hpp"

namespace zipshoe::io {

using json = nlohmann::json;

/// Deterministic rendering: two-space indent, %.17g floats.
std::string dump(const json& j);

json to_json(const symbolic::ZipSystem& sys);
symbolic::ZipSystem zip_system_from_json(const json& j);

json to_json(const symbolic::ZipSystem& sys, const symbolic::ZipSequence& x);
symbolic::ZipSequence sequence_from_json(const symbolic::ZipSystem& sys, const json& j);

json word_json(const symbolic::ZipSystem& sys, std::span<const symbolic::Symbol> w);
symbolic::Word word_from_json(const symbolic::ZipSystem& sys, const json& j, symbolic::Alphabet a);
/// Space separated names, e.g. "1 2p".
std::string word_string(const symbolic::ZipSystem& sys, std::span<const symbolic::Symbol> w);

json to_json(const horseshoe::HorseshoeParams& p);
/// Missing keys keep their defaults; unknown keys are a ConfigError.
horseshoe::HorseshoeParams params_from_json(const json& j);

json to_json(const horseshoe::HorseshoeModel& m);
json to_json(const symbolic::ZipSystem& sys, const horseshoe::RefinementTree& t);
json to_json(const geometry::Strip& s, std::size_t samples = 65);
json to_json(const Report& r);
json to_json(const conjugacy::ConjugacyReport& r);
json to_json(const stability::PerturbedReport& r);
json to_json(const stability::MatchReport& r);

struct PerturbationConfig {
  double eta = 0.001;
  std::string shape = "sin2pi";
  double c1 = 1.0;
  double c2 = 1.0;
};
json to_json(const PerturbationConfig& c);
PerturbationConfig perturbation_from_json(const json& j);

enum class Family { forward, backward };

/// Rows word,x_lo,x_hi,y_lo,y_hi for the deepest level of the tree.
void write_csv(std::ostream& os, const symbolic::ZipSystem& sys, const horseshoe::RefinementTree& t,
               Family family = Family::forward);

/// Throws IoError naming the path.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);
/// Parses JSON, throwing ConfigError with the source name on syntax errors.
json parse(const std::string& text, const std::string& source);

}  // namespace zipshoe::io
