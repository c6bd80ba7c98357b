#include "zipshoe/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "zipshoe/error.hpp"

namespace zipshoe::io {

namespace {

std::string fmt17(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  // Keep floats recognisable as floats on re-parse.
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

void dump_to(std::string& out, const json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += inner + json(it.key()).dump() + ": ";
        dump_to(out, it.value(), indent + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      const bool flat = std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_primitive(); });
      if (flat) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          dump_to(out, j[i], indent + 1);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += inner;
        dump_to(out, j[i], indent + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case json::value_t::number_float:
      out += fmt17(j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

json interval(const Interval& i) { return json::array({i.lo, i.hi}); }

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("field '") + key + "': " + e.what());
  }
}

void reject_unknown(const json& j, std::initializer_list<const char*> known, const char* what) {
  if (!j.is_object()) throw ConfigError(std::string(what) + " must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok) throw ConfigError(std::string("unknown field '") + it.key() + "' in " + what);
  }
}

}  // namespace

std::string dump(const json& j) {
  std::string out;
  dump_to(out, j, 0);
  out += "\n";
  return out;
}

json to_json(const symbolic::ZipSystem& sys) {
  json tau = json::object();
  for (std::size_t i = 0; i < sys.s_size(); ++i) {
    tau[sys.s_names()[i]] = sys.z_names()[sys.tau_table()[i]];
  }
  return {{"S", sys.s_names()}, {"Z", sys.z_names()}, {"tau", tau}};
}

symbolic::ZipSystem zip_system_from_json(const json& j) {
  reject_unknown(j, {"S", "Z", "tau"}, "zip system");
  try {
    return symbolic::ZipSystem::from_names(j.at("S").get<std::vector<std::string>>(),
                                           j.at("Z").get<std::vector<std::string>>(),
                                           j.at("tau").get<std::map<std::string, std::string>>());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("zip system: ") + e.what());
  }
}

json word_json(const symbolic::ZipSystem& sys, std::span<const symbolic::Symbol> w) {
  json a = json::array();
  for (const auto& s : w) a.push_back(sys.name(s));
  return a;
}

std::string word_string(const symbolic::ZipSystem& sys, std::span<const symbolic::Symbol> w) {
  return symbolic::to_string(sys, w);
}

symbolic::Word word_from_json(const symbolic::ZipSystem& sys, const json& j, symbolic::Alphabet a) {
  if (!j.is_array()) throw ConfigError("a word must be a JSON array of symbol names");
  symbolic::Word w;
  for (const json& e : j) {
    if (!e.is_string()) throw ConfigError("symbol names must be strings");
    const std::string n = e.get<std::string>();
    w.push_back(a == symbolic::Alphabet::S ? sys.parse_s(n) : sys.parse_z(n));
  }
  return w;
}

json to_json(const symbolic::ZipSystem& sys, const symbolic::ZipSequence& x) {
  return {{"left_tail", word_json(sys, x.left_tail())},
          {"left", word_json(sys, x.left())},
          {"right", word_json(sys, x.right())},
          {"right_tail", word_json(sys, x.right_tail())}};
}

symbolic::ZipSequence sequence_from_json(const symbolic::ZipSystem& sys, const json& j) {
  reject_unknown(j, {"left_tail", "left", "right", "right_tail"}, "sequence");
  using symbolic::Alphabet;
  auto field = [&](const char* k, Alphabet a) {
    return j.contains(k) ? word_from_json(sys, j.at(k), a) : symbolic::Word{};
  };
  return symbolic::ZipSequence(field("left_tail", Alphabet::Z), field("left", Alphabet::Z),
                               field("right", Alphabet::S), field("right_tail", Alphabet::S));
}

json to_json(const horseshoe::HorseshoeParams& p) {
  return {{"N", p.N}, {"eps", p.eps}, {"y_a", p.y_a}, {"y_b", p.y_b}};
}

horseshoe::HorseshoeParams params_from_json(const json& j) {
  reject_unknown(j, {"N", "eps", "y_a", "y_b"}, "model config");
  horseshoe::HorseshoeParams p;
  p.N = get_or(j, "N", p.N);
  p.eps = get_or(j, "eps", p.eps);
  p.y_a = get_or(j, "y_a", p.y_a);
  p.y_b = get_or(j, "y_b", p.y_b);
  return p;
}

json to_json(const horseshoe::HorseshoeModel& m) {
  const auto& p = m.params();
  json branches = json::array();
  for (const auto& b : m.branches()) {
    branches.push_back({{"label", b.label},
                        {"fold", b.fold},
                        {"leg", b.leg == horseshoe::Leg::a ? "a" : "b"},
                        {"domain_x", interval(b.domain_x)},
                        {"ax", b.ax},
                        {"cx", b.cx},
                        {"ay", b.ay},
                        {"cy", b.cy}});
  }
  json h = json::object();
  for (const auto z : m.zip_system().z_symbols()) h[m.zip_system().name(z)] = interval(m.h_strip(z));
  return {{"params", to_json(p)},
          {"derived",
           {{"alpha", p.alpha()}, {"beta", p.beta()}, {"delta0", p.delta0()}, {"delta1", p.delta1()}}},
          {"branches", branches},
          {"horizontal_strips", h},
          {"zip_system", to_json(m.zip_system())}};
}

json to_json(const symbolic::ZipSystem& sys, const horseshoe::RefinementTree& t) {
  json fwd = json::array();
  json bwd = json::array();
  for (std::size_t j = 0; j <= t.depth; ++j) {
    json level = json::array();
    for (std::size_t i = 0; i < t.forward[j].size(); ++i) {
      const auto w = horseshoe::word_at(i, j + 1, symbolic::Alphabet::S, sys.s_size());
      level.push_back({{"word", word_string(sys, w)}, {"x", interval(t.forward[j][i])}});
    }
    fwd.push_back(level);
    level = json::array();
    for (std::size_t i = 0; i < t.backward[j].size(); ++i) {
      const auto w = horseshoe::word_at(i, j + 1, symbolic::Alphabet::Z, sys.z_size());
      level.push_back({{"word", word_string(sys, w)}, {"y", interval(t.backward[j][i])}});
    }
    bwd.push_back(level);
  }
  json out = {{"depth", t.depth}, {"forward", fwd}, {"backward", bwd}};
  out["alpha_V"] = t.alpha_V ? json(*t.alpha_V) : json(nullptr);
  out["alpha_H"] = t.alpha_H ? json(*t.alpha_H) : json(nullptr);
  return out;
}

json to_json(const geometry::Strip& s, std::size_t samples) {
  json lo = json::array();
  json hi = json::array();
  for (double t : geometry::unit_grid(samples)) {
    lo.push_back(json::array({t, s.lower()(t)}));
    hi.push_back(json::array({t, s.upper()(t)}));
  }
  return {{"orientation", s.orientation() == geometry::Orientation::vertical ? "vertical" : "horizontal"},
          {"lower", lo},
          {"upper", hi},
          {"mu", s.mu()}};
}

json to_json(const Report& r) {
  json items = json::array();
  for (const auto& c : r.items) {
    json e = {{"name", c.name}, {"passed", c.passed}, {"margin", c.margin}};
    if (!c.witness.empty()) e["witness"] = c.witness;
    items.push_back(e);
  }
  return {{"passed", r.passed()}, {"checks", items}};
}

json to_json(const conjugacy::ConjugacyReport& r) {
  json out = {{"depth", r.depth}, {"samples", r.samples}, {"failures", r.failures}, {"max_box_diag", r.max_box_diag}};
  if (!r.examples.empty()) out["examples"] = r.examples;
  return out;
}

json to_json(const stability::PerturbedReport& r) {
  return {{"passed", r.passed()},
          {"assumption1", to_json(r.assumption1)},
          {"cones", to_json(r.cones)},
          {"strips", to_json(r.extra)},
          {"mu_h_g", r.mu_h_g},
          {"mu_v_g", r.mu_v_g},
          {"mu_g", r.mu_g}};
}

json to_json(const stability::MatchReport& r) {
  json perm = json::object();
  for (const auto& [a, b] : r.permutation) perm[a] = b;
  json out = {{"depth", r.depth},
              {"pairs", r.pairs},
              {"mismatches", r.mismatches},
              {"permutation", perm},
              {"identity", r.identity},
              {"max_box_diameter", r.max_box_diameter},
              {"max_base_box_diameter", r.max_base_box_diameter},
              {"max_displacement", r.max_displacement}};
  if (!r.details.empty()) out["details"] = r.details;
  return out;
}

json to_json(const PerturbationConfig& c) {
  return {{"eta", c.eta}, {"shape", c.shape}, {"c1", c.c1}, {"c2", c.c2}};
}

PerturbationConfig perturbation_from_json(const json& j) {
  reject_unknown(j, {"eta", "shape", "c1", "c2"}, "perturbation config");
  PerturbationConfig c;
  c.eta = get_or(j, "eta", c.eta);
  c.shape = get_or(j, "shape", c.shape);
  c.c1 = get_or(j, "c1", c.c1);
  c.c2 = get_or(j, "c2", c.c2);
  return c;
}

void write_csv(std::ostream& os, const symbolic::ZipSystem& sys, const horseshoe::RefinementTree& t, Family family) {
  os << "word,x_lo,x_hi,y_lo,y_hi\n";
  const std::size_t len = t.depth + 1;
  if (family == Family::forward) {
    for (std::size_t i = 0; i < t.forward[t.depth].size(); ++i) {
      const auto w = horseshoe::word_at(i, len, symbolic::Alphabet::S, sys.s_size());
      const Interval& x = t.forward[t.depth][i];
      os << word_string(sys, w) << ',' << fmt17(x.lo) << ',' << fmt17(x.hi) << ',' << fmt17(0.0) << ','
         << fmt17(1.0) << '\n';
    }
  } else {
    for (std::size_t i = 0; i < t.backward[t.depth].size(); ++i) {
      const auto w = horseshoe::word_at(i, len, symbolic::Alphabet::Z, sys.z_size());
      const Interval& y = t.backward[t.depth][i];
      os << word_string(sys, w) << ',' << fmt17(0.0) << ',' << fmt17(1.0) << ',' << fmt17(y.lo) << ','
         << fmt17(y.hi) << '\n';
    }
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error while reading '" + path + "'");
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("error while writing '" + path + "'");
}

json parse(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(source + ": " + e.what());
  }
}

}  // namespace zipshoe::io
