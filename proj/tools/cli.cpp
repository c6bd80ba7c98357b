#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include "zipshoe/conjugacy.hpp"
#include "zipshoe/demo.hpp"
#include "zipshoe/error.hpp"
#include "zipshoe/horseshoe.hpp"
#include "zipshoe/io.hpp"
#include "zipshoe/stability.hpp"
#include "zipshoe/verify.hpp"

namespace zipshoe::cli {

namespace {

using io::json;
using symbolic::Symbol;
using symbolic::Word;

struct Settings {
  horseshoe::HorseshoeParams params;
  io::PerturbationConfig perturbation;
  std::string config;
  std::string out;
  std::string format;
  std::string family = "forward";
  std::uint64_t seed = 42;
  std::size_t depth = 0;
  std::size_t period = 1;
  std::size_t samples = 1000;
  std::size_t steps = 16;
  std::optional<double> mu;
  double aperture = 0.3;
  std::uint64_t cap = symbolic::kDefaultEnumerationCap;
};

/// What a command hands back: the text to emit and whether every check held.
struct Outcome {
  std::string text;
  bool passed = true;
  std::vector<std::string> failures;
};

std::string fmt8(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.8g", v);
  return buf;
}

std::uint64_t cap_from_env() {
  const char* raw = std::getenv("ZIPSHOE_CAP");
  if (raw == nullptr || *raw == '\0') return symbolic::kDefaultEnumerationCap;
  const std::string s(raw);
  if (!std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); }) || s.size() > 19) {
    throw ConfigError("ZIPSHOE_CAP must be a positive integer, got '" + s + "'");
  }
  const std::uint64_t v = std::stoull(s);
  if (v == 0) throw ConfigError("ZIPSHOE_CAP must be positive");
  return v;
}

bool flag_given(const CLI::App& app, const char* flag) {
  for (const CLI::App* a = &app; a != nullptr; a = a->get_parent()) {
    for (const CLI::Option* o : a->get_options()) {
      if (o->check_lname(flag) && o->count() > 0) return true;
    }
  }
  return false;
}

/// Loads --config, letting explicitly given flags win. Anchors left unset
/// everywhere follow HorseshoeParams::with_defaults for the chosen N.
void apply_config(Settings& st, const CLI::App& app) {
  auto given = [&](const char* flag) { return flag_given(app, flag); };
  bool anchors = given("y_a") || given("y_b");
  if (!st.config.empty()) {
    const json j = io::parse(io::read_file(st.config), st.config);
    if (!j.is_object()) throw ConfigError(st.config + ": top level must be an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (it.key() != "model" && it.key() != "perturbation") {
        throw ConfigError(st.config + ": unknown section '" + it.key() + "'");
      }
    }
    if (j.contains("model")) {
      const auto& jm = j.at("model");
      const auto p = io::params_from_json(jm);
      if (!given("N")) st.params.N = p.N;
      if (!given("eps")) st.params.eps = p.eps;
      if (!given("y_a")) st.params.y_a = p.y_a;
      if (!given("y_b")) st.params.y_b = p.y_b;
      anchors = anchors || jm.contains("y_a") || jm.contains("y_b");
    }
    if (j.contains("perturbation")) {
      const auto c = io::perturbation_from_json(j.at("perturbation"));
      if (!given("eta")) st.perturbation.eta = c.eta;
      if (!given("shape")) st.perturbation.shape = c.shape;
      if (!given("c1")) st.perturbation.c1 = c.c1;
      if (!given("c2")) st.perturbation.c2 = c.c2;
    }
  }
  if (!anchors) {
    const auto d = horseshoe::HorseshoeParams::with_defaults(st.params.N, st.params.eps);
    st.params.y_a = d.y_a;
    st.params.y_b = d.y_b;
  }
}

void collect(Outcome& o, const Report& r, const std::string& group) {
  for (const CheckItem* c : r.failures()) {
    o.failures.push_back(group + "/" + c->name + " margin " + fmt8(c->margin) +
                         (c->witness.empty() ? "" : " at " + c->witness));
  }
  o.passed = o.passed && r.passed();
}

Outcome cmd_build(const Settings& st) {
  const auto m = horseshoe::HorseshoeModel::build(st.params);
  return {io::dump(io::to_json(m))};
}

Outcome cmd_verify(const Settings& st) {
  const auto m = horseshoe::HorseshoeModel::build(st.params);
  Outcome o;
  const Report a1 = horseshoe::verify_assumption1(m);
  horseshoe::ConeOptions copt;
  copt.mu = st.mu.value_or(st.params.beta());
  copt.mu_h = copt.mu_v = st.aperture;
  const Report cones = horseshoe::verify_cones(m, copt);
  collect(o, a1, "assumption1");
  collect(o, cones, "cones");
  json j = {{"params", io::to_json(st.params)},
            {"assumption1", io::to_json(a1)},
            {"cones", io::to_json(cones)},
            {"mu", copt.mu},
            {"aperture", st.aperture},
            {"passed", o.passed}};
  o.text = io::dump(j);
  return o;
}

Outcome cmd_refine(const Settings& st) {
  const auto m = horseshoe::HorseshoeModel::build(st.params);
  const auto t = horseshoe::refine(m, st.depth, st.cap);
  if (st.format == "csv") {
    std::ostringstream os;
    io::write_csv(os, m.zip_system(), t, st.family == "backward" ? io::Family::backward : io::Family::forward);
    return {os.str()};
  }
  return {io::dump(io::to_json(m.zip_system(), t))};
}

Outcome cmd_orbits(const Settings& st) {
  if (st.period < 1) throw ConfigError("--period must be >= 1");
  const auto m = horseshoe::HorseshoeModel::build(st.params);
  const auto& sys = m.zip_system();
  const auto symbolic_points = symbolic::enumerate_periodic(sys, st.period, st.cap);
  Outcome o;
  json list = json::array();
  const std::size_t window = std::max<std::size_t>(st.period, 8);
  for (const auto& x : symbolic_points) {
    Word block(st.period);
    for (std::size_t i = 0; i < st.period; ++i) block[i] = x.at(static_cast<std::int64_t>(i));
    const Point p = conjugacy::periodic_orbit_solve(m, block);
    Word bw(window);
    Word fw(window + 1);
    for (std::size_t i = 0; i < window; ++i) bw[i] = x.at(static_cast<std::int64_t>(i) - static_cast<std::int64_t>(window));
    for (std::size_t i = 0; i <= window; ++i) fw[i] = x.at(static_cast<std::int64_t>(i));
    const Box box = horseshoe::decode(m, bw, fw);
    const bool inside = box.contains(p, 1e-12);
    if (!inside) {
      o.passed = false;
      o.failures.push_back("orbit " + io::word_string(sys, block) + " leaves its coded box");
    }
    list.push_back({{"word", io::word_string(sys, block)},
                    {"sequence", symbolic::to_string(sys, x)},
                    {"point", json::array({p.x, p.y})},
                    {"in_box", inside}});
  }
  std::uint64_t expected = 1;
  for (std::size_t i = 0; i < st.period; ++i) expected *= sys.s_size();
  json j = {{"period", st.period}, {"count", list.size()}, {"expected", expected}, {"orbits", list}};
  o.text = io::dump(j);
  return o;
}

Outcome cmd_entropy(const Settings& st) {
  if (st.depth < 1) throw ConfigError("--depth must be >= 1 for entropy");
  const auto m = horseshoe::HorseshoeModel::build(st.params);
  const double h = conjugacy::entropy_estimate(m, st.depth, st.cap);
  if (st.format == "json") {
    const double ref = std::log(2.0 * st.params.N);
    return {io::dump({{"depth", st.depth}, {"entropy", h}, {"log_2N", ref}})};
  }
  return {fmt8(h) + "\n"};
}

Outcome cmd_conjugacy(const Settings& st) {
  const auto m = horseshoe::HorseshoeModel::build(st.params);
  const auto r = conjugacy::conjugacy_check(m, st.depth, st.samples, st.seed);
  Outcome o;
  o.passed = r.failures == 0;
  for (const auto& e : r.examples) o.failures.push_back(e);
  json j = io::to_json(r);
  j["seed"] = st.seed;
  j["passed"] = o.passed;
  o.text = io::dump(j);
  return o;
}

Outcome cmd_perturb(const Settings& st) {
  const auto base = horseshoe::HorseshoeModel::build(st.params);
  const auto& c = st.perturbation;
  const auto shape = stability::DisplacementField::named(c.shape, c.c1, c.c2);
  const auto pm = stability::perturb(base, c.eta, shape);
  const double mu = st.mu.value_or(0.3);
  const auto vr = stability::verify_perturbed(pm, mu, st.aperture);
  Outcome o;
  collect(o, vr.assumption1, "assumption1");
  collect(o, vr.cones, "cones");
  collect(o, vr.extra, "strips");
  json j = {{"params", io::to_json(st.params)},
            {"perturbation", io::to_json(c)},
            {"mu", mu},
            {"aperture", st.aperture},
            {"verify", io::to_json(vr)}};
  if (vr.passed()) {
    const auto mr = stability::match_conjugacy(base, pm, st.depth);
    if (mr.mismatches > 0) {
      o.passed = false;
      o.failures.push_back(std::to_string(mr.mismatches) + " combinatorial mismatches at depth " +
                           std::to_string(st.depth));
    }
    j["match"] = io::to_json(mr);
  }
  j["passed"] = o.passed;
  o.text = io::dump(j);
  return o;
}

Outcome cmd_doubling(const Settings& st) {
  const auto r = demo::doubling_demo(st.samples, st.steps, st.seed);
  Outcome o;
  o.passed = r.mismatches == 0;
  if (!o.passed) o.failures.push_back(std::to_string(r.mismatches) + " samples disagree with the zip shift");
  json lines = json::array();
  for (const auto& l : r.lines) {
    lines.push_back({{"x", std::to_string(l.p) + "/" + std::to_string(l.q)},
                     {"itinerary", l.itinerary},
                     {"code", l.code}});
  }
  o.text = io::dump({{"system", io::to_json(demo::doubling_system())},
                     {"samples", r.samples},
                     {"steps", r.steps},
                     {"seed", st.seed},
                     {"mismatches", r.mismatches},
                     {"points", lines}});
  return o;
}

void add_model_flags(CLI::App& app, Settings& st) {
  app.add_option("--N", st.params.N, "Fold count N (2N branches)");
  app.add_option("--eps", st.params.eps, "Expansion excess, alpha = 2N + eps");
  app.add_option("--y_a", st.params.y_a, "Lower edge of horizontal strip a");
  app.add_option("--y_b", st.params.y_b, "Lower edge of horizontal strip b");
  app.add_option("--config", st.config, "JSON file with \"model\" and \"perturbation\" sections");
  app.add_option("--out", st.out, "Write the report here instead of stdout");
  app.add_option("--seed", st.seed, "Random seed");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Settings st;
  CLI::App app{"Zip shift horseshoe toolkit", "zipshoe"};
  app.require_subcommand(1);
  app.fallthrough();
  add_model_flags(app, st);

  std::function<Outcome(const Settings&)> action;

  auto* build = app.add_subcommand("build", "Dump the affine model");
  build->callback([&] { action = cmd_build; });

  auto* verify = app.add_subcommand("verify", "Check strip conditions and cone fields");
  verify->add_option("--mu", st.mu, "Cone growth constant (default 1/alpha)");
  verify->add_option("--aperture", st.aperture, "Cone aperture mu_h = mu_v");
  verify->callback([&] { action = cmd_verify; });

  auto* refine = app.add_subcommand("refine", "Export the refinement tree");
  refine->add_option("--depth", st.depth, "Tree depth k")->required();
  refine->add_option("--format", st.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  refine->add_option("--family", st.family, "CSV family")->check(CLI::IsMember({"forward", "backward"}));
  refine->callback([&] { action = cmd_refine; });

  auto* orbits = app.add_subcommand("orbits", "Symbolic and geometric periodic points");
  orbits->add_option("--period", st.period, "Period n")->required();
  orbits->callback([&] { action = cmd_orbits; });

  auto* entropy = app.add_subcommand("entropy", "Entropy estimate from word counts");
  entropy->add_option("--depth", st.depth, "Word length k")->required();
  entropy->add_option("--format", st.format, "text or json")->check(CLI::IsMember({"text", "json"}));
  entropy->callback([&] { action = cmd_entropy; });

  auto* conj = app.add_subcommand("conjugacy", "Sampled check of the coding diagram");
  st.depth = 8;
  conj->add_option("--depth", st.depth, "Window depth");
  conj->add_option("--samples", st.samples, "Sample count");
  conj->callback([&] { action = cmd_conjugacy; });

  auto* perturb = app.add_subcommand("perturb", "Perturb, re-verify and match the coding");
  perturb->add_option("--eta", st.perturbation.eta, "Perturbation size");
  perturb->add_option("--depth", st.depth, "Match depth");
  perturb->add_option("--shape", st.perturbation.shape, "Displacement field");
  perturb->add_option("--c1", st.perturbation.c1, "Amplitude of the x displacement");
  perturb->add_option("--c2", st.perturbation.c2, "Amplitude of the y displacement");
  perturb->add_option("--mu", st.mu, "Cone growth constant (default 0.3)");
  perturb->add_option("--aperture", st.aperture, "Cone aperture");
  perturb->callback([&] { action = cmd_perturb; });

  auto* demo = app.add_subcommand("demo", "Worked examples");
  demo->require_subcommand(1);
  auto* doubling = demo->add_subcommand("doubling", "Code f(x) = 2x mod 1 into the singleton-Z zip shift");
  doubling->add_option("--samples", st.samples, "Number of rational sample points");
  doubling->add_option("--steps", st.steps, "Itinerary length (<= 32)");
  doubling->callback([&] { action = cmd_doubling; });

  std::vector<std::string> rev(args.rbegin(), args.rend());
  // Command-specific defaults that differ from the shared fields.
  const bool is_perturb = std::find(args.begin(), args.end(), "perturb") != args.end();
  const bool is_demo = std::find(args.begin(), args.end(), "demo") != args.end();
  if (is_perturb) st.depth = 4;
  if (is_demo) st.samples = 8;
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    st.cap = cap_from_env();
    const CLI::App* chosen = app.get_subcommands().front();
    if (chosen->get_name() == "demo") chosen = chosen->get_subcommands().front();
    apply_config(st, *chosen);
    st.params.validate();
    const Outcome o = action(st);
    if (st.out.empty()) {
      out << o.text;
    } else {
      io::write_file(st.out, o.text);
    }
    for (const auto& f : o.failures) err << "FAIL " << f << "\n";
    return o.passed ? kExitOk : kExitFailed;
  } catch (const PerturbationTooLarge& e) {
    err << "perturbation too large: " << e.what() << "\n";
    return kExitFailed;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kExitFailed;
  } catch (const DomainError& e) {
    err << "domain failure: " << e.what() << "\n";
    return kExitFailed;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace zipshoe::cli
