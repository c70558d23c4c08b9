#pragma once

// circ-engine command-line front end. `run` is the whole program minus
// process plumbing, so tests can drive it in-process.
//
// Exit codes: 0 success, 1 bad arguments or unknown ids, 2 model file fails
// to parse or validate, 3 impossible evidence, 4 models incompatible.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "circ/circ.hpp"
#include "circ/json.hpp"

namespace circ::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kBadModel = 2,
  kImpossibleEvidence = 3,
  kIncompatible = 4,
};

/// Failure carrying its exit code and message.
struct Failure {
  int code;
  std::string message;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kUsage, "cannot read '" + path + "'"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline CircumstanceModel load_model(const std::string& path) {
  auto result = dsl::parse(read_file(path));
  if (!result) {
    std::string msg;
    for (const auto& e : result.errors) {
      if (!msg.empty()) msg += "\n";
      msg += dsl::format(e, path);
    }
    throw Failure{kBadModel, msg};
  }
  return std::move(*result.model);
}

inline std::vector<Observation> parse_observations(const std::vector<std::string>& flags) {
  std::vector<Observation> out;
  for (const auto& f : flags) {
    auto eq = f.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == f.size()) {
      throw Failure{kUsage, "--observe expects MEASUREMENT=OUTCOME, got '" + f + "'"};
    }
    out.push_back({f.substr(0, eq), f.substr(eq + 1)});
  }
  return out;
}

inline std::string with_decimal(const Rational& r) { return r.str() + " (" + r.decimal() + ")"; }

inline std::string render_distribution(const Measurement& m, const ProbVector& q) {
  std::string out;
  for (std::size_t i = 0; i < m.outcomes.size(); ++i) {
    if (i) out += ", ";
    out += m.outcomes[i] + " " + with_decimal(q[i]);
  }
  return out;
}

inline std::string render_observations(const std::vector<Observation>& obs) {
  std::string out;
  for (const auto& o : obs) {
    if (!out.empty()) out += ",";
    out += o.measurement + "=" + o.outcome;
  }
  return out;
}

inline std::string render_classes(const IndexedModel& indexed, std::string_view indent = "  ") {
  std::string out;
  for (const auto& cls : indexed.classes) {
    out += std::string(indent) + cls.point.str() + " weight " + with_decimal(cls.weight) + " members:";
    for (std::size_t i = 0; i < cls.members.size(); ++i) out += (i ? ", " : " ") + cls.members[i];
    out += "\n";
  }
  return out;
}

/// Draws an index with probability proportional to `weights` (which sum to
/// 1). One 64-bit mt19937_64 output u is read as the exact rational
/// u / 2^64; the first index whose cumulative weight exceeds it wins.
inline std::size_t draw(std::mt19937_64& rng, const std::vector<Rational>& weights) {
  static const Rational::integer two64 = Rational::integer(1) << 64;
  Rational u(Rational::integer(rng()), two64);
  Rational cumulative;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    cumulative += weights[j];
    if (u < cumulative) return j;
  }
  throw error("sampling weights do not sum to 1");
}

inline std::string ratio(const Rational& r) {
  return r.numerator().str() + ":" + r.denominator().str();
}

struct Options {
  std::string format = "text";
  std::string out_path;
};

class Runner {
public:
  Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int run(std::vector<std::string> args) {
    CLI::App app{"Exact inference over finite circumstance models", "circ-engine"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    std::string file, file_b, target, name, hidden, sequence;
    std::vector<std::string> observe;
    int n = 0;
    std::optional<std::uint64_t> seed;
    bool draw_hidden = false;

    auto common = [&](CLI::App* sub, std::vector<std::string> formats) {
      sub->add_option("--format", opts_.format, "output format")->check(CLI::IsMember(formats));
      sub->add_option("-o,--out", opts_.out_path, "write output to this file instead of stdout");
    };

    auto* index = app.add_subcommand("index", "list plausibility-indexed classes");
    index->add_option("model", file, "model file (.cm)")->required();
    common(index, {"text", "json"});

    auto* marg = app.add_subcommand("marginal", "marginal outcome distributions");
    marg->add_option("model", file, "model file (.cm)")->required();
    marg->add_option("--target", target, "measurement (default: all)");
    common(marg, {"text", "json"});

    auto* upd = app.add_subcommand("update", "posterior weights after observing outcomes");
    upd->add_option("model", file, "model file (.cm)")->required();
    upd->add_option("--observe", observe, "observed outcome, MEASUREMENT=OUTCOME (repeatable)");
    common(upd, {"text", "json"});

    auto* pred = app.add_subcommand("predict", "predictive distribution of a measurement");
    pred->add_option("model", file, "model file (.cm)")->required();
    pred->add_option("--target", target, "measurement to predict")->required();
    pred->add_option("--observe", observe, "observed outcome, MEASUREMENT=OUTCOME (repeatable)");
    common(pred, {"text", "json"});

    auto* gen = app.add_subcommand("gen", "write a built-in model as .cm text");
    gen->add_option("name", name, "coin or balls")->required()->check(CLI::IsMember({"coin", "balls"}));
    auto* gen_n = gen->add_option("--n", n, "balls per type (balls only)");
    gen->add_option("-o,--out", opts_.out_path, "write to this file instead of stdout");

    auto* gam = app.add_subcommand("gamma", "class points of the balls model in the (qLa, qN1) plane");
    gam->add_option("--n", n, "balls per type")->required();
    opts_.format = "text";
    common(gam, {"csv", "json"});

    auto* cmp = app.add_subcommand("compat", "check two models for equal moments");
    cmp->add_option("model_a", file, "first model")->required();
    cmp->add_option("model_b", file_b, "second model")->required();
    common(cmp, {"text", "json"});

    auto* sim = app.add_subcommand("simulate", "sample outcomes and trace sequential updates");
    sim->add_option("model", file, "model file (.cm)")->required();
    sim->add_option("--seed", seed, "seed for mt19937_64");
    auto* hid = sim->add_option("--hidden", hidden, "fix the hidden circumstance");
    auto* drw = sim->add_flag("--draw-hidden", draw_hidden, "sample the hidden circumstance from the prior");
    hid->excludes(drw);
    sim->add_option("--sequence", sequence, "comma-separated measurements to perform");
    common(sim, {"text", "json"});

    auto* fmt = app.add_subcommand("fmt", "print a model in canonical form");
    fmt->add_option("model", file, "model file (.cm)")->required();
    fmt->add_option("-o,--out", opts_.out_path, "write to this file instead of stdout");

    std::reverse(args.begin(), args.end());
    try {
      app.parse(args);
    } catch (const CLI::ParseError& e) {
      int code = app.exit(e, out_, err_);
      return code == 0 ? kOk : kUsage;
    }
    if (gam->parsed() && gam->count("--format") == 0) opts_.format = "csv";

    std::string text;
    int code = kOk;
    try {
      if (index->parsed()) text = cmd_index(load_model(file));
      else if (marg->parsed()) text = cmd_marginal(load_model(file), target);
      else if (upd->parsed()) text = cmd_update(load_model(file), parse_observations(observe));
      else if (pred->parsed()) text = cmd_predict(load_model(file), target, parse_observations(observe));
      else if (gen->parsed()) text = cmd_gen(name, gen_n->count() ? std::optional<int>(n) : std::nullopt);
      else if (gam->parsed()) text = cmd_gamma(n);
      else if (cmp->parsed()) std::tie(code, text) = cmd_compat(load_model(file), load_model(file_b));
      else if (sim->parsed()) {
        if (!draw_hidden && hidden.empty()) throw Failure{kUsage, "simulate needs --hidden ID or --draw-hidden"};
        if (draw_hidden && !seed) throw Failure{kUsage, "--draw-hidden needs --seed"};
        text = cmd_simulate(load_model(file), seed.value_or(0), draw_hidden ? std::nullopt : std::optional(hidden),
                            split(sequence));
      } else if (fmt->parsed()) text = dsl::serialize(load_model(file));
    } catch (const Failure& f) {
      err_ << "error: " << f.message << "\n";
      return f.code;
    } catch (const impossible_evidence_error& e) {
      err_ << "error: " << e.what() << "\n";
      return kImpossibleEvidence;
    } catch (const undefined_conditional_error& e) {
      err_ << "error: " << e.what() << "\n";
      return kImpossibleEvidence;
    } catch (const validation_error& e) {
      err_ << "error: " << e.what() << "\n";
      return kBadModel;
    } catch (const error& e) {
      err_ << "error: " << e.what() << "\n";
      return kUsage;
    }

    if (opts_.out_path.empty()) {
      out_ << text;
    } else if (!write_file(opts_.out_path, text)) {
      err_ << "error: cannot write '" << opts_.out_path << "'\n";
      return kUsage;
    }
    return code;
  }

private:
  static std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) throw Failure{kUsage, "empty measurement in --sequence"};
      out.push_back(item);
    }
    return out;
  }

  /// Writes via a sibling temporary and rename, so a failed run never
  /// leaves a partial file behind.
  static bool write_file(const std::string& path, const std::string& text) {
    std::filesystem::path tmp = path + ".tmp";
    {
      std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
      if (!f) return false;
      f << text;
      if (!f.flush()) return false;
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) std::filesystem::remove(tmp, ec);
    return !ec;
  }

  bool as_json() const { return opts_.format == "json"; }

  std::string cmd_index(const CircumstanceModel& model) {
    IndexedModel indexed = index_by_plausibility(model);
    if (as_json()) {
      json::value j{{"model", model.name}, {"classes", json::classes(indexed)}};
      return j.dump(2) + "\n";
    }
    std::size_t count = indexed.classes.size();
    return "model " + model.name + ": " + std::to_string(count) + (count == 1 ? " class\n" : " classes\n") +
           render_classes(indexed);
  }

  std::string cmd_marginal(const CircumstanceModel& model, const std::string& target) {
    std::vector<const Measurement*> targets;
    if (target.empty()) {
      for (const auto& m : model.measurements) targets.push_back(&m);
    } else {
      targets.push_back(&model.measurement(target));
    }
    json::value j = json::value::array();
    std::string text;
    for (const auto* m : targets) {
      ProbVector q = marginal(model, m->id);
      j.push_back({{"measurement", m->id}, {"distribution", json::distribution(*m, q)}});
      text += m->id + ": " + render_distribution(*m, q) + "\n";
    }
    if (as_json()) return json::value{{"marginals", j}}.dump(2) + "\n";
    return text;
  }

  std::string cmd_update(const CircumstanceModel& model, const std::vector<Observation>& obs) {
    PosteriorModel post = update(model, obs);
    IndexedModel indexed = index_by_plausibility(post.model);
    if (as_json()) {
      json::value j{{"observations", json::observations(obs)},
                    {"evidence", json::rational(post.evidence)},
                    {"posterior",
                     {{"classes", json::classes(indexed)}, {"circumstances", json::circumstance_weights(post.model)}}}};
      return j.dump(2) + "\n";
    }
    std::string text = "observed " + (obs.empty() ? std::string("nothing") : render_observations(obs)) + "\n";
    text += "evidence " + with_decimal(post.evidence) + "\n";
    text += "posterior classes:\n" + render_classes(indexed);
    text += "posterior circumstances:\n";
    for (const auto& c : post.model.circumstances) text += "  " + c.id + " " + with_decimal(c.weight) + "\n";
    return text;
  }

  std::string cmd_predict(const CircumstanceModel& model, const std::string& target,
                          const std::vector<Observation>& obs) {
    const Measurement& m = model.measurement(target);
    ProbVector q = predict(model, target, obs);
    Rational evidence = update(model, obs).evidence;
    if (as_json()) {
      json::value j{{"target", target},
                    {"observations", json::observations(obs)},
                    {"evidence", json::rational(evidence)},
                    {"distribution", json::distribution(m, q)}};
      return j.dump(2) + "\n";
    }
    return target + " | " + (obs.empty() ? std::string("nothing") : render_observations(obs)) + ": " +
           render_distribution(m, q) + "\n";
  }

  std::string cmd_gen(const std::string& name, std::optional<int> n) {
    if (name == "coin") {
      if (n) throw Failure{kUsage, "--n applies to balls only"};
      return dsl::serialize(gen_coin());
    }
    if (!n) throw Failure{kUsage, "gen balls needs --n"};
    return dsl::serialize(gen_balls(*n));
  }

  std::string cmd_gamma(int n) {
    auto points = gamma_points(n);
    if (as_json()) return json::value{{"n", n}, {"points", json::gamma(points)}}.dump(2) + "\n";
    std::string text = "qLa,qN1,weight,members,qLa_decimal,qN1_decimal,weight_decimal\n";
    for (const auto& p : points) {
      text += p.qLa.str() + "," + p.qN1.str() + "," + p.weight.str() + "," + std::to_string(p.members) + "," +
              p.qLa.decimal() + "," + p.qN1.decimal() + "," + p.weight.decimal() + "\n";
    }
    return text;
  }

  std::pair<int, std::string> cmd_compat(const CircumstanceModel& a, const CircumstanceModel& b) {
    if (a.measurements != b.measurements) {
      throw Failure{kUsage, "models '" + a.name + "' and '" + b.name + "' have different measurement structures"};
    }
    MomentVector ma = moments(index_by_plausibility(a));
    MomentVector mb = moments(index_by_plausibility(b));
    CompatResult r = compatible(ma, mb);
    int code = r.compatible ? kOk : kIncompatible;
    if (as_json()) {
      json::value j{{"compatible", r.compatible}};
      if (!r.compatible) {
        j["key"] = ma.label(*r.first_difference);
        j["a"] = json::rational(r.a_value);
        j["b"] = json::rational(r.b_value);
      }
      j["moments_a"] = json::moments(ma);
      j["moments_b"] = json::moments(mb);
      return {code, j.dump(2) + "\n"};
    }
    if (r.compatible) return {code, "compatible: all " + std::to_string(ma.values.size()) + " moments equal\n"};
    return {code, "incompatible: first differing moment " + ma.label(*r.first_difference) + ": " +
                      r.a_value.str() + " vs " + r.b_value.str() + "\n"};
  }

  std::string cmd_simulate(const CircumstanceModel& model, std::uint64_t seed, std::optional<std::string> hidden,
                           const std::vector<std::string>& sequence) {
    require_valid(model);
    for (std::size_t i = 0; i < sequence.size(); ++i) {
      model.measurement(sequence[i]);
      for (std::size_t j = 0; j < i; ++j) {
        if (sequence[j] == sequence[i]) throw Failure{kUsage, "measurement '" + sequence[i] + "' repeated in --sequence"};
      }
    }
    std::mt19937_64 rng(seed);
    const bool drawn = !hidden.has_value();
    if (drawn) {
      std::vector<Rational> weights;
      for (const auto& c : model.circumstances) weights.push_back(c.weight);
      hidden = model.circumstances[draw(rng, weights)].id;
    }
    const Circumstance& truth = model.circumstance(*hidden);

    json::value steps = json::value::array();
    std::string text = "seed " + std::to_string(seed) + "\n";
    text += "hidden " + truth.id + (drawn ? " (drawn from prior)" : " (fixed)") + "\n";
    auto record = [&](std::size_t step, const std::optional<Observation>& obs, const Rational& evidence,
                      const CircumstanceModel& current) {
      IndexedModel indexed = index_by_plausibility(current);
      Rational total;
      for (const auto& c : current.circumstances) total += c.weight;
      json::value s{{"step", step}};
      s["observation"] = obs ? json::value{{"measurement", obs->measurement}, {"outcome", obs->outcome}} : json::value();
      s["evidence"] = json::rational(evidence);
      s["weight_sum"] = json::rational(total);
      s["posterior"] = {{"classes", json::classes(indexed)}, {"circumstances", json::circumstance_weights(current)}};
      steps.push_back(std::move(s));
      text += "step " + std::to_string(step) + ": " +
              (obs ? "observe " + obs->measurement + "=" + obs->outcome + ", evidence " + with_decimal(evidence)
                   : std::string("prior")) +
              ", weight sum " + total.str() + "\n" + render_classes(indexed, "  ");
    };

    CircumstanceModel current = model;
    record(0, std::nullopt, Rational(1), current);
    std::vector<Observation> observed;
    for (std::size_t t = 0; t < sequence.size(); ++t) {
      const Measurement& m = model.measurement(sequence[t]);
      Observation obs{m.id, m.outcomes[draw(rng, truth.table(m.id).entries)]};
      PosteriorModel post = update(current, {obs});
      current = std::move(post.model);
      observed.push_back(obs);
      record(t + 1, obs, post.evidence, current);
    }

    // Within a class, weight ratios between members must survive updating.
    json::value audit = json::value::array();
    bool all_ok = true;
    text += "ratio audit:\n";
    for (const auto& cls : index_by_plausibility(model).classes) {
      std::optional<std::string> ref;
      for (const auto& id : cls.members) {
        if (model.circumstance(id).weight.is_zero()) continue;
        if (!ref) {
          ref = id;
          continue;
        }
        Rational prior_ratio = model.circumstance(*ref).weight / model.circumstance(id).weight;
        const Rational& post_ref = current.circumstance(*ref).weight;
        const Rational& post_id = current.circumstance(id).weight;
        bool eliminated = post_ref.is_zero() && post_id.is_zero();
        bool ok = eliminated || (!post_id.is_zero() && post_ref / post_id == prior_ratio);
        all_ok &= ok;
        std::string post_ratio = eliminated ? "0:0" : post_id.is_zero() ? post_ref.str() + ":0" : ratio(post_ref / post_id);
        audit.push_back({{"class", cls.point.str()},
                         {"pair", *ref + ":" + id},
                         {"prior", ratio(prior_ratio)},
                         {"posterior", post_ratio},
                         {"ok", ok}});
        text += "  " + cls.point.str() + " " + *ref + ":" + id + " prior " + ratio(prior_ratio) + " posterior " +
                post_ratio + (ok ? " ok" : " MISMATCH") + "\n";
      }
    }
    if (audit.empty()) text += "  (no class has two members with positive prior weight)\n";
    text += std::string("audit ") + (all_ok ? "passed" : "FAILED") + "\n";

    if (as_json()) {
      json::value j{{"seed", seed},
                    {"hidden", truth.id},
                    {"hidden_drawn", drawn},
                    {"observations", json::observations(observed)},
                    {"trajectory", steps},
                    {"audit", audit},
                    {"audit_ok", all_ok}};
      return j.dump(2) + "\n";
    }
    return text;
  }

  std::ostream& out_;
  std::ostream& err_;
  Options opts_;
};

inline int run(std::vector<std::string> args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return Runner(out, err).run(std::move(args));
}

} // namespace circ::cli
