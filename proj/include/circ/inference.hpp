#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "circ/indexing.hpp"
#include "circ/model.hpp"

namespace circ {

/// A model with weights conditioned on `conditioning`. `evidence` is the
/// prior probability of the observed outcomes (the update normalizer).
template <class Model>
struct Posterior {
  Model model;
  Rational evidence;
  std::vector<Observation> conditioning;
};

using PosteriorModel = Posterior<CircumstanceModel>;
using IndexedPosterior = Posterior<IndexedModel>;

/// Lists violated IndexedModel invariants; empty means valid.
inline ValidationReport validate_indexed(const IndexedModel& indexed) {
  ValidationReport report;
  std::set<ParameterPoint> points;
  std::set<std::string> members;
  Rational total;
  for (const auto& cls : indexed.classes) {
    std::string where = "class " + cls.point.str();
    if (!points.insert(cls.point).second) report.push_back({where, "duplicate class point"});
    if (cls.members.empty()) report.push_back({where, "has no members"});
    for (const auto& id : cls.members) {
      if (!members.insert(id).second) report.push_back({where, "circumstance '" + id + "' appears twice"});
    }
    if (cls.weight.sign() < 0) report.push_back({where, "negative weight"});
    total += cls.weight;
    if (cls.point.components.size() != indexed.measurements.size()) {
      report.push_back({where, "point has wrong number of components"});
      continue;
    }
    for (std::size_t k = 0; k < indexed.measurements.size(); ++k) {
      const auto& q = cls.point.components[k];
      if (q.size() != indexed.measurements[k].outcomes.size() || !q.is_distribution()) {
        report.push_back({where, "component " + indexed.measurements[k].id + " is not a distribution"});
      }
    }
  }
  if (total != 1) report.push_back({"indexed model " + indexed.source, "weights sum to " + total.str() + " ≠ 1"});
  return report;
}

inline void require_valid(const IndexedModel& indexed) {
  auto report = validate_indexed(indexed);
  if (!report.empty()) throw validation_error(std::move(report));
}

namespace detail {

// Uniform access to "weighted atoms carrying one row per measurement" for
// both raw circumstances and indexed classes.
inline std::size_t atom_count(const CircumstanceModel& m) { return m.circumstances.size(); }
inline std::size_t atom_count(const IndexedModel& m) { return m.classes.size(); }
inline const Rational& atom_weight(const CircumstanceModel& m, std::size_t j) { return m.circumstances[j].weight; }
inline const Rational& atom_weight(const IndexedModel& m, std::size_t j) { return m.classes[j].weight; }
inline void set_atom_weight(CircumstanceModel& m, std::size_t j, Rational w) { m.circumstances[j].weight = std::move(w); }
inline void set_atom_weight(IndexedModel& m, std::size_t j, Rational w) { m.classes[j].weight = std::move(w); }
inline const ProbVector& atom_row(const CircumstanceModel& m, std::size_t j, std::size_t k) {
  return m.circumstances[j].table(m.measurements[k].id);
}
inline const ProbVector& atom_row(const IndexedModel& m, std::size_t j, std::size_t k) {
  return m.classes[j].point.components[k];
}

template <class Model>
Rational likelihood(const Model& model, std::size_t j, const std::vector<std::pair<std::size_t, std::size_t>>& obs) {
  Rational l = 1;
  for (auto [k, i] : obs) l *= atom_row(model, j, k)[i];
  return l;
}

} // namespace detail

/// Outcome distribution conditional on the disjunction of `subset`: the
/// weight-averaged mixture of the members' rows.
inline ProbVector conditional_on_disjunction(const CircumstanceModel& model, std::string_view measurement_id,
                                             const std::set<std::string>& subset) {
  const Measurement& m = model.measurement(measurement_id);
  if (subset.empty()) throw input_error("empty disjunction");
  std::vector<Rational> acc(m.outcomes.size());
  Rational total;
  for (const auto& id : subset) {
    const Circumstance& c = model.circumstance(id);
    const ProbVector& row = c.table(m.id);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += row[i] * c.weight;
    total += c.weight;
  }
  if (total.is_zero()) throw undefined_conditional_error("disjunction has zero total weight");
  for (auto& a : acc) a /= total;
  return ProbVector(std::move(acc));
}

/// Marginal outcome distribution of one measurement; works on either the
/// raw or the indexed model and gives identical results on both.
template <class Model>
ProbVector marginal(const Model& model, std::string_view measurement_id) {
  require_valid(model);
  auto it = std::find_if(model.measurements.begin(), model.measurements.end(),
                         [&](const Measurement& m) { return m.id == measurement_id; });
  if (it == model.measurements.end()) throw lookup_error("unknown measurement '" + std::string(measurement_id) + "'");
  auto kk = static_cast<std::size_t>(it - model.measurements.begin());
  std::vector<Rational> acc(it->outcomes.size());
  for (std::size_t j = 0; j < detail::atom_count(model); ++j) {
    const auto& w = detail::atom_weight(model, j);
    if (w.is_zero()) continue;
    const ProbVector& row = detail::atom_row(model, j, kk);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += row[i] * w;
  }
  return ProbVector(std::move(acc));
}

/// Bayesian update on outcomes of distinct measurements: each weight is
/// multiplied by the product of the observed outcomes' probabilities, then
/// renormalized.
template <class Model>
Posterior<Model> update(const Model& model, const std::vector<Observation>& observations) {
  require_valid(model);
  auto obs = detail::resolve(model.measurements, observations);
  Model out = model;
  Rational evidence;
  for (std::size_t j = 0; j < detail::atom_count(model); ++j) {
    Rational w = detail::atom_weight(model, j) * detail::likelihood(model, j, obs);
    evidence += w;
    detail::set_atom_weight(out, j, std::move(w));
  }
  if (evidence.is_zero()) throw impossible_evidence_error("observed outcomes have zero probability under the model");
  for (std::size_t j = 0; j < detail::atom_count(out); ++j) {
    detail::set_atom_weight(out, j, detail::atom_weight(out, j) / evidence);
  }
  return {std::move(out), std::move(evidence), observations};
}

/// Predictive distribution of `target` given outcomes of other
/// measurements: the marginal of the updated model.
template <class Model>
ProbVector predict(const Model& model, std::string_view target, const std::vector<Observation>& observations) {
  for (const auto& o : observations) {
    if (o.measurement == target) {
      throw input_error("target measurement '" + std::string(target) + "' is among the observations");
    }
  }
  if (!std::any_of(model.measurements.begin(), model.measurements.end(),
                   [&](const Measurement& m) { return m.id == target; })) {
    throw lookup_error("unknown measurement '" + std::string(target) + "'");
  }
  return marginal(update(model, observations).model, target);
}

struct WitnessEntry {
  ParameterPoint point;
  std::vector<std::string> members;
  ProbVector expected;   // the class point's component for the measurement
  ProbVector recomputed; // mixture over the members
  bool uniform_fallback = false; // class had zero weight; members mixed uniformly
  bool passed = false;
};

/// For every plausibility class, re-derives the distribution conditional on
/// the disjunction of its members and checks it equals the class index.
/// Zero-weight classes are mixed with equal member weights instead, since
/// any convex combination of identical rows must reproduce the row.
inline std::vector<WitnessEntry> mixture_invariance_witness(const CircumstanceModel& model,
                                                            std::string_view measurement_id) {
  IndexedModel indexed = index_by_plausibility(model);
  auto k = *model.measurement_index(model.measurement(measurement_id).id);
  std::vector<WitnessEntry> report;
  for (const auto& cls : indexed.classes) {
    WitnessEntry entry{cls.point, cls.members, cls.point.components[k], {}, false, false};
    std::set<std::string> subset(cls.members.begin(), cls.members.end());
    if (cls.weight.is_zero()) {
      CircumstanceModel uniform = model;
      for (auto& c : uniform.circumstances) c.weight = subset.contains(c.id) ? Rational(1) : Rational(0);
      entry.recomputed = conditional_on_disjunction(uniform, measurement_id, subset);
      entry.uniform_fallback = true;
    } else {
      entry.recomputed = conditional_on_disjunction(model, measurement_id, subset);
    }
    entry.passed = entry.recomputed == entry.expected;
    report.push_back(std::move(entry));
  }
  return report;
}

} // namespace circ
