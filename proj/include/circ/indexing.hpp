#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "circ/model.hpp"

namespace circ {

/// Disjunction of all circumstances that assign the same parameter point.
struct IndexedClass {
  ParameterPoint point;
  std::vector<std::string> members;
  Rational weight;

  friend bool operator==(const IndexedClass&, const IndexedClass&) = default;
};

/// Coarse-grained model: classes have pairwise distinct points, weights
/// summing to 1, and together cover every source circumstance once.
struct IndexedModel {
  std::string source;
  std::vector<Measurement> measurements;
  std::vector<IndexedClass> classes;

  const IndexedClass& at(const ParameterPoint& point) const {
    for (const auto& c : classes) {
      if (c.point == point) return c;
    }
    throw lookup_error("no class at point " + point.str());
  }

  const IndexedClass& class_of(std::string_view circumstance_id) const {
    for (const auto& c : classes) {
      if (std::find(c.members.begin(), c.members.end(), circumstance_id) != c.members.end()) return c;
    }
    throw lookup_error("no class contains circumstance '" + std::string(circumstance_id) + "'");
  }

  friend bool operator==(const IndexedModel&, const IndexedModel&) = default;
};

/// Classes come out sorted lexicographically by point; members keep model
/// order. Zero-weight circumstances are kept as members.
inline IndexedModel index_by_plausibility(const CircumstanceModel& model) {
  require_valid(model);
  std::map<ParameterPoint, IndexedClass> groups;
  for (const auto& c : model.circumstances) {
    ParameterPoint point = parameter_point_of(model, c.id);
    auto [it, inserted] = groups.try_emplace(point);
    if (inserted) it->second.point = std::move(point);
    it->second.members.push_back(c.id);
    it->second.weight += c.weight;
  }
  IndexedModel out{model.name, model.measurements, {}};
  out.classes.reserve(groups.size());
  for (auto& [point, cls] : groups) out.classes.push_back(std::move(cls));
  return out;
}

/// Numerical value attached to each outcome, per measurement id.
struct OutcomeValues {
  std::map<std::string, std::map<std::string, Rational>, std::less<>> values;
};

struct ExpectationIndexedClass {
  std::vector<Rational> key; // one expectation per measurement, model order
  std::vector<std::string> members;
  Rational weight;

  friend bool operator==(const ExpectationIndexedClass&, const ExpectationIndexedClass&) = default;
};

/// Expected value of the outcome values under one distribution.
inline Rational expectation(const Measurement& m, const ProbVector& row, const std::map<std::string, Rational>& values) {
  Rational e;
  for (std::size_t i = 0; i < m.outcomes.size(); ++i) e += values.at(m.outcomes[i]) * row[i];
  return e;
}

/// Coarser grouping keyed by the expectation of `values` under each
/// measurement's table, rather than by the full distributions.
inline std::vector<ExpectationIndexedClass> index_by_expectation(const CircumstanceModel& model,
                                                                 const OutcomeValues& values) {
  require_valid(model);
  for (const auto& m : model.measurements) {
    auto it = values.values.find(m.id);
    if (it == values.values.end()) throw input_error("no outcome values for measurement '" + m.id + "'");
    for (const auto& o : m.outcomes) {
      if (!it->second.contains(o)) {
        throw input_error("no value for outcome '" + o + "' of measurement '" + m.id + "'");
      }
    }
  }
  std::map<std::vector<Rational>, ExpectationIndexedClass> groups;
  for (const auto& c : model.circumstances) {
    std::vector<Rational> key;
    for (const auto& m : model.measurements) key.push_back(expectation(m, c.table(m.id), values.values.find(m.id)->second));
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) it->second.key = std::move(key);
    it->second.members.push_back(c.id);
    it->second.weight += c.weight;
  }
  std::vector<ExpectationIndexedClass> out;
  for (auto& [key, cls] : groups) out.push_back(std::move(cls));
  return out;
}

/// True iff every plausibility class lies inside a single expectation
/// class. Both inputs must partition the same circumstance ids.
inline bool class_refinement_check(const IndexedModel& plaus, const std::vector<ExpectationIndexedClass>& expect) {
  std::map<std::string, std::size_t> owner;
  for (std::size_t e = 0; e < expect.size(); ++e) {
    for (const auto& id : expect[e].members) {
      if (!owner.emplace(id, e).second) throw input_error("circumstance '" + id + "' in two expectation classes");
    }
  }
  std::size_t covered = 0;
  bool refines = true;
  for (const auto& cls : plaus.classes) {
    std::optional<std::size_t> target;
    for (const auto& id : cls.members) {
      auto it = owner.find(id);
      if (it == owner.end()) throw input_error("circumstance '" + id + "' missing from expectation classes");
      ++covered;
      if (!target) target = it->second;
      else if (*target != it->second) refines = false;
    }
  }
  if (covered != owner.size()) throw input_error("expectation classes cover circumstances absent from the indexed model");
  return refines;
}

} // namespace circ
