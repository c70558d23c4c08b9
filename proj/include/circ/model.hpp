#pragma once

// Domain model: measurements with discrete outcomes, and a weighted,
// mutually exclusive and exhaustive set of circumstances, each carrying one
// conditional outcome distribution per measurement.
//
// Outcomes of different measurements are conditionally independent given a
// circumstance. That assumption is structural here: a circumstance holds
// independent per-measurement tables and nothing else. A situation where it
// fails has to be modelled by refining the circumstance set.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "circ/errors.hpp"
#include "circ/rational.hpp"

namespace circ {

struct Measurement {
  std::string id;
  std::vector<std::string> outcomes;

  std::optional<std::size_t> outcome_index(std::string_view outcome) const {
    auto it = std::find(outcomes.begin(), outcomes.end(), outcome);
    if (it == outcomes.end()) return std::nullopt;
    return static_cast<std::size_t>(it - outcomes.begin());
  }

  friend bool operator==(const Measurement&, const Measurement&) = default;
};

/// Probability vector aligned with a measurement's outcome list.
struct ProbVector {
  std::vector<Rational> entries;

  ProbVector() = default;
  ProbVector(std::initializer_list<Rational> init) : entries(init) {}
  explicit ProbVector(std::vector<Rational> init) : entries(std::move(init)) {}

  std::size_t size() const { return entries.size(); }
  const Rational& operator[](std::size_t i) const { return entries[i]; }

  Rational sum() const {
    Rational s;
    for (const auto& e : entries) s += e;
    return s;
  }

  bool is_distribution() const {
    return std::none_of(entries.begin(), entries.end(), [](const Rational& e) { return e.sign() < 0; }) &&
           sum() == 1;
  }

  std::string str() const {
    std::string out = "(";
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (i) out += ",";
      out += entries[i].str();
    }
    return out + ")";
  }

  friend bool operator==(const ProbVector&, const ProbVector&) = default;
  friend auto operator<=>(const ProbVector&, const ProbVector&) = default;
};

struct Circumstance {
  std::string id;
  std::string label;
  Rational weight;
  std::map<std::string, ProbVector, std::less<>> tables;

  const ProbVector& table(std::string_view measurement) const {
    auto it = tables.find(measurement);
    if (it == tables.end()) {
      throw lookup_error("circumstance '" + id + "' has no table for measurement '" + std::string(measurement) + "'");
    }
    return it->second;
  }

  friend bool operator==(const Circumstance&, const Circumstance&) = default;
};

/// The whole background context: what can be measured and which
/// circumstances may hold, with their plausibilities.
struct CircumstanceModel {
  std::string name;
  std::vector<Measurement> measurements;
  std::vector<Circumstance> circumstances;

  std::optional<std::size_t> measurement_index(std::string_view id) const {
    for (std::size_t k = 0; k < measurements.size(); ++k) {
      if (measurements[k].id == id) return k;
    }
    return std::nullopt;
  }

  const Measurement& measurement(std::string_view id) const {
    auto k = measurement_index(id);
    if (!k) throw lookup_error("unknown measurement '" + std::string(id) + "'");
    return measurements[*k];
  }

  const Circumstance& circumstance(std::string_view id) const {
    for (const auto& c : circumstances) {
      if (c.id == id) return c;
    }
    throw lookup_error("unknown circumstance '" + std::string(id) + "'");
  }

  friend bool operator==(const CircumstanceModel&, const CircumstanceModel&) = default;
};

/// One probability vector per measurement, in model measurement order.
/// Entries are canonical rationals, so structural equality is equality of
/// distributions.
struct ParameterPoint {
  std::vector<ProbVector> components;

  std::string str() const {
    std::string out = "(";
    for (std::size_t k = 0; k < components.size(); ++k) {
      if (k) out += ",";
      out += components[k].str();
    }
    return out + ")";
  }

  friend bool operator==(const ParameterPoint&, const ParameterPoint&) = default;
  friend auto operator<=>(const ParameterPoint&, const ParameterPoint&) = default;
};

struct Observation {
  std::string measurement;
  std::string outcome;

  friend bool operator==(const Observation&, const Observation&) = default;
  friend auto operator<=>(const Observation&, const Observation&) = default;
};

/// Lists every violated model invariant. An empty report means the model is
/// valid; this never throws.
inline ValidationReport validate_model(const CircumstanceModel& model) {
  ValidationReport report;
  auto add = [&](std::string location, std::string message) {
    report.push_back({std::move(location), std::move(message)});
  };

  if (model.measurements.empty()) add("model " + model.name, "declares no measurements");

  std::set<std::string, std::less<>> measurement_ids;
  for (const auto& m : model.measurements) {
    std::string where = "measurement " + m.id;
    if (!measurement_ids.insert(m.id).second) add(where, "duplicate measurement id '" + m.id + "'");
    if (m.outcomes.size() < 2) add(where, "needs at least 2 outcomes, has " + std::to_string(m.outcomes.size()));
    std::set<std::string, std::less<>> seen;
    for (const auto& o : m.outcomes) {
      if (!seen.insert(o).second) add(where, "duplicate outcome id '" + o + "'");
    }
  }

  std::set<std::string, std::less<>> circumstance_ids;
  Rational total;
  for (const auto& c : model.circumstances) {
    std::string where = "circumstance " + c.id;
    if (!circumstance_ids.insert(c.id).second) add(where, "duplicate circumstance id '" + c.id + "'");
    if (c.weight.sign() < 0) add(where, "negative weight " + c.weight.str());
    total += c.weight;

    for (const auto& m : model.measurements) {
      auto it = c.tables.find(m.id);
      if (it == c.tables.end()) {
        add(where, "missing table for measurement '" + m.id + "'");
        continue;
      }
      const ProbVector& row = it->second;
      std::string row_where = where + ", table " + m.id;
      if (row.size() != m.outcomes.size()) {
        add(row_where, "has " + std::to_string(row.size()) + " entries, measurement has " +
                           std::to_string(m.outcomes.size()) + " outcomes");
      }
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (row[i].sign() < 0) add(row_where, "negative entry " + row[i].str() + " at position " + std::to_string(i + 1));
      }
      if (Rational s = row.sum(); s != 1) add(row_where, "row sums to " + s.str() + " ≠ 1");
    }
    for (const auto& [mid, row] : c.tables) {
      if (!measurement_ids.contains(mid)) add(where, "table for unknown measurement '" + mid + "'");
    }
  }
  if (total != 1) add("model " + model.name, "weights sum to " + total.str() + " ≠ 1");
  return report;
}

inline void require_valid(const CircumstanceModel& model) {
  auto report = validate_model(model);
  if (!report.empty()) throw validation_error(std::move(report));
}

/// The classing key of a circumstance: its tables in measurement order.
inline ParameterPoint parameter_point_of(const CircumstanceModel& model, std::string_view circumstance_id) {
  const Circumstance& c = model.circumstance(circumstance_id);
  ParameterPoint point;
  point.components.reserve(model.measurements.size());
  for (const auto& m : model.measurements) point.components.push_back(c.table(m.id));
  return point;
}

namespace detail {

/// Resolves observations to (measurement index, outcome index) pairs.
/// Rejects unknown ids and repeated measurements.
inline std::vector<std::pair<std::size_t, std::size_t>> resolve(const std::vector<Measurement>& measurements,
                                                                 const std::vector<Observation>& observations) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::set<std::size_t> seen;
  for (const auto& obs : observations) {
    auto it = std::find_if(measurements.begin(), measurements.end(),
                           [&](const Measurement& m) { return m.id == obs.measurement; });
    if (it == measurements.end()) throw lookup_error("unknown measurement '" + obs.measurement + "'");
    auto i = it->outcome_index(obs.outcome);
    if (!i) throw lookup_error("measurement '" + obs.measurement + "' has no outcome '" + obs.outcome + "'");
    auto k = static_cast<std::size_t>(it - measurements.begin());
    if (!seen.insert(k).second) {
      throw input_error("measurement '" + obs.measurement + "' observed more than once");
    }
    out.emplace_back(k, *i);
  }
  return out;
}

} // namespace detail

} // namespace circ
