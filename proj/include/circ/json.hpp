#pragma once

// JSON renderings. Rationals are always "p/q" strings; decimals, where
// present, are display-only.

#include <json.hpp>

#include <algorithm>
#include <string>
#include <vector>

#include "circ/compat.hpp"
#include "circ/indexing.hpp"
#include "circ/inference.hpp"
#include "circ/models.hpp"

namespace circ::json {

using value = nlohmann::ordered_json;

inline value rational(const Rational& r) { return r.str(); }

inline value distribution(const Measurement& m, const ProbVector& q) {
  value out = value::object();
  for (std::size_t i = 0; i < m.outcomes.size(); ++i) out[m.outcomes[i]] = q[i].str();
  return out;
}

inline value point(const std::vector<Measurement>& measurements, const ParameterPoint& p) {
  value out = value::object();
  for (std::size_t k = 0; k < measurements.size(); ++k) out[measurements[k].id] = distribution(measurements[k], p.components[k]);
  return out;
}

inline value classes(const IndexedModel& indexed) {
  value out = value::array();
  for (const auto& cls : indexed.classes) {
    out.push_back({{"point", point(indexed.measurements, cls.point)},
                   {"weight", rational(cls.weight)},
                   {"members", cls.members}});
  }
  return out;
}

inline value circumstance_weights(const CircumstanceModel& model) {
  value out = value::array();
  for (const auto& c : model.circumstances) out.push_back({{"id", c.id}, {"weight", rational(c.weight)}});
  return out;
}

inline value observations(const std::vector<Observation>& obs) {
  value out = value::array();
  for (const auto& o : obs) out.push_back({{"measurement", o.measurement}, {"outcome", o.outcome}});
  return out;
}

/// Key-sorted object: "k1=i1,k2=i2" -> "p/q".
inline value moments(const MomentVector& mv) {
  std::vector<std::pair<std::string, std::string>> entries;
  for (const auto& [key, v] : mv.values) entries.emplace_back(mv.label(key), v.str());
  std::sort(entries.begin(), entries.end());
  value out = value::object();
  for (auto& [k, v] : entries) out[k] = v;
  return out;
}

inline value gamma(const std::vector<GammaPoint>& points) {
  value out = value::array();
  for (const auto& p : points) {
    out.push_back({{"qLa", rational(p.qLa)}, {"qN1", rational(p.qN1)}, {"weight", rational(p.weight)}, {"members", p.members}});
  }
  return out;
}

} // namespace circ::json
