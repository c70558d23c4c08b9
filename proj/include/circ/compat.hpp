#pragma once

// Mixed moments of a class-weight distribution over parameter points, and
// the compatibility test between two circumstance analyses of one context.
// Two analyses with equal moments make the same predictions for every set
// of outcomes of distinct measurements.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "circ/indexing.hpp"
#include "circ/inference.hpp"

namespace circ {

/// Outcomes of pairwise distinct measurements, as (measurement index,
/// outcome index) terms in increasing measurement order. Never empty.
struct MomentKey {
  std::vector<std::pair<std::size_t, std::size_t>> terms;

  friend bool operator==(const MomentKey&, const MomentKey&) = default;
  friend auto operator<=>(const MomentKey&, const MomentKey&) = default;
};

struct MomentVector {
  std::vector<Measurement> measurements;
  std::map<MomentKey, Rational> values;

  /// "Letter=a,Number=1"
  std::string label(const MomentKey& key) const {
    std::string out;
    for (auto [k, i] : key.terms) {
      if (!out.empty()) out += ",";
      out += measurements[k].id + "=" + measurements[k].outcomes[i];
    }
    return out;
  }

  std::vector<Observation> observations(const MomentKey& key) const {
    std::vector<Observation> out;
    for (auto [k, i] : key.terms) out.push_back({measurements[k].id, measurements[k].outcomes[i]});
    return out;
  }

  const Rational& at(const std::vector<Observation>& key) const {
    MomentKey mk;
    for (auto [k, i] : detail::resolve(measurements, key)) mk.terms.emplace_back(k, i);
    std::sort(mk.terms.begin(), mk.terms.end());
    auto it = values.find(mk);
    if (it == values.end()) throw lookup_error("empty moment key");
    return it->second;
  }
};

/// Every key over the given measurements, orders 1..m; there are
/// prod_k (n_k + 1) - 1 of them.
inline std::vector<MomentKey> all_moment_keys(const std::vector<Measurement>& measurements) {
  std::vector<MomentKey> keys;
  // choice[k] == 0 leaves measurement k out, otherwise picks outcome choice[k]-1
  std::vector<std::size_t> choice(measurements.size(), 0);
  for (;;) {
    std::size_t k = 0;
    while (k < choice.size() && ++choice[k] > measurements[k].outcomes.size()) choice[k++] = 0;
    if (k == choice.size()) break;
    MomentKey key;
    for (std::size_t j = 0; j < choice.size(); ++j) {
      if (choice[j]) key.terms.emplace_back(j, choice[j] - 1);
    }
    keys.push_back(std::move(key));
  }
  std::sort(keys.begin(), keys.end());
  return keys;
}

inline MomentVector moments(const IndexedModel& indexed) {
  require_valid(indexed);
  MomentVector out{indexed.measurements, {}};
  for (auto& key : all_moment_keys(indexed.measurements)) {
    Rational sum;
    for (const auto& cls : indexed.classes) {
      if (cls.weight.is_zero()) continue;
      Rational product = cls.weight;
      for (auto [k, i] : key.terms) product *= cls.point.components[k][i];
      sum += product;
    }
    out.values.emplace(std::move(key), std::move(sum));
  }
  return out;
}

struct CompatResult {
  bool compatible = true;
  std::optional<MomentKey> first_difference;
  Rational a_value;
  Rational b_value;
};

/// Exact comparison of two moment vectors over identical measurement
/// structures. On mismatch reports the smallest differing key.
inline CompatResult compatible(const MomentVector& a, const MomentVector& b) {
  if (a.measurements != b.measurements) {
    throw input_error("moment vectors are over different measurement structures");
  }
  for (const auto& [key, value] : a.values) {
    auto it = b.values.find(key);
    if (it == b.values.end()) throw input_error("moment key " + a.label(key) + " missing from second vector");
    if (it->second != value) return {false, key, value, it->second};
  }
  if (a.values.size() != b.values.size()) throw input_error("moment vectors have different key sets");
  return {};
}

} // namespace circ
