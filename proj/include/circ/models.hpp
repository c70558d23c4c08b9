#pragma once

// Built-in models: the four-person coin toss, and the box of 2N balls
// marked a1/a2/b1/b2 with its "Letter" and "Number" measurements.

#include <algorithm>
#include <cstdlib>
#include <string>
#include <tuple>
#include <vector>

#include "circ/indexing.hpp"
#include "circ/model.hpp"

namespace circ {

inline CircumstanceModel gen_coin() {
  Measurement toss{"toss", {"head", "tail"}};
  auto person = [](std::string id, std::string label, ProbVector row) {
    return Circumstance{std::move(id), std::move(label), Rational(1, 4), {{"toss", std::move(row)}}};
  };
  const Rational half(1, 2);
  return CircumstanceModel{
      "coin",
      {toss},
      {
          person("Cecily", "Cecily tossed; a skilled tosser who always produces head", {1, 0}),
          person("Gwendolen", "Gwendolen tossed; no particular skill", {half, half}),
          person("Jack", "Jack tossed; nothing is known about him", {half, half}),
          person("Algernon", "Algernon tossed with his double-headed coin", {1, 0}),
      }};
}

/// Numbers of a1-, a2-, b1- and b2-marked balls left in the chest.
struct Composition {
  int alpha = 0;
  int beta = 0;
  int gamma = 0;
  int delta = 0;

  std::string id() const {
    return "c" + std::to_string(alpha) + "_" + std::to_string(beta) + "_" + std::to_string(gamma) + "_" +
           std::to_string(delta);
  }

  friend bool operator==(const Composition&, const Composition&) = default;
  friend auto operator<=>(const Composition&, const Composition&) = default;
};

inline constexpr int kDefaultBallsCap = 32;

/// Largest N accepted by the balls generators; CIRC_ENGINE_MAX_N overrides
/// the default when set to a positive integer.
inline int balls_cap() {
  if (const char* env = std::getenv("CIRC_ENGINE_MAX_N")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v < 100000) return static_cast<int>(v);
  }
  return kDefaultBallsCap;
}

inline Rational::integer binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  Rational::integer r = 1;
  for (int i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

inline void check_balls_n(int n, int cap) {
  if (n < 1 || n > cap) {
    throw input_error("N must be in 1.." + std::to_string(cap) + ", got " + std::to_string(n));
  }
}

/// All compositions of 2N into four parts, each at most N, in
/// lexicographic order.
inline std::vector<Composition> compositions(int n) {
  std::vector<Composition> out;
  for (int a = 0; a <= n; ++a)
    for (int b = 0; b <= n; ++b)
      for (int g = 0; g <= n; ++g) {
        int d = 2 * n - a - b - g;
        if (d >= 0 && d <= n) out.push_back({a, b, g, d});
      }
  return out;
}

/// The box model. Every specific set of 2N remaining balls is equally
/// plausible, so a composition's weight is the number of ball sets
/// realising it, C(N,a)C(N,b)C(N,g)C(N,d), over C(4N,2N).
inline CircumstanceModel gen_balls(int n, int cap = balls_cap()) {
  check_balls_n(n, cap);
  CircumstanceModel model{"balls_n" + std::to_string(n), {{"Letter", {"a", "b"}}, {"Number", {"1", "2"}}}, {}};
  const Rational::integer total = binomial(4 * n, 2 * n);
  const int left = 2 * n;
  for (const auto& c : compositions(n)) {
    Rational::integer count = binomial(n, c.alpha) * binomial(n, c.beta) * binomial(n, c.gamma) * binomial(n, c.delta);
    std::string label = std::to_string(c.alpha) + " a1, " + std::to_string(c.beta) + " a2, " +
                        std::to_string(c.gamma) + " b1, " + std::to_string(c.delta) + " b2 left";
    model.circumstances.push_back(Circumstance{
        c.id(),
        std::move(label),
        Rational(count, total),
        {
            {"Letter", {Rational(c.alpha + c.beta, left), Rational(c.gamma + c.delta, left)}},
            {"Number", {Rational(c.alpha + c.gamma, left), Rational(c.beta + c.delta, left)}},
        }});
  }
  return model;
}

/// One plausibility class of the box model projected to the plane
/// (probability of letter a, probability of number 1).
struct GammaPoint {
  Rational qLa;
  Rational qN1;
  Rational weight;
  std::size_t members = 0;

  friend bool operator==(const GammaPoint&, const GammaPoint&) = default;
};

inline std::vector<GammaPoint> gamma_points(int n, int cap = balls_cap()) {
  IndexedModel indexed = index_by_plausibility(gen_balls(n, cap));
  std::vector<GammaPoint> out;
  out.reserve(indexed.classes.size());
  for (const auto& cls : indexed.classes) {
    out.push_back({cls.point.components[0][0], cls.point.components[1][0], cls.weight, cls.members.size()});
  }
  std::sort(out.begin(), out.end(), [](const GammaPoint& a, const GammaPoint& b) {
    return std::tie(a.qLa, a.qN1) < std::tie(b.qLa, b.qN1);
  });
  return out;
}

inline std::size_t count_classes(int n, int cap = balls_cap()) { return gamma_points(n, cap).size(); }

/// Largest entry of a probability vector.
inline Rational sup_norm(const ProbVector& q) {
  if (q.entries.empty()) throw input_error("sup norm of empty vector");
  return *std::max_element(q.entries.begin(), q.entries.end());
}

/// Bound on ||qL|| + ||qN|| (sup norms) characterising the limit region.
/// Enumeration of the box model shows every realisable pair lies in the
/// diamond |qLa - 1/2| + |qN1 - 1/2| <= 1/2, which for two-outcome
/// vectors reads ||qL|| + ||qN|| <= 3/2. A bound of 1 would admit only the
/// centre point.
inline const Rational kGammaInfinityBound{3, 2};

inline bool in_gamma_infinity(const ProbVector& qL, const ProbVector& qN) {
  if (qL.size() != 2 || qN.size() != 2) throw input_error("Γ∞ membership needs two-outcome vectors");
  if (!qL.is_distribution() || !qN.is_distribution()) throw input_error("Γ∞ membership needs probability vectors");
  return sup_norm(qL) + sup_norm(qN) <= kGammaInfinityBound;
}

} // namespace circ
