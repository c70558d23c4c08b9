#include <gtest/gtest.h>

#include <cstdlib>
#include <map>
#include <set>
#include <tuple>

#include "circ/inference.hpp"
#include "circ/models.hpp"
#include "support/oracles.hpp"

namespace circ {
namespace {

const Rational kHalf(1, 2);

TEST(GenCoinTest, Structure) {
  auto coin = gen_coin();
  EXPECT_TRUE(validate_model(coin).empty());
  ASSERT_EQ(coin.measurements.size(), 1u);
  EXPECT_EQ(coin.measurements[0].outcomes, (std::vector<std::string>{"head", "tail"}));
  std::vector<std::string> ids;
  for (const auto& c : coin.circumstances) {
    ids.push_back(c.id);
    EXPECT_EQ(c.weight, Rational(1, 4));
  }
  EXPECT_EQ(ids, (std::vector<std::string>{"Cecily", "Gwendolen", "Jack", "Algernon"}));
  auto indexed = index_by_plausibility(coin);
  ASSERT_EQ(indexed.classes.size(), 2u);
  EXPECT_EQ(indexed.classes[0].weight, kHalf);
  EXPECT_EQ(marginal(coin, "toss"), (ProbVector{Rational(3, 4), Rational(1, 4)}));
}

TEST(GenBallsTest, CompositionTables) {
  auto balls = gen_balls(2);
  const auto& c = balls.circumstance(Composition{2, 0, 1, 1}.id());
  EXPECT_EQ(c.table("Letter"), (ProbVector{kHalf, kHalf}));
  EXPECT_EQ(c.table("Number"), (ProbVector{Rational(3, 4), Rational(1, 4)}));
  EXPECT_EQ(balls.circumstances.size(), 19u);
}

TEST(GenBallsTest, NOneHasSixEqualCircumstances) {
  auto balls = gen_balls(1);
  ASSERT_EQ(balls.circumstances.size(), 6u);
  for (const auto& c : balls.circumstances) EXPECT_EQ(c.weight, Rational(1, 6));
}

TEST(GenBallsTest, WeightsAreHypergeometricAndSumToOne) {
  for (int n = 1; n <= 8; ++n) {
    auto balls = gen_balls(n);
    EXPECT_TRUE(validate_model(balls).empty()) << n;
    Rational::integer count_sum = 0;
    for (const auto& comp : compositions(n)) {
      count_sum += binomial(n, comp.alpha) * binomial(n, comp.beta) * binomial(n, comp.gamma) * binomial(n, comp.delta);
    }
    EXPECT_EQ(count_sum, binomial(4 * n, 2 * n)) << n;
    Rational total;
    for (const auto& c : balls.circumstances) total += c.weight;
    EXPECT_EQ(total, 1) << n;
  }
}

TEST(GenBallsTest, WeightsMatchBallSubsetEnumeration) {
  for (int n = 1; n <= 3; ++n) {
    auto brute = oracle::enumerate_ball_subsets(n);
    auto balls = gen_balls(n);
    ASSERT_EQ(brute.weights.size(), balls.circumstances.size()) << n;
    for (const auto& [comp, w] : brute.weights) EXPECT_EQ(balls.circumstance(comp.id()).weight, w) << comp.id();
  }
}

TEST(GenBallsTest, RangeChecks) {
  EXPECT_THROW(gen_balls(0), input_error);
  EXPECT_THROW(gen_balls(-1), input_error);
  EXPECT_THROW(gen_balls(33), input_error);
  EXPECT_THROW(gen_balls(5, 4), input_error);
  EXPECT_NO_THROW(gen_balls(4, 4));
}

TEST(GenBallsTest, CapFromEnvironment) {
  ::setenv("CIRC_ENGINE_MAX_N", "3", 1);
  EXPECT_EQ(balls_cap(), 3);
  EXPECT_THROW(gen_balls(4), input_error);
  ::setenv("CIRC_ENGINE_MAX_N", "junk", 1);
  EXPECT_EQ(balls_cap(), kDefaultBallsCap);
  ::unsetenv("CIRC_ENGINE_MAX_N");
  EXPECT_EQ(balls_cap(), kDefaultBallsCap);
}

TEST(GammaPointsTest, CountsMatchClosedForm) {
  EXPECT_EQ(gamma_points(1).size(), 5u);
  EXPECT_EQ(gamma_points(4).size(), 41u);
  EXPECT_EQ(gamma_points(16).size(), 545u);
  for (int n = 1; n <= 16; ++n) EXPECT_EQ(count_classes(n), static_cast<std::size_t>(n * n + (n + 1) * (n + 1)));
}

TEST(GammaPointsTest, SortedWithWeightsAndMembers) {
  auto points = gamma_points(2);
  EXPECT_TRUE(std::is_sorted(points.begin(), points.end(), [](const GammaPoint& a, const GammaPoint& b) {
    return std::tie(a.qLa, a.qN1) < std::tie(b.qLa, b.qN1);
  }));
  Rational total;
  std::size_t members = 0;
  for (const auto& p : points) {
    total += p.weight;
    members += p.members;
  }
  EXPECT_EQ(total, 1);
  EXPECT_EQ(members, 19u);
  auto it = std::find_if(points.begin(), points.end(),
                         [](const GammaPoint& p) { return p.qLa == Rational(1, 2) && p.qN1 == Rational(3, 4); });
  ASSERT_NE(it, points.end());
  EXPECT_EQ(it->members, 2u);
}

TEST(GammaPointsTest, CompositeClassHasExactlyTwoMembers) {
  auto indexed = index_by_plausibility(gen_balls(2));
  const auto& cls = indexed.at(ParameterPoint{{{kHalf, kHalf}, {Rational(3, 4), Rational(1, 4)}}});
  EXPECT_EQ(std::set<std::string>(cls.members.begin(), cls.members.end()),
            (std::set<std::string>{"c2_0_1_1", "c1_1_2_0"}));
}

TEST(GammaPointsTest, SymmetricUnderRelabelling) {
  for (int n = 1; n <= 6; ++n) {
    std::map<std::pair<Rational, Rational>, Rational> w;
    for (const auto& p : gamma_points(n)) w[{p.qLa, p.qN1}] = p.weight;
    for (const auto& [xy, weight] : w) {
      auto [x, y] = xy;
      EXPECT_EQ(w.at({Rational(1) - x, y}), weight);
      EXPECT_EQ(w.at({x, Rational(1) - y}), weight);
      EXPECT_EQ(w.at({y, x}), weight);
    }
  }
}

TEST(GammaInfinityTest, Examples) {
  EXPECT_TRUE(in_gamma_infinity({kHalf, kHalf}, {kHalf, kHalf}));
  // a corner of the diamond, realised already for N = 1 by composition (1,1,0,0)
  EXPECT_TRUE(in_gamma_infinity({1, 0}, {kHalf, kHalf}));
  EXPECT_FALSE(in_gamma_infinity({1, 0}, {1, 0}));
  EXPECT_FALSE(in_gamma_infinity({Rational(3, 4), Rational(1, 4)}, {Rational(4, 5), Rational(1, 5)}));
  EXPECT_THROW(in_gamma_infinity({Rational(1, 3), Rational(1, 3), Rational(1, 3)}, {kHalf, kHalf}), input_error);
  EXPECT_THROW(in_gamma_infinity({Rational(2, 3), Rational(2, 3)}, {kHalf, kHalf}), input_error);
}

// Γ_N from real ball subsets is exactly the grid points of the diamond
// |qLa - 1/2| + |qN1 - 1/2| <= 1/2, i.e. sup-norm sum <= 3/2. The literal
// bound of 1 only admits the centre.
TEST(GammaInfinityTest, BruteForceVerdict) {
  for (int n = 1; n <= 3; ++n) {
    auto brute = oracle::enumerate_ball_subsets(n);
    std::set<std::pair<Rational, Rational>> diamond;
    for (int i = 0; i <= 2 * n; ++i) {
      for (int j = 0; j <= 2 * n; ++j) {
        if (std::abs(i - n) + std::abs(j - n) <= n) diamond.emplace(Rational(i, 2 * n), Rational(j, 2 * n));
      }
    }
    EXPECT_EQ(brute.points, diamond) << n;

    std::set<std::pair<Rational, Rational>> engine;
    for (const auto& p : gamma_points(n)) engine.emplace(p.qLa, p.qN1);
    EXPECT_EQ(engine, brute.points) << n;

    std::size_t literal = 0, boundary = 0;
    for (const auto& [x, y] : brute.points) {
      ProbVector qL{x, Rational(1) - x}, qN{y, Rational(1) - y};
      EXPECT_TRUE(in_gamma_infinity(qL, qN));
      Rational s = sup_norm(qL) + sup_norm(qN);
      if (s <= 1) ++literal;
      if (s == kGammaInfinityBound) ++boundary;
    }
    EXPECT_EQ(literal, 1u);
    EXPECT_EQ(boundary, static_cast<std::size_t>(4 * n));
  }
}

TEST(GammaInfinityTest, AllClassPointsInsideUpToSixteen) {
  for (int n = 1; n <= 16; ++n) {
    for (const auto& p : gamma_points(n)) {
      EXPECT_TRUE(in_gamma_infinity({p.qLa, Rational(1) - p.qLa}, {p.qN1, Rational(1) - p.qN1}));
    }
  }
}

} // namespace
} // namespace circ
