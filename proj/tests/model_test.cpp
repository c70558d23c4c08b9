#include <gtest/gtest.h>

#include <random>

#include "circ/model.hpp"
#include "circ/models.hpp"
#include "support/random_models.hpp"

namespace circ {
namespace {

bool mentions(const ValidationReport& report, std::string_view text) {
  return std::any_of(report.begin(), report.end(),
                     [&](const Violation& v) { return v.message.find(text) != std::string::npos; });
}

CircumstanceModel minimal() {
  return {"m", {{"T", {"h", "t"}}}, {{"X", "", Rational(1), {{"T", {Rational(1, 2), Rational(1, 2)}}}}}};
}

TEST(ValidateModelTest, CoinIsValid) { EXPECT_TRUE(validate_model(gen_coin()).empty()); }

TEST(ValidateModelTest, MinimalIsValid) { EXPECT_TRUE(validate_model(minimal()).empty()); }

TEST(ValidateModelTest, WeightSumReported) {
  auto m = minimal();
  m.circumstances[0].weight = Rational(1, 2);
  auto second = m.circumstances[0];
  second.id = "Y";
  second.weight = Rational(1, 3);
  m.circumstances.push_back(second);
  auto report = validate_model(m);
  ASSERT_EQ(report.size(), 1u);
  EXPECT_NE(report[0].message.find("weights sum to 5/6 ≠ 1"), std::string::npos);
}

TEST(ValidateModelTest, EachViolationReportedWithLocation) {
  auto m = minimal();
  m.circumstances[0].tables["T"] = {Rational(3, 2), Rational(-1, 3)};
  m.circumstances.push_back(m.circumstances[0]);
  m.circumstances[1].tables.clear();
  m.circumstances[1].weight = 0;
  m.measurements.push_back({"U", {"x"}});
  auto report = validate_model(m);
  EXPECT_TRUE(mentions(report, "negative entry -1/3"));
  EXPECT_TRUE(mentions(report, "row sums to 7/6"));
  EXPECT_TRUE(mentions(report, "duplicate circumstance id 'X'"));
  EXPECT_TRUE(mentions(report, "missing table for measurement 'T'"));
  EXPECT_TRUE(mentions(report, "needs at least 2 outcomes"));
  for (const auto& v : report) EXPECT_FALSE(v.location.empty());
}

TEST(ValidateModelTest, ZeroWeightCircumstanceAllowed) {
  auto m = minimal();
  auto y = m.circumstances[0];
  y.id = "Y";
  y.weight = 0;
  m.circumstances.push_back(y);
  EXPECT_TRUE(validate_model(m).empty());
}

TEST(ParameterPointTest, CoinPersons) {
  auto coin = gen_coin();
  EXPECT_EQ(parameter_point_of(coin, "Cecily"), (ParameterPoint{{{1, 0}}}));
  EXPECT_EQ(parameter_point_of(coin, "Jack"), (ParameterPoint{{{Rational(1, 2), Rational(1, 2)}}}));
  EXPECT_THROW(parameter_point_of(coin, "Lane"), lookup_error);
}

TEST(ParameterPointTest, BallsComposite) {
  auto balls = gen_balls(2);
  ParameterPoint expected{{{Rational(1, 2), Rational(1, 2)}, {Rational(3, 4), Rational(1, 4)}}};
  EXPECT_EQ(parameter_point_of(balls, Composition{2, 0, 1, 1}.id()), expected);
}

TEST(ParameterPointTest, PointsAreDistributionsProperty) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    auto m = testing::random_model(rng);
    ASSERT_TRUE(validate_model(m).empty());
    for (const auto& c : m.circumstances) {
      auto p = parameter_point_of(m, c.id);
      ASSERT_EQ(p.components.size(), m.measurements.size());
      for (std::size_t k = 0; k < p.components.size(); ++k) {
        EXPECT_TRUE(p.components[k].is_distribution());
        EXPECT_EQ(p.components[k].size(), m.measurements[k].outcomes.size());
      }
    }
  }
}

// Each mutation breaks exactly one invariant; the report must flag it, and
// an unmutated model must produce an empty report.
TEST(ValidateModelTest, MutatedModelsProperty) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 300; ++i) {
    auto m = testing::random_model(rng);
    ASSERT_TRUE(validate_model(m).empty());
    auto& c = m.circumstances[testing::uniform_int(rng, 0, static_cast<int>(m.circumstances.size()) - 1)];
    auto& row = c.tables.begin()->second;
    switch (testing::uniform_int(rng, 0, 5)) {
      case 0: c.weight += Rational(1, 7); break;
      case 1: row.entries[0] += Rational(1, 5); break;
      case 2:
        row.entries[0] -= Rational(2);
        row.entries[1] += Rational(2);
        break;
      case 3: c.tables.erase(c.tables.begin()); break;
      case 4: m.circumstances.push_back(m.circumstances.front()); m.circumstances.back().weight = 0; break;
      case 5: m.measurements.push_back(m.measurements.front()); break;
    }
    EXPECT_FALSE(validate_model(m).empty()) << "mutation not detected in iteration " << i;
  }
}

} // namespace
} // namespace circ
