#include <gtest/gtest.h>

#include <algorithm>

#include "asfm/scenario.hpp"

using namespace asfm;

namespace {

int count_of(const std::vector<AgentAccount>& accounts, Strategy s) {
  return static_cast<int>(std::count_if(accounts.begin(), accounts.end(), [s](const auto& a) { return a.strategy == s; }));
}

}  // namespace

TEST(Population, ReferenceMixOfTen) {
  auto accounts = build_population(reference_population(10));
  ASSERT_EQ(accounts.size(), 10u);
  EXPECT_EQ(count_of(accounts, Strategy::value), 4);
  EXPECT_EQ(count_of(accounts, Strategy::institutional), 2);
  EXPECT_EQ(count_of(accounts, Strategy::contrarian), 2);
  EXPECT_EQ(count_of(accounts, Strategy::aggressive), 2);
  EXPECT_EQ(accounts[0].agent_id, "agent1");
  EXPECT_EQ(accounts[0].initial_capital, Money::parse("20000.00"));
  EXPECT_EQ(accounts[4].initial_capital, Money::parse("15000.00"));
  EXPECT_EQ(accounts[6].initial_capital, Money::parse("400.00"));
  EXPECT_EQ(accounts[9].initial_capital, Money::parse("6000.00"));
  EXPECT_EQ(accounts[9].cash(), accounts[9].initial_capital);
}

TEST(Population, ApportionMatchesBruteForceLargestRemainder) {
  std::map<Strategy, int> weights{{Strategy::value, 2}, {Strategy::institutional, 1}, {Strategy::contrarian, 1},
                                  {Strategy::aggressive, 1}};
  for (int n = 0; n <= 60; ++n) {
    auto got = apportion(n, weights);
    int total = 0;
    for (const auto& [s, c] : got) {
      double exact = n * weights[s] / 5.0;
      EXPECT_LE(std::abs(c - exact), 1.0) << n;
      total += c;
    }
    EXPECT_EQ(total, n);
  }
  EXPECT_EQ(apportion(5, weights).at(Strategy::value), 2);
  EXPECT_EQ(apportion(6, weights).at(Strategy::value), 3);
}

TEST(Population, HomogeneousAndOverrides) {
  PopulationSpec p;
  p.counts = {{Strategy::value, 8}};
  p.initial_capital = reference_capitals();
  p.capital_overrides["agent7"] = Money::parse("100000.00");
  auto accounts = build_population(p);
  EXPECT_EQ(count_of(accounts, Strategy::value), 8);
  EXPECT_EQ(accounts[6].initial_capital, Money::parse("100000.00"));
  EXPECT_EQ(accounts[5].initial_capital, Money::parse("20000.00"));
  EXPECT_THROW(build_population(PopulationSpec{}), EmptyPopulation);
}

TEST(Endowment, HalfOfCapitalSplitEquallyByValue) {
  PopulationSpec p;
  p.counts = {{Strategy::value, 2}};
  p.initial_capital = reference_capitals();
  auto accounts = build_population(p);
  Registry reg = Registry::default_universe();
  initial_endowment(accounts, reg, 0.5);
  EXPECT_EQ(accounts[0].holdings.at("EN001"), 85);
  Money spent;
  Money per_stock = Money::parse("909.09");
  for (const auto& c : reg.companies()) {
    Quantity q = per_stock.cents() / c.last_close().cents();
    EXPECT_EQ(accounts[0].shares(c.code), q) << c.code;
    EXPECT_EQ(c.shares_outstanding, 2 * q) << c.code;
    spent += c.last_close() * q;
  }
  EXPECT_EQ(Money::parse("10.60") * 85, Money::parse("901.00"));
  EXPECT_EQ(accounts[0].cash(), Money::parse("20000.00") - spent);
  EXPECT_EQ(accounts[0].holdings, accounts[1].holdings);
  EXPECT_EQ(accounts[0].cash(), accounts[1].cash());
}

TEST(Endowment, ZeroFractionLeavesAllCash) {
  auto accounts = build_population(reference_population(10));
  Registry reg = Registry::default_universe();
  initial_endowment(accounts, reg, 0.0);
  for (const auto& c : reg.companies()) EXPECT_EQ(c.shares_outstanding, 0);
  for (const auto& a : accounts) EXPECT_TRUE(a.holdings.empty());
}

TEST(Presets, RateCutAndInflationNews) {
  ScenarioSpec rc = preset_scenario("rate_cut");
  ASSERT_EQ(rc.news_schedule.size(), 1u);
  EXPECT_EQ(rc.news_schedule[0].day, 10);
  EXPECT_NE(rc.news_schedule[0].headline.find("cut interest rates by 50 basis points"), std::string::npos);

  ScenarioSpec inf = preset_scenario("inflation(8.5)");
  EXPECT_EQ(inf.name, "inflation(8.5)");
  ASSERT_EQ(inf.news_schedule.size(), 1u);
  EXPECT_EQ(inf.news_schedule[0].day, 1);
  EXPECT_NE(inf.news_schedule[0].body.find("8.5%"), std::string::npos);
  EXPECT_EQ(preset_scenario("inflation").name, "inflation(8.5)");
  EXPECT_NE(preset_scenario("inflation(2)").news_schedule[0].headline.find("2%"), std::string::npos);
}

TEST(Presets, HomogeneousKeepsBaselineSettings) {
  ScenarioSpec agg = preset_scenario("all_aggressive");
  ScenarioSpec base = preset_scenario("baseline");
  EXPECT_EQ(agg.population.counts, (std::map<Strategy, int>{{Strategy::aggressive, 10}}));
  EXPECT_EQ(agg.days, base.days);
  EXPECT_EQ(agg.policy_config, base.policy_config);
  EXPECT_EQ(agg.news_schedule, base.news_schedule);
  EXPECT_THROW(preset_scenario("all_momentum"), UnknownScenario);
  EXPECT_THROW(preset_scenario("nonsense"), UnknownScenario);
  EXPECT_THROW(preset_scenario("baseline(2)"), UnknownScenario);
}

TEST(Presets, LargeTraderAndAblations) {
  ScenarioSpec lt = preset_scenario("large_trader(1,10)");
  auto accounts = build_population(lt.population);
  EXPECT_EQ(accounts[0].initial_capital, Money::parse("20000.00"));
  EXPECT_EQ(accounts[1].initial_capital, Money::parse("200000.00"));
  EXPECT_EQ(accounts[9].initial_capital, Money::parse("60000.00"));
  EXPECT_EQ(preset_scenario("wo_profile").policy_config.profile_mode, ProfileMode::uniform);
  EXPECT_EQ(preset_scenario("wo_observation").policy_config.observation_mode, ObservationMode::price_only);
}

TEST(Presets, JsonRoundTripForEveryPreset) {
  for (const auto& name : preset_names()) {
    ScenarioSpec s = preset_scenario(name);
    ScenarioSpec back = scenario_from_json(scenario_to_json(s));
    EXPECT_EQ(back, s) << name;
    EXPECT_EQ(scenario_to_json(back), scenario_to_json(s)) << name;
  }
}

TEST(Presets, JsonRejectsBadInput) {
  EXPECT_THROW(scenario_from_json(R"({"days":0})"), std::invalid_argument);
  EXPECT_THROW(scenario_from_json(R"({"population":{"counts":{"momentum":3}}})"), std::invalid_argument);
  ScenarioSpec minimal = scenario_from_json(R"({"name":"mine"})");
  EXPECT_EQ(minimal.population.total(), 10);
}
