#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "asfm/account.hpp"
#include "asfm/agents.hpp"
#include "asfm/market.hpp"
#include "asfm/news.hpp"

namespace asfm {

struct PopulationSpec {
  std::map<Strategy, int> counts;
  std::map<Strategy, Money> initial_capital;
  std::map<std::string, Money> capital_overrides;  // by agent id

  int total() const;
  bool operator==(const PopulationSpec&) const = default;
};

/// Capital per investor type in the reference market (20K, 15K, 0.4K, 6K).
std::map<Strategy, Money> reference_capitals();

/// Splits `agents` across the strategies in proportion to `weights` using
/// largest-remainder apportionment; ties go to the earlier strategy.
std::map<Strategy, int> apportion(int agents, const std::map<Strategy, int>& weights);

/// 2:1:1:1 value/institutional/contrarian/aggressive mix with reference capitals.
PopulationSpec reference_population(int agents);

struct ScenarioSpec {
  std::string name;
  int days = 30;
  PopulationSpec population;
  std::vector<NewsEvent> news_schedule;
  PolicyConfig policy_config;
  double endowment_fraction = 0.5;
  std::uint64_t seed = 42;

  bool operator==(const ScenarioSpec&) const = default;
};

class EmptyPopulation : public std::invalid_argument {
 public:
  EmptyPopulation() : std::invalid_argument("population has no agents") {}
};

class UnknownScenario : public std::invalid_argument {
 public:
  explicit UnknownScenario(const std::string& name) : std::invalid_argument("unknown scenario preset: " + name) {}
};

/// Accounts with ids agent1..agentN, grouped by strategy in the order value,
/// institutional, contrarian, aggressive. Cash equals capital.
std::vector<AgentAccount> build_population(const PopulationSpec& spec);

/// Converts `fraction` of each agent's capital into shares, split equally by
/// value across the registry at the latest seed price and rounded down to
/// whole shares. Sets each company's shares_outstanding to the endowed total.
void initial_endowment(std::vector<AgentAccount>& accounts, Registry& registry, double fraction);

NewsEvent rate_cut_news(int day);
NewsEvent inflation_news(double percent, int day, int visible_days);

/// Named presets: baseline, rate_cut, inflation(x), all_value,
/// all_institutional, all_contrarian, all_aggressive,
/// large_trader(m1,m2,...), wo_profile, wo_observation.
ScenarioSpec preset_scenario(std::string_view name);
std::vector<std::string> preset_names();

std::string scenario_to_json(const ScenarioSpec& spec);
ScenarioSpec scenario_from_json(std::string_view text);

}  // namespace asfm
