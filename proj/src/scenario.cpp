#include "asfm/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <numeric>

#include <nlohmann/json.hpp>

namespace asfm {

int PopulationSpec::total() const {
  int n = 0;
  for (const auto& [s, c] : counts) n += c;
  return n;
}

std::map<Strategy, Money> reference_capitals() {
  return {{Strategy::value, Money::parse("20000")},
          {Strategy::institutional, Money::parse("15000")},
          {Strategy::contrarian, Money::parse("400")},
          {Strategy::aggressive, Money::parse("6000")}};
}

std::map<Strategy, int> apportion(int agents, const std::map<Strategy, int>& weights) {
  long long weight_sum = 0;
  for (const auto& [s, w] : weights) weight_sum += w;
  std::map<Strategy, int> out;
  if (weight_sum <= 0 || agents <= 0) {
    for (const auto& [s, w] : weights) out[s] = 0;
    return out;
  }
  struct Share {
    Strategy s;
    long long remainder;
  };
  std::vector<Share> shares;
  int assigned = 0;
  for (const auto& [s, w] : weights) {
    long long num = static_cast<long long>(agents) * w;
    out[s] = static_cast<int>(num / weight_sum);
    assigned += out[s];
    shares.push_back({s, num % weight_sum});
  }
  std::stable_sort(shares.begin(), shares.end(),
                   [](const Share& a, const Share& b) { return a.remainder > b.remainder; });
  for (std::size_t i = 0; assigned < agents; ++i, ++assigned) ++out[shares[i % shares.size()].s];
  return out;
}

PopulationSpec reference_population(int agents) {
  PopulationSpec p;
  p.counts = apportion(agents, {{Strategy::value, 2},
                                {Strategy::institutional, 1},
                                {Strategy::contrarian, 1},
                                {Strategy::aggressive, 1}});
  p.initial_capital = reference_capitals();
  return p;
}

std::vector<AgentAccount> build_population(const PopulationSpec& spec) {
  if (spec.total() <= 0) throw EmptyPopulation();
  std::vector<AgentAccount> accounts;
  int next = 1;
  for (Strategy s : kAllStrategies) {
    auto count_it = spec.counts.find(s);
    int count = count_it == spec.counts.end() ? 0 : count_it->second;
    if (count < 0) throw std::invalid_argument("negative agent count");
    for (int i = 0; i < count; ++i) {
      AgentAccount a;
      a.agent_id = "agent" + std::to_string(next++);
      a.strategy = s;
      auto cap = spec.initial_capital.find(s);
      if (cap == spec.initial_capital.end()) {
        throw std::invalid_argument("no initial capital for strategy " + std::string(to_string(s)));
      }
      a.initial_capital = cap->second;
      if (auto o = spec.capital_overrides.find(a.agent_id); o != spec.capital_overrides.end()) {
        a.initial_capital = o->second;
      }
      a.free_cash = a.initial_capital;
      accounts.push_back(std::move(a));
    }
  }
  return accounts;
}

void initial_endowment(std::vector<AgentAccount>& accounts, Registry& registry, double fraction) {
  if (fraction < 0.0 || fraction >= 1.0) throw std::invalid_argument("endowment fraction must be in [0, 1)");
  auto companies = registry.companies();
  for (auto& c : companies) c.shares_outstanding = 0;
  if (companies.empty() || fraction == 0.0) return;

  const auto n = static_cast<std::int64_t>(companies.size());
  for (auto& a : accounts) {
    Money budget = a.initial_capital.scaled_floor(fraction);
    Money per_stock = Money::from_cents(budget.cents() / n);
    for (auto& c : companies) {
      Quantity q = affordable_shares(per_stock, c.last_close());
      if (q == 0) continue;
      a.free_cash -= c.last_close() * q;
      a.holdings[c.code] += q;
      c.shares_outstanding += q;
    }
  }
}

namespace {

std::string format_percent(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

std::vector<double> parse_args(std::string_view name, std::string_view args) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= args.size()) {
    std::size_t end = args.find(',', start);
    if (end == std::string_view::npos) end = args.size();
    auto tok = args.substr(start, end - start);
    while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
    while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
    double v = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc{} || p != tok.data() + tok.size()) throw UnknownScenario(std::string(name));
    out.push_back(v);
    start = end + 1;
  }
  return out;
}

ScenarioSpec baseline() {
  ScenarioSpec s;
  s.name = "baseline";
  s.days = 30;
  s.population = reference_population(10);
  return s;
}

ScenarioSpec homogeneous(Strategy kind) {
  ScenarioSpec s = baseline();
  s.name = "all_" + std::string(to_string(kind));
  s.population.counts = {{kind, 10}};
  return s;
}

}  // namespace

NewsEvent rate_cut_news(int day) {
  return {day, "The Federal Reserve has decided to cut interest rates by 50 basis points",
          "According to the latest minutes of the Federal Open Market Committee (FOMC) monetary policy meeting, "
          "the Federal Reserve has decided to cut interest rates by 50 basis points, continuing to maintain the "
          "target range for the federal funds rate.",
          1};
}

NewsEvent inflation_news(double percent, int day, int visible_days) {
  std::string rate = format_percent(percent) + "%";
  std::string trend = percent > 3.0   ? "has risen to a high point in the past decade"
                      : percent < 1.0 ? "has fallen to a low point in the past decade"
                                      : "has stayed close to the central bank target";
  return {day, "National inflation rate reaches " + rate,
          "In recent months, the national inflation rate " + trend +
              ", attracting widespread attention from the market and residents. According to data from the "
              "National Bureau of Statistics, the inflation rate has now reached " +
              rate + ".",
          visible_days};
}

std::vector<std::string> preset_names() {
  return {"baseline",       "rate_cut",       "inflation(8.5)",     "all_value",  "all_institutional",
          "all_contrarian", "all_aggressive", "large_trader(1,10)", "wo_profile", "wo_observation"};
}

ScenarioSpec preset_scenario(std::string_view name) {
  std::string_view base = name;
  std::string_view args;
  if (auto open = name.find('('); open != std::string_view::npos) {
    if (name.back() != ')') throw UnknownScenario(std::string(name));
    base = name.substr(0, open);
    args = name.substr(open + 1, name.size() - open - 2);
  }
  auto no_args = [&] {
    if (!args.empty()) throw UnknownScenario(std::string(name));
  };

  if (base == "baseline") {
    no_args();
    return baseline();
  }
  if (base == "rate_cut") {
    no_args();
    ScenarioSpec s = baseline();
    s.name = "rate_cut";
    s.news_schedule.push_back(rate_cut_news(10));
    return s;
  }
  if (base == "inflation") {
    double rate = args.empty() ? 8.5 : parse_args(name, args).at(0);
    ScenarioSpec s = baseline();
    s.name = "inflation(" + format_percent(rate) + ")";
    s.news_schedule.push_back(inflation_news(rate, 1, s.days));
    return s;
  }
  if (base.starts_with("all_")) {
    no_args();
    auto kind = std::find_if(std::begin(kAllStrategies), std::end(kAllStrategies),
                             [&](Strategy s) { return to_string(s) == base.substr(4); });
    if (kind == std::end(kAllStrategies)) throw UnknownScenario(std::string(name));
    return homogeneous(*kind);
  }
  if (base == "large_trader") {
    std::vector<double> mults = args.empty() ? std::vector<double>{1.0, 10.0} : parse_args(name, args);
    ScenarioSpec s = baseline();
    s.name = "large_trader(";
    for (std::size_t i = 0; i < mults.size(); ++i) s.name += (i ? "," : "") + format_percent(mults[i]);
    s.name += ")";
    auto accounts = build_population(s.population);
    std::map<Strategy, std::size_t> seen;
    for (const auto& a : accounts) {
      double m = mults[seen[a.strategy]++ % mults.size()];
      if (m <= 0.0) throw UnknownScenario(std::string(name));
      if (m != 1.0) s.population.capital_overrides[a.agent_id] = a.initial_capital.scaled(m);
    }
    return s;
  }
  if (base == "wo_profile") {
    no_args();
    ScenarioSpec s = baseline();
    s.name = "wo_profile";
    s.policy_config.profile_mode = ProfileMode::uniform;
    return s;
  }
  if (base == "wo_observation") {
    no_args();
    ScenarioSpec s = baseline();
    s.name = "wo_observation";
    s.policy_config.observation_mode = ObservationMode::price_only;
    return s;
  }
  throw UnknownScenario(std::string(name));
}

namespace {

using ojson = nlohmann::ordered_json;

struct ParamField {
  const char* name;
  double RuleParams::*member;
};

constexpr ParamField kParamFields[] = {
    {"value_buy_ratio", &RuleParams::value_buy_ratio},
    {"value_sell_ratio", &RuleParams::value_sell_ratio},
    {"value_buy_cash_fraction", &RuleParams::value_buy_cash_fraction},
    {"value_sell_position_fraction", &RuleParams::value_sell_position_fraction},
    {"institutional_equity_target", &RuleParams::institutional_equity_target},
    {"institutional_band", &RuleParams::institutional_band},
    {"contrarian_buy_decline", &RuleParams::contrarian_buy_decline},
    {"contrarian_sell_gain", &RuleParams::contrarian_sell_gain},
    {"contrarian_buy_cash_fraction", &RuleParams::contrarian_buy_cash_fraction},
    {"contrarian_sell_position_fraction", &RuleParams::contrarian_sell_position_fraction},
    {"aggressive_trigger", &RuleParams::aggressive_trigger},
    {"aggressive_buy_markup", &RuleParams::aggressive_buy_markup},
    {"aggressive_sell_markdown", &RuleParams::aggressive_sell_markdown},
    {"aggressive_buy_cash_fraction", &RuleParams::aggressive_buy_cash_fraction},
    {"news_delta", &RuleParams::news_delta},
    {"news_sensitivity", &RuleParams::news_sensitivity},
    {"inflation_high", &RuleParams::inflation_high},
    {"inflation_low", &RuleParams::inflation_low},
    {"perception_noise_value", &RuleParams::perception_noise_value},
    {"perception_noise_institutional", &RuleParams::perception_noise_institutional},
    {"perception_noise_contrarian", &RuleParams::perception_noise_contrarian},
    {"perception_noise_aggressive", &RuleParams::perception_noise_aggressive},
    {"requote_tolerance", &RuleParams::requote_tolerance},
};

}  // namespace

std::string scenario_to_json(const ScenarioSpec& spec) {
  ojson j;
  j["name"] = spec.name;
  j["days"] = spec.days;
  j["seed"] = spec.seed;
  j["endowment_fraction"] = spec.endowment_fraction;

  ojson pop;
  ojson counts, capital;
  for (Strategy s : kAllStrategies) {
    if (auto it = spec.population.counts.find(s); it != spec.population.counts.end()) {
      counts[std::string(to_string(s))] = it->second;
    }
    if (auto it = spec.population.initial_capital.find(s); it != spec.population.initial_capital.end()) {
      capital[std::string(to_string(s))] = it->second.str();
    }
  }
  pop["counts"] = counts;
  pop["initial_capital"] = capital;
  ojson overrides = ojson::object();
  for (const auto& [id, m] : spec.population.capital_overrides) overrides[id] = m.str();
  pop["capital_overrides"] = overrides;
  j["population"] = pop;

  ojson news = ojson::array();
  for (const auto& n : spec.news_schedule) {
    news.push_back({{"day", n.day}, {"headline", n.headline}, {"body", n.body}, {"visible_days", n.visible_days}});
  }
  j["news_schedule"] = news;

  ojson policy;
  policy["profile_mode"] = to_string(spec.policy_config.profile_mode);
  policy["observation_mode"] = to_string(spec.policy_config.observation_mode);
  policy["policy_backend"] = to_string(spec.policy_config.policy_backend);
  ojson params;
  for (const auto& f : kParamFields) params[f.name] = spec.policy_config.params.*(f.member);
  policy["params"] = params;
  j["policy_config"] = policy;
  return j.dump(2) + "\n";
}

ScenarioSpec scenario_from_json(std::string_view text) {
  auto j = nlohmann::json::parse(text);
  ScenarioSpec s;
  s.name = j.value("name", std::string("custom"));
  s.days = j.value("days", 30);
  s.seed = j.value("seed", std::uint64_t{42});
  s.endowment_fraction = j.value("endowment_fraction", 0.5);
  if (s.days < 1) throw std::invalid_argument("scenario days must be at least 1");
  if (s.endowment_fraction < 0.0 || s.endowment_fraction >= 1.0) {
    throw std::invalid_argument("endowment_fraction must be in [0, 1)");
  }

  if (j.contains("population")) {
    const auto& pop = j.at("population");
    const auto counts = pop.value("counts", nlohmann::json::object());
    for (const auto& [k, v] : counts.items()) {
      s.population.counts[strategy_from_string(k)] = v.get<int>();
    }
    s.population.initial_capital = reference_capitals();
    const auto initial_capital = pop.value("initial_capital", nlohmann::json::object());
    for (const auto& [k, v] : initial_capital.items()) {
      s.population.initial_capital[strategy_from_string(k)] = Money::parse(v.get<std::string>());
    }
    const auto capital_overrides = pop.value("capital_overrides", nlohmann::json::object());
    for (const auto& [k, v] : capital_overrides.items()) {
      s.population.capital_overrides[k] = Money::parse(v.get<std::string>());
    }
  } else {
    s.population = reference_population(10);
  }

  const auto news = j.value("news_schedule", nlohmann::json::array());
  for (const auto& n : news) {
    NewsEvent e;
    e.day = n.at("day").get<int>();
    e.headline = n.at("headline").get<std::string>();
    e.body = n.value("body", std::string());
    e.visible_days = n.value("visible_days", 1);
    if (e.day < 1) throw std::invalid_argument("news day must be at least 1");
    s.news_schedule.push_back(std::move(e));
  }

  if (j.contains("policy_config")) {
    const auto& p = j.at("policy_config");
    s.policy_config.profile_mode = profile_mode_from_string(p.value("profile_mode", std::string("full")));
    s.policy_config.observation_mode = observation_mode_from_string(p.value("observation_mode", std::string("full")));
    s.policy_config.policy_backend = policy_backend_from_string(p.value("policy_backend", std::string("llm")));
    if (p.contains("params")) {
      const auto& params = p.at("params");
      for (const auto& f : kParamFields) {
        if (params.contains(f.name)) s.policy_config.params.*(f.member) = params.at(f.name).get<double>();
      }
    }
  }
  return s;
}

}  // namespace asfm
