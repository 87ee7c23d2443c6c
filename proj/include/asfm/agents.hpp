#pragma once

#include <deque>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "asfm/account.hpp"
#include "asfm/market.hpp"
#include "asfm/matching.hpp"
#include "asfm/news.hpp"

namespace asfm {

struct StrategyProfile {
  Strategy kind = Strategy::value;
  std::string description;
};

/// The fixed trading-preference paragraph for each investor type.
const StrategyProfile& strategy_profile(Strategy kind);

/// Every sentence of the four strategy paragraphs, without the leading
/// "You are ..." subject, for prompt audits.
std::vector<std::string> strategy_sentences();

enum class ProfileMode { full, uniform };
enum class ObservationMode { full, price_only };
enum class PolicyBackend { rule_based, llm };

std::string_view to_string(ProfileMode m);
std::string_view to_string(ObservationMode m);
std::string_view to_string(PolicyBackend b);
ProfileMode profile_mode_from_string(std::string_view s);
ObservationMode observation_mode_from_string(std::string_view s);
PolicyBackend policy_backend_from_string(std::string_view s);

/// Numeric knobs of the rule-based traders. Defaults are the documented
/// heuristics; `perception_noise` is the per-agent, per-day standard
/// deviation of the noise each agent adds to its trading signal.
struct RuleParams {
  // value
  double value_buy_ratio = 0.97;
  double value_sell_ratio = 1.05;
  double value_buy_cash_fraction = 0.10;
  double value_sell_position_fraction = 0.50;
  // institutional
  double institutional_equity_target = 0.50;
  double institutional_band = 0.05;
  // contrarian
  double contrarian_buy_decline = 0.03;
  double contrarian_sell_gain = 0.05;
  double contrarian_buy_cash_fraction = 0.25;
  double contrarian_sell_position_fraction = 0.50;
  // aggressive
  double aggressive_trigger = 0.01;
  double aggressive_buy_markup = 1.01;
  double aggressive_sell_markdown = 0.99;
  double aggressive_buy_cash_fraction = 0.25;
  // news reaction
  double news_delta = 0.01;
  double news_sensitivity = 1.0;
  double inflation_high = 5.0;
  double inflation_low = 1.0;
  // dispersion
  double perception_noise_value = 0.01;
  double perception_noise_institutional = 0.005;
  double perception_noise_contrarian = 0.01;
  double perception_noise_aggressive = 0.015;
  // continuous rounds: take resting liquidity up to this far past the own limit
  double requote_tolerance = 0.02;

  double perception_noise(Strategy s) const;
  /// Defaults with every perception noise set to zero.
  static RuleParams noiseless();

  bool operator==(const RuleParams&) const = default;
};

struct PolicyConfig {
  ProfileMode profile_mode = ProfileMode::full;
  ObservationMode observation_mode = ObservationMode::full;
  PolicyBackend policy_backend = PolicyBackend::llm;
  RuleParams params;

  bool operator==(const PolicyConfig&) const = default;
};

struct TradePrint {
  Money price;
  Quantity quantity = 0;
};

/// What one agent sees of one stock.
struct StockView {
  std::string code;
  Sector sector = Sector::energy;
  std::string description;
  std::vector<Money> price_window;           // most recent last, at most 15
  std::vector<IndicativeQuote> order_history;  // oldest first
  std::vector<TradePrint> trades_today;
};

inline constexpr std::size_t kPriceWindow = 15;

struct Observation {
  int day = 1;
  int round = 0;  // 0 = opening, k = k-th continuous round
  std::vector<StockView> stocks;  // registry order
  std::vector<NewsEvent> news;

  const StockView* find(std::string_view code) const;
};

enum class Tool { buy, sell, hold };

std::string_view to_string(Tool t);

struct TraderAction {
  Tool tool = Tool::hold;
  std::string stock_code;
  Quantity quantity = 0;
  Money price;

  static TraderAction hold() { return {}; }
  static TraderAction buy(std::string code, Quantity qty, Money price) {
    return {Tool::buy, std::move(code), qty, price};
  }
  static TraderAction sell(std::string code, Quantity qty, Money price) {
    return {Tool::sell, std::move(code), qty, price};
  }
  bool is_trade() const { return tool != Tool::hold; }
  bool operator==(const TraderAction&) const = default;
};

/// Single-line wire form: {"tool":"Buy","stock_code":"EN001","quantity":10,"price":10.25}
std::string to_wire(const TraderAction& action);

struct ParseError {
  std::string reason;
};

using ParseResult = std::variant<std::vector<TraderAction>, ParseError>;

/// Extracts every tool-call object from free-form model output (prose and
/// code fences are skipped) and validates tool name, ticker, quantity and
/// price. Any invalid call fails the whole response.
ParseResult parse_tool_calls(std::string_view model_output, const Registry& universe);

/// Profile prompt: strategy paragraph (or the neutral instruction in uniform
/// mode), wallet, holdings and performance.
std::string build_profile_prompt(const AgentAccount& account, const StrategyProfile& profile, ProfileMode mode,
                                 const CloseMap& closes);

/// Observation prompt, including the tool instructions.
std::string build_observation_prompt(const Observation& obs, ObservationMode mode);

/// Instruction appended after a response that failed to parse.
std::string corrective_instruction(const ParseError& error);

enum class CapDecision { accept, reject };

inline constexpr int kMaxOpsPerStockPerDay = 2;

/// Counts a Buy/Sell against the agent's per-stock daily budget. Hold is
/// always accepted and never counted.
CapDecision enforce_op_cap(AgentAccount& account, const TraderAction& action);

/// Resets the per-stock operation counters for a new day.
void reset_op_counters(AgentAccount& account);

class Rng;

/// Deterministic heuristic trader for each strategy. In continuous rounds
/// (obs.round > 0) the opening intent is re-priced against the indicative
/// quote: the agent takes the best opposite level if it lies within
/// `requote_tolerance` of its own limit and otherwise stays out.
std::vector<TraderAction> rule_policy_decide(const StrategyProfile& profile, const Observation& obs,
                                             const AgentAccount& account, Rng& rng, const RuleParams& params);

}  // namespace asfm
