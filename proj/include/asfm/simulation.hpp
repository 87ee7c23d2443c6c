#pragma once

#include <cstdint>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "asfm/account.hpp"
#include "asfm/agents.hpp"
#include "asfm/gateway.hpp"
#include "asfm/matching.hpp"
#include "asfm/metrics.hpp"
#include "asfm/scenario.hpp"

namespace asfm {

enum class TransportKind { mock, live, replay };

std::string_view to_string(TransportKind k);
TransportKind transport_kind_from_string(std::string_view s);

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  ScenarioSpec scenario;
  Registry registry = Registry::default_universe();
  std::uint64_t seed = 0;
  TransportKind transport = TransportKind::mock;
  int continuous_rounds = 3;
  int indicative_depth = 5;
  int order_history_length = 3;
  ContinuousPricing continuous_pricing = ContinuousPricing::resting;
  ClosingRule closing_rule = ClosingRule::vwap;
  double temperature = 0.0;
  int max_tokens = 1024;
  /// Replay source; defaults to <output_dir>/transcript.jsonl when unset.
  std::optional<std::filesystem::path> transcript_path;
  std::optional<LiveEndpoint> live_endpoint;
  /// Custom mock responder. When unset, the mock answers with the rule
  /// policy's decision written as tool calls.
  MockTransport::Responder mock_responder;
  /// Where artifacts are written; empty keeps everything in memory.
  std::filesystem::path output_dir;

  std::string run_id() const;
  void validate() const;
};

/// config.json content: everything needed to re-execute the run.
std::string config_to_json(const RunConfig& config);
RunConfig config_from_json(std::string_view text);

/// How one action was disposed of.
struct ActionEvent {
  int day = 0;
  int round = 0;
  std::string agent_id;
  TraderAction action;
  std::string status;  // accepted, op_cap_exceeded, self_cross, insufficient_cash, insufficient_shares, fallback_hold
  std::optional<OrderId> order_id;
  std::string detail;
};

struct PromptRecord {
  int day = 0;
  int round = 0;
  std::string agent_id;
  std::string system_text;
  std::string user_text;
};

/// All artifacts of a finished run, keyed by file name.
struct RunLog {
  std::vector<std::pair<std::string, std::string>> artifacts;  // manifest order
  std::vector<DayReport> reports;
  Headline headline;

  const std::string& artifact(std::string_view name) const;
};

/// One reproducible market run.
///
/// Owns the registry, the accounts and the per-stock books, and drives the
/// daily cycle: news, opening orders, call auction, continuous rounds,
/// cancellation, closing prices and reporting.
class Simulation {
 public:
  explicit Simulation(RunConfig config);
  ~Simulation();
  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  void run_trading_day(int day);
  /// Runs every scenario day and produces (and, with an output dir, writes) the artifacts.
  RunLog run();

  /// Called after each completed day.
  std::function<void(const Simulation&, int day)> on_day_end;

  const RunConfig& config() const { return config_; }
  const Registry& registry() const { return registry_; }
  const std::vector<AgentAccount>& accounts() const { return accounts_; }
  const RunRecords& records() const { return records_; }
  const std::vector<DayReport>& reports() const { return reports_; }
  const std::vector<ActionEvent>& action_events() const { return events_; }
  const std::vector<PromptRecord>& prompts() const { return prompts_; }
  const Gateway* gateway() const { return gateway_.get(); }
  int days_completed() const { return static_cast<int>(reports_.size()); }

  Money total_cash() const;
  Money initial_total_cash() const { return initial_cash_; }
  Quantity total_holdings(std::string_view code) const;

 private:
  struct AgentTurn;

  std::vector<TraderAction> decide(std::size_t agent_index, int day, int round);
  Observation observe(int day, int round) const;
  void submit(std::size_t agent_index, const TraderAction& action, int day, int round);
  void settle(const std::vector<Trade>& trades);
  CloseMap last_closes() const;
  std::uint64_t seed() const { return config_.seed; }

  RunConfig config_;
  Registry registry_;
  Registry initial_registry_;
  std::vector<AgentAccount> accounts_;
  std::map<std::string, std::size_t> agent_index_;
  std::vector<OrderBook> books_;
  std::vector<std::deque<IndicativeQuote>> order_history_;
  std::vector<std::vector<Trade>> trades_today_;
  std::vector<NewsEvent> news_today_;
  Money initial_cash_;

  std::unique_ptr<Transport> transport_;
  std::unique_ptr<Gateway> gateway_;
  const AgentTurn* current_turn_ = nullptr;

  OrderId next_order_id_ = 1;
  std::uint64_t next_trade_seq_ = 1;

  RunRecords records_;
  std::vector<DayReport> reports_;
  std::vector<ActionEvent> events_;
  std::vector<PromptRecord> prompts_;
};

/// Equivalent to Simulation(config).run().
RunLog run_simulation(RunConfig config);

struct VerifyReport {
  bool ok = true;
  std::string stage;     // config, transcript, execution, artifact
  std::string artifact;  // file that diverged
  std::string tag;       // transcript tag, when known
  std::optional<int> day;
  std::string stock;
  std::string detail;
};

/// Re-executes a run directory from its config snapshot (and transcript) and
/// compares every artifact digest against the manifest.
VerifyReport verify_replay(const std::filesystem::path& run_dir);

}  // namespace asfm
