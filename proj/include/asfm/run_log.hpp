#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "asfm/metrics.hpp"

namespace asfm {

/// Artifact file names inside a run directory.
namespace artifact {
inline constexpr std::string_view kConfig = "config.json";
inline constexpr std::string_view kRegistry = "registry.json";
inline constexpr std::string_view kOrders = "orders.jsonl";
inline constexpr std::string_view kActions = "actions.jsonl";
inline constexpr std::string_view kTrades = "trades.jsonl";
inline constexpr std::string_view kCloses = "closes.csv";
inline constexpr std::string_view kMetrics = "metrics.csv";
inline constexpr std::string_view kAgents = "agents.csv";
inline constexpr std::string_view kPrompts = "prompts.jsonl";
inline constexpr std::string_view kTranscript = "transcript.jsonl";
inline constexpr std::string_view kSummary = "summary.json";
inline constexpr std::string_view kManifest = "manifest.json";
}  // namespace artifact

std::string order_line(const OrderRecord& o);
OrderRecord order_from_line(std::string_view line);

/// Trade tape line: day, seq, stock, price, qty, buy_order, sell_order, buyer, seller.
std::string trade_line(const Trade& t);
Trade trade_from_line(std::string_view line);

std::string closes_csv(const CloseTable& closes);
CloseTable closes_from_csv(std::string_view text);

/// Fixed formatting for ratios in CSV and summaries.
std::string format_ratio(double x);

/// metrics.csv: day,ON,OER,TR,VO,avg_return,<agent ids...>. OER is empty on
/// days without orders.
std::string metrics_csv(const std::vector<DayReport>& reports);

std::string agents_csv(const std::vector<DayReport>& reports, const std::map<std::string, std::string>& strategies);

/// Manifest JSON: artifact name -> sha256, in the given order.
std::string manifest_json(const std::vector<std::pair<std::string, std::string>>& named_contents);
std::map<std::string, std::string> manifest_digests(std::string_view manifest_text);

/// Reads orders, trades, closes and shares outstanding back from a run directory.
RunRecords load_run_records(const std::filesystem::path& run_dir);

/// Calls fn(line) for every non-empty line.
void for_each_line(std::string_view text, const std::function<void(std::string_view)>& fn);

}  // namespace asfm
