#pragma once

#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "asfm/market.hpp"

namespace asfm {

/// One order that passed validation and escrow and reached a book.
struct OrderRecord {
  int day = 0;
  int round = 0;
  OrderId order_id = 0;
  std::uint64_t seq = 0;
  std::string agent_id;
  std::string stock_code;
  Side side = Side::buy;
  Quantity quantity = 0;
  Money limit;

  bool operator==(const OrderRecord&) const = default;
};

/// Closing prices by day; row 0 holds the last seed price of each stock.
struct CloseTable {
  std::vector<std::string> codes;
  std::vector<std::vector<Money>> rows;

  int last_day() const { return static_cast<int>(rows.size()) - 1; }
  Money at(int day, std::size_t stock) const { return rows.at(static_cast<std::size_t>(day)).at(stock); }
  std::vector<Money> series(std::size_t stock, int first_day, int last_day) const;
  bool operator==(const CloseTable&) const = default;
};

/// Everything the metrics need, as persisted by a run.
struct RunRecords {
  std::map<std::string, Quantity> shares_outstanding;
  std::vector<OrderRecord> orders;
  std::vector<Trade> trades;
  CloseTable closes;
};

/// Inclusive range of trading days.
struct DayRange {
  int first = 1;
  int last = 1;
  bool contains(int day) const { return day >= first && day <= last; }
};

class InsufficientData : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Number of Buy/Sell orders that reached a book.
long long order_number(const RunRecords& log, DayRange range);

/// Shares placed by all orders in the range.
Quantity placed_share_volume(const RunRecords& log, DayRange range);

/// Shares filled, counted on both the buy and the sell order of each trade.
Quantity executed_share_volume(const RunRecords& log, DayRange range);

/// Shares traded (each trade counted once).
Quantity traded_volume(const RunRecords& log, DayRange range);

/// Executed share volume / placed share volume; nullopt when nothing was placed.
std::optional<double> order_execution_rate(const RunRecords& log, DayRange range);

/// Fraction of orders that received at least one fill.
std::optional<double> order_count_execution_rate(const RunRecords& log, DayRange range);

/// Traded shares / total shares outstanding (market level).
double turnover_rate(const RunRecords& log, DayRange range);
double turnover_rate(const RunRecords& log, DayRange range, const std::string& stock_code);

/// Population standard deviation of simple returns c[t]/c[t-1] - 1.
double volatility(std::span<const Money> closes);

enum class VolatilityWeighting { equal, volume };

/// Per-stock volatility over the closes of days first-1 .. last, aggregated
/// across stocks.
double market_volatility(const RunRecords& log, DayRange range,
                         VolatilityWeighting weighting = VolatilityWeighting::equal);

/// Mean over stocks of close[day] / close[base_day] - 1.
double average_stock_return(const CloseTable& closes, int base_day, int day);

struct StockDay {
  std::string code;
  Money close;
  Quantity trade_volume = 0;
  long long order_count = 0;
  Quantity placed_volume = 0;
  Quantity executed_volume = 0;
};

struct AgentDay {
  std::string agent_id;
  Money cash;
  Money total_assets;
  double return_rate = 0.0;
};

struct DayReport {
  int day = 0;
  std::vector<StockDay> stocks;
  std::vector<AgentDay> agents;
  long long order_number = 0;
  std::optional<double> order_execution_rate;
  double turnover_rate = 0.0;
  double volatility_to_date = 0.0;
  double average_return = 0.0;
};

/// Builds the per-stock and market fields of a day report from the records.
DayReport market_day_report(const RunRecords& log, int day);

/// Whole-run aggregates.
struct Headline {
  long long order_number = 0;
  std::optional<double> order_execution_rate;
  std::optional<double> order_count_execution_rate;
  double turnover_rate = 0.0;
  double volatility = 0.0;
  double average_return = 0.0;
};

Headline headline_metrics(const RunRecords& log, DayRange range);

}  // namespace asfm
