#include "asfm/metrics.hpp"

#include <cmath>
#include <set>

namespace asfm {

std::vector<Money> CloseTable::series(std::size_t stock, int first_day, int last_day) const {
  std::vector<Money> out;
  for (int d = first_day; d <= last_day; ++d) out.push_back(at(d, stock));
  return out;
}

long long order_number(const RunRecords& log, DayRange range) {
  long long n = 0;
  for (const auto& o : log.orders) n += range.contains(o.day) ? 1 : 0;
  return n;
}

Quantity placed_share_volume(const RunRecords& log, DayRange range) {
  Quantity q = 0;
  for (const auto& o : log.orders) {
    if (range.contains(o.day)) q += o.quantity;
  }
  return q;
}

Quantity traded_volume(const RunRecords& log, DayRange range) {
  Quantity q = 0;
  for (const auto& t : log.trades) {
    if (range.contains(t.day)) q += t.quantity;
  }
  return q;
}

Quantity executed_share_volume(const RunRecords& log, DayRange range) { return 2 * traded_volume(log, range); }

std::optional<double> order_execution_rate(const RunRecords& log, DayRange range) {
  Quantity placed = placed_share_volume(log, range);
  if (placed == 0) return std::nullopt;
  return static_cast<double>(executed_share_volume(log, range)) / static_cast<double>(placed);
}

std::optional<double> order_count_execution_rate(const RunRecords& log, DayRange range) {
  long long n = order_number(log, range);
  if (n == 0) return std::nullopt;
  std::set<OrderId> filled;
  for (const auto& t : log.trades) {
    if (!range.contains(t.day)) continue;
    filled.insert(t.buy_order_id);
    filled.insert(t.sell_order_id);
  }
  return static_cast<double>(filled.size()) / static_cast<double>(n);
}

double turnover_rate(const RunRecords& log, DayRange range) {
  Quantity outstanding = 0;
  for (const auto& [code, q] : log.shares_outstanding) outstanding += q;
  Quantity volume = traded_volume(log, range);
  if (volume == 0) return 0.0;
  if (outstanding <= 0) throw std::invalid_argument("turnover needs shares outstanding > 0");
  return static_cast<double>(volume) / static_cast<double>(outstanding);
}

double turnover_rate(const RunRecords& log, DayRange range, const std::string& stock_code) {
  Quantity volume = 0;
  for (const auto& t : log.trades) {
    if (range.contains(t.day) && t.stock_code == stock_code) volume += t.quantity;
  }
  if (volume == 0) return 0.0;
  auto it = log.shares_outstanding.find(stock_code);
  if (it == log.shares_outstanding.end() || it->second <= 0) {
    throw std::invalid_argument("turnover needs shares outstanding > 0 for " + stock_code);
  }
  return static_cast<double>(volume) / static_cast<double>(it->second);
}

double volatility(std::span<const Money> closes) {
  if (closes.size() < 2) throw InsufficientData("volatility needs at least two closes");
  std::vector<double> returns;
  returns.reserve(closes.size() - 1);
  for (std::size_t i = 1; i < closes.size(); ++i) {
    returns.push_back(static_cast<double>(closes[i].cents()) / static_cast<double>(closes[i - 1].cents()) - 1.0);
  }
  double mean = 0.0;
  for (double r : returns) mean += r;
  mean /= static_cast<double>(returns.size());
  double var = 0.0;
  for (double r : returns) var += (r - mean) * (r - mean);
  var /= static_cast<double>(returns.size());
  return std::sqrt(var);
}

double market_volatility(const RunRecords& log, DayRange range, VolatilityWeighting weighting) {
  const auto& codes = log.closes.codes;
  if (codes.empty()) throw InsufficientData("no stocks");
  std::vector<double> vols;
  std::vector<double> weights;
  for (std::size_t i = 0; i < codes.size(); ++i) {
    auto series = log.closes.series(i, range.first - 1, range.last);
    vols.push_back(volatility(series));
    double w = 1.0;
    if (weighting == VolatilityWeighting::volume) {
      w = 0.0;
      for (const auto& t : log.trades) {
        if (range.contains(t.day) && t.stock_code == codes[i]) w += static_cast<double>(t.quantity);
      }
    }
    weights.push_back(w);
  }
  double wsum = 0.0;
  for (double w : weights) wsum += w;
  if (wsum == 0.0) {
    weights.assign(weights.size(), 1.0);
    wsum = static_cast<double>(weights.size());
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < vols.size(); ++i) acc += vols[i] * weights[i];
  return acc / wsum;
}

double average_stock_return(const CloseTable& closes, int base_day, int day) {
  if (base_day >= day) throw std::invalid_argument("base_day must precede day");
  if (closes.codes.empty()) throw InsufficientData("no stocks");
  double acc = 0.0;
  for (std::size_t i = 0; i < closes.codes.size(); ++i) {
    acc += static_cast<double>(closes.at(day, i).cents()) / static_cast<double>(closes.at(base_day, i).cents()) - 1.0;
  }
  return acc / static_cast<double>(closes.codes.size());
}

DayReport market_day_report(const RunRecords& log, int day) {
  DayReport r;
  r.day = day;
  DayRange today{day, day};
  for (std::size_t i = 0; i < log.closes.codes.size(); ++i) {
    StockDay s;
    s.code = log.closes.codes[i];
    s.close = log.closes.at(day, i);
    for (const auto& o : log.orders) {
      if (o.day == day && o.stock_code == s.code) {
        ++s.order_count;
        s.placed_volume += o.quantity;
      }
    }
    for (const auto& t : log.trades) {
      if (t.day == day && t.stock_code == s.code) s.trade_volume += t.quantity;
    }
    s.executed_volume = 2 * s.trade_volume;
    r.stocks.push_back(std::move(s));
  }
  r.order_number = order_number(log, today);
  r.order_execution_rate = order_execution_rate(log, today);
  r.turnover_rate = turnover_rate(log, today);
  r.volatility_to_date = market_volatility(log, {1, day});
  r.average_return = average_stock_return(log.closes, 0, day);
  return r;
}

Headline headline_metrics(const RunRecords& log, DayRange range) {
  Headline h;
  h.order_number = order_number(log, range);
  h.order_execution_rate = order_execution_rate(log, range);
  h.order_count_execution_rate = order_count_execution_rate(log, range);
  h.turnover_rate = turnover_rate(log, range);
  h.volatility = market_volatility(log, range);
  h.average_return = average_stock_return(log.closes, range.first - 1, range.last);
  return h;
}

}  // namespace asfm
