#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>

#include "asfm/metrics.hpp"

using namespace asfm;

namespace {

OrderRecord order(int day, OrderId id, Side side, Quantity qty, const std::string& code = "EN001") {
  OrderRecord o;
  o.day = day;
  o.order_id = id;
  o.seq = id;
  o.agent_id = side == Side::buy ? "agent1" : "agent2";
  o.stock_code = code;
  o.side = side;
  o.quantity = qty;
  o.limit = Money::parse("10.00");
  return o;
}

Trade trade(int day, OrderId buy, OrderId sell, Quantity qty, const std::string& code = "EN001") {
  Trade t;
  t.buy_order_id = buy;
  t.sell_order_id = sell;
  t.buyer_id = "agent1";
  t.seller_id = "agent2";
  t.stock_code = code;
  t.price = Money::parse("10.00");
  t.quantity = qty;
  t.day = day;
  t.seq = static_cast<std::uint64_t>(buy * 1000 + sell);
  return t;
}

CloseTable table(std::vector<std::string> codes, std::vector<std::vector<const char*>> rows) {
  CloseTable c;
  c.codes = std::move(codes);
  for (const auto& r : rows) {
    std::vector<Money> row;
    for (const char* p : r) row.push_back(Money::parse(p));
    c.rows.push_back(row);
  }
  return c;
}

}  // namespace

TEST(OrderExecutionRate, PartialFillOfOneSide) {
  RunRecords log;
  log.orders = {order(1, 1, Side::buy, 100), order(1, 2, Side::sell, 100)};
  log.trades = {trade(1, 1, 2, 25)};
  ASSERT_TRUE(order_execution_rate(log, {1, 1}));
  EXPECT_DOUBLE_EQ(*order_execution_rate(log, {1, 1}), 50.0 / 200.0);
  EXPECT_EQ(order_number(log, {1, 1}), 2);
  EXPECT_EQ(traded_volume(log, {1, 1}), 25);
}

TEST(OrderExecutionRate, FullyFilledNothingFilledAndEmpty) {
  RunRecords log;
  log.orders = {order(1, 1, Side::buy, 40), order(1, 2, Side::sell, 40)};
  log.trades = {trade(1, 1, 2, 40)};
  EXPECT_DOUBLE_EQ(*order_execution_rate(log, {1, 1}), 1.0);
  log.trades.clear();
  EXPECT_DOUBLE_EQ(*order_execution_rate(log, {1, 1}), 0.0);
  EXPECT_FALSE(order_execution_rate(RunRecords{}, {1, 1}).has_value());
  EXPECT_FALSE(order_count_execution_rate(RunRecords{}, {1, 1}).has_value());
}

TEST(OrderExecutionRate, RangeRestrictsOrdersAndTrades) {
  RunRecords log;
  log.orders = {order(1, 1, Side::buy, 10), order(1, 2, Side::sell, 10), order(2, 3, Side::buy, 30)};
  log.trades = {trade(1, 1, 2, 10)};
  EXPECT_EQ(order_number(log, {2, 2}), 1);
  EXPECT_DOUBLE_EQ(*order_execution_rate(log, {2, 2}), 0.0);
  EXPECT_DOUBLE_EQ(*order_execution_rate(log, {1, 2}), 20.0 / 50.0);
  EXPECT_DOUBLE_EQ(*order_count_execution_rate(log, {1, 2}), 2.0 / 3.0);
}

TEST(OrderExecutionRate, RandomLogsMatchPerOrderFillOracle) {
  std::mt19937_64 gen(20240607);
  for (int trial = 0; trial < 1000; ++trial) {
    RunRecords log;
    std::map<OrderId, Quantity> remaining;
    std::map<OrderId, Quantity> filled;
    int n = std::uniform_int_distribution<int>(0, 12)(gen);
    for (int i = 1; i <= n; ++i) {
      Side s = (gen() & 1) ? Side::buy : Side::sell;
      Quantity q = std::uniform_int_distribution<Quantity>(1, 100)(gen);
      log.orders.push_back(order(1, i, s, q));
      remaining[i] = q;
    }
    for (int k = 0; k < 20; ++k) {
      if (n < 2) break;
      OrderId b = std::uniform_int_distribution<OrderId>(1, n)(gen);
      OrderId a = std::uniform_int_distribution<OrderId>(1, n)(gen);
      if (a == b || log.orders[b - 1].side != Side::buy || log.orders[a - 1].side != Side::sell) continue;
      Quantity q = std::min(remaining[b], remaining[a]);
      if (q == 0) continue;
      q = std::uniform_int_distribution<Quantity>(1, q)(gen);
      remaining[b] -= q;
      remaining[a] -= q;
      filled[b] += q;
      filled[a] += q;
      log.trades.push_back(trade(1, b, a, q));
    }
    auto oer = order_execution_rate(log, {1, 1});
    if (n == 0) {
      EXPECT_FALSE(oer.has_value());
      continue;
    }
    Quantity placed = 0;
    Quantity fill_sum = 0;
    for (const auto& o : log.orders) placed += o.quantity;
    for (const auto& [id, q] : filled) fill_sum += q;
    ASSERT_TRUE(oer.has_value());
    EXPECT_DOUBLE_EQ(*oer, static_cast<double>(fill_sum) / static_cast<double>(placed));
    EXPECT_GE(*oer, 0.0);
    EXPECT_LE(*oer, 1.0);
  }
}

TEST(Turnover, TradedOverOutstanding) {
  RunRecords log;
  log.shares_outstanding = {{"EN001", 6000}, {"FN001", 4000}};
  log.trades = {trade(1, 1, 2, 300), trade(1, 3, 4, 200, "FN001")};
  EXPECT_DOUBLE_EQ(turnover_rate(log, {1, 1}), 0.05);
  EXPECT_DOUBLE_EQ(turnover_rate(log, {1, 1}, "EN001"), 0.05);
  EXPECT_DOUBLE_EQ(turnover_rate(log, {1, 1}, "FN001"), 0.05);
  EXPECT_DOUBLE_EQ(turnover_rate(log, {2, 2}), 0.0);
  RunRecords none;
  none.trades = {trade(1, 1, 2, 1)};
  EXPECT_THROW(turnover_rate(none, {1, 1}), std::invalid_argument);
}

TEST(Volatility, PopulationStandardDeviationOfReturns) {
  std::vector<Money> closes{Money::parse("100.00"), Money::parse("110.00"), Money::parse("99.00")};
  EXPECT_NEAR(volatility(closes), 0.10, 1e-12);
  std::vector<Money> flat(5, Money::parse("10.00"));
  EXPECT_DOUBLE_EQ(volatility(flat), 0.0);
  std::vector<Money> one{Money::parse("10.00")};
  EXPECT_THROW(volatility(one), InsufficientData);
}

TEST(Volatility, MarketAggregateAveragesStocks) {
  RunRecords log;
  log.closes = table({"A", "B"}, {{"100.00", "10.00"}, {"110.00", "10.00"}, {"99.00", "10.00"}});
  EXPECT_NEAR(market_volatility(log, {1, 2}), 0.05, 1e-12);
  log.trades = {trade(1, 1, 2, 10, "A")};
  EXPECT_NEAR(market_volatility(log, {1, 2}, VolatilityWeighting::volume), 0.10, 1e-12);
}

TEST(AverageReturn, SymmetricAndNeedsEarlierBase) {
  CloseTable c = table({"A", "B"}, {{"10.00", "20.00"}, {"11.00", "18.00"}});
  EXPECT_NEAR(average_stock_return(c, 0, 1), (0.1 - 0.1) / 2.0, 1e-12);
  EXPECT_THROW(average_stock_return(c, 1, 1), std::invalid_argument);
  CloseTable d = table({"A"}, {{"10.00"}, {"12.50"}});
  EXPECT_NEAR(average_stock_return(d, 0, 1), 0.25, 1e-12);
}

TEST(Headline, CombinesWholeRange) {
  RunRecords log;
  log.shares_outstanding = {{"EN001", 1000}};
  log.closes = table({"EN001"}, {{"10.00"}, {"10.00"}, {"11.00"}});
  log.orders = {order(1, 1, Side::buy, 50), order(2, 2, Side::sell, 50), order(2, 3, Side::buy, 50)};
  log.trades = {trade(2, 1, 2, 50)};
  Headline h = headline_metrics(log, {1, 2});
  EXPECT_EQ(h.order_number, 3);
  EXPECT_DOUBLE_EQ(*h.order_execution_rate, 100.0 / 150.0);
  EXPECT_DOUBLE_EQ(h.turnover_rate, 0.05);
  EXPECT_NEAR(h.volatility, 0.05, 1e-12);
  EXPECT_NEAR(h.average_return, 0.10, 1e-12);
  DayReport r = market_day_report(log, 2);
  EXPECT_EQ(r.order_number, 2);
  ASSERT_EQ(r.stocks.size(), 1u);
  EXPECT_EQ(r.stocks[0].trade_volume, 50);
  EXPECT_EQ(r.stocks[0].close, Money::parse("11.00"));
}
