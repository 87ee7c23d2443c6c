#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "asfm/digest.hpp"
#include "asfm/run_log.hpp"

using namespace asfm;

TEST(RunLog, OrderLinesRoundTrip) {
  std::mt19937_64 gen(11);
  for (int i = 0; i < 200; ++i) {
    OrderRecord o;
    o.day = static_cast<int>(gen() % 30) + 1;
    o.round = static_cast<int>(gen() % 4);
    o.order_id = static_cast<OrderId>(gen() % 100000);
    o.seq = gen() % 100000;
    o.agent_id = "agent" + std::to_string(gen() % 10 + 1);
    o.stock_code = "EN00" + std::to_string(gen() % 3 + 1);
    o.side = (gen() & 1) ? Side::buy : Side::sell;
    o.quantity = static_cast<Quantity>(gen() % 500) + 1;
    o.limit = Money::from_cents(static_cast<std::int64_t>(gen() % 100000) + 1);
    std::string line = order_line(o);
    EXPECT_EQ(line.find('\n'), std::string::npos);
    EXPECT_EQ(order_from_line(line), o);
  }
}

TEST(RunLog, TradeLinesRoundTrip) {
  Trade t;
  t.buy_order_id = 7;
  t.sell_order_id = 3;
  t.buyer_id = "agent1";
  t.seller_id = "agent4";
  t.stock_code = "EN001";
  t.price = Money::parse("10.18");
  t.quantity = 50;
  t.day = 4;
  t.seq = 19;
  EXPECT_EQ(trade_from_line(trade_line(t)), t);
}

TEST(RunLog, ClosesCsvRoundTrip) {
  CloseTable c;
  c.codes = {"EN001", "FN001"};
  c.rows = {{Money::parse("10.60"), Money::parse("5.00")}, {Money::parse("10.61"), Money::parse("4.99")}};
  std::string csv = closes_csv(c);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "day,EN001,FN001");
  EXPECT_EQ(closes_from_csv(csv), c);
  EXPECT_EQ(c.last_day(), 1);
}

TEST(RunLog, MetricsCsvLeavesOerEmptyWithoutOrders) {
  DayReport r;
  r.day = 1;
  r.agents = {AgentDay{"agent1", Money::parse("1.00"), Money::parse("2.00"), 0.5}};
  std::string csv = metrics_csv({r});
  EXPECT_EQ(csv, "day,ON,OER,TR,VO,avg_return,agent1\n1,0,,0.0000000000,0.0000000000,0.0000000000,0.5000000000\n");
  r.order_execution_rate = 0.25;
  EXPECT_NE(metrics_csv({r}).find("1,0,0.2500000000,"), std::string::npos);
}

TEST(RunLog, ManifestListsDigestsInOrder) {
  std::string m = manifest_json({{"b.txt", "beta"}, {"a.txt", "alpha"}});
  EXPECT_LT(m.find("b.txt"), m.find("a.txt"));
  auto d = manifest_digests(m);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d.at("a.txt"), sha256_hex("alpha"));
  EXPECT_EQ(d.at("b.txt"), sha256_hex("beta"));
}

TEST(RunLog, ForEachLineSkipsBlankLines) {
  std::vector<std::string> seen;
  for_each_line("one\n\ntwo\nthree", [&](std::string_view l) { seen.emplace_back(l); });
  EXPECT_EQ(seen, (std::vector<std::string>{"one", "two", "three"}));
}
