#include <gtest/gtest.h>

#include <set>

#include "asfm/market.hpp"

using namespace asfm;

namespace {

Order make(OrderId id, Side side, Quantity qty, const char* price, std::string agent = "a") {
  return {id, id, 1, std::move(agent), "EN001", side, qty, qty, Money::parse(price)};
}

}  // namespace

TEST(OrderBook, KeepsPriceTimePriorityOnEachSide) {
  OrderBook book("EN001");
  book.add(make(1, Side::buy, 10, "10.00"));
  book.add(make(2, Side::buy, 10, "10.10"));
  book.add(make(3, Side::buy, 10, "10.00"));
  book.add(make(4, Side::sell, 10, "10.50"));
  book.add(make(5, Side::sell, 10, "10.30"));
  book.add(make(6, Side::sell, 10, "10.30"));

  std::vector<OrderId> bids, asks;
  for (const auto& o : book.bids()) bids.push_back(o.id);
  for (const auto& o : book.asks()) asks.push_back(o.id);
  EXPECT_EQ(bids, (std::vector<OrderId>{2, 1, 3}));
  EXPECT_EQ(asks, (std::vector<OrderId>{5, 6, 4}));
  EXPECT_EQ(book.best_bid(), Money::parse("10.10"));
  EXPECT_EQ(book.best_ask(), Money::parse("10.30"));
  EXPECT_FALSE(book.crossed());
  EXPECT_TRUE(book.well_formed());
}

TEST(OrderBook, CancelAndDrain) {
  OrderBook book("EN001");
  book.add(make(1, Side::buy, 10, "10.00"));
  book.add(make(2, Side::sell, 10, "10.50"));
  auto cancelled = book.cancel(1);
  ASSERT_TRUE(cancelled);
  EXPECT_EQ(cancelled->id, 1u);
  EXPECT_FALSE(book.cancel(1));
  EXPECT_FALSE(book.best_bid());
  auto rest = book.drain();
  ASSERT_EQ(rest.size(), 1u);
  EXPECT_TRUE(book.empty());
}

TEST(OrderBook, CrossedDetection) {
  OrderBook book("EN001");
  book.add(make(1, Side::buy, 10, "10.30"));
  book.add(make(2, Side::sell, 10, "10.30"));
  EXPECT_TRUE(book.crossed());
}

TEST(Side, RoundTripsNames) {
  EXPECT_EQ(to_string(Side::buy), "Buy");
  EXPECT_EQ(side_from_string("Sell"), Side::sell);
  EXPECT_THROW(side_from_string("Short"), std::invalid_argument);
}

TEST(Registry, DefaultUniverseHasElevenSectors) {
  Registry r = Registry::default_universe();
  ASSERT_EQ(r.size(), 11u);
  std::set<Sector> sectors;
  for (const auto& c : r.companies()) {
    sectors.insert(c.sector);
    EXPECT_EQ(c.price_history.size(), 5u) << c.code;
  }
  EXPECT_EQ(sectors.size(), 11u);
  const auto& en = r.at("EN001");
  std::vector<std::string> prices;
  for (Money m : en.price_history) prices.push_back(m.str());
  EXPECT_EQ(prices, (std::vector<std::string>{"10.00", "10.20", "10.50", "10.35", "10.60"}));
  EXPECT_EQ(en.last_close(), Money::parse("10.60"));
  EXPECT_EQ(r.codes().front(), "EN001");
  EXPECT_EQ(r.codes().back(), "RE011");
  EXPECT_THROW(r.at("ZZ999"), std::out_of_range);
}

TEST(Registry, JsonRoundTrip) {
  Registry r = Registry::default_universe();
  r.companies()[0].shares_outstanding = 1234;
  Registry back = Registry::from_json_text(r.to_json_text());
  EXPECT_EQ(back.to_json_text(), r.to_json_text());
  EXPECT_EQ(back.at("EN001").shares_outstanding, 1234);
}

TEST(Registry, AcceptsNumericPricesAndBareArrays) {
  Registry r = Registry::from_json_text(
      R"([{"code":"AA001","sector":"energy","description":"x","prices":[1.5,"2.25"]}])");
  EXPECT_EQ(r.at("AA001").last_close(), Money::parse("2.25"));
  EXPECT_EQ(r.at("AA001").price_history.front(), Money::parse("1.50"));
}

TEST(Registry, RejectsInvalidRecords) {
  EXPECT_THROW(Registry::from_json_text(R"([{"code":"A","sector":"energy","description":"","prices":[]}])"),
               std::invalid_argument);
  EXPECT_THROW(Registry::from_json_text(R"([{"code":"A","sector":"space","description":"","prices":[1]}])"),
               std::invalid_argument);
  EXPECT_THROW(Registry::from_json_text(R"([{"code":"A","sector":"energy","description":"","prices":[1]},
                                             {"code":"A","sector":"energy","description":"","prices":[1]}])"),
               std::invalid_argument);
  EXPECT_THROW(Registry::from_json_text(R"([{"code":"A","sector":"energy","description":"","prices":[-1]}])"),
               std::invalid_argument);
}
