#include "asfm/matching.hpp"

#include <algorithm>
#include <stdexcept>

namespace asfm {

namespace {

Trade make_trade(const Order& buy, const Order& sell, Money price, Quantity qty, MatchStamp& stamp) {
  Trade t;
  t.buy_order_id = buy.id;
  t.sell_order_id = sell.id;
  t.buyer_id = buy.agent_id;
  t.seller_id = sell.agent_id;
  t.stock_code = buy.stock_code;
  t.price = price;
  t.quantity = qty;
  t.day = stamp.day;
  t.seq = stamp.first_trade_seq++;
  return t;
}

}  // namespace

AuctionResult call_auction(OrderBook book, MatchStamp stamp) {
  AuctionResult result;
  auto& bids = book.bids();
  auto& asks = book.asks();
  std::size_t b = 0;
  std::size_t a = 0;
  while (b < bids.size() && a < asks.size() && asks[a].limit_price <= bids[b].limit_price) {
    Order& bid = bids[b];
    Order& ask = asks[a];
    Quantity qty = std::min(bid.remaining, ask.remaining);
    result.trades.push_back(make_trade(bid, ask, midpoint(ask.limit_price, bid.limit_price), qty, stamp));
    bid.remaining -= qty;
    ask.remaining -= qty;
    if (bid.filled()) ++b;
    if (ask.filled()) ++a;
  }
  bids.erase(bids.begin(), bids.begin() + static_cast<std::ptrdiff_t>(b));
  asks.erase(asks.begin(), asks.begin() + static_cast<std::ptrdiff_t>(a));
  result.residual_book = std::move(book);
  return result;
}

ContinuousResult continuous_match(OrderBook book, Order incoming, MatchStamp stamp, ContinuousPricing pricing) {
  ContinuousResult result;
  const bool buying = incoming.side == Side::buy;
  auto& opposite = buying ? book.asks() : book.bids();

  auto crosses = [&](const Order& resting) {
    return buying ? incoming.limit_price >= resting.limit_price : incoming.limit_price <= resting.limit_price;
  };

  std::size_t filled = 0;
  while (incoming.remaining > 0 && filled < opposite.size() && crosses(opposite[filled])) {
    Order& resting = opposite[filled];
    Quantity qty = std::min(incoming.remaining, resting.remaining);
    Money price = pricing == ContinuousPricing::resting ? resting.limit_price
                                                        : midpoint(resting.limit_price, incoming.limit_price);
    const Order& buy = buying ? incoming : resting;
    const Order& sell = buying ? resting : incoming;
    result.trades.push_back(make_trade(buy, sell, price, qty, stamp));
    incoming.remaining -= qty;
    resting.remaining -= qty;
    if (resting.filled()) ++filled;
  }
  opposite.erase(opposite.begin(), opposite.begin() + static_cast<std::ptrdiff_t>(filled));
  if (incoming.remaining > 0) book.add(std::move(incoming));
  result.book = std::move(book);
  return result;
}

bool would_self_cross(const OrderBook& book, const Order& order) {
  const auto& opposite = order.side == Side::buy ? book.asks() : book.bids();
  return std::any_of(opposite.begin(), opposite.end(), [&](const Order& resting) {
    if (resting.agent_id != order.agent_id) return false;
    return order.side == Side::buy ? order.limit_price >= resting.limit_price
                                   : order.limit_price <= resting.limit_price;
  });
}

namespace {

std::vector<PriceLevel> aggregate(const std::vector<Order>& side, int depth) {
  std::vector<PriceLevel> levels;
  for (const Order& o : side) {
    if (!levels.empty() && levels.back().price == o.limit_price) {
      levels.back().quantity += o.remaining;
    } else {
      if (static_cast<int>(levels.size()) == depth) break;
      levels.push_back({o.limit_price, o.remaining});
    }
  }
  return levels;
}

}  // namespace

IndicativeQuote indicative_snapshot(const OrderBook& book, int depth) {
  if (depth < 1) throw std::invalid_argument("indicative depth must be at least 1");
  return {book.stock_code(), aggregate(book.bids(), depth), aggregate(book.asks(), depth)};
}

Money closing_price(std::span<const Trade> day_trades, Money prev_close, ClosingRule rule) {
  if (day_trades.empty()) return prev_close;
  std::int64_t num = 0;
  std::int64_t den = 0;
  for (const Trade& t : day_trades) {
    if (rule == ClosingRule::vwap) {
      num += t.price.cents() * t.quantity;
      den += t.quantity;
    } else {
      num += t.price.cents();
      den += 1;
    }
  }
  return Money::from_cents(div_round_half_up(num, den));
}

}  // namespace asfm
