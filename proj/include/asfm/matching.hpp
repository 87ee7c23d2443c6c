#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "asfm/market.hpp"

namespace asfm {

/// Day and first trade sequence number to stamp onto generated trades.
struct MatchStamp {
  int day = 0;
  std::uint64_t first_trade_seq = 1;
};

struct AuctionResult {
  std::vector<Trade> trades;
  OrderBook residual_book;
};

/// Opening call auction.
///
/// The best ask is paired with the best bid while both sides are non-empty and
/// the best ask is not above the best bid. Each pairing fills the smaller
/// remaining quantity at the midpoint of the two limits (rounded half-up to
/// the cent); fully filled orders leave the book, partial fills keep their
/// priority.
AuctionResult call_auction(OrderBook book, MatchStamp stamp = {});

/// Execution price for continuous fills.
enum class ContinuousPricing { resting, midpoint };

struct ContinuousResult {
  std::vector<Trade> trades;
  OrderBook book;
};

/// Matches `incoming` against the opposite side while it crosses, walking
/// price-time priority. Unfilled remainder rests at its own limit.
ContinuousResult continuous_match(OrderBook book, Order incoming, MatchStamp stamp = {},
                                  ContinuousPricing pricing = ContinuousPricing::resting);

/// True when `order` would trade against a resting opposite order of the same
/// agent. Such orders are rejected before they reach the book.
bool would_self_cross(const OrderBook& book, const Order& order);

struct PriceLevel {
  Money price;
  Quantity quantity = 0;
  bool operator==(const PriceLevel&) const = default;
};

struct IndicativeQuote {
  std::string stock_code;
  std::vector<PriceLevel> bid_levels;
  std::vector<PriceLevel> ask_levels;
  bool operator==(const IndicativeQuote&) const = default;
};

/// Top `depth` aggregated price levels of each side.
IndicativeQuote indicative_snapshot(const OrderBook& book, int depth);

enum class ClosingRule { vwap, simple_average };

/// Average execution price of the day's trades for one stock, rounded half-up;
/// `prev_close` when nothing traded.
Money closing_price(std::span<const Trade> day_trades, Money prev_close, ClosingRule rule = ClosingRule::vwap);

}  // namespace asfm
