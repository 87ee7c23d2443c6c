#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "asfm/money.hpp"

namespace asfm {

using OrderId = std::uint64_t;

enum class Side { buy, sell };

std::string_view to_string(Side side);
Side side_from_string(std::string_view text);

struct Order {
  OrderId id = 0;
  std::uint64_t seq = 0;  // time priority key
  int day = 0;
  std::string agent_id;
  std::string stock_code;
  Side side = Side::buy;
  Quantity quantity = 0;
  Quantity remaining = 0;
  Money limit_price;

  bool filled() const { return remaining == 0; }
  bool operator==(const Order&) const = default;
};

struct Trade {
  OrderId buy_order_id = 0;
  OrderId sell_order_id = 0;
  std::string buyer_id;
  std::string seller_id;
  std::string stock_code;
  Money price;
  Quantity quantity = 0;
  int day = 0;
  std::uint64_t seq = 0;

  bool operator==(const Trade&) const = default;
};

/// Resting limit orders for one stock.
///
/// Bids are kept sorted by (limit desc, seq asc) and asks by (limit asc,
/// seq asc), so the front of each side is the order with priority.
class OrderBook {
 public:
  OrderBook() = default;
  explicit OrderBook(std::string stock_code) : stock_code_(std::move(stock_code)) {}

  const std::string& stock_code() const { return stock_code_; }

  void add(Order order);
  std::optional<Order> cancel(OrderId id);
  /// Removes and returns every resting order, bids first.
  std::vector<Order> drain();

  const std::vector<Order>& bids() const { return bids_; }
  const std::vector<Order>& asks() const { return asks_; }
  std::vector<Order>& bids() { return bids_; }
  std::vector<Order>& asks() { return asks_; }

  std::optional<Money> best_bid() const;
  std::optional<Money> best_ask() const;
  bool empty() const { return bids_.empty() && asks_.empty(); }
  /// True when both sides exist and best bid >= best ask.
  bool crossed() const;
  /// Checks the sort order of both sides.
  bool well_formed() const;

  bool operator==(const OrderBook&) const = default;

 private:
  std::string stock_code_;
  std::vector<Order> bids_;
  std::vector<Order> asks_;
};

bool bid_priority(const Order& a, const Order& b);
bool ask_priority(const Order& a, const Order& b);

enum class Sector {
  energy,
  materials,
  industrials,
  consumer_discretionary,
  consumer_staples,
  health_care,
  financials,
  information_technology,
  telecommunication_services,
  utilities,
  real_estate,
};

inline constexpr int kSectorCount = 11;

std::string_view to_string(Sector sector);
/// Accepts the snake_case identifiers produced by to_string.
Sector sector_from_string(std::string_view text);
/// Human-readable label ("Information Technology").
std::string_view sector_label(Sector sector);

struct ListedCompany {
  std::string code;
  Sector sector = Sector::energy;
  std::string description;
  std::vector<Money> price_history;  // oldest first
  Quantity shares_outstanding = 0;

  Money last_close() const { return price_history.back(); }
};

/// Ordered universe of listed companies. Registry order is the processing
/// and rendering order everywhere.
class Registry {
 public:
  Registry() = default;
  explicit Registry(std::vector<ListedCompany> companies);

  std::span<const ListedCompany> companies() const { return companies_; }
  std::span<ListedCompany> companies() { return companies_; }
  std::size_t size() const { return companies_.size(); }

  const ListedCompany* find(std::string_view code) const;
  ListedCompany* find(std::string_view code);
  bool contains(std::string_view code) const { return find(code) != nullptr; }
  const ListedCompany& at(std::string_view code) const;
  std::vector<std::string> codes() const;

  /// The eleven-sector default universe (EN001 ... RE011) with five seed
  /// prices each.
  static Registry default_universe();

  static Registry load(const std::filesystem::path& path);
  static Registry from_json_text(std::string_view text);
  std::string to_json_text() const;

 private:
  void validate() const;

  std::vector<ListedCompany> companies_;
};

}  // namespace asfm
