#include "asfm/account.hpp"

#include <cassert>

namespace asfm {

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::value:
      return "value";
    case Strategy::institutional:
      return "institutional";
    case Strategy::contrarian:
      return "contrarian";
    case Strategy::aggressive:
      return "aggressive";
  }
  return "?";
}

Strategy strategy_from_string(std::string_view text) {
  for (Strategy s : kAllStrategies) {
    if (to_string(s) == text) return s;
  }
  throw std::invalid_argument("unknown strategy: " + std::string(text));
}

std::string_view to_string(ReserveStatus s) {
  switch (s) {
    case ReserveStatus::ok:
      return "ok";
    case ReserveStatus::insufficient_cash:
      return "insufficient_cash";
    case ReserveStatus::insufficient_shares:
      return "insufficient_shares";
  }
  return "?";
}

namespace {

Quantity lookup(const std::map<std::string, Quantity>& m, std::string_view code) {
  auto it = m.find(std::string(code));
  return it == m.end() ? 0 : it->second;
}

void adjust(std::map<std::string, Quantity>& m, const std::string& code, Quantity delta) {
  Quantity& q = m[code];
  q += delta;
  assert(q >= 0);
  if (q == 0) m.erase(code);
}

}  // namespace

Quantity AgentAccount::shares(std::string_view code) const { return lookup(holdings, code); }

Quantity AgentAccount::available_shares(std::string_view code) const {
  return lookup(holdings, code) - lookup(reserved_shares, code);
}

ReserveStatus reserve_for_order(AgentAccount& account, const Order& order) {
  if (order.side == Side::buy) {
    Money cost = order.limit_price * order.remaining;
    if (cost > account.free_cash) return ReserveStatus::insufficient_cash;
    account.free_cash -= cost;
    account.reserved_cash += cost;
  } else {
    if (order.remaining > account.available_shares(order.stock_code)) return ReserveStatus::insufficient_shares;
    adjust(account.reserved_shares, order.stock_code, order.remaining);
  }
  account.escrows[order.id] = Escrow{order.stock_code, order.side, order.limit_price, order.remaining};
  return ReserveStatus::ok;
}

void release_order(AgentAccount& account, OrderId order_id) {
  auto it = account.escrows.find(order_id);
  if (it == account.escrows.end()) return;
  const Escrow& e = it->second;
  if (e.side == Side::buy) {
    Money locked = e.limit * e.remaining;
    account.reserved_cash -= locked;
    account.free_cash += locked;
  } else {
    adjust(account.reserved_shares, e.stock_code, -e.remaining);
  }
  account.escrows.erase(it);
}

void settle_trade(AgentAccount& buyer, AgentAccount& seller, const Trade& trade) {
  if (trade.quantity == 0) return;
  Money cost = trade.price * trade.quantity;

  auto bit = buyer.escrows.find(trade.buy_order_id);
  assert(bit != buyer.escrows.end() && bit->second.remaining >= trade.quantity);
  Escrow& be = bit->second;
  Money locked = be.limit * trade.quantity;
  buyer.reserved_cash -= locked;
  buyer.free_cash += locked - cost;
  adjust(buyer.holdings, trade.stock_code, trade.quantity);
  be.remaining -= trade.quantity;
  if (be.remaining == 0) buyer.escrows.erase(bit);

  auto sit = seller.escrows.find(trade.sell_order_id);
  assert(sit != seller.escrows.end() && sit->second.remaining >= trade.quantity);
  Escrow& se = sit->second;
  adjust(seller.reserved_shares, trade.stock_code, -trade.quantity);
  adjust(seller.holdings, trade.stock_code, -trade.quantity);
  seller.free_cash += cost;
  se.remaining -= trade.quantity;
  if (se.remaining == 0) seller.escrows.erase(sit);
}

Money total_assets(const AgentAccount& account, const CloseMap& closes) {
  Money total = account.cash();
  for (const auto& [code, qty] : account.holdings) {
    auto it = closes.find(code);
    if (it == closes.end()) throw MissingClose(code);
    total += it->second * qty;
  }
  return total;
}

double return_rate(const AgentAccount& account, const CloseMap& closes) {
  Money total = total_assets(account, closes);
  return static_cast<double>((total - account.initial_capital).cents()) /
         static_cast<double>(account.initial_capital.cents());
}

}  // namespace asfm
