#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

#include "asfm/market.hpp"
#include "asfm/money.hpp"

namespace asfm {

enum class Strategy { value, institutional, contrarian, aggressive };

inline constexpr Strategy kAllStrategies[] = {Strategy::value, Strategy::institutional, Strategy::contrarian,
                                              Strategy::aggressive};

std::string_view to_string(Strategy s);
Strategy strategy_from_string(std::string_view text);

/// Cash or shares locked behind one live order.
struct Escrow {
  std::string stock_code;
  Side side = Side::buy;
  Money limit;
  Quantity remaining = 0;
};

/// Cash wallet, holdings and escrow of one trader.
///
/// `holdings` counts every share the agent owns, including shares locked by
/// resting sell orders; `reserved_shares` is the locked subset. Cash is split
/// the same way into free and reserved.
struct AgentAccount {
  std::string agent_id;
  Strategy strategy = Strategy::value;
  Money initial_capital;
  Money free_cash;
  Money reserved_cash;
  std::map<std::string, Quantity> holdings;
  std::map<std::string, Quantity> reserved_shares;
  std::map<OrderId, Escrow> escrows;
  std::map<std::string, int> ops_today;

  Money cash() const { return free_cash + reserved_cash; }
  Quantity shares(std::string_view code) const;
  Quantity available_shares(std::string_view code) const;
};

class MissingClose : public std::runtime_error {
 public:
  explicit MissingClose(const std::string& code)
      : std::runtime_error("no closing price for held stock " + code), stock_code(code) {}
  std::string stock_code;
};

enum class ReserveStatus { ok, insufficient_cash, insufficient_shares };

std::string_view to_string(ReserveStatus s);

/// Escrows cash (buys: quantity x limit) or shares (sells) for `order`.
/// On failure the account is left untouched.
[[nodiscard]] ReserveStatus reserve_for_order(AgentAccount& account, const Order& order);

/// Returns whatever is still escrowed for `order_id` to the free balances.
void release_order(AgentAccount& account, OrderId order_id);

/// Moves cash and shares for one execution. The buyer's escrow is charged at
/// its limit and the difference to the trade price is refunded.
void settle_trade(AgentAccount& buyer, AgentAccount& seller, const Trade& trade);

using CloseMap = std::map<std::string, Money, std::less<>>;

/// Cash plus holdings marked at `closes`.
Money total_assets(const AgentAccount& account, const CloseMap& closes);

/// (total_assets - initial_capital) / initial_capital.
double return_rate(const AgentAccount& account, const CloseMap& closes);

}  // namespace asfm
