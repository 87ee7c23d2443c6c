#include <algorithm>
#include <cmath>
#include <numeric>

#include "asfm/agents.hpp"
#include "asfm/rng.hpp"

namespace asfm {

namespace {

double mean(const std::vector<Money>& xs) {
  double sum = 0.0;
  for (Money m : xs) sum += m.to_double();
  return sum / static_cast<double>(xs.size());
}

/// Return over the last `span` closes: window[n-1] / window[n-span] - 1.
double trailing_return(const std::vector<Money>& w, std::size_t span) {
  std::size_t n = w.size();
  std::size_t base = n >= span ? n - span : 0;
  return w.back().to_double() / w[base].to_double() - 1.0;
}

struct NewsShift {
  double buy = 0.0;   // makes buy triggers easier
  double sell = 0.0;  // makes sell triggers easier
};

NewsShift news_shift(const Observation& obs, const RuleParams& p) {
  NewsSignal signal = interpret_news(obs.news);
  NewsShift shift;
  double delta = p.news_delta * p.news_sensitivity;
  if (signal.rate_cut) shift.buy = delta;
  if (signal.inflation_percent &&
      (*signal.inflation_percent > p.inflation_high || *signal.inflation_percent < p.inflation_low)) {
    shift.sell = delta;
  }
  return shift;
}

/// Cash still uncommitted while building one decision.
struct Budget {
  Money free;

  Quantity buy_qty(double fraction, Money limit) const {
    return affordable_shares(free.scaled_floor(fraction), limit);
  }
  void commit(Quantity q, Money limit) { free -= limit * q; }
};

std::vector<TraderAction> value_decide(const Observation& obs, const AgentAccount& acct, Rng& rng,
                                       const RuleParams& p, NewsShift shift) {
  std::vector<TraderAction> out;
  Budget budget{acct.free_cash};
  const double noise = p.perception_noise(Strategy::value);
  for (const auto& s : obs.stocks) {
    double eps = noise * rng.normal();
    if (s.price_window.empty()) continue;
    Money last = s.price_window.back();
    double perceived = last.to_double() * (1.0 + eps);
    double avg = mean(s.price_window);
    if (perceived < (p.value_buy_ratio + shift.buy) * avg) {
      Quantity q = budget.buy_qty(p.value_buy_cash_fraction, last);
      if (q > 0) {
        budget.commit(q, last);
        out.push_back(TraderAction::buy(s.code, q, last));
      }
    } else if (perceived > (p.value_sell_ratio - shift.sell) * avg) {
      Quantity avail = acct.available_shares(s.code);
      Quantity q = static_cast<Quantity>(std::ceil(static_cast<double>(avail) * p.value_sell_position_fraction));
      if (q > 0) out.push_back(TraderAction::sell(s.code, std::min(q, avail), last));
    }
  }
  return out;
}

std::vector<TraderAction> institutional_decide(const Observation& obs, const AgentAccount& acct, Rng& rng,
                                               const RuleParams& p, NewsShift shift) {
  std::vector<TraderAction> out;
  if (obs.stocks.empty()) return out;
  const double noise = p.perception_noise(Strategy::institutional);

  std::vector<double> perceived(obs.stocks.size(), 0.0);
  double total = acct.free_cash.to_double();
  for (std::size_t i = 0; i < obs.stocks.size(); ++i) {
    double eps = noise * rng.normal();
    const auto& s = obs.stocks[i];
    if (s.price_window.empty()) continue;
    perceived[i] = s.price_window.back().to_double() * (1.0 + eps);
    total += static_cast<double>(acct.available_shares(s.code)) * perceived[i];
  }

  double equity = std::clamp(p.institutional_equity_target + shift.buy - shift.sell, 0.0, 1.0);
  double target = total * equity / static_cast<double>(obs.stocks.size());
  if (target <= 0.0) return out;

  Budget budget{acct.free_cash};
  for (std::size_t i = 0; i < obs.stocks.size(); ++i) {
    const auto& s = obs.stocks[i];
    if (s.price_window.empty()) continue;
    Money last = s.price_window.back();
    Quantity avail = acct.available_shares(s.code);
    double value = static_cast<double>(avail) * perceived[i];
    double deviation = (value - target) / target;
    if (deviation < -p.institutional_band) {
      auto want = static_cast<Quantity>((target - value) / last.to_double());
      Quantity q = std::min(want, affordable_shares(budget.free, last));
      if (q > 0) {
        budget.commit(q, last);
        out.push_back(TraderAction::buy(s.code, q, last));
      }
    } else if (deviation > p.institutional_band) {
      auto want = static_cast<Quantity>((value - target) / last.to_double());
      Quantity q = std::min(want, avail);
      if (q > 0) out.push_back(TraderAction::sell(s.code, q, last));
    }
  }
  return out;
}

std::vector<TraderAction> contrarian_decide(const Observation& obs, const AgentAccount& acct, Rng& rng,
                                            const RuleParams& p, NewsShift shift) {
  std::vector<TraderAction> out;
  const double noise = p.perception_noise(Strategy::contrarian);
  const StockView* loser = nullptr;
  const StockView* winner = nullptr;
  double worst = 0.0;
  double best = 0.0;
  for (const auto& s : obs.stocks) {
    double eps = noise * rng.normal();
    if (s.price_window.empty()) continue;
    double r = trailing_return(s.price_window, 5) + eps;
    if (!loser || r < worst) {
      loser = &s;
      worst = r;
    }
    if (acct.available_shares(s.code) > 0 && (!winner || r > best)) {
      winner = &s;
      best = r;
    }
  }
  if (loser && worst < -(p.contrarian_buy_decline - shift.buy)) {
    Money last = loser->price_window.back();
    Quantity q = Budget{acct.free_cash}.buy_qty(p.contrarian_buy_cash_fraction, last);
    if (q > 0) out.push_back(TraderAction::buy(loser->code, q, last));
  }
  if (winner && winner != loser && best > p.contrarian_sell_gain - shift.sell) {
    Money last = winner->price_window.back();
    Quantity avail = acct.available_shares(winner->code);
    auto q = static_cast<Quantity>(std::ceil(static_cast<double>(avail) * p.contrarian_sell_position_fraction));
    if (q > 0) out.push_back(TraderAction::sell(winner->code, std::min(q, avail), last));
  }
  return out;
}

std::vector<TraderAction> aggressive_decide(const Observation& obs, const AgentAccount& acct, Rng& rng,
                                            const RuleParams& p, NewsShift shift) {
  std::vector<TraderAction> out;
  Budget budget{acct.free_cash};
  const double noise = p.perception_noise(Strategy::aggressive);
  for (const auto& s : obs.stocks) {
    double eps = noise * rng.normal();
    if (s.price_window.size() < 3) continue;
    Money last = s.price_window.back();
    double r = trailing_return(s.price_window, 3) + eps;
    if (r > p.aggressive_trigger - shift.buy) {
      Money limit = last.scaled(p.aggressive_buy_markup);
      Quantity q = budget.buy_qty(p.aggressive_buy_cash_fraction, limit);
      if (q > 0) {
        budget.commit(q, limit);
        out.push_back(TraderAction::buy(s.code, q, limit));
      }
    } else if (r < -p.aggressive_trigger + shift.sell) {
      Quantity avail = acct.available_shares(s.code);
      if (avail > 0) out.push_back(TraderAction::sell(s.code, avail, last.scaled(p.aggressive_sell_markdown)));
    }
  }
  return out;
}

/// Re-prices intents against the current indicative quote.
std::vector<TraderAction> requote(std::vector<TraderAction> intents, const Observation& obs,
                                  const AgentAccount& acct, const RuleParams& p) {
  std::vector<TraderAction> out;
  Budget budget{acct.free_cash};
  for (auto& a : intents) {
    const StockView* s = obs.find(a.stock_code);
    if (!s || s->order_history.empty()) continue;
    const IndicativeQuote& q = s->order_history.back();
    if (a.tool == Tool::buy) {
      if (q.ask_levels.empty()) continue;
      const PriceLevel& best = q.ask_levels.front();
      if (best.price > a.price.scaled(1.0 + p.requote_tolerance)) continue;
      Quantity qty = std::min({a.quantity, best.quantity, affordable_shares(budget.free, best.price)});
      if (qty <= 0) continue;
      budget.commit(qty, best.price);
      out.push_back(TraderAction::buy(a.stock_code, qty, best.price));
    } else if (a.tool == Tool::sell) {
      if (q.bid_levels.empty()) continue;
      const PriceLevel& best = q.bid_levels.front();
      if (best.price < a.price.scaled(1.0 - p.requote_tolerance)) continue;
      Quantity qty = std::min(a.quantity, best.quantity);
      if (qty > 0) out.push_back(TraderAction::sell(a.stock_code, qty, best.price));
    }
  }
  return out;
}

}  // namespace

std::vector<TraderAction> rule_policy_decide(const StrategyProfile& profile, const Observation& obs,
                                             const AgentAccount& account, Rng& rng, const RuleParams& params) {
  NewsShift shift = news_shift(obs, params);
  std::vector<TraderAction> intents;
  switch (profile.kind) {
    case Strategy::value:
      intents = value_decide(obs, account, rng, params, shift);
      break;
    case Strategy::institutional:
      intents = institutional_decide(obs, account, rng, params, shift);
      break;
    case Strategy::contrarian:
      intents = contrarian_decide(obs, account, rng, params, shift);
      break;
    case Strategy::aggressive:
      intents = aggressive_decide(obs, account, rng, params, shift);
      break;
  }
  if (obs.round > 0) intents = requote(std::move(intents), obs, account, params);
  if (intents.empty()) intents.push_back(TraderAction::hold());
  return intents;
}

}  // namespace asfm
