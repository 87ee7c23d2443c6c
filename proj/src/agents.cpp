#include "asfm/agents.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "asfm/prompt_templates.hpp"

namespace asfm {

namespace prompts {

std::string render(std::string_view tmpl, const std::map<std::string, std::string, std::less<>>& vars) {
  std::string out;
  out.reserve(tmpl.size() * 2);
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl[i] == '{') {
      std::size_t j = i + 1;
      while (j < tmpl.size() && (std::islower(static_cast<unsigned char>(tmpl[j])) || tmpl[j] == '_')) ++j;
      if (j < tmpl.size() && tmpl[j] == '}' && j > i + 1) {
        auto name = tmpl.substr(i + 1, j - i - 1);
        auto it = vars.find(name);
        if (it == vars.end()) throw std::invalid_argument("unbound template placeholder: " + std::string(name));
        out += it->second;
        i = j + 1;
        continue;
      }
    }
    out += tmpl[i++];
  }
  return out;
}

}  // namespace prompts

namespace {

const std::array<StrategyProfile, 4> kProfiles{{
    {Strategy::value,
     "You are a value investor focused on identifying stocks whose market prices are below their intrinsic "
     "values. Your investment decisions are based on thorough financial analysis, seeking long-term stable "
     "returns rather than short-term price fluctuations. By examining the fundamentals of companies, such as "
     "profitability, financial health, and industry position, you can identify and invest in high-quality "
     "companies undervalued by the market. As a value investor, you patiently wait for the market to reassess "
     "the true value of these stocks, realizing the appreciation of your investments."},
    {Strategy::institutional,
     "You are an institutional investor, typically representing a large investment company. You possess "
     "substantial capital and expertise, engaging in the purchase and sale of stocks, bonds, and other "
     "financial assets. Your investment decisions are based on in-depth market analysis, long-term financial "
     "planning, and sophisticated risk management strategies. Your primary goal is to secure stable and "
     "reliable returns for the institution or its beneficiaries you represent."},
    {Strategy::contrarian,
     "You are a contrarian investor, specializing in finding stocks that are generally overlooked or "
     "undervalued by the market. You believe in buying when market sentiment is low and selling when it's "
     "high, aiming to profit from this approach.  Your strategy requires a high level of patience and steadfast "
     "determination, as well as a deep understanding of market psychology and fundamental analysis, to be "
     "greedy when others are fearful and thus achieve capital appreciation."},
    {Strategy::aggressive,
     "You are an Aggressive investor, focusing on profiting from short-term market fluctuations. You prefer "
     "quick trades, using technical analysis and market trends to predict immediate price movements. Your "
     "investment strategy often involves higher risks, but it can also yield quicker returns. You need to "
     "constantly stay sensitive to market dynamics and be ready to enter and exit the market at any time to "
     "respond to rapidly changing market conditions."},
}};

std::string lowercase_first(std::string text) {
  if (!text.empty()) text[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(text[0])));
  return text;
}

std::string percent(double ratio) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%+.2f%%", ratio * 100.0);
  return buf;
}

std::string price_list(const std::vector<Money>& prices) {
  std::string out = "[";
  for (std::size_t i = 0; i < prices.size(); ++i) {
    if (i) out += ", ";
    out += prices[i].str();
  }
  out += "]";
  return out;
}

std::string levels(const std::vector<PriceLevel>& ls) {
  if (ls.empty()) return "-";
  std::string out;
  for (std::size_t i = 0; i < ls.size(); ++i) {
    if (i) out += ", ";
    out += ls[i].price.str() + " x " + std::to_string(ls[i].quantity);
  }
  return out;
}

std::string phase(int round) {
  if (round == 0) return "opening auction";
  return "continuous trading round " + std::to_string(round);
}

}  // namespace

const StrategyProfile& strategy_profile(Strategy kind) { return kProfiles[static_cast<std::size_t>(kind)]; }

std::vector<std::string> strategy_sentences() {
  std::vector<std::string> out;
  for (const auto& p : kProfiles) {
    std::string_view text = p.description;
    std::size_t start = 0;
    while (start < text.size()) {
      std::size_t end = text.find(". ", start);
      std::string_view sentence = text.substr(start, end == std::string_view::npos ? text.npos : end - start);
      while (!sentence.empty() && sentence.front() == ' ') sentence.remove_prefix(1);
      if (auto sp = sentence.find(' '); sp != std::string_view::npos) sentence.remove_prefix(sp + 1);
      if (!sentence.empty()) out.emplace_back(sentence);
      if (end == std::string_view::npos) break;
      start = end + 2;
    }
  }
  return out;
}

std::string_view to_string(ProfileMode m) { return m == ProfileMode::full ? "full" : "uniform"; }
std::string_view to_string(ObservationMode m) { return m == ObservationMode::full ? "full" : "price_only"; }
std::string_view to_string(PolicyBackend b) { return b == PolicyBackend::rule_based ? "rule_based" : "llm"; }

ProfileMode profile_mode_from_string(std::string_view s) {
  if (s == "full") return ProfileMode::full;
  if (s == "uniform") return ProfileMode::uniform;
  throw std::invalid_argument("unknown profile mode: " + std::string(s));
}

ObservationMode observation_mode_from_string(std::string_view s) {
  if (s == "full") return ObservationMode::full;
  if (s == "price_only") return ObservationMode::price_only;
  throw std::invalid_argument("unknown observation mode: " + std::string(s));
}

PolicyBackend policy_backend_from_string(std::string_view s) {
  if (s == "rule_based" || s == "rule") return PolicyBackend::rule_based;
  if (s == "llm") return PolicyBackend::llm;
  throw std::invalid_argument("unknown policy backend: " + std::string(s));
}

double RuleParams::perception_noise(Strategy s) const {
  switch (s) {
    case Strategy::value:
      return perception_noise_value;
    case Strategy::institutional:
      return perception_noise_institutional;
    case Strategy::contrarian:
      return perception_noise_contrarian;
    case Strategy::aggressive:
      return perception_noise_aggressive;
  }
  return 0.0;
}

RuleParams RuleParams::noiseless() {
  RuleParams p;
  p.perception_noise_value = 0.0;
  p.perception_noise_institutional = 0.0;
  p.perception_noise_contrarian = 0.0;
  p.perception_noise_aggressive = 0.0;
  return p;
}

const StockView* Observation::find(std::string_view code) const {
  auto it = std::find_if(stocks.begin(), stocks.end(), [code](const StockView& s) { return s.code == code; });
  return it == stocks.end() ? nullptr : &*it;
}

std::string_view to_string(Tool t) {
  switch (t) {
    case Tool::buy:
      return "Buy";
    case Tool::sell:
      return "Sell";
    case Tool::hold:
      return "Hold";
  }
  return "?";
}

std::string to_wire(const TraderAction& action) {
  if (action.tool == Tool::hold) return R"({"tool":"Hold"})";
  return std::string(R"({"tool":")") + std::string(to_string(action.tool)) + R"(","stock_code":)" +
         nlohmann::json(action.stock_code).dump() + R"(,"quantity":)" + std::to_string(action.quantity) +
         R"(,"price":)" + action.price.str() + "}";
}

namespace {

/// Spans of balanced top-level {...} blocks, ignoring braces inside strings.
std::vector<std::string_view> brace_blocks(std::string_view text) {
  std::vector<std::string_view> out;
  int depth = 0;
  bool in_string = false;
  bool escaped = false;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (depth > 0 && in_string) {
      if (escaped) {
        escaped = false;
      } else if (c == '\\') {
        escaped = true;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"' && depth > 0) {
      in_string = true;
    } else if (c == '{') {
      if (depth++ == 0) start = i;
    } else if (c == '}' && depth > 0) {
      if (--depth == 0) out.push_back(text.substr(start, i - start + 1));
    }
  }
  return out;
}

const nlohmann::json* field(const nlohmann::json& obj, std::initializer_list<const char*> names) {
  for (const char* n : names) {
    if (auto it = obj.find(n); it != obj.end()) return &*it;
  }
  return nullptr;
}

std::variant<TraderAction, ParseError> action_from_json(const nlohmann::json& obj, const Registry& universe) {
  const auto* tool_field = field(obj, {"tool", "name"});
  if (!tool_field || !tool_field->is_string()) return ParseError{"tool name missing"};
  std::string name = tool_field->get<std::string>();
  std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::tolower(c); });

  TraderAction action;
  if (name == "hold") return TraderAction::hold();
  if (name == "buy") {
    action.tool = Tool::buy;
  } else if (name == "sell") {
    action.tool = Tool::sell;
  } else {
    return ParseError{"unknown tool '" + tool_field->get<std::string>() + "'"};
  }

  const nlohmann::json* args = field(obj, {"arguments", "parameters", "args"});
  const nlohmann::json& params = args && args->is_object() ? *args : obj;

  const auto* code = field(params, {"stock_code", "code", "stock"});
  if (!code || !code->is_string()) return ParseError{"stock_code missing"};
  action.stock_code = code->get<std::string>();
  if (!universe.contains(action.stock_code)) return ParseError{"unknown ticker " + action.stock_code};

  const auto* qty = field(params, {"quantity", "qty", "shares"});
  if (!qty) return ParseError{"quantity missing"};
  if (qty->is_number_integer()) {
    action.quantity = qty->get<Quantity>();
  } else if (qty->is_string()) {
    const auto s = qty->get<std::string>();
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); })) {
      return ParseError{"quantity is not a whole number"};
    }
    action.quantity = std::stoll(s);
  } else {
    return ParseError{"quantity is not a whole number"};
  }
  if (action.quantity <= 0) return ParseError{"quantity must be positive"};

  const auto* price = field(params, {"price", "limit_price"});
  if (!price) return ParseError{"price missing"};
  try {
    if (price->is_number()) {
      action.price = Money::from_decimal(price->get<double>());
    } else if (price->is_string()) {
      action.price = Money::parse(price->get<std::string>());
    } else {
      return ParseError{"price is not a number"};
    }
  } catch (const std::invalid_argument&) {
    return ParseError{"price must have at most two decimals"};
  }
  if (action.price <= Money{}) return ParseError{"price must be positive"};
  return action;
}

}  // namespace

ParseResult parse_tool_calls(std::string_view model_output, const Registry& universe) {
  std::vector<TraderAction> actions;
  for (std::string_view block : brace_blocks(model_output)) {
    auto obj = nlohmann::json::parse(block, nullptr, /*allow_exceptions=*/false);
    if (obj.is_discarded() || !obj.is_object()) continue;
    if (!field(obj, {"tool", "name"})) continue;
    auto parsed = action_from_json(obj, universe);
    if (auto* err = std::get_if<ParseError>(&parsed)) return *err;
    actions.push_back(std::get<TraderAction>(std::move(parsed)));
  }
  if (actions.empty()) return ParseError{"no tool call found"};
  return actions;
}

std::string build_profile_prompt(const AgentAccount& account, const StrategyProfile& profile, ProfileMode mode,
                                 const CloseMap& closes) {
  std::string wallet = account.free_cash.str();
  if (account.reserved_cash > Money{}) {
    wallet += " available, " + account.reserved_cash.str() + " reserved by open orders";
  }

  std::string holdings;
  for (const auto& [code, qty] : account.holdings) {
    holdings += code + ": " + std::to_string(qty) + " shares";
    if (Quantity locked = qty - account.available_shares(code); locked > 0) {
      holdings += " (" + std::to_string(locked) + " reserved by open orders)";
    }
    holdings += "\n";
  }
  if (holdings.empty()) {
    holdings = "none";
  } else {
    holdings.pop_back();
  }

  Money total = total_assets(account, closes);
  std::string performance = "Total assets: " + total.str() + "; initial capital: " +
                            account.initial_capital.str() + "; return rate: " + percent(return_rate(account, closes));

  std::string description =
      mode == ProfileMode::full ? lowercase_first(profile.description) : std::string(prompts::kUniformInstruction);
  return prompts::render(prompts::kProfile, {{"strategy_description", description},
                                             {"wallet_cash", wallet},
                                             {"stocks_hold", holdings},
                                             {"performance", performance}});
}

std::string build_observation_prompt(const Observation& obs, ObservationMode mode) {
  std::map<std::string, std::string, std::less<>> vars{
      {"day", std::to_string(obs.day)},
      {"phase", phase(obs.round)},
      {"tools", std::string(prompts::kTools)},
  };

  if (mode == ObservationMode::price_only) {
    std::string prices;
    for (const auto& s : obs.stocks) prices += s.code + ": " + price_list(s.price_window) + "\n";
    vars["recent_prices"] = prices;
    return prompts::render(prompts::kObservationPriceOnly, vars);
  }

  std::string situation;
  for (const auto& s : obs.stocks) {
    situation += s.code + " (" + std::string(sector_label(s.sector)) + "): " + s.description + "\n";
    situation += "  closing prices: " + price_list(s.price_window) + "\n";
  }

  std::string orders;
  for (const auto& s : obs.stocks) {
    if (s.order_history.empty() && s.trades_today.empty()) continue;
    orders += s.code + ":\n";
    for (std::size_t i = 0; i < s.order_history.size(); ++i) {
      const auto& q = s.order_history[i];
      bool latest = i + 1 == s.order_history.size();
      orders += std::string(latest ? "  latest" : "  earlier") + " indicative orders: bids " + levels(q.bid_levels) +
                " | asks " + levels(q.ask_levels) + "\n";
    }
    if (!s.trades_today.empty()) {
      orders += "  executed today:";
      for (const auto& t : s.trades_today) orders += " " + std::to_string(t.quantity) + " @ " + t.price.str();
      orders += "\n";
    }
  }
  if (orders.empty()) orders = "none\n";

  std::string news;
  for (const auto& n : obs.news) {
    news += "- " + n.headline;
    if (!n.body.empty()) news += ": " + n.body;
    news += "\n";
  }
  if (news.empty()) news = "none\n";

  vars["market_situation"] = situation;
  vars["orders"] = orders;
  vars["news"] = news;
  return prompts::render(prompts::kObservationFull, vars);
}

std::string corrective_instruction(const ParseError& error) {
  return prompts::render(prompts::kCorrective, {{"reason", error.reason}});
}

CapDecision enforce_op_cap(AgentAccount& account, const TraderAction& action) {
  if (!action.is_trade()) return CapDecision::accept;
  int& ops = account.ops_today[action.stock_code];
  if (ops >= kMaxOpsPerStockPerDay) return CapDecision::reject;
  ++ops;
  return CapDecision::accept;
}

void reset_op_counters(AgentAccount& account) { account.ops_today.clear(); }

}  // namespace asfm
