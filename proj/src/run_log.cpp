#include "asfm/run_log.hpp"

#include <cstdio>
#include <functional>
#include <sstream>

#include <nlohmann/json.hpp>

#include "asfm/digest.hpp"

namespace asfm {

using ojson = nlohmann::ordered_json;

void for_each_line(std::string_view text, const std::function<void(std::string_view)>& fn) {
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) fn(line);
    start = end + 1;
  }
}

std::string order_line(const OrderRecord& o) {
  ojson j;
  j["day"] = o.day;
  j["round"] = o.round;
  j["order_id"] = o.order_id;
  j["seq"] = o.seq;
  j["agent_id"] = o.agent_id;
  j["stock_code"] = o.stock_code;
  j["side"] = to_string(o.side);
  j["quantity"] = o.quantity;
  j["price"] = o.limit.str();
  return j.dump();
}

OrderRecord order_from_line(std::string_view line) {
  auto j = nlohmann::json::parse(line);
  OrderRecord o;
  o.day = j.at("day").get<int>();
  o.round = j.at("round").get<int>();
  o.order_id = j.at("order_id").get<OrderId>();
  o.seq = j.at("seq").get<std::uint64_t>();
  o.agent_id = j.at("agent_id").get<std::string>();
  o.stock_code = j.at("stock_code").get<std::string>();
  o.side = side_from_string(j.at("side").get<std::string>());
  o.quantity = j.at("quantity").get<Quantity>();
  o.limit = Money::parse(j.at("price").get<std::string>());
  return o;
}

std::string trade_line(const Trade& t) {
  ojson j;
  j["day"] = t.day;
  j["seq"] = t.seq;
  j["stock"] = t.stock_code;
  j["price"] = t.price.str();
  j["qty"] = t.quantity;
  j["buy_order"] = t.buy_order_id;
  j["sell_order"] = t.sell_order_id;
  j["buyer"] = t.buyer_id;
  j["seller"] = t.seller_id;
  return j.dump();
}

Trade trade_from_line(std::string_view line) {
  auto j = nlohmann::json::parse(line);
  Trade t;
  t.day = j.at("day").get<int>();
  t.seq = j.at("seq").get<std::uint64_t>();
  t.stock_code = j.at("stock").get<std::string>();
  t.price = Money::parse(j.at("price").get<std::string>());
  t.quantity = j.at("qty").get<Quantity>();
  t.buy_order_id = j.at("buy_order").get<OrderId>();
  t.sell_order_id = j.at("sell_order").get<OrderId>();
  t.buyer_id = j.at("buyer").get<std::string>();
  t.seller_id = j.at("seller").get<std::string>();
  return t;
}

std::string closes_csv(const CloseTable& closes) {
  std::string out = "day";
  for (const auto& c : closes.codes) out += "," + c;
  out += "\n";
  for (std::size_t d = 0; d < closes.rows.size(); ++d) {
    out += std::to_string(d);
    for (Money m : closes.rows[d]) out += "," + m.str();
    out += "\n";
  }
  return out;
}

namespace {

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t end = line.find(sep, start);
    out.emplace_back(line.substr(start, end == std::string_view::npos ? line.npos : end - start));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

}  // namespace

CloseTable closes_from_csv(std::string_view text) {
  CloseTable t;
  bool header = true;
  for_each_line(text, [&](std::string_view line) {
    auto cells = split(line, ',');
    if (header) {
      if (cells.empty() || cells[0] != "day") throw std::runtime_error("closes.csv: bad header");
      t.codes.assign(cells.begin() + 1, cells.end());
      header = false;
      return;
    }
    if (cells.size() != t.codes.size() + 1) throw std::runtime_error("closes.csv: ragged row");
    if (std::stoi(cells[0]) != static_cast<int>(t.rows.size())) throw std::runtime_error("closes.csv: day gap");
    std::vector<Money> row;
    for (std::size_t i = 1; i < cells.size(); ++i) row.push_back(Money::parse(cells[i]));
    t.rows.push_back(std::move(row));
  });
  return t;
}

std::string format_ratio(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10f", x);
  return buf;
}

std::string metrics_csv(const std::vector<DayReport>& reports) {
  std::string out = "day,ON,OER,TR,VO,avg_return";
  if (!reports.empty()) {
    for (const auto& a : reports.front().agents) out += "," + a.agent_id;
  }
  out += "\n";
  for (const auto& r : reports) {
    out += std::to_string(r.day) + "," + std::to_string(r.order_number) + ",";
    if (r.order_execution_rate) out += format_ratio(*r.order_execution_rate);
    out += "," + format_ratio(r.turnover_rate) + "," + format_ratio(r.volatility_to_date) + "," +
           format_ratio(r.average_return);
    for (const auto& a : r.agents) out += "," + format_ratio(a.return_rate);
    out += "\n";
  }
  return out;
}

std::string agents_csv(const std::vector<DayReport>& reports, const std::map<std::string, std::string>& strategies) {
  std::string out = "day,agent_id,strategy,cash,total_assets,return_rate\n";
  for (const auto& r : reports) {
    for (const auto& a : r.agents) {
      auto it = strategies.find(a.agent_id);
      out += std::to_string(r.day) + "," + a.agent_id + "," + (it == strategies.end() ? "" : it->second) + "," +
             a.cash.str() + "," + a.total_assets.str() + "," + format_ratio(a.return_rate) + "\n";
    }
  }
  return out;
}

std::string manifest_json(const std::vector<std::pair<std::string, std::string>>& named_contents) {
  ojson j;
  ojson artifacts = ojson::object();
  for (const auto& [name, content] : named_contents) artifacts[name] = sha256_hex(content);
  j["artifacts"] = artifacts;
  return j.dump(2) + "\n";
}

std::map<std::string, std::string> manifest_digests(std::string_view manifest_text) {
  auto j = nlohmann::json::parse(manifest_text);
  std::map<std::string, std::string> out;
  for (const auto& [k, v] : j.at("artifacts").items()) out[k] = v.get<std::string>();
  return out;
}

RunRecords load_run_records(const std::filesystem::path& run_dir) {
  RunRecords r;
  for_each_line(read_file(run_dir / artifact::kOrders),
                [&](std::string_view line) { r.orders.push_back(order_from_line(line)); });
  for_each_line(read_file(run_dir / artifact::kTrades),
                [&](std::string_view line) { r.trades.push_back(trade_from_line(line)); });
  r.closes = closes_from_csv(read_file(run_dir / artifact::kCloses));
  auto reg = nlohmann::json::parse(read_file(run_dir / artifact::kRegistry));
  for (const auto& c : reg.at("companies")) {
    r.shares_outstanding[c.at("code").get<std::string>()] = c.at("shares_outstanding").get<Quantity>();
  }
  return r;
}

}  // namespace asfm
