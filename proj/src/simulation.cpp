#include "asfm/simulation.hpp"

#include <algorithm>
#include <numeric>

#include <nlohmann/json.hpp>

#include "asfm/digest.hpp"
#include "asfm/prompt_templates.hpp"
#include "asfm/rng.hpp"
#include "asfm/run_log.hpp"

namespace asfm {

using ojson = nlohmann::ordered_json;

std::string_view to_string(TransportKind k) {
  switch (k) {
    case TransportKind::mock:
      return "mock";
    case TransportKind::live:
      return "live";
    case TransportKind::replay:
      return "replay";
  }
  return "mock";
}

TransportKind transport_kind_from_string(std::string_view s) {
  if (s == "mock") return TransportKind::mock;
  if (s == "live") return TransportKind::live;
  if (s == "replay") return TransportKind::replay;
  throw ConfigError("unknown transport: " + std::string(s));
}

namespace {

std::string_view pricing_name(ContinuousPricing p) { return p == ContinuousPricing::resting ? "resting" : "midpoint"; }

ContinuousPricing pricing_from_string(std::string_view s) {
  if (s == "resting") return ContinuousPricing::resting;
  if (s == "midpoint") return ContinuousPricing::midpoint;
  throw ConfigError("unknown continuous pricing: " + std::string(s));
}

std::string_view closing_name(ClosingRule r) { return r == ClosingRule::vwap ? "vwap" : "simple_average"; }

ClosingRule closing_from_string(std::string_view s) {
  if (s == "vwap") return ClosingRule::vwap;
  if (s == "simple_average") return ClosingRule::simple_average;
  throw ConfigError("unknown closing rule: " + std::string(s));
}

bool uses_llm(const RunConfig& c) { return c.scenario.policy_config.policy_backend == PolicyBackend::llm; }

}  // namespace

std::string RunConfig::run_id() const { return scenario.name + "-s" + std::to_string(seed); }

void RunConfig::validate() const {
  if (scenario.days < 1) throw ConfigError("days must be at least 1");
  if (scenario.population.total() < 1) throw EmptyPopulation();
  if (continuous_rounds < 0) throw ConfigError("continuous_rounds must not be negative");
  if (indicative_depth < 1) throw ConfigError("indicative_depth must be at least 1");
  if (order_history_length < 0) throw ConfigError("order_history_length must not be negative");
  if (max_tokens < 1) throw ConfigError("max_tokens must be positive");
  if (scenario.endowment_fraction < 0.0 || scenario.endowment_fraction >= 1.0) {
    throw ConfigError("endowment_fraction must lie in [0, 1)");
  }
  if (registry.size() == 0) throw ConfigError("registry is empty");
  if (uses_llm(*this) && transport == TransportKind::replay && !transcript_path && output_dir.empty()) {
    throw ConfigError("replay transport needs a transcript path");
  }
}

std::string config_to_json(const RunConfig& c) {
  ojson j;
  j["prompt_version"] = prompts::kVersion;
  j["run_id"] = c.run_id();
  j["seed"] = c.seed;
  j["transport"] = to_string(c.transport);
  j["continuous_rounds"] = c.continuous_rounds;
  j["indicative_depth"] = c.indicative_depth;
  j["order_history_length"] = c.order_history_length;
  j["continuous_pricing"] = pricing_name(c.continuous_pricing);
  j["closing_rule"] = closing_name(c.closing_rule);
  j["temperature"] = c.temperature;
  j["max_tokens"] = c.max_tokens;
  if (c.live_endpoint) {
    j["live_endpoint"] = {{"base_url", c.live_endpoint->base_url},
                          {"model", c.live_endpoint->model},
                          {"timeout_ms", c.live_endpoint->timeout.count()}};
  }
  j["scenario"] = ojson::parse(scenario_to_json(c.scenario));
  j["registry"] = ojson::parse(c.registry.to_json_text());
  return j.dump(2) + "\n";
}

RunConfig config_from_json(std::string_view text) {
  auto j = nlohmann::json::parse(text);
  RunConfig c;
  if (auto v = j.value("prompt_version", std::string(prompts::kVersion)); v != prompts::kVersion) {
    throw ConfigError("run was recorded with prompt templates " + v + ", this build has " +
                      std::string(prompts::kVersion));
  }
  c.scenario = scenario_from_json(j.at("scenario").dump());
  c.registry = Registry::from_json_text(j.at("registry").dump());
  c.seed = j.at("seed").get<std::uint64_t>();
  c.transport = transport_kind_from_string(j.value("transport", std::string("mock")));
  c.continuous_rounds = j.value("continuous_rounds", c.continuous_rounds);
  c.indicative_depth = j.value("indicative_depth", c.indicative_depth);
  c.order_history_length = j.value("order_history_length", c.order_history_length);
  c.continuous_pricing = pricing_from_string(j.value("continuous_pricing", std::string("resting")));
  c.closing_rule = closing_from_string(j.value("closing_rule", std::string("vwap")));
  c.temperature = j.value("temperature", c.temperature);
  c.max_tokens = j.value("max_tokens", c.max_tokens);
  if (auto it = j.find("live_endpoint"); it != j.end()) {
    LiveEndpoint e;
    e.base_url = it->at("base_url").get<std::string>();
    e.model = it->at("model").get<std::string>();
    e.timeout = std::chrono::milliseconds(it->value("timeout_ms", 60000LL));
    c.live_endpoint = e;
  }
  return c;
}

const std::string& RunLog::artifact(std::string_view name) const {
  for (const auto& [n, content] : artifacts) {
    if (n == name) return content;
  }
  throw std::out_of_range("no artifact named " + std::string(name));
}

struct Simulation::AgentTurn {
  std::size_t agent_index = 0;
  const Observation* observation = nullptr;
};

namespace {

Rng policy_rng(std::uint64_t seed, std::size_t agent_index, int day, int round) {
  return Rng::stream(seed, "policy", agent_index, static_cast<std::uint64_t>(day), static_cast<std::uint64_t>(round));
}

}  // namespace

Simulation::Simulation(RunConfig config) : config_(std::move(config)) {
  config_.validate();
  registry_ = config_.registry;
  accounts_ = build_population(config_.scenario.population);
  initial_endowment(accounts_, registry_, config_.scenario.endowment_fraction);
  initial_registry_ = registry_;
  for (std::size_t i = 0; i < accounts_.size(); ++i) agent_index_[accounts_[i].agent_id] = i;

  std::vector<Money> opening_row;
  for (const auto& c : registry_.companies()) {
    books_.emplace_back(c.code);
    records_.shares_outstanding[c.code] = c.shares_outstanding;
    records_.closes.codes.push_back(c.code);
    opening_row.push_back(c.last_close());
  }
  records_.closes.rows.push_back(std::move(opening_row));
  order_history_.resize(registry_.size());
  trades_today_.resize(registry_.size());
  initial_cash_ = total_cash();

  if (!uses_llm(config_)) return;
  switch (config_.transport) {
    case TransportKind::mock: {
      MockTransport::Responder responder = config_.mock_responder;
      if (!responder) {
        responder = [this](const CompletionRequest&) -> TransportReply {
          if (!current_turn_) return TransportError{TransportError::Kind::remote, "mock called outside a turn"};
          const auto& obs = *current_turn_->observation;
          const auto& acct = accounts_[current_turn_->agent_index];
          Rng rng = policy_rng(seed(), current_turn_->agent_index, obs.day, obs.round);
          std::string text;
          for (const auto& a : rule_policy_decide(strategy_profile(acct.strategy), obs, acct, rng,
                                                  config_.scenario.policy_config.params)) {
            text += to_wire(a) + "\n";
          }
          return text;
        };
      }
      transport_ = std::make_unique<MockTransport>(std::move(responder));
      break;
    }
    case TransportKind::live:
      transport_ = std::make_unique<LiveTransport>(config_.live_endpoint ? *config_.live_endpoint
                                                                         : LiveEndpoint::from_env());
      break;
    case TransportKind::replay: {
      auto path = config_.transcript_path ? *config_.transcript_path : config_.output_dir / artifact::kTranscript;
      transport_ = std::make_unique<ReplayTransport>(Transcript::load(path));
      break;
    }
  }
  gateway_ = std::make_unique<Gateway>(*transport_);
}

Simulation::~Simulation() = default;

Money Simulation::total_cash() const {
  Money sum;
  for (const auto& a : accounts_) sum += a.cash();
  return sum;
}

Quantity Simulation::total_holdings(std::string_view code) const {
  Quantity sum = 0;
  for (const auto& a : accounts_) sum += a.shares(code);
  return sum;
}

CloseMap Simulation::last_closes() const {
  CloseMap m;
  for (const auto& c : registry_.companies()) m.emplace(c.code, c.last_close());
  return m;
}

Observation Simulation::observe(int day, int round) const {
  Observation obs;
  obs.day = day;
  obs.round = round;
  obs.news = news_today_;
  auto companies = registry_.companies();
  for (std::size_t s = 0; s < companies.size(); ++s) {
    const auto& c = companies[s];
    StockView v;
    v.code = c.code;
    v.sector = c.sector;
    v.description = c.description;
    std::size_t n = std::min(kPriceWindow, c.price_history.size());
    v.price_window.assign(c.price_history.end() - static_cast<std::ptrdiff_t>(n), c.price_history.end());
    v.order_history.assign(order_history_[s].begin(), order_history_[s].end());
    for (const auto& t : trades_today_[s]) v.trades_today.push_back({t.price, t.quantity});
    obs.stocks.push_back(std::move(v));
  }
  return obs;
}

std::vector<TraderAction> Simulation::decide(std::size_t agent_index, int day, int round) {
  const auto& acct = accounts_[agent_index];
  const auto& policy = config_.scenario.policy_config;
  Observation obs = observe(day, round);
  const StrategyProfile& profile = strategy_profile(acct.strategy);
  std::string system_text = build_profile_prompt(acct, profile, policy.profile_mode, last_closes());
  std::string user_text = build_observation_prompt(obs, policy.observation_mode);
  prompts_.push_back({day, round, acct.agent_id, system_text, user_text});

  if (policy.policy_backend == PolicyBackend::rule_based) {
    Rng rng = policy_rng(seed(), agent_index, day, round);
    return rule_policy_decide(profile, obs, acct, rng, policy.params);
  }

  CompletionRequest req;
  req.system_text = std::move(system_text);
  req.user_text = std::move(user_text);
  req.temperature = config_.temperature;
  req.max_tokens = config_.max_tokens;
  req.tag = RequestTag{config_.run_id(), day, round, acct.agent_id, 1};

  AgentTurn turn{agent_index, &obs};
  current_turn_ = &turn;
  ActionOutcome outcome;
  try {
    outcome = action_with_retry(*gateway_, req, registry_);
  } catch (...) {
    current_turn_ = nullptr;
    throw;
  }
  current_turn_ = nullptr;
  if (outcome.fell_back) {
    std::string detail;
    for (const auto& f : outcome.failures) detail += (detail.empty() ? "" : "; ") + f;
    events_.push_back({day, round, acct.agent_id, TraderAction::hold(), "fallback_hold", std::nullopt, detail});
  }
  return outcome.actions;
}

void Simulation::settle(const std::vector<Trade>& trades) {
  for (const auto& t : trades) {
    settle_trade(accounts_[agent_index_.at(t.buyer_id)], accounts_[agent_index_.at(t.seller_id)], t);
    records_.trades.push_back(t);
    auto s = static_cast<std::size_t>(
        std::find(records_.closes.codes.begin(), records_.closes.codes.end(), t.stock_code) -
        records_.closes.codes.begin());
    trades_today_[s].push_back(t);
  }
  next_trade_seq_ += trades.size();
}

void Simulation::submit(std::size_t agent_index, const TraderAction& action, int day, int round) {
  if (!action.is_trade()) return;
  auto& acct = accounts_[agent_index];
  auto reject = [&](std::string status) {
    events_.push_back({day, round, acct.agent_id, action, std::move(status), std::nullopt, ""});
  };
  auto it = std::find(records_.closes.codes.begin(), records_.closes.codes.end(), action.stock_code);
  if (it == records_.closes.codes.end()) return reject("unknown_stock");
  auto s = static_cast<std::size_t>(it - records_.closes.codes.begin());

  if (enforce_op_cap(acct, action) == CapDecision::reject) return reject("op_cap_exceeded");

  Order order;
  order.id = next_order_id_;
  order.seq = next_order_id_;
  order.day = day;
  order.agent_id = acct.agent_id;
  order.stock_code = action.stock_code;
  order.side = action.tool == Tool::buy ? Side::buy : Side::sell;
  order.quantity = action.quantity;
  order.remaining = action.quantity;
  order.limit_price = action.price;

  if (would_self_cross(books_[s], order)) return reject("self_cross");
  if (auto st = reserve_for_order(acct, order); st != ReserveStatus::ok) return reject(std::string(to_string(st)));

  ++next_order_id_;
  records_.orders.push_back(
      {day, round, order.id, order.seq, order.agent_id, order.stock_code, order.side, order.quantity, order.limit_price});
  events_.push_back({day, round, acct.agent_id, action, "accepted", order.id, ""});

  if (round == 0) {
    books_[s].add(std::move(order));
    return;
  }
  auto result =
      continuous_match(std::move(books_[s]), std::move(order), {day, next_trade_seq_}, config_.continuous_pricing);
  books_[s] = std::move(result.book);
  settle(result.trades);
}

void Simulation::run_trading_day(int day) {
  if (day != days_completed() + 1) throw std::logic_error("trading days must run in order");
  for (auto& a : accounts_) reset_op_counters(a);
  news_today_ = news_for_day(config_.scenario.news_schedule, day);
  for (auto& t : trades_today_) t.clear();

  std::vector<std::size_t> order(accounts_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng::stream(seed(), "agent_order", static_cast<std::uint64_t>(day)).shuffle(std::span<std::size_t>(order));

  auto snapshot = [&] {
    for (std::size_t s = 0; s < books_.size(); ++s) {
      auto& hist = order_history_[s];
      hist.push_back(indicative_snapshot(books_[s], config_.indicative_depth));
      while (hist.size() > static_cast<std::size_t>(config_.order_history_length)) hist.pop_front();
    }
  };

  for (std::size_t idx : order) {
    for (const auto& a : decide(idx, day, 0)) submit(idx, a, day, 0);
  }
  for (auto& book : books_) {
    auto result = call_auction(std::move(book), {day, next_trade_seq_});
    book = std::move(result.residual_book);
    settle(result.trades);
  }
  for (int r = 1; r <= config_.continuous_rounds; ++r) {
    snapshot();
    for (std::size_t idx : order) {
      for (const auto& a : decide(idx, day, r)) submit(idx, a, day, r);
    }
  }
  if (config_.continuous_rounds == 0) snapshot();
  for (auto& book : books_) {
    for (const auto& o : book.drain()) release_order(accounts_[agent_index_.at(o.agent_id)], o.id);
  }

  std::vector<Money> row;
  auto companies = registry_.companies();
  for (std::size_t s = 0; s < companies.size(); ++s) {
    Money close = closing_price(trades_today_[s], companies[s].last_close(), config_.closing_rule);
    companies[s].price_history.push_back(close);
    row.push_back(close);
  }
  records_.closes.rows.push_back(std::move(row));

  DayReport report = market_day_report(records_, day);
  CloseMap closes = last_closes();
  for (const auto& a : accounts_) {
    report.agents.push_back({a.agent_id, a.cash(), total_assets(a, closes), return_rate(a, closes)});
  }
  reports_.push_back(std::move(report));
  if (on_day_end) on_day_end(*this, day);
}

namespace {

ojson number_or_null(const std::optional<double>& x) { return x ? ojson(*x) : ojson(nullptr); }

std::string event_line(const ActionEvent& e) {
  ojson j;
  j["day"] = e.day;
  j["round"] = e.round;
  j["agent_id"] = e.agent_id;
  j["tool"] = to_string(e.action.tool);
  if (e.action.is_trade()) {
    j["stock_code"] = e.action.stock_code;
    j["quantity"] = e.action.quantity;
    j["price"] = e.action.price.str();
  }
  j["status"] = e.status;
  if (e.order_id) j["order_id"] = *e.order_id;
  if (!e.detail.empty()) j["detail"] = e.detail;
  return j.dump();
}

std::string prompt_line(const PromptRecord& p) {
  ojson j;
  j["day"] = p.day;
  j["round"] = p.round;
  j["agent_id"] = p.agent_id;
  j["system"] = p.system_text;
  j["user"] = p.user_text;
  return j.dump();
}

}  // namespace

RunLog Simulation::run() {
  for (int d = days_completed() + 1; d <= config_.scenario.days; ++d) run_trading_day(d);

  RunLog log;
  log.reports = reports_;
  log.headline = headline_metrics(records_, {1, days_completed()});

  auto joined = [](const auto& items, auto&& fn) {
    std::string out;
    for (const auto& x : items) out += fn(x) + "\n";
    return out;
  };

  std::map<std::string, std::string> strategies;
  for (const auto& a : accounts_) strategies[a.agent_id] = std::string(to_string(a.strategy));

  ojson summary;
  summary["run_id"] = config_.run_id();
  summary["scenario"] = config_.scenario.name;
  summary["seed"] = config_.seed;
  summary["days"] = days_completed();
  summary["headline"] = {{"ON", log.headline.order_number},
                         {"OER", number_or_null(log.headline.order_execution_rate)},
                         {"OER_orders", number_or_null(log.headline.order_count_execution_rate)},
                         {"TR", log.headline.turnover_rate},
                         {"VO", log.headline.volatility},
                         {"avg_return", log.headline.average_return}};
  ojson finals = ojson::object();
  ojson by_strategy = ojson::object();
  if (!reports_.empty()) {
    std::map<std::string, std::pair<double, int>> sums;
    for (const auto& a : reports_.back().agents) {
      finals[a.agent_id] = a.return_rate;
      auto& [sum, n] = sums[strategies[a.agent_id]];
      sum += a.return_rate;
      ++n;
    }
    for (Strategy s : kAllStrategies) {
      auto it = sums.find(std::string(to_string(s)));
      if (it != sums.end()) by_strategy[std::string(to_string(s))] = it->second.first / it->second.second;
    }
  }
  summary["final_returns"] = finals;
  summary["final_returns_by_strategy"] = by_strategy;

  auto& art = log.artifacts;
  art.emplace_back(artifact::kConfig, config_to_json(config_));
  art.emplace_back(artifact::kRegistry, registry_.to_json_text());
  art.emplace_back(artifact::kOrders, joined(records_.orders, [](const OrderRecord& o) { return order_line(o); }));
  art.emplace_back(artifact::kActions, joined(events_, event_line));
  art.emplace_back(artifact::kTrades, joined(records_.trades, [](const Trade& t) { return trade_line(t); }));
  art.emplace_back(artifact::kCloses, closes_csv(records_.closes));
  art.emplace_back(artifact::kMetrics, metrics_csv(reports_));
  art.emplace_back(artifact::kAgents, agents_csv(reports_, strategies));
  art.emplace_back(artifact::kPrompts, joined(prompts_, prompt_line));
  if (gateway_) art.emplace_back(artifact::kTranscript, gateway_->transcript().to_jsonl());
  art.emplace_back(artifact::kSummary, summary.dump(2) + "\n");

  if (!config_.output_dir.empty()) {
    std::filesystem::create_directories(config_.output_dir);
    for (const auto& [name, content] : art) write_file(config_.output_dir / name, content);
    write_file(config_.output_dir / artifact::kManifest, manifest_json(art));
  }
  return log;
}

RunLog run_simulation(RunConfig config) { return Simulation(std::move(config)).run(); }

namespace {

VerifyReport failure(std::string stage, std::string artifact_name, std::string detail) {
  VerifyReport r;
  r.ok = false;
  r.stage = std::move(stage);
  r.artifact = std::move(artifact_name);
  r.detail = std::move(detail);
  return r;
}

std::vector<std::string> lines_of(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    out.emplace_back(text.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

/// Locates the first differing line and reads its day and stock where the format allows.
void locate_divergence(VerifyReport& report, std::string_view recorded, std::string_view replayed) {
  auto a = lines_of(recorded);
  auto b = lines_of(replayed);
  std::size_t i = 0;
  while (i < a.size() && i < b.size() && a[i] == b[i]) ++i;
  const std::string& line = i < b.size() ? b[i] : (i < a.size() ? a[i] : std::string());
  report.detail = "first difference at line " + std::to_string(i + 1);
  if (line.empty()) return;
  if (line.front() == '{') {
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) return;
    if (auto it = j.find("day"); it != j.end() && it->is_number_integer()) report.day = it->get<int>();
    for (const char* key : {"stock", "stock_code"}) {
      if (auto it = j.find(key); it != j.end() && it->is_string()) report.stock = it->get<std::string>();
    }
    return;
  }
  std::size_t comma = line.find(',');
  std::string first = line.substr(0, comma);
  if (!first.empty() && std::all_of(first.begin(), first.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    report.day = std::stoi(first);
  }
  if (report.day && i < a.size() && i < b.size() && !a.empty()) {
    auto header = lines_of(recorded).front();
    auto split = [](const std::string& s) {
      std::vector<std::string> cells;
      std::size_t start = 0;
      for (;;) {
        std::size_t end = s.find(',', start);
        cells.push_back(s.substr(start, end == std::string::npos ? std::string::npos : end - start));
        if (end == std::string::npos) break;
        start = end + 1;
      }
      return cells;
    };
    auto h = split(header), ca = split(a[i]), cb = split(b[i]);
    for (std::size_t k = 1; k < std::min({h.size(), ca.size(), cb.size()}); ++k) {
      if (ca[k] != cb[k]) {
        report.stock = h[k];
        break;
      }
    }
  }
}

}  // namespace

VerifyReport verify_replay(const std::filesystem::path& run_dir) {
  std::map<std::string, std::string> manifest;
  try {
    manifest = manifest_digests(read_file(run_dir / artifact::kManifest));
  } catch (const std::exception& e) {
    return failure("config", std::string(artifact::kManifest), e.what());
  }

  for (const auto& [name, digest] : manifest) {
    std::string content;
    try {
      content = read_file(run_dir / name);
    } catch (const std::exception& e) {
      return failure(name == artifact::kConfig ? "config" : "artifact", name, e.what());
    }
    if (sha256_hex(content) == digest) continue;
    if (name == artifact::kConfig) return failure("config", name, "config snapshot does not match its recorded digest");
    if (name == artifact::kTranscript) {
      auto tampered = Transcript::tampered_tags(content);
      auto r = failure("transcript", name, "transcript does not match its recorded digest");
      if (!tampered.empty()) {
        r.tag = tampered.front();
        r.detail = "record edited after recording: " + tampered.front();
      }
      return r;
    }
    return failure("artifact", name, "file on disk does not match its recorded digest");
  }

  RunConfig config;
  try {
    config = config_from_json(read_file(run_dir / artifact::kConfig));
  } catch (const std::exception& e) {
    return failure("config", std::string(artifact::kConfig), e.what());
  }
  if (uses_llm(config)) {
    config.transport = TransportKind::replay;
    config.transcript_path = run_dir / artifact::kTranscript;
  }
  config.live_endpoint.reset();

  RunLog log;
  try {
    log = run_simulation(config);
  } catch (const ReplayMiss& e) {
    auto r = failure("execution", std::string(artifact::kTranscript), e.what());
    r.tag = e.tag_key;
    return r;
  } catch (const DriftDetected& e) {
    auto r = failure("execution", std::string(artifact::kTranscript), e.what());
    r.tag = e.tag_key;
    return r;
  } catch (const std::exception& e) {
    return failure("execution", "", e.what());
  }

  for (const auto& [name, content] : log.artifacts) {
    if (name == artifact::kConfig) continue;
    auto it = manifest.find(name);
    if (it == manifest.end()) return failure("artifact", name, "artifact missing from manifest");
    if (sha256_hex(content) == it->second) continue;
    auto r = failure("artifact", name, "");
    locate_divergence(r, read_file(run_dir / name), content);
    return r;
  }
  return {};
}

}  // namespace asfm
