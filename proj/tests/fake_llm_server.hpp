#pragma once

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <atomic>
#include <functional>
#include <regex>
#include <string>
#include <thread>

#include <nlohmann/json.hpp>

#include "asfm/money.hpp"
#include "asfm/rng.hpp"

namespace asfm::fake {

struct ChatCall {
  std::string model;
  std::string system;
  std::string user;
  std::string authorization;
};

struct ChatReply {
  int status = 200;
  std::string content;
};

/// Local OpenAI-compatible endpoint: POST <prefix>/chat/completions.
class FakeChatServer {
 public:
  using Handler = std::function<ChatReply(const ChatCall&, int call_index)>;

  explicit FakeChatServer(Handler handler, std::string prefix = "/v1") : handler_(std::move(handler)) {
    server_.Post(prefix + "/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
      auto body = nlohmann::json::parse(req.body);
      ChatCall call;
      call.model = body.value("model", std::string());
      call.authorization = req.get_header_value("Authorization");
      for (const auto& m : body.at("messages")) {
        if (m.at("role") == "system") call.system = m.at("content").get<std::string>();
        if (m.at("role") == "user") call.user = m.at("content").get<std::string>();
      }
      ChatReply reply = handler_(call, calls_++);
      res.status = reply.status;
      if (reply.status != 200) {
        res.set_content(R"({"error":{"message":"unavailable"}})", "application/json");
        return;
      }
      nlohmann::json out;
      out["id"] = "chatcmpl-local";
      out["object"] = "chat.completion";
      out["choices"] = nlohmann::json::array(
          {{{"index", 0}, {"message", {{"role", "assistant"}, {"content", reply.content}}}, {"finish_reason", "stop"}}});
      res.set_content(out.dump(), "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~FakeChatServer() {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }

  std::string base_url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1"; }
  int calls() const { return calls_; }

 private:
  Handler handler_;
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<int> calls_{0};
};

/// A stand-in model: picks one listed stock from the prompt by hashing it and
/// answers with a small Buy or Sell around the last close, Hold otherwise.
/// Every 9th call fails with HTTP 503 and every 13th answer is prose only, so
/// recordings include retried calls.
inline ChatReply scripted_trader(const ChatCall& call, int call_index) {
  if (call_index % 9 == 8) return {503, ""};
  if (call_index % 13 == 12) return {200, "Let me think about the market first."};
  static const std::regex kStock(R"(([A-Z]{2}\d{3}) \([^)]*\): [^\n]*\n  closing prices: \[[^\]]*?([0-9]+\.[0-9]{2})\])");
  std::vector<std::pair<std::string, std::string>> stocks;
  for (std::sregex_iterator it(call.user.begin(), call.user.end(), kStock), end; it != end; ++it) {
    stocks.emplace_back((*it)[1].str(), (*it)[2].str());
  }
  if (stocks.empty()) return {200, R"({"tool":"Hold"})"};
  Rng rng(fnv1a64(call.system + call.user));
  const auto& [code, last] = stocks[rng.below(stocks.size())];
  Money close = Money::parse(last);
  std::uint64_t roll = rng.below(3);
  if (roll == 2) return {200, R"({"tool":"Hold"})"};
  bool buy = roll == 0;
  Money price = close.scaled(buy ? 1.01 : 0.99);
  std::string content = "Reasoning done.\n{\"tool\":\"" + std::string(buy ? "Buy" : "Sell") + "\",\"stock_code\":\"" +
                        code + "\",\"quantity\":" + std::to_string(1 + rng.below(5)) + ",\"price\":" + price.str() +
                        "}";
  return {200, content};
}

}  // namespace asfm::fake
