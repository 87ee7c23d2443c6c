#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <nlohmann/json.hpp>

#include "asfm/gateway.hpp"

namespace asfm {

struct LiveTransport::Client {
  std::unique_ptr<httplib::Client> http;
  std::string path;
};

namespace {

/// Splits "https://host:port/v1" into ("https://host:port", "/v1").
std::pair<std::string, std::string> split_url(const std::string& url) {
  auto scheme_end = url.find("://");
  auto path_start = url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
  if (path_start == std::string::npos) return {url, ""};
  std::string path = url.substr(path_start);
  while (!path.empty() && path.back() == '/') path.pop_back();
  return {url.substr(0, path_start), path};
}

}  // namespace

LiveTransport::LiveTransport(LiveEndpoint endpoint) : endpoint_(std::move(endpoint)), client_(new Client) {
  auto [origin, prefix] = split_url(endpoint_.base_url);
  client_->http = std::make_unique<httplib::Client>(origin);
  client_->path = prefix + "/chat/completions";
  auto secs = std::chrono::duration_cast<std::chrono::seconds>(endpoint_.timeout);
  auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(endpoint_.timeout - secs);
  client_->http->set_connection_timeout(secs.count(), usecs.count());
  client_->http->set_read_timeout(secs.count(), usecs.count());
  client_->http->set_write_timeout(secs.count(), usecs.count());
  if (!endpoint_.api_key.empty()) client_->http->set_bearer_token_auth(endpoint_.api_key);
}

LiveTransport::~LiveTransport() = default;

TransportReply LiveTransport::send(const CompletionRequest& req) {
  nlohmann::json body;
  body["model"] = endpoint_.model;
  body["temperature"] = req.temperature;
  body["max_tokens"] = req.max_tokens;
  body["messages"] = nlohmann::json::array({
      {{"role", "system"}, {"content", req.system_text}},
      {{"role", "user"}, {"content", req.user_text}},
  });

  auto res = client_->http->Post(client_->path, body.dump(), "application/json");
  if (!res) {
    auto err = res.error();
    auto kind = err == httplib::Error::Read || err == httplib::Error::Write || err == httplib::Error::ConnectionTimeout
                    ? TransportError::Kind::timeout
                    : TransportError::Kind::remote;
    return TransportError{kind, httplib::to_string(err)};
  }
  if (res->status != 200) {
    return TransportError{TransportError::Kind::remote, "HTTP " + std::to_string(res->status)};
  }
  auto doc = nlohmann::json::parse(res->body, nullptr, false);
  if (doc.is_discarded()) return TransportError{TransportError::Kind::remote, "response is not JSON"};
  try {
    const auto& content = doc.at("choices").at(0).at("message").at("content");
    if (content.is_null()) return std::string{};
    return content.get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    return TransportError{TransportError::Kind::remote, std::string("unexpected response shape: ") + e.what()};
  }
}

}  // namespace asfm
