#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "asfm/agents.hpp"

namespace asfm {

/// Identifies one model call within a run.
struct RequestTag {
  std::string run_id;
  int day = 0;
  int round = 0;
  std::string agent_id;
  int attempt = 1;

  /// "run_id/d<day>/r<round>/<agent_id>/a<attempt>"
  std::string key() const;
  bool operator==(const RequestTag&) const = default;
};

struct CompletionRequest {
  std::string system_text;
  std::string user_text;
  double temperature = 0.0;
  int max_tokens = 1024;
  RequestTag tag;
};

/// SHA-256 over the exact request text and sampling settings.
std::string request_digest(const CompletionRequest& req);

struct TransportError {
  enum class Kind { timeout, remote };
  Kind kind = Kind::remote;
  std::string message;
};

using TransportReply = std::variant<std::string, TransportError>;

class Transport {
 public:
  virtual ~Transport() = default;
  virtual TransportReply send(const CompletionRequest& req) = 0;
  virtual std::string_view name() const = 0;
};

/// Scripted responder: a pure function of the request (tag and text).
class MockTransport final : public Transport {
 public:
  using Responder = std::function<TransportReply(const CompletionRequest&)>;

  explicit MockTransport(Responder responder) : responder_(std::move(responder)) {}

  TransportReply send(const CompletionRequest& req) override { return responder_(req); }
  std::string_view name() const override { return "mock"; }

 private:
  Responder responder_;
};

struct TranscriptRecord {
  RequestTag tag;
  std::string request_digest;
  std::string response;
  /// Set when every transport try failed; `response` then holds the error.
  std::optional<TransportError> failure;

  /// Digest binding tag, request digest and response together.
  std::string record_digest() const;
};

/// Append-only log of model responses keyed by request tag.
class Transcript {
 public:
  void append(TranscriptRecord record);
  const TranscriptRecord* find(const std::string& tag_key) const;
  const std::vector<TranscriptRecord>& records() const { return records_; }

  /// One JSON object per line.
  std::string to_jsonl() const;
  static Transcript from_jsonl(std::string_view text);
  static Transcript load(const std::filesystem::path& path);

  /// Tag keys of lines whose stored record digest no longer matches their
  /// content (hand-edited lines).
  static std::vector<std::string> tampered_tags(std::string_view jsonl);

 private:
  std::vector<TranscriptRecord> records_;
  std::map<std::string, std::size_t> index_;
};

class ReplayMiss : public std::runtime_error {
 public:
  explicit ReplayMiss(const std::string& tag)
      : std::runtime_error("no transcript record for " + tag), tag_key(tag) {}
  std::string tag_key;
};

class DriftDetected : public std::runtime_error {
 public:
  explicit DriftDetected(const std::string& tag)
      : std::runtime_error("request text changed since recording for " + tag), tag_key(tag) {}
  std::string tag_key;
};

/// Serves stored responses; the request digest must match the recording.
class ReplayTransport final : public Transport {
 public:
  explicit ReplayTransport(Transcript transcript) : transcript_(std::move(transcript)) {}

  TransportReply send(const CompletionRequest& req) override;
  std::string_view name() const override { return "replay"; }

 private:
  Transcript transcript_;
};

struct LiveEndpoint {
  std::string base_url;  // e.g. http://localhost:8000/v1
  std::string api_key;
  std::string model;
  std::chrono::milliseconds timeout{60000};

  /// Reads ASFM_LLM_URL, ASFM_LLM_API_KEY, ASFM_LLM_MODEL and
  /// ASFM_LLM_TIMEOUT_MS. Throws if the URL or model is unset.
  static LiveEndpoint from_env();
};

/// OpenAI-compatible chat-completions client.
class LiveTransport final : public Transport {
 public:
  explicit LiveTransport(LiveEndpoint endpoint);
  ~LiveTransport() override;

  TransportReply send(const CompletionRequest& req) override;
  std::string_view name() const override { return "live"; }

 private:
  struct Client;
  LiveEndpoint endpoint_;
  std::unique_ptr<Client> client_;
};

class GatewayFailure : public std::runtime_error {
 public:
  GatewayFailure(const std::string& what, TransportError last) : std::runtime_error(what), last_error(last) {}
  TransportError last_error;
};

struct GatewayAttempt {
  std::string tag_key;
  int transport_try = 0;
  std::optional<TransportError> error;
};

/// Runs requests through a transport with bounded retries on transport
/// errors and records every successful response.
class Gateway {
 public:
  Gateway(Transport& transport, int max_transport_tries = 3) : transport_(transport), max_tries_(max_transport_tries) {}

  /// Throws GatewayFailure after exhausting retries; ReplayMiss and
  /// DriftDetected propagate unchanged.
  std::string complete(const CompletionRequest& req);

  const Transcript& transcript() const { return transcript_; }
  const std::vector<GatewayAttempt>& attempts() const { return attempts_; }
  Transport& transport() { return transport_; }

 private:
  Transport& transport_;
  int max_tries_;
  Transcript transcript_;
  std::vector<GatewayAttempt> attempts_;
};

struct ActionOutcome {
  std::vector<TraderAction> actions;
  int attempts = 0;
  bool fell_back = false;
  std::vector<std::string> failures;  // one reason per failed attempt
};

inline constexpr int kMaxParseRetries = 2;

/// Asks the model for actions; a response that does not parse is retried up
/// to two times with a corrective instruction appended. After that, or after
/// a transport failure, the agent holds.
ActionOutcome action_with_retry(Gateway& gateway, const CompletionRequest& request, const Registry& universe);

}  // namespace asfm
