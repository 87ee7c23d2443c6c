#include "asfm/gateway.hpp"

#include <cstdlib>
#include <sstream>

#include <nlohmann/json.hpp>

#include "asfm/digest.hpp"

namespace asfm {

std::string RequestTag::key() const {
  return run_id + "/d" + std::to_string(day) + "/r" + std::to_string(round) + "/" + agent_id + "/a" +
         std::to_string(attempt);
}

std::string request_digest(const CompletionRequest& req) {
  nlohmann::ordered_json j;
  j["system"] = req.system_text;
  j["user"] = req.user_text;
  j["temperature"] = req.temperature;
  j["max_tokens"] = req.max_tokens;
  return sha256_hex(j.dump());
}

namespace {

std::string_view kind_name(TransportError::Kind k) { return k == TransportError::Kind::timeout ? "timeout" : "remote"; }

}  // namespace

std::string TranscriptRecord::record_digest() const {
  std::string failure_text = failure ? std::string(kind_name(failure->kind)) + ":" + failure->message : "";
  return sha256_hex(tag.key() + "\n" + request_digest + "\n" + response + "\n" + failure_text);
}

namespace {

nlohmann::ordered_json record_json(const TranscriptRecord& r) {
  nlohmann::ordered_json j;
  j["tag"] = {{"run_id", r.tag.run_id},
              {"day", r.tag.day},
              {"round", r.tag.round},
              {"agent_id", r.tag.agent_id},
              {"attempt", r.tag.attempt}};
  j["key"] = r.tag.key();
  j["request_digest"] = r.request_digest;
  j["response"] = r.response;
  if (r.failure) j["failure"] = {{"kind", kind_name(r.failure->kind)}, {"message", r.failure->message}};
  j["record_digest"] = r.record_digest();
  return j;
}

TranscriptRecord record_from_json(const nlohmann::json& j) {
  TranscriptRecord r;
  const auto& t = j.at("tag");
  r.tag.run_id = t.at("run_id").get<std::string>();
  r.tag.day = t.at("day").get<int>();
  r.tag.round = t.at("round").get<int>();
  r.tag.agent_id = t.at("agent_id").get<std::string>();
  r.tag.attempt = t.at("attempt").get<int>();
  r.request_digest = j.at("request_digest").get<std::string>();
  r.response = j.at("response").get<std::string>();
  if (auto it = j.find("failure"); it != j.end()) {
    r.failure = TransportError{it->at("kind").get<std::string>() == "timeout" ? TransportError::Kind::timeout
                                                                             : TransportError::Kind::remote,
                               it->at("message").get<std::string>()};
  }
  return r;
}

template <typename F>
void for_each_line(std::string_view text, F&& fn) {
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    if (!line.empty()) fn(line);
    start = end + 1;
  }
}

}  // namespace

void Transcript::append(TranscriptRecord record) {
  index_[record.tag.key()] = records_.size();
  records_.push_back(std::move(record));
}

const TranscriptRecord* Transcript::find(const std::string& tag_key) const {
  auto it = index_.find(tag_key);
  return it == index_.end() ? nullptr : &records_[it->second];
}

std::string Transcript::to_jsonl() const {
  std::string out;
  for (const auto& r : records_) out += record_json(r).dump() + "\n";
  return out;
}

Transcript Transcript::from_jsonl(std::string_view text) {
  Transcript t;
  for_each_line(text, [&](std::string_view line) { t.append(record_from_json(nlohmann::json::parse(line))); });
  return t;
}

Transcript Transcript::load(const std::filesystem::path& path) { return from_jsonl(read_file(path)); }

std::vector<std::string> Transcript::tampered_tags(std::string_view jsonl) {
  std::vector<std::string> out;
  for_each_line(jsonl, [&](std::string_view line) {
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      out.push_back("<unparseable line>");
      return;
    }
    std::string key = j.value("key", std::string("<no key>"));
    try {
      TranscriptRecord r = record_from_json(j);
      if (r.tag.key() != key || r.record_digest() != j.value("record_digest", std::string())) out.push_back(key);
    } catch (const nlohmann::json::exception&) {
      out.push_back(key);
    }
  });
  return out;
}

TransportReply ReplayTransport::send(const CompletionRequest& req) {
  std::string key = req.tag.key();
  const TranscriptRecord* rec = transcript_.find(key);
  if (!rec) throw ReplayMiss(key);
  if (rec->request_digest != request_digest(req)) throw DriftDetected(key);
  if (rec->failure) return *rec->failure;
  return rec->response;
}

LiveEndpoint LiveEndpoint::from_env() {
  auto env = [](const char* name) -> std::string {
    const char* v = std::getenv(name);
    return v ? v : "";
  };
  LiveEndpoint e;
  e.base_url = env("ASFM_LLM_URL");
  e.api_key = env("ASFM_LLM_API_KEY");
  e.model = env("ASFM_LLM_MODEL");
  if (auto t = env("ASFM_LLM_TIMEOUT_MS"); !t.empty()) e.timeout = std::chrono::milliseconds(std::stoll(t));
  if (e.base_url.empty()) throw std::runtime_error("ASFM_LLM_URL is not set");
  if (e.model.empty()) throw std::runtime_error("ASFM_LLM_MODEL is not set");
  return e;
}

std::string Gateway::complete(const CompletionRequest& req) {
  TransportError last;
  for (int attempt = 1; attempt <= max_tries_; ++attempt) {
    TransportReply reply = transport_.send(req);
    if (auto* text = std::get_if<std::string>(&reply)) {
      attempts_.push_back({req.tag.key(), attempt, std::nullopt});
      transcript_.append({req.tag, request_digest(req), *text});
      return *text;
    }
    last = std::get<TransportError>(reply);
    attempts_.push_back({req.tag.key(), attempt, last});
  }
  transcript_.append({req.tag, request_digest(req), "", last});
  throw GatewayFailure("giving up on " + req.tag.key() + " after " + std::to_string(max_tries_) +
                           " tries: " + last.message,
                       last);
}

ActionOutcome action_with_retry(Gateway& gateway, const CompletionRequest& request, const Registry& universe) {
  ActionOutcome out;
  CompletionRequest req = request;
  for (int attempt = 1; attempt <= 1 + kMaxParseRetries; ++attempt) {
    req.tag.attempt = attempt;
    out.attempts = attempt;
    std::string response;
    try {
      response = gateway.complete(req);
    } catch (const GatewayFailure& e) {
      out.failures.push_back(e.what());
      break;
    }
    ParseResult parsed = parse_tool_calls(response, universe);
    if (auto* actions = std::get_if<std::vector<TraderAction>>(&parsed)) {
      out.actions = std::move(*actions);
      return out;
    }
    const auto& err = std::get<ParseError>(parsed);
    out.failures.push_back(err.reason);
    req.user_text = request.user_text + "\n" + corrective_instruction(err);
  }
  out.fell_back = true;
  out.actions = {TraderAction::hold()};
  return out;
}

}  // namespace asfm
