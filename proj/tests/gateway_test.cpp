#include <gtest/gtest.h>

#include <chrono>

#include "asfm/gateway.hpp"
#include "fake_llm_server.hpp"

using namespace asfm;

namespace {

CompletionRequest request(std::string user = "observe", int day = 1) {
  CompletionRequest r;
  r.system_text = "profile";
  r.user_text = std::move(user);
  r.tag = {"run", day, 0, "agent1", 1};
  return r;
}

const Registry& universe() {
  static const Registry r = Registry::default_universe();
  return r;
}

const std::string kValid = R"({"tool":"Buy","stock_code":"EN001","quantity":10,"price":10.25})";

}  // namespace

TEST(Gateway, RetriesTransportErrorsAndRecords) {
  int calls = 0;
  MockTransport mock([&](const CompletionRequest&) -> TransportReply {
    if (++calls <= 2) return TransportError{TransportError::Kind::timeout, "timed out"};
    return kValid;
  });
  Gateway g(mock);
  EXPECT_EQ(g.complete(request()), kValid);
  ASSERT_EQ(g.attempts().size(), 3u);
  EXPECT_TRUE(g.attempts()[0].error);
  EXPECT_TRUE(g.attempts()[1].error);
  EXPECT_FALSE(g.attempts()[2].error);
  ASSERT_EQ(g.transcript().records().size(), 1u);
  EXPECT_EQ(g.transcript().records()[0].response, kValid);
}

TEST(Gateway, GivesUpAfterThreeTransportFailures) {
  MockTransport mock([](const CompletionRequest&) -> TransportReply {
    return TransportError{TransportError::Kind::remote, "HTTP 500"};
  });
  Gateway g(mock);
  EXPECT_THROW(g.complete(request()), GatewayFailure);
  EXPECT_EQ(g.attempts().size(), 3u);
  ASSERT_EQ(g.transcript().records().size(), 1u);
  EXPECT_TRUE(g.transcript().records()[0].failure);

  auto outcome = action_with_retry(g, request("again"), universe());
  EXPECT_TRUE(outcome.fell_back);
  EXPECT_EQ(outcome.actions, std::vector<TraderAction>{TraderAction::hold()});
}

TEST(Gateway, ParseRetriesWithCorrectiveInstruction) {
  std::vector<std::string> seen;
  int calls = 0;
  MockTransport mock([&](const CompletionRequest& r) -> TransportReply {
    seen.push_back(r.user_text);
    return ++calls <= 2 ? std::string("garbage") : kValid;
  });
  Gateway g(mock);
  auto outcome = action_with_retry(g, request(), universe());
  EXPECT_FALSE(outcome.fell_back);
  EXPECT_EQ(outcome.attempts, 3);
  ASSERT_EQ(outcome.actions.size(), 1u);
  EXPECT_EQ(outcome.actions[0].quantity, 10);
  ASSERT_EQ(seen.size(), 3u);
  EXPECT_EQ(seen[0], "observe");
  EXPECT_NE(seen[1].find("could not be executed"), std::string::npos);
  EXPECT_EQ(g.transcript().records().size(), 3u);
  EXPECT_EQ(g.transcript().records()[2].tag.attempt, 3);
}

TEST(Gateway, FirstValidResponseIsOneAttempt) {
  MockTransport mock([](const CompletionRequest&) -> TransportReply { return kValid; });
  Gateway g(mock);
  auto outcome = action_with_retry(g, request(), universe());
  EXPECT_EQ(outcome.attempts, 1);
  EXPECT_FALSE(outcome.fell_back);
}

TEST(Gateway, ThreeGarbageResponsesFallBackToHold) {
  MockTransport mock([](const CompletionRequest&) -> TransportReply { return std::string("nope"); });
  Gateway g(mock);
  auto outcome = action_with_retry(g, request(), universe());
  EXPECT_TRUE(outcome.fell_back);
  EXPECT_EQ(outcome.attempts, 3);
  EXPECT_EQ(outcome.failures.size(), 3u);
  EXPECT_EQ(outcome.actions, std::vector<TraderAction>{TraderAction::hold()});
}

TEST(Replay, ServesRecordedResponsesAndDetectsDrift) {
  MockTransport mock([](const CompletionRequest& r) -> TransportReply { return "echo:" + r.user_text; });
  Gateway recorder(mock);
  recorder.complete(request("a", 1));
  recorder.complete(request("b", 2));

  Transcript t = Transcript::from_jsonl(recorder.transcript().to_jsonl());
  EXPECT_EQ(t.to_jsonl(), recorder.transcript().to_jsonl());
  ReplayTransport replay(t);
  Gateway g(replay);
  EXPECT_EQ(g.complete(request("a", 1)), "echo:a");
  EXPECT_THROW(g.complete(request("changed", 2)), DriftDetected);
  EXPECT_THROW(g.complete(request("a", 3)), ReplayMiss);
}

TEST(Replay, ReplaysRecordedFailures) {
  MockTransport mock([](const CompletionRequest&) -> TransportReply {
    return TransportError{TransportError::Kind::timeout, "slow"};
  });
  Gateway recorder(mock);
  EXPECT_THROW(recorder.complete(request()), GatewayFailure);
  ReplayTransport replay(Transcript::from_jsonl(recorder.transcript().to_jsonl()));
  Gateway g(replay);
  EXPECT_THROW(g.complete(request()), GatewayFailure);
  EXPECT_EQ(g.transcript().to_jsonl(), recorder.transcript().to_jsonl());
}

TEST(Transcript, TamperedLinesAreNamed) {
  MockTransport mock([](const CompletionRequest& r) -> TransportReply { return "echo:" + r.user_text; });
  Gateway g(mock);
  g.complete(request("a", 1));
  g.complete(request("b", 2));
  std::string text = g.transcript().to_jsonl();
  EXPECT_TRUE(Transcript::tampered_tags(text).empty());
  auto pos = text.find("echo:b");
  text.replace(pos, 6, "echo:c");
  auto tags = Transcript::tampered_tags(text);
  ASSERT_EQ(tags.size(), 1u);
  EXPECT_EQ(tags[0], "run/d2/r0/agent1/a1");
}

TEST(RequestTag, KeyFormat) {
  EXPECT_EQ((RequestTag{"baseline-s1", 3, 2, "agent7", 2}.key()), "baseline-s1/d3/r2/agent7/a2");
}

TEST(LiveTransport, TalksToChatCompletionsEndpoint) {
  fake::FakeChatServer server([](const fake::ChatCall& call, int) -> fake::ChatReply {
    if (call.model != "local-model" || call.authorization != "Bearer secret") return {401, ""};
    return {200, "sys=" + call.system + " user=" + call.user};
  });
  LiveTransport live({server.base_url(), "secret", "local-model", std::chrono::milliseconds(5000)});
  TransportReply reply = live.send(request("hello"));
  ASSERT_TRUE(std::holds_alternative<std::string>(reply));
  EXPECT_EQ(std::get<std::string>(reply), "sys=profile user=hello");
}

TEST(LiveTransport, HttpErrorsBecomeTransportErrors) {
  fake::FakeChatServer server([](const fake::ChatCall&, int i) -> fake::ChatReply {
    return i < 2 ? fake::ChatReply{503, ""} : fake::ChatReply{200, kValid};
  });
  LiveTransport live({server.base_url(), "", "m", std::chrono::milliseconds(5000)});
  Gateway g(live);
  EXPECT_EQ(g.complete(request()), kValid);
  EXPECT_EQ(g.attempts().size(), 3u);
  EXPECT_EQ(server.calls(), 3);
}

TEST(LiveTransport, UnreachableEndpointIsRemoteOrTimeoutError) {
  LiveTransport live({"http://127.0.0.1:1/v1", "", "m", std::chrono::milliseconds(500)});
  TransportReply reply = live.send(request());
  EXPECT_TRUE(std::holds_alternative<TransportError>(reply));
}

TEST(LiveEndpoint, ReadsEnvironment) {
  ::setenv("ASFM_LLM_URL", "http://localhost:8000/v1", 1);
  ::setenv("ASFM_LLM_MODEL", "m", 1);
  ::setenv("ASFM_LLM_TIMEOUT_MS", "1500", 1);
  LiveEndpoint e = LiveEndpoint::from_env();
  EXPECT_EQ(e.base_url, "http://localhost:8000/v1");
  EXPECT_EQ(e.timeout, std::chrono::milliseconds(1500));
  ::unsetenv("ASFM_LLM_URL");
  EXPECT_THROW(LiveEndpoint::from_env(), std::runtime_error);
}
