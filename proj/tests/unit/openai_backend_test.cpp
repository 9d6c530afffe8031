#include <gtest/gtest.h>

#include "stub_server.hpp"
#include "test_support.hpp"
#include "weave/llm/openai_backend.hpp"

using namespace weave;
using namespace weave::llm;

namespace {

Gateway stub_gateway(const weave::testing::StubServer& server, std::optional<std::string> key = "test-key") {
    auto backend = std::make_shared<OpenAiBackend>(OpenAiBackend::Options{std::move(key), server.base_url()});
    return Gateway(backend, {}, [](std::chrono::milliseconds) {}, frozen_clock());
}

const std::vector<ChatMessage> kMessages{{Role::system, "be brief"}, {Role::user, "hi"}, {Role::tool, "tool out"}};

}  // namespace

TEST(OpenAiBackend, RequestBodyCarriesProfileParameters) {
    auto body = chat_request_body(gpt41_profile(), kMessages);
    EXPECT_EQ(body["model"], "gpt-4.1-2025-04-14");
    EXPECT_EQ(body["temperature"], 1.0);
    EXPECT_EQ(body["top_p"], 1.0);
    ASSERT_EQ(body["messages"].size(), 3u);
    EXPECT_EQ(body["messages"][2]["role"], "user");
}

TEST(OpenAiBackend, PostsToChatCompletionsWithBearerToken) {
    weave::testing::StubServer server;
    auto gw = stub_gateway(server);
    auto r = gw.complete(gpt41_profile(), kMessages);
    EXPECT_EQ(r.content, "stub reply");
    EXPECT_EQ(r.prompt_tokens, 21u);
    EXPECT_EQ(r.completion_tokens, 4u);
    auto reqs = server.requests();
    ASSERT_EQ(reqs.size(), 1u);
    EXPECT_EQ(reqs[0].path, "/v1/chat/completions");
    EXPECT_EQ(reqs[0].authorization, "Bearer test-key");
}

TEST(OpenAiBackend, ProfileBaseUrlIsUsedWithoutOverride) {
    weave::testing::StubServer server;
    auto backend = std::make_shared<OpenAiBackend>(OpenAiBackend::Options{});
    Gateway gw(backend, {}, [](auto) {}, frozen_clock());
    auto profile = gpt41_profile();
    profile.base_url = server.base_url();
    EXPECT_EQ(gw.complete(profile, kMessages).content, "stub reply");
    EXPECT_EQ(server.requests().at(0).authorization, "");
}

TEST(OpenAiBackend, Retries429ThenSucceeds) {
    weave::testing::StubServer server(429, 2);
    auto gw = stub_gateway(server);
    auto r = gw.complete(gpt41_profile(), kMessages);
    EXPECT_EQ(r.attempts, 3);
    EXPECT_EQ(server.requests().size(), 3u);
}

TEST(OpenAiBackend, StatusMapping) {
    {
        weave::testing::StubServer server(401, 100);
        auto gw = stub_gateway(server);
        EXPECT_THROW(gw.complete(gpt41_profile(), kMessages), AuthError);
        EXPECT_EQ(server.requests().size(), 1u);
    }
    {
        weave::testing::StubServer server(400, 100);
        auto gw = stub_gateway(server);
        EXPECT_THROW(gw.complete(gpt41_profile(), kMessages), RequestError);
    }
    {
        weave::testing::StubServer server(500, 100);
        auto gw = stub_gateway(server);
        auto profile = gpt41_profile();
        profile.max_retries = 1;
        EXPECT_THROW(gw.complete(profile, kMessages), RetriesExhausted);
        EXPECT_EQ(server.requests().size(), 2u);
    }
}

TEST(OpenAiBackend, InvalidBaseUrlIsRequestError) {
    auto backend = std::make_shared<OpenAiBackend>(OpenAiBackend::Options{std::nullopt, "not a url"});
    Gateway gw(backend, {}, [](auto) {}, frozen_clock());
    EXPECT_THROW(gw.complete(gpt41_profile(), kMessages), RequestError);
}
