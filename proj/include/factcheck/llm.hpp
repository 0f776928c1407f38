#pragma once

#include <deque>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>

#include "factcheck/types.hpp"

namespace factcheck::llm {

struct ChatRequest {
    ClaimId claim_id = 0;
    std::string system_prompt;
    std::string user_prompt;
};

class ChatClient {
public:
    virtual ~ChatClient() = default;
    /// Returns the assistant message content. Throws ProviderError.
    virtual std::string complete(const ChatRequest& request) = 0;
};

/// Thrown by MockChatClient for a claim id that has no (remaining) script.
class NoScriptError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Replays scripted responses per claim id, in order. Safe for concurrent use.
class MockChatClient final : public ChatClient {
public:
    explicit MockChatClient(std::map<ClaimId, std::deque<std::string>> script);

    /// Script file: {"<claim_id>": ["raw response", ...], ...}
    static std::unique_ptr<MockChatClient> from_file(const std::filesystem::path& path);

    std::string complete(const ChatRequest& request) override;

private:
    std::mutex mutex_;
    std::map<ClaimId, std::deque<std::string>> script_;
};

/// Answers every claim with its own gold evidence and label, citing source 1.
class EchoChatClient final : public ChatClient {
public:
    explicit EchoChatClient(std::span<const Claim> gold);

    std::string complete(const ChatRequest& request) override;

private:
    std::map<ClaimId, std::string> responses_;
};

struct HttpChatConfig {
    std::string base_url;
    std::string model_name;
    std::optional<double> temperature;
    double timeout_s = 120.0;
    int max_retries = 3;
    /// Environment variable holding the API key; empty disables auth.
    std::string api_key_env = "OPENAI_API_KEY";
};

/// OpenAI-compatible POST {base_url}/chat/completions client. The constructor
/// resolves credentials and throws ConfigError before any network call when
/// the key variable is unset.
class HttpChatClient final : public ChatClient {
public:
    explicit HttpChatClient(HttpChatConfig cfg);

    std::string complete(const ChatRequest& request) override;

private:
    HttpChatConfig cfg_;
    std::string api_key_;
};

/// Builds the JSON body sent to the chat endpoint.
std::string chat_request_body(const HttpChatConfig& cfg, const ChatRequest& request);

/// Extracts choices[0].message.content. Throws ProviderError on a malformed body.
std::string parse_chat_response(const std::string& body);

}  // namespace factcheck::llm
