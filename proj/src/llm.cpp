#include "factcheck/llm.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "factcheck/errors.hpp"
#include "factcheck/http.hpp"

namespace factcheck::llm {

using json = nlohmann::json;

MockChatClient::MockChatClient(std::map<ClaimId, std::deque<std::string>> script) : script_(std::move(script)) {}

std::unique_ptr<MockChatClient> MockChatClient::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open mock script " + path.string());
    json root;
    try {
        root = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError("mock script " + path.string() + ": " + e.what());
    }
    if (!root.is_object()) throw ParseError("mock script must map claim ids to response lists");
    std::map<ClaimId, std::deque<std::string>> script;
    for (auto& [key, responses] : root.items()) {
        ClaimId id = 0;
        try {
            std::size_t used = 0;
            id = std::stoll(key, &used);
            if (used != key.size()) throw std::invalid_argument(key);
        } catch (const std::exception&) {
            throw ParseError("mock script key \"" + key + "\" is not a claim id");
        }
        if (!responses.is_array()) throw ParseError("mock script entry " + key + " is not an array");
        auto& queue = script[id];
        for (const auto& r : responses) queue.push_back(r.is_string() ? r.get<std::string>() : r.dump());
    }
    return std::make_unique<MockChatClient>(std::move(script));
}

std::string MockChatClient::complete(const ChatRequest& request) {
    std::lock_guard lock(mutex_);
    auto it = script_.find(request.claim_id);
    if (it == script_.end()) throw NoScriptError("no script for claim " + std::to_string(request.claim_id));
    if (it->second.empty())
        throw NoScriptError("script for claim " + std::to_string(request.claim_id) + " is exhausted");
    auto response = std::move(it->second.front());
    it->second.pop_front();
    return response;
}

EchoChatClient::EchoChatClient(std::span<const Claim> gold) {
    for (const auto& claim : gold) {
        if (!claim.gold_label) continue;
        json questions = json::array();
        for (const auto& qa : claim.gold_evidence)
            questions.push_back({{"question", qa.question},
                                 {"answer", qa.answer},
                                 {"source", "1"},
                                 {"answer_type", std::string(to_string(qa.answer_type))}});
        json veracity = json::object();
        for (auto label : kAllLabels)
            veracity[std::string(to_string(label))] = label == *claim.gold_label ? "5" : "1";
        json answer = {{"questions", std::move(questions)},
                       {"claim_veracity", std::move(veracity)},
                       {"veracity_verdict", std::string(to_string(*claim.gold_label))}};
        responses_[claim.id] = "```json\n" + answer.dump(1) + "\n```";
    }
}

std::string EchoChatClient::complete(const ChatRequest& request) {
    auto it = responses_.find(request.claim_id);
    if (it == responses_.end())
        throw NoScriptError("no gold answer to echo for claim " + std::to_string(request.claim_id));
    return it->second;
}

HttpChatClient::HttpChatClient(HttpChatConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.base_url.empty()) throw ConfigError("chat provider requires generator.base_url");
    if (cfg_.model_name.empty()) throw ConfigError("chat provider requires generator.model_name");
    http::parse_base_url(cfg_.base_url);
    if (!cfg_.api_key_env.empty()) {
        const char* key = std::getenv(cfg_.api_key_env.c_str());
        if (!key || !*key) throw ConfigError("environment variable " + cfg_.api_key_env + " is not set");
        api_key_ = key;
    }
}

std::string chat_request_body(const HttpChatConfig& cfg, const ChatRequest& request) {
    json body = {{"model", cfg.model_name},
                 {"messages",
                  json::array({{{"role", "system"}, {"content", request.system_prompt}},
                               {{"role", "user"}, {"content", request.user_prompt}}})}};
    if (cfg.temperature) body["temperature"] = *cfg.temperature;
    return body.dump();
}

std::string parse_chat_response(const std::string& body) {
    try {
        const auto root = json::parse(body);
        const auto& content = root.at("choices").at(0).at("message").at("content");
        if (!content.is_string()) throw ProviderError("chat response content is not a string", 200);
        return content.get<std::string>();
    } catch (const json::exception& e) {
        throw ProviderError(std::string("malformed chat response: ") + e.what(), 200, body.substr(0, 300));
    }
}

std::string HttpChatClient::complete(const ChatRequest& request) {
    http::PostOptions options;
    options.timeout = std::chrono::duration<double>(cfg_.timeout_s);
    options.retry.max_retries = cfg_.max_retries;
    if (!api_key_.empty()) options.headers.emplace_back("Authorization", "Bearer " + api_key_);
    const auto body = http::post_json(cfg_.base_url, "/chat/completions", chat_request_body(cfg_, request), options);
    return parse_chat_response(body);
}

}  // namespace factcheck::llm
