#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "factcheck/dense.hpp"

namespace factcheck::embedding {

enum class ProviderKind { Http, Mock };

struct EmbeddingProviderConfig {
    ProviderKind kind = ProviderKind::Mock;
    std::optional<std::string> base_url;
    std::optional<std::string> model_name;
    std::size_t batch_size = 64;
    double timeout_s = 60.0;
    std::size_t max_in_flight = 4;
    int max_retries = 3;
    /// Environment variable holding the bearer token; empty means no auth header.
    std::string api_key_env;
    std::size_t mock_dim = 64;

    /// Throws ConfigError when kind is Http without base_url and model_name.
    void validate() const;
};

class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;
    /// One vector per text, in input order.
    virtual std::vector<dense::EmbeddingVector> embed(std::span<const std::string> texts) = 0;
    /// Model identity used in cache keys.
    virtual std::string model_id() const = 0;
};

/// Deterministic offline provider: signed feature hashing of token counts
/// into a fixed number of buckets, L2-normalized.
class MockEmbeddingProvider final : public EmbeddingProvider {
public:
    explicit MockEmbeddingProvider(std::size_t dim = 64);

    std::vector<dense::EmbeddingVector> embed(std::span<const std::string> texts) override;
    std::string model_id() const override;

    dense::EmbeddingVector embed_one(const std::string& text) const;

private:
    std::size_t dim_;
};

/// OpenAI-compatible POST {base_url}/embeddings client.
class HttpEmbeddingProvider final : public EmbeddingProvider {
public:
    explicit HttpEmbeddingProvider(EmbeddingProviderConfig cfg);

    std::vector<dense::EmbeddingVector> embed(std::span<const std::string> texts) override;
    std::string model_id() const override { return *cfg_.model_name; }

private:
    std::vector<dense::EmbeddingVector> embed_batch_once(std::span<const std::string> texts) const;

    EmbeddingProviderConfig cfg_;
    std::string api_key_;
};

/// Parses an embeddings response, ordering vectors by their "index" field.
std::vector<dense::EmbeddingVector> parse_embeddings_response(const std::string& body, std::size_t expected);

/// Persistent JSON-lines cache: {"key", "dim", "values"} per line. Thread-safe.
class EmbeddingCache {
public:
    EmbeddingCache() = default;
    /// Loads an existing file (if any); new entries are appended to it.
    explicit EmbeddingCache(std::filesystem::path file);

    std::optional<dense::EmbeddingVector> get(const std::string& key) const;
    void put(const std::string& key, const dense::EmbeddingVector& vector);
    std::size_t size() const;

    static std::string make_key(const std::string& scope, const std::string& text, const std::string& model);

private:
    std::optional<std::filesystem::path> file_;
    mutable std::mutex mutex_;
    std::unordered_map<std::string, dense::EmbeddingVector> entries_;
};

/// Serves hits from the cache and forwards misses to the wrapped provider.
class CachingEmbedder final : public EmbeddingProvider {
public:
    CachingEmbedder(std::shared_ptr<EmbeddingProvider> inner, std::shared_ptr<EmbeddingCache> cache,
                    std::string scope);

    std::vector<dense::EmbeddingVector> embed(std::span<const std::string> texts) override;
    std::string model_id() const override { return inner_->model_id(); }

private:
    std::shared_ptr<EmbeddingProvider> inner_;
    std::shared_ptr<EmbeddingCache> cache_;
    std::string scope_;
};

std::unique_ptr<EmbeddingProvider> make_provider(const EmbeddingProviderConfig& cfg);

/// Validates that texts is non-empty and that every returned vector shares one dim.
std::vector<dense::EmbeddingVector> embed_batch(std::span<const std::string> texts, EmbeddingProvider& provider);

}  // namespace factcheck::embedding
