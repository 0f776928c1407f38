#include "factcheck/embedding.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "factcheck/errors.hpp"
#include "factcheck/http.hpp"
#include "factcheck/lexical.hpp"
#include "factcheck/text.hpp"

namespace factcheck::embedding {

using json = nlohmann::json;
using dense::EmbeddingVector;

void EmbeddingProviderConfig::validate() const {
    if (batch_size == 0) throw ConfigError("embedding.batch_size must be >= 1");
    if (!(timeout_s > 0.0)) throw ConfigError("embedding.timeout_s must be > 0");
    if (max_in_flight == 0) throw ConfigError("embedding.max_in_flight must be >= 1");
    if (kind == ProviderKind::Http && (!base_url || base_url->empty() || !model_name || model_name->empty()))
        throw ConfigError("http embedding provider requires embedding.base_url and embedding.model_name");
    if (kind == ProviderKind::Mock && mock_dim == 0) throw ConfigError("embedding.dim must be >= 1");
}

MockEmbeddingProvider::MockEmbeddingProvider(std::size_t dim) : dim_(dim) {
    if (dim_ == 0) throw ConfigError("mock embedding dim must be >= 1");
}

std::string MockEmbeddingProvider::model_id() const { return "mock-hash-" + std::to_string(dim_); }

EmbeddingVector MockEmbeddingProvider::embed_one(const std::string& input) const {
    std::vector<double> v(dim_, 0.0);
    for (const auto& token : lexical::tokenize(input)) {
        const auto h = text::fnv1a64(token);
        v[h % dim_] += (h >> 63) ? -1.0 : 1.0;
    }
    double sq = 0.0;
    for (double x : v) sq += x * x;
    if (sq == 0.0) {
        v[text::fnv1a64(input) % dim_] = 1.0;
        sq = 1.0;
    }
    const double n = std::sqrt(sq);
    for (auto& x : v) x /= n;
    return EmbeddingVector(std::move(v));
}

std::vector<EmbeddingVector> MockEmbeddingProvider::embed(std::span<const std::string> texts) {
    std::vector<EmbeddingVector> out(texts.size());
    const long long n = static_cast<long long>(texts.size());
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = embed_one(texts[static_cast<std::size_t>(i)]);
    return out;
}

HttpEmbeddingProvider::HttpEmbeddingProvider(EmbeddingProviderConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.kind = ProviderKind::Http;
    cfg_.validate();
    if (!cfg_.api_key_env.empty()) {
        const char* key = std::getenv(cfg_.api_key_env.c_str());
        if (!key || !*key) throw ConfigError("environment variable " + cfg_.api_key_env + " is not set");
        api_key_ = key;
    }
}

std::vector<EmbeddingVector> parse_embeddings_response(const std::string& body, std::size_t expected) {
    json root;
    try {
        root = json::parse(body);
    } catch (const json::parse_error& e) {
        throw ProviderError(std::string("embeddings response is not JSON: ") + e.what(), 200, body.substr(0, 300));
    }
    auto data = root.find("data");
    if (data == root.end() || !data->is_array())
        throw ProviderError("embeddings response lacks a data array", 200, body.substr(0, 300));
    if (data->size() != expected)
        throw ProviderError("embeddings response has " + std::to_string(data->size()) + " items, expected " +
                                std::to_string(expected),
                            200);

    std::vector<std::optional<EmbeddingVector>> slots(expected);
    for (std::size_t pos = 0; pos < data->size(); ++pos) {
        const auto& item = (*data)[pos];
        std::size_t index = pos;
        if (auto it = item.find("index"); it != item.end()) index = it->get<std::size_t>();
        if (index >= expected || slots[index])
            throw ProviderError("embeddings response has a bad or repeated index " + std::to_string(index), 200);
        auto emb = item.find("embedding");
        if (emb == item.end() || !emb->is_array()) throw ProviderError("embeddings item lacks an embedding", 200);
        try {
            slots[index] = EmbeddingVector(emb->get<std::vector<double>>());
        } catch (const std::invalid_argument& e) {
            throw ProviderError(std::string("embeddings item ") + std::to_string(index) + ": " + e.what(), 200);
        }
    }
    std::vector<EmbeddingVector> out;
    out.reserve(expected);
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

std::vector<EmbeddingVector> HttpEmbeddingProvider::embed_batch_once(std::span<const std::string> texts) const {
    json body = {{"model", *cfg_.model_name}, {"input", std::vector<std::string>(texts.begin(), texts.end())}};
    http::PostOptions options;
    options.timeout = std::chrono::duration<double>(cfg_.timeout_s);
    options.retry.max_retries = cfg_.max_retries;
    if (!api_key_.empty()) options.headers.emplace_back("Authorization", "Bearer " + api_key_);
    const auto response = http::post_json(*cfg_.base_url, "/embeddings", body.dump(), options);
    return parse_embeddings_response(response, texts.size());
}

std::vector<EmbeddingVector> HttpEmbeddingProvider::embed(std::span<const std::string> texts) {
    const std::size_t batch = cfg_.batch_size;
    const std::size_t batches = (texts.size() + batch - 1) / batch;
    std::vector<std::vector<EmbeddingVector>> results(batches);
    std::vector<std::exception_ptr> errors(batches);
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (std::size_t b = next++; b < batches; b = next++) {
            const std::size_t begin = b * batch;
            const std::size_t count = std::min(batch, texts.size() - begin);
            try {
                results[b] = embed_batch_once(texts.subspan(begin, count));
            } catch (...) {
                errors[b] = std::current_exception();
            }
        }
    };
    const std::size_t threads = std::min(cfg_.max_in_flight, batches);
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (auto& r : results)
        for (auto& v : r) out.push_back(std::move(v));
    return out;
}

EmbeddingCache::EmbeddingCache(std::filesystem::path file) : file_(std::move(file)) {
    std::ifstream in(*file_);
    if (!in) return;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        try {
            const auto j = json::parse(line);
            auto values = j.at("values").get<std::vector<double>>();
            if (values.size() != j.at("dim").get<std::size_t>()) throw ParseError("dim does not match values");
            entries_.insert_or_assign(j.at("key").get<std::string>(), EmbeddingVector(std::move(values)));
        } catch (const std::exception& e) {
            throw ParseError("embedding cache " + file_->string() + " line " + std::to_string(line_no) + ": " +
                             e.what());
        }
    }
}

std::optional<EmbeddingVector> EmbeddingCache::get(const std::string& key) const {
    std::lock_guard lock(mutex_);
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

void EmbeddingCache::put(const std::string& key, const EmbeddingVector& vector) {
    std::lock_guard lock(mutex_);
    if (!entries_.insert_or_assign(key, vector).second) return;
    if (!file_) return;
    if (file_->has_parent_path()) std::filesystem::create_directories(file_->parent_path());
    std::ofstream out(*file_, std::ios::app);
    json line = {{"key", key},
                 {"dim", vector.dim()},
                 {"values", std::vector<double>(vector.values().begin(), vector.values().end())}};
    out << line.dump() << '\n';
}

std::size_t EmbeddingCache::size() const {
    std::lock_guard lock(mutex_);
    return entries_.size();
}

std::string EmbeddingCache::make_key(const std::string& scope, const std::string& input, const std::string& model) {
    return scope + ":" + text::hex64(text::fnv1a64(input)) + ":" + model;
}

CachingEmbedder::CachingEmbedder(std::shared_ptr<EmbeddingProvider> inner, std::shared_ptr<EmbeddingCache> cache,
                                 std::string scope)
    : inner_(std::move(inner)), cache_(std::move(cache)), scope_(std::move(scope)) {}

std::vector<EmbeddingVector> CachingEmbedder::embed(std::span<const std::string> texts) {
    const auto model = inner_->model_id();
    std::vector<EmbeddingVector> out(texts.size());
    std::vector<std::size_t> missing;
    std::vector<std::string> missing_texts;
    for (std::size_t i = 0; i < texts.size(); ++i) {
        if (auto hit = cache_->get(EmbeddingCache::make_key(scope_, texts[i], model)))
            out[i] = std::move(*hit);
        else {
            missing.push_back(i);
            missing_texts.push_back(texts[i]);
        }
    }
    if (!missing.empty()) {
        auto fresh = inner_->embed(missing_texts);
        for (std::size_t j = 0; j < missing.size(); ++j) {
            cache_->put(EmbeddingCache::make_key(scope_, missing_texts[j], model), fresh[j]);
            out[missing[j]] = std::move(fresh[j]);
        }
    }
    return out;
}

std::unique_ptr<EmbeddingProvider> make_provider(const EmbeddingProviderConfig& cfg) {
    cfg.validate();
    if (cfg.kind == ProviderKind::Http) return std::make_unique<HttpEmbeddingProvider>(cfg);
    return std::make_unique<MockEmbeddingProvider>(cfg.mock_dim);
}

std::vector<EmbeddingVector> embed_batch(std::span<const std::string> texts, EmbeddingProvider& provider) {
    if (texts.empty()) throw std::invalid_argument("embed_batch: no texts");
    auto out = provider.embed(texts);
    if (out.size() != texts.size())
        throw ProviderError("provider returned " + std::to_string(out.size()) + " vectors for " +
                            std::to_string(texts.size()) + " texts");
    for (const auto& v : out)
        if (v.dim() != out.front().dim()) throw ProviderError("provider returned vectors of differing dimension");
    return out;
}

}  // namespace factcheck::embedding
