#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "factcheck/embedding.hpp"
#include "factcheck/lexical.hpp"
#include "factcheck/types.hpp"

namespace factcheck::retriever {

struct RetrievalConfig {
    std::size_t max_chars = 2048;
    std::size_t omega = 6000;
    std::size_t pool_size = 40;
    std::size_t k = 10;
    double lambda = 0.75;
    lexical::TokenizerConfig tokenizer;
    lexical::Bm25Params bm25;

    /// k <= pool_size <= omega, lambda in [0,1], max_chars >= 1. Throws ConfigError.
    void validate() const;
};

/// Pruning budget for a dataset split: 6000 for dev, 2000 for test.
std::size_t default_omega(std::string_view split);

struct RetrievedSource {
    std::size_t rank = 0;  // 1-based
    Chunk chunk;
    double sim_to_claim = 0.0;
};

struct PoolEntry {
    std::string key;
    double sim = 0.0;
};

struct RetrievalTrace {
    ClaimId claim_id = 0;
    std::size_t chunk_count = 0;
    std::size_t duplicate_chunks = 0;
    std::size_t pruned_count = 0;  // chunks surviving BM25
    std::vector<PoolEntry> pool;
    std::vector<std::string> selected;  // keys in rank order
    std::vector<double> selected_sims;

    nlohmann::json to_json() const;
};

struct RetrievalResult {
    std::vector<RetrievedSource> sources;
    RetrievalTrace trace;

    /// No chunk survived pruning; downstream emits Not Enough Evidence.
    bool empty_retrieval() const noexcept { return sources.empty(); }
};

/// chunk -> BM25 prune to omega -> embed survivors and claim -> exact KNN pool
/// -> MMR select k. Chunks whose text duplicates an earlier chunk are dropped
/// before pruning. No surviving chunk (including an empty store) yields an
/// empty result rather than an exception.
RetrievalResult retrieve(const Claim& claim, std::span<const Document> docs, const RetrievalConfig& cfg,
                         embedding::EmbeddingProvider& embedder);

}  // namespace factcheck::retriever
