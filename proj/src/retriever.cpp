#include "factcheck/retriever.hpp"

#include <unordered_set>

#include "factcheck/corpus.hpp"
#include "factcheck/dense.hpp"
#include "factcheck/errors.hpp"

namespace factcheck::retriever {

void RetrievalConfig::validate() const {
    if (max_chars == 0) throw ConfigError("retrieval.max_chars must be >= 1");
    if (k == 0) throw ConfigError("retrieval.k must be >= 1");
    if (k > pool_size) throw ConfigError("retrieval.k must not exceed retrieval.pool_size");
    if (pool_size > omega) throw ConfigError("retrieval.pool_size must not exceed retrieval.omega");
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw ConfigError("retrieval.lambda must lie in [0,1]");
    if (tokenizer.min_token_len == 0) throw ConfigError("tokenizer min_token_len must be >= 1");
}

std::size_t default_omega(std::string_view split) { return split == "test" ? 2000 : 6000; }

nlohmann::json RetrievalTrace::to_json() const {
    nlohmann::json pool_json = nlohmann::json::array();
    for (const auto& p : pool) pool_json.push_back({{"key", p.key}, {"sim", p.sim}});
    nlohmann::json selected_json = nlohmann::json::array();
    for (std::size_t i = 0; i < selected.size(); ++i)
        selected_json.push_back({{"key", selected[i]}, {"rank", i + 1}, {"sim", selected_sims[i]}});
    return {{"claim_id", claim_id},
            {"chunk_count", chunk_count},
            {"duplicate_chunks", duplicate_chunks},
            {"pruned_count", pruned_count},
            {"pool", std::move(pool_json)},
            {"selected", std::move(selected_json)}};
}

RetrievalResult retrieve(const Claim& claim, std::span<const Document> docs, const RetrievalConfig& cfg,
                         embedding::EmbeddingProvider& embedder) {
    cfg.validate();
    RetrievalResult result;
    result.trace.claim_id = claim.id;

    std::vector<Chunk> chunks;
    std::unordered_set<std::string> seen;
    for (const auto& doc : docs) {
        for (auto& chunk : corpus::chunk_document(doc, cfg.max_chars)) {
            ++result.trace.chunk_count;
            if (!seen.insert(chunk.text).second) {
                ++result.trace.duplicate_chunks;
                continue;
            }
            chunks.push_back(std::move(chunk));
        }
    }
    if (chunks.empty()) return result;

    std::vector<lexical::Tokens> tokenized;
    tokenized.reserve(chunks.size());
    bool any_tokens = false;
    for (const auto& chunk : chunks) {
        tokenized.push_back(lexical::tokenize(chunk.text, cfg.tokenizer));
        any_tokens = any_tokens || !tokenized.back().empty();
    }
    if (!any_tokens) return result;

    const auto index = lexical::Bm25Index::build(tokenized, cfg.bm25);
    const auto claim_tokens = lexical::tokenize(claim.text, cfg.tokenizer);
    const auto survivors = index.top(claim_tokens, cfg.omega);
    result.trace.pruned_count = survivors.size();
    if (survivors.empty()) return result;

    std::vector<std::string> texts;
    texts.reserve(survivors.size() + 1);
    texts.push_back(claim.text);
    for (const auto& s : survivors) texts.push_back(chunks[s.doc].text);
    const auto vectors = embedding::embed_batch(texts, embedder);

    // Payload ids are positions in the survivor list; chunk keys may repeat
    // when a store holds the same URL twice.
    dense::VectorIndex vindex;
    for (std::size_t i = 0; i < survivors.size(); ++i) vindex.add(std::to_string(i), vectors[i + 1]);
    const auto pool = vindex.knn(vectors[0], cfg.pool_size);

    std::vector<dense::MmrCandidate> candidates;
    candidates.reserve(pool.size());
    for (const auto& n : pool) {
        const auto pos = std::stoul(n.payload_id);
        result.trace.pool.push_back({chunks[survivors[pos].doc].key(), n.sim});
        candidates.push_back({n.payload_id, vectors[pos + 1], n.sim});
    }

    dense::MmrConfig mmr{cfg.lambda, cfg.pool_size, cfg.k};
    const auto chosen = dense::mmr_select(candidates, mmr);
    for (std::size_t r = 0; r < chosen.size(); ++r) {
        const auto pos = std::stoul(chosen[r]);
        const auto& chunk = chunks[survivors[pos].doc];
        double sim = 0.0;
        for (const auto& c : candidates)
            if (c.payload_id == chosen[r]) sim = c.sim_to_query;
        result.sources.push_back({r + 1, chunk, sim});
        result.trace.selected.push_back(chunk.key());
        result.trace.selected_sims.push_back(sim);
    }
    return result;
}

}  // namespace factcheck::retriever
