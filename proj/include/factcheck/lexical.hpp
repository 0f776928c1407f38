#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace factcheck::lexical {

struct TokenizerConfig {
    bool lowercase = true;
    bool strip_non_alphanumeric = true;
    std::size_t min_token_len = 1;
};

using Tokens = std::vector<std::string>;

/// Lowercases, then splits on non-alphanumeric characters (or on whitespace
/// when stripping is off), then drops tokens shorter than min_token_len code
/// points. Bytes >= 0x80 count as alphanumeric so non-Latin words survive.
Tokens tokenize(std::string_view text, const TokenizerConfig& cfg = {});

struct Bm25Params {
    double k1 = 1.2;
    double b = 0.75;
};

struct Posting {
    std::uint32_t doc = 0;
    std::uint32_t tf = 0;

    bool operator==(const Posting&) const = default;
};

struct ScoredDoc {
    std::size_t doc = 0;
    double score = 0.0;

    bool operator==(const ScoredDoc&) const = default;
};

/// Immutable inverted index; postings are sorted by document ordinal.
class Bm25Index {
public:
    /// Throws std::invalid_argument when docs is empty or every doc has no tokens.
    static Bm25Index build(std::span<const Tokens> docs, Bm25Params params = {});

    /// At most omega documents with positive score, sorted by score desc then
    /// ordinal asc. Query tokens are summed per occurrence.
    std::vector<ScoredDoc> top(std::span<const std::string> query_tokens, std::size_t omega) const;

    /// BM25 score of every document (zero where no query term occurs).
    std::vector<double> score_all(std::span<const std::string> query_tokens) const;

    /// Non-negative idf: ln(1 + (N - df + 0.5) / (df + 0.5)).
    double idf(std::size_t df) const noexcept;

    const std::unordered_map<std::string, std::vector<Posting>>& postings() const noexcept { return postings_; }
    const std::vector<std::uint32_t>& doc_lengths() const noexcept { return doc_lengths_; }
    double avg_doc_length() const noexcept { return avg_doc_length_; }
    std::size_t doc_count() const noexcept { return doc_lengths_.size(); }
    const Bm25Params& params() const noexcept { return params_; }

private:
    Bm25Index() = default;

    std::unordered_map<std::string, std::vector<Posting>> postings_;
    std::vector<std::uint32_t> doc_lengths_;
    double avg_doc_length_ = 0.0;
    Bm25Params params_;
};

inline Bm25Index build_index(std::span<const Tokens> docs, Bm25Params params = {}) {
    return Bm25Index::build(docs, params);
}

inline std::vector<ScoredDoc> bm25_top(const Bm25Index& index,
                                       std::span<const std::string> query_tokens,
                                       std::size_t omega) {
    return index.top(query_tokens, omega);
}

}  // namespace factcheck::lexical
