#include "factcheck/lexical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "factcheck/text.hpp"

namespace factcheck::lexical {

namespace {

bool is_token_byte(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c >= 0x80;
}

bool is_space(unsigned char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

}  // namespace

Tokens tokenize(std::string_view input, const TokenizerConfig& cfg) {
    const std::string lowered = cfg.lowercase ? text::to_lower_ascii(input) : std::string(input);
    const std::size_t min_len = std::max<std::size_t>(cfg.min_token_len, 1);

    Tokens tokens;
    std::string current;
    auto finish = [&] {
        if (!current.empty() && text::utf8_length(current) >= min_len) tokens.push_back(current);
        current.clear();
    };
    for (unsigned char c : lowered) {
        const bool keep = cfg.strip_non_alphanumeric ? is_token_byte(c) : !is_space(c);
        if (keep)
            current.push_back(static_cast<char>(c));
        else
            finish();
    }
    finish();
    return tokens;
}

Bm25Index Bm25Index::build(std::span<const Tokens> docs, Bm25Params params) {
    if (docs.empty()) throw std::invalid_argument("bm25: no documents");
    if (params.k1 < 0.0 || params.b < 0.0 || params.b > 1.0) throw std::invalid_argument("bm25: k1 >= 0 and b in [0,1]");

    Bm25Index index;
    index.params_ = params;
    index.doc_lengths_.reserve(docs.size());
    std::uint64_t total = 0;
    for (std::size_t d = 0; d < docs.size(); ++d) {
        std::unordered_map<std::string, std::uint32_t> counts;
        for (const auto& token : docs[d]) ++counts[token];
        for (auto& [term, tf] : counts)
            index.postings_[term].push_back({static_cast<std::uint32_t>(d), tf});
        index.doc_lengths_.push_back(static_cast<std::uint32_t>(docs[d].size()));
        total += docs[d].size();
    }
    if (total == 0) throw std::invalid_argument("bm25: every document is empty of tokens");
    index.avg_doc_length_ = static_cast<double>(total) / static_cast<double>(docs.size());
    return index;
}

double Bm25Index::idf(std::size_t df) const noexcept {
    const double n = static_cast<double>(doc_count());
    const double d = static_cast<double>(df);
    return std::log(1.0 + (n - d + 0.5) / (d + 0.5));
}

std::vector<double> Bm25Index::score_all(std::span<const std::string> query_tokens) const {
    std::vector<double> scores(doc_count(), 0.0);
    const double k1 = params_.k1;
    const double b = params_.b;
    for (const auto& term : query_tokens) {
        auto it = postings_.find(term);
        if (it == postings_.end()) continue;
        const double w = idf(it->second.size());
        for (const auto& posting : it->second) {
            const double tf = posting.tf;
            const double dl = doc_lengths_[posting.doc];
            scores[posting.doc] += w * tf * (k1 + 1.0) / (tf + k1 * (1.0 - b + b * dl / avg_doc_length_));
        }
    }
    return scores;
}

std::vector<ScoredDoc> Bm25Index::top(std::span<const std::string> query_tokens, std::size_t omega) const {
    const auto scores = score_all(query_tokens);
    std::vector<ScoredDoc> hits;
    for (std::size_t d = 0; d < scores.size(); ++d)
        if (scores[d] > 0.0) hits.push_back({d, scores[d]});

    auto better = [](const ScoredDoc& a, const ScoredDoc& c) {
        if (a.score != c.score) return a.score > c.score;
        return a.doc < c.doc;
    };
    const std::size_t keep = std::min(omega, hits.size());
    std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(keep), hits.end(), better);
    hits.resize(keep);
    return hits;
}

}  // namespace factcheck::lexical
