#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "factcheck/lexical.hpp"
#include "factcheck/llm.hpp"
#include "factcheck/retriever.hpp"
#include "factcheck/types.hpp"

namespace factcheck::generator {

struct EvidenceQA {
    std::string question;
    std::string answer;
    std::size_t source_rank = 0;  // 1-based; may be out of range, see parse_warnings
    AnswerType answer_type = AnswerType::Abstractive;

    bool operator==(const EvidenceQA&) const = default;
};

struct GeneratorOutput {
    std::vector<EvidenceQA> evidence;
    LikertRatings ratings{1, 1, 1, 1};
    VeracityLabel verdict = VeracityLabel::NotEnoughEvidence;
    std::string raw_text;
    std::vector<std::string> parse_warnings;
    std::size_t retry_count = 0;
};

struct GeneratorConfig {
    std::size_t l = 10;
    std::size_t fewshot_count = 10;
    std::size_t max_retries = 3;
    /// Drops few-shot examples, answer types and Likert ratings from the prompt.
    bool simplified = false;
    /// Excludes the claim's own id from the few-shot pool; only meaningful when
    /// the training set and the evaluated claims share an id space.
    bool fewshot_exclude_self = true;

    /// Throws ConfigError when l is 0.
    void validate() const;
};

/// BM25 index over training claims, built once and queried per claim.
class FewshotSelector {
public:
    /// Claims without a gold label or gold evidence are not eligible.
    explicit FewshotSelector(std::vector<Claim> train_set, lexical::TokenizerConfig tokenizer = {});

    /// Up to count claims with positive BM25 similarity, most similar first.
    /// exclude_id removes that id from the candidate pool.
    std::vector<Claim> select(const Claim& claim, std::size_t count,
                              std::optional<ClaimId> exclude_id = std::nullopt) const;

    std::size_t size() const noexcept { return train_.size(); }

private:
    std::vector<Claim> train_;
    lexical::TokenizerConfig tokenizer_;
    std::optional<lexical::Bm25Index> index_;
};

std::vector<Claim> select_fewshot(const Claim& claim, std::span<const Claim> train_set, std::size_t count,
                                  std::optional<ClaimId> exclude_id = std::nullopt);

struct Prompt {
    std::string system;
    std::string user;
};

/// Renders the fact-checker system prompt: instructions, numbered source
/// blocks, output format, and few-shot examples. The user prompt is the claim.
Prompt build_prompt(const Claim& claim, std::span<const retriever::RetrievedSource> sources,
                    std::span<const Claim> fewshot, const GeneratorConfig& cfg);

/// Locates the first JSON object in raw_text (code fences allowed) and
/// validates it. Throws OutputParseError when no object parses or the verdict
/// or ratings are missing.
GeneratorOutput parse_output(const std::string& raw_text, std::size_t source_count, const GeneratorConfig& cfg);

/// Inverse of parse_output for a well-formed output.
nlohmann::json to_llm_json(const GeneratorOutput& output);

/// Output emitted without calling the model when retrieval came back empty.
GeneratorOutput empty_retrieval_output();

/// select_fewshot -> build_prompt -> call the model -> parse_output, asking
/// again on a parse failure up to cfg.max_retries times.
GeneratorOutput run_generation(const Claim& claim, std::span<const retriever::RetrievedSource> sources,
                               const FewshotSelector* fewshot, llm::ChatClient& client,
                               const GeneratorConfig& cfg);

}  // namespace factcheck::generator
