#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace factcheck {

using ClaimId = std::int64_t;

enum class VeracityLabel : std::uint8_t {
    Supported = 0,
    Refuted = 1,
    NotEnoughEvidence = 2,
    ConflictingEvidenceCherrypicking = 3,
};

inline constexpr std::size_t kLabelCount = 4;

inline constexpr std::array<VeracityLabel, kLabelCount> kAllLabels = {
    VeracityLabel::Supported,
    VeracityLabel::Refuted,
    VeracityLabel::NotEnoughEvidence,
    VeracityLabel::ConflictingEvidenceCherrypicking,
};

constexpr std::size_t label_index(VeracityLabel label) noexcept {
    return static_cast<std::size_t>(label);
}

/// Canonical dataset spelling, e.g. "Conflicting Evidence/Cherrypicking".
std::string_view to_string(VeracityLabel label) noexcept;

/// Strict parse of the canonical spelling; throws ValidationError naming the string.
VeracityLabel parse_label(std::string_view text);

/// Case-insensitive parse that also accepts the short forms LLMs tend to emit
/// ("NEE", "Cherrypicking", "Not enough evidence", ...).
std::optional<VeracityLabel> parse_label_lenient(std::string_view text);

enum class AnswerType : std::uint8_t { Extractive, Abstractive, Boolean, Unanswerable };

std::string_view to_string(AnswerType type) noexcept;

/// Throws ValidationError for anything outside the four members.
AnswerType parse_answer_type(std::string_view text);
std::optional<AnswerType> parse_answer_type_lenient(std::string_view text);

/// Likert agreement 1..5 per label, indexed by label_index().
using LikertRatings = std::array<int, kLabelCount>;

struct GoldQA {
    std::string question;
    std::string answer;
    AnswerType answer_type = AnswerType::Abstractive;

    bool operator==(const GoldQA&) const = default;
};

struct Claim {
    ClaimId id = 0;
    std::string text;
    std::optional<std::string> claim_date;
    std::optional<VeracityLabel> gold_label;
    std::vector<GoldQA> gold_evidence;

    bool operator==(const Claim&) const = default;
};

struct Document {
    std::string url;
    std::vector<std::string> sentences;

    bool operator==(const Document&) const = default;
};

struct Chunk {
    std::string doc_url;
    std::size_t index_in_doc = 0;
    std::string text;
    std::optional<std::string> prev_context;
    std::optional<std::string> next_context;
    bool oversized = false;
    /// The document sentences packed into this chunk, in order.
    std::vector<std::string> sentences;

    /// Stable identifier "<url>#<index>".
    std::string key() const;

    bool operator==(const Chunk&) const = default;
};

}  // namespace factcheck
