#include "factcheck/types.hpp"

#include "factcheck/errors.hpp"
#include "factcheck/text.hpp"

namespace factcheck {

std::string_view to_string(VeracityLabel label) noexcept {
    switch (label) {
        case VeracityLabel::Supported: return "Supported";
        case VeracityLabel::Refuted: return "Refuted";
        case VeracityLabel::NotEnoughEvidence: return "Not Enough Evidence";
        case VeracityLabel::ConflictingEvidenceCherrypicking: return "Conflicting Evidence/Cherrypicking";
    }
    return "Not Enough Evidence";
}

VeracityLabel parse_label(std::string_view text) {
    for (auto label : kAllLabels)
        if (to_string(label) == text) return label;
    throw ValidationError("unknown veracity label \"" + std::string(text) + "\"");
}

std::optional<VeracityLabel> parse_label_lenient(std::string_view text) {
    const std::string s = text::to_lower_ascii(text::trim(text));
    for (auto label : kAllLabels)
        if (text::to_lower_ascii(to_string(label)) == s) return label;
    if (s == "supported claim" || s == "support" || s == "true") return VeracityLabel::Supported;
    if (s == "refuted claim" || s == "refute" || s == "false") return VeracityLabel::Refuted;
    if (s == "nee" || s == "not enough evidence" || s == "not enough info" || s == "not enough information")
        return VeracityLabel::NotEnoughEvidence;
    if (s == "cherrypicking" || s == "cherry-picking" || s == "conflicting evidence" ||
        s == "conflicting evidence/cherry-picking" || s == "conflicting evidence / cherrypicking" ||
        s == "conflicting")
        return VeracityLabel::ConflictingEvidenceCherrypicking;
    return std::nullopt;
}

std::string_view to_string(AnswerType type) noexcept {
    switch (type) {
        case AnswerType::Extractive: return "Extractive";
        case AnswerType::Abstractive: return "Abstractive";
        case AnswerType::Boolean: return "Boolean";
        case AnswerType::Unanswerable: return "Unanswerable";
    }
    return "Abstractive";
}

AnswerType parse_answer_type(std::string_view text) {
    for (auto t : {AnswerType::Extractive, AnswerType::Abstractive, AnswerType::Boolean, AnswerType::Unanswerable})
        if (to_string(t) == text) return t;
    throw ValidationError("unknown answer type \"" + std::string(text) + "\"");
}

std::optional<AnswerType> parse_answer_type_lenient(std::string_view text) {
    const std::string s = text::to_lower_ascii(text::trim(text));
    for (auto t : {AnswerType::Extractive, AnswerType::Abstractive, AnswerType::Boolean, AnswerType::Unanswerable})
        if (text::to_lower_ascii(to_string(t)) == s) return t;
    return std::nullopt;
}

std::string Chunk::key() const { return doc_url + "#" + std::to_string(index_in_doc); }

}  // namespace factcheck
