#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "factcheck/types.hpp"

namespace factcheck {

struct PredictedQA {
    std::string question;
    std::string answer;
    std::string source_url;
    AnswerType answer_type = AnswerType::Abstractive;

    bool operator==(const PredictedQA&) const = default;
};

/// One line of the prediction file.
struct Prediction {
    ClaimId claim_id = 0;
    std::string claim;
    std::vector<PredictedQA> evidence;
    LikertRatings ratings{1, 1, 1, 1};
    VeracityLabel verdict = VeracityLabel::NotEnoughEvidence;
    std::optional<std::array<double, kLabelCount>> probs;

    bool operator==(const Prediction&) const = default;
};

nlohmann::json to_json(const Prediction& p);
/// Throws ValidationError on missing fields or unknown labels.
Prediction prediction_from_json(const nlohmann::json& j);

std::vector<Prediction> load_predictions(const std::filesystem::path& path);
/// Writes to a temporary sibling and renames it into place.
void write_predictions(const std::filesystem::path& path, const std::vector<Prediction>& predictions);

/// Writes text atomically (temp file + rename).
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace factcheck
