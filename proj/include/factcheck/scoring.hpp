#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "factcheck/hungarian.hpp"
#include "factcheck/meteor.hpp"
#include "factcheck/prediction.hpp"
#include "factcheck/types.hpp"

namespace factcheck::scoring {

enum class MatchMode { QOnly, QA };

struct QaText {
    std::string question;
    std::string answer;
};

struct ScoringConfig {
    std::vector<double> thresholds{0.25};
    MatchMode mode = MatchMode::QA;

    /// Thresholds must lie in (0,1]. Throws ConfigError.
    void validate() const;
};

/// Pairwise METEOR (predicted as candidate, gold as reference) matrix.
Matrix meteor_matrix(std::span<const QaText> predicted, std::span<const QaText> gold, MatchMode mode,
                     const MeteorParams& p);

/// Optimal-assignment METEOR total divided by the number of gold pairs.
/// Empty predictions score 0; empty gold throws ValidationError.
double hu_meteor(std::span<const QaText> predicted, std::span<const QaText> gold, MatchMode mode,
                 const MeteorParams& p = {});

struct ClaimScore {
    ClaimId claim_id = 0;
    double hu_meteor_q = 0.0;
    double hu_meteor_qa = 0.0;
    VeracityLabel predicted = VeracityLabel::NotEnoughEvidence;
    VeracityLabel gold = VeracityLabel::NotEnoughEvidence;
    bool label_correct = false;
};

struct ScoreReport {
    double q_score = 0.0;
    double qa_score = 0.0;
    std::map<double, double> averitec_score;
    double accuracy = 0.0;
    double macro_f1 = 0.0;
    std::vector<ClaimScore> per_claim;
    MatchMode mode = MatchMode::QA;

    nlohmann::json to_json() const;
    /// claim_id,q,qa,label_pred,label_gold,pass@<t>... one row per claim.
    std::string to_csv() const;
    /// Plain-text table with the Q only / Q+A / AVeriTeC columns.
    std::string summary() const;
};

/// Unweighted mean over the four labels of per-label F1 (0 when a label has
/// no true positives, false positives or false negatives).
double macro_f1(std::span<const VeracityLabel> predicted, std::span<const VeracityLabel> gold);

/// Scores every gold claim against its prediction. Throws ValidationError
/// naming the claim ids that are missing, duplicated or unknown, and for gold
/// claims lacking a label or evidence.
ScoreReport averitec_score(std::span<const Prediction> predictions, std::span<const Claim> gold,
                           const ScoringConfig& cfg = {}, const MeteorParams& p = {});

std::vector<QaText> to_qa_texts(std::span<const GoldQA> gold);
std::vector<QaText> to_qa_texts(std::span<const PredictedQA> predicted);

}  // namespace factcheck::scoring
