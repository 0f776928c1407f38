#pragma once

#include <array>
#include <filesystem>
#include <map>

#include "factcheck/types.hpp"

namespace factcheck::verdict {

/// Probability per label, indexed by label_index().
class LabelDistribution {
public:
    LabelDistribution() = default;
    /// Throws ValidationError unless every entry is in [0,1] and they sum to 1 +- 1e-9.
    explicit LabelDistribution(std::array<double, kLabelCount> probs);

    double operator[](VeracityLabel label) const noexcept { return probs_[label_index(label)]; }
    const std::array<double, kLabelCount>& probs() const noexcept { return probs_; }

private:
    std::array<double, kLabelCount> probs_{0.25, 0.25, 0.25, 0.25};
};

/// Softmax over raw real-valued scores, without range checks.
std::array<double, kLabelCount> softmax(const std::array<double, kLabelCount>& scores);

/// Throws ValidationError for a rating outside [1,5].
LabelDistribution likert_softmax(const LikertRatings& ratings);

struct EnsembleConfig {
    double weight_external = 0.5;
};

/// weight_external * external + (1 - weight_external) * llm, per label.
LabelDistribution ensemble(const LabelDistribution& llm, const LabelDistribution& external,
                           const EnsembleConfig& cfg);

/// Argmax; exact ties go to llm_verdict when it is tied, otherwise to the first
/// of Supported, Refuted, Conflicting Evidence/Cherrypicking, Not Enough Evidence.
VeracityLabel final_label(const LabelDistribution& p, VeracityLabel llm_verdict);

/// Reads [{"claim_id", "probs": {label: p}}] and validates each distribution.
std::map<ClaimId, LabelDistribution> load_external_probs(const std::filesystem::path& path);

}  // namespace factcheck::verdict
