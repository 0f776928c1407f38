#include "factcheck/verdict.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

#include <json.hpp>

#include "factcheck/errors.hpp"

namespace factcheck::verdict {

LabelDistribution::LabelDistribution(std::array<double, kLabelCount> probs) : probs_(probs) {
    double sum = 0.0;
    for (double p : probs_) {
        if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("label probability outside [0,1]: " + std::to_string(p));
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw ValidationError("label probabilities sum to " + std::to_string(sum));
}

std::array<double, kLabelCount> softmax(const std::array<double, kLabelCount>& scores) {
    const double top = *std::max_element(scores.begin(), scores.end());
    std::array<double, kLabelCount> out{};
    double sum = 0.0;
    for (std::size_t i = 0; i < kLabelCount; ++i) {
        out[i] = std::exp(scores[i] - top);
        sum += out[i];
    }
    for (auto& v : out) v /= sum;
    return out;
}

LabelDistribution likert_softmax(const LikertRatings& ratings) {
    std::array<double, kLabelCount> scores{};
    for (std::size_t i = 0; i < kLabelCount; ++i) {
        if (ratings[i] < 1 || ratings[i] > 5)
            throw ValidationError("Likert rating " + std::to_string(ratings[i]) + " for \"" +
                                  std::string(to_string(kAllLabels[i])) + "\" outside [1,5]");
        scores[i] = ratings[i];
    }
    return LabelDistribution(softmax(scores));
}

LabelDistribution ensemble(const LabelDistribution& llm, const LabelDistribution& external, const EnsembleConfig& cfg) {
    const double w = cfg.weight_external;
    if (!(w >= 0.0 && w <= 1.0)) throw ValidationError("ensemble weight outside [0,1]");
    std::array<double, kLabelCount> out{};
    for (std::size_t i = 0; i < kLabelCount; ++i) out[i] = w * external.probs()[i] + (1.0 - w) * llm.probs()[i];
    return LabelDistribution(out);
}

VeracityLabel final_label(const LabelDistribution& p, VeracityLabel llm_verdict) {
    const double top = *std::max_element(p.probs().begin(), p.probs().end());
    if (p[llm_verdict] == top) return llm_verdict;
    for (auto label : {VeracityLabel::Supported, VeracityLabel::Refuted,
                       VeracityLabel::ConflictingEvidenceCherrypicking, VeracityLabel::NotEnoughEvidence})
        if (p[label] == top) return label;
    return llm_verdict;
}

std::map<ClaimId, LabelDistribution> load_external_probs(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    if (!root.is_array()) throw ParseError(path.string() + ": expected a JSON array");

    std::map<ClaimId, LabelDistribution> out;
    for (std::size_t i = 0; i < root.size(); ++i) {
        const auto& item = root[i];
        const std::string where = path.string() + " element " + std::to_string(i);
        if (!item.is_object() || !item.contains("claim_id") || !item["claim_id"].is_number_integer() ||
            !item.contains("probs") || !item["probs"].is_object())
            throw ParseError(where + ": expected {\"claim_id\": int, \"probs\": {...}}");
        std::array<double, kLabelCount> probs{};
        std::array<bool, kLabelCount> seen{};
        for (auto& [key, value] : item["probs"].items()) {
            const auto label = parse_label(key);
            if (!value.is_number()) throw ValidationError(where + ": probability for " + key + " is not a number");
            probs[label_index(label)] = value.get<double>();
            seen[label_index(label)] = true;
        }
        for (auto label : kAllLabels)
            if (!seen[label_index(label)])
                throw ValidationError(where + ": missing probability for " + std::string(to_string(label)));
        const auto id = item["claim_id"].get<ClaimId>();
        try {
            if (!out.emplace(id, LabelDistribution(probs)).second)
                throw ValidationError(where + ": duplicate claim_id " + std::to_string(id));
        } catch (const ValidationError& e) {
            throw ValidationError(where + ": " + e.what());
        }
    }
    return out;
}

}  // namespace factcheck::verdict
