#include "factcheck/scoring.hpp"

#include <algorithm>
#include <iomanip>
#include <set>
#include <sstream>

#include "factcheck/errors.hpp"
#include "factcheck/kernels.hpp"

namespace factcheck::scoring {

void ScoringConfig::validate() const {
    if (thresholds.empty()) throw ConfigError("scoring.thresholds must not be empty");
    for (double t : thresholds)
        if (!(t > 0.0 && t <= 1.0)) throw ConfigError("scoring threshold outside (0,1]: " + std::to_string(t));
}

namespace {

std::string qa_string(const QaText& qa, MatchMode mode) {
    return mode == MatchMode::QOnly ? qa.question : qa.question + " " + qa.answer;
}

std::string id_list(const std::vector<ClaimId>& ids) {
    std::string s;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) s += ", ";
        s += std::to_string(ids[i]);
    }
    return s;
}

std::string fixed(double v, int digits = 3) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(digits) << v;
    return out.str();
}

}  // namespace

Matrix meteor_matrix(std::span<const QaText> predicted, std::span<const QaText> gold, MatchMode mode,
                     const MeteorParams& p) {
    std::vector<std::string> pred_text, gold_text;
    for (const auto& qa : predicted) pred_text.push_back(qa_string(qa, mode));
    for (const auto& qa : gold) gold_text.push_back(qa_string(qa, mode));
    auto values = kernels::parallel::fill_matrix(pred_text.size(), gold_text.size(), [&](std::size_t r, std::size_t c) {
        return meteor_lite(pred_text[r], gold_text[c], p);
    });
    return Matrix(pred_text.size(), gold_text.size(), std::move(values));
}

double hu_meteor(std::span<const QaText> predicted, std::span<const QaText> gold, MatchMode mode,
                 const MeteorParams& p) {
    if (gold.empty()) throw ValidationError("hu_meteor: gold evidence is empty");
    if (predicted.empty()) return 0.0;
    const auto assignment = hungarian_max(meteor_matrix(predicted, gold, mode, p));
    return assignment.total / static_cast<double>(gold.size());
}

std::vector<QaText> to_qa_texts(std::span<const GoldQA> gold) {
    std::vector<QaText> out;
    for (const auto& g : gold) out.push_back({g.question, g.answer});
    return out;
}

std::vector<QaText> to_qa_texts(std::span<const PredictedQA> predicted) {
    std::vector<QaText> out;
    for (const auto& q : predicted) out.push_back({q.question, q.answer});
    return out;
}

double macro_f1(std::span<const VeracityLabel> predicted, std::span<const VeracityLabel> gold) {
    std::array<std::size_t, kLabelCount> tp{}, fp{}, fn{};
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const auto p = label_index(predicted[i]);
        const auto g = label_index(gold[i]);
        if (p == g) {
            ++tp[p];
        } else {
            ++fp[p];
            ++fn[g];
        }
    }
    double sum = 0.0;
    for (std::size_t l = 0; l < kLabelCount; ++l) {
        const double denom = static_cast<double>(2 * tp[l] + fp[l] + fn[l]);
        sum += denom > 0.0 ? 2.0 * static_cast<double>(tp[l]) / denom : 0.0;
    }
    return sum / static_cast<double>(kLabelCount);
}

ScoreReport averitec_score(std::span<const Prediction> predictions, std::span<const Claim> gold,
                           const ScoringConfig& cfg, const MeteorParams& p) {
    cfg.validate();
    std::map<ClaimId, const Prediction*> by_id;
    std::vector<ClaimId> duplicates;
    for (const auto& pred : predictions)
        if (!by_id.emplace(pred.claim_id, &pred).second) duplicates.push_back(pred.claim_id);

    std::set<ClaimId> gold_ids;
    std::vector<ClaimId> missing, unlabelled;
    for (const auto& claim : gold) {
        gold_ids.insert(claim.id);
        if (!by_id.count(claim.id)) missing.push_back(claim.id);
        if (!claim.gold_label || claim.gold_evidence.empty()) unlabelled.push_back(claim.id);
    }
    std::vector<ClaimId> extra;
    for (const auto& [id, _] : by_id)
        if (!gold_ids.count(id)) extra.push_back(id);

    if (!missing.empty() || !duplicates.empty() || !extra.empty() || !unlabelled.empty()) {
        std::string msg = "prediction/gold mismatch:";
        if (!missing.empty()) msg += " missing predictions for claims [" + id_list(missing) + "]";
        if (!duplicates.empty()) msg += " duplicate predictions for claims [" + id_list(duplicates) + "]";
        if (!extra.empty()) msg += " predictions for unknown claims [" + id_list(extra) + "]";
        if (!unlabelled.empty()) msg += " gold claims without label or evidence [" + id_list(unlabelled) + "]";
        throw ValidationError(msg);
    }

    ScoreReport report;
    report.mode = cfg.mode;
    report.per_claim.resize(gold.size());
    const long long n = static_cast<long long>(gold.size());
#pragma omp parallel for schedule(dynamic)
    for (long long li = 0; li < n; ++li) {
        const auto i = static_cast<std::size_t>(li);
        const auto& claim = gold[i];
        const auto& pred = *by_id.at(claim.id);
        const auto pred_qa = to_qa_texts(pred.evidence);
        const auto gold_qa = to_qa_texts(claim.gold_evidence);
        auto& row = report.per_claim[i];
        row.claim_id = claim.id;
        row.hu_meteor_q = hu_meteor(pred_qa, gold_qa, MatchMode::QOnly, p);
        row.hu_meteor_qa = hu_meteor(pred_qa, gold_qa, MatchMode::QA, p);
        row.predicted = pred.verdict;
        row.gold = *claim.gold_label;
        row.label_correct = pred.verdict == *claim.gold_label;
    }

    if (gold.empty()) return report;
    const double count = static_cast<double>(gold.size());
    std::vector<VeracityLabel> predicted_labels, gold_labels;
    double q_sum = 0.0, qa_sum = 0.0, correct = 0.0;
    for (const auto& row : report.per_claim) {
        q_sum += row.hu_meteor_q;
        qa_sum += row.hu_meteor_qa;
        correct += row.label_correct ? 1.0 : 0.0;
        predicted_labels.push_back(row.predicted);
        gold_labels.push_back(row.gold);
    }
    report.q_score = q_sum / count;
    report.qa_score = qa_sum / count;
    report.accuracy = correct / count;
    report.macro_f1 = macro_f1(predicted_labels, gold_labels);
    for (double t : cfg.thresholds) {
        std::size_t pass = 0;
        for (const auto& row : report.per_claim) {
            const double evidence = cfg.mode == MatchMode::QOnly ? row.hu_meteor_q : row.hu_meteor_qa;
            if (row.label_correct && evidence >= t) ++pass;
        }
        report.averitec_score[t] = static_cast<double>(pass) / count;
    }
    return report;
}

nlohmann::json ScoreReport::to_json() const {
    nlohmann::json thresholds = nlohmann::json::object();
    for (const auto& [t, v] : averitec_score) thresholds[fixed(t, 2)] = v;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : per_claim)
        rows.push_back({{"claim_id", r.claim_id},
                        {"hu_meteor_q", r.hu_meteor_q},
                        {"hu_meteor_qa", r.hu_meteor_qa},
                        {"label_pred", std::string(to_string(r.predicted))},
                        {"label_gold", std::string(to_string(r.gold))},
                        {"label_correct", r.label_correct}});
    return {{"q_score", q_score},
            {"qa_score", qa_score},
            {"averitec_score", std::move(thresholds)},
            {"evidence_mode", mode == MatchMode::QOnly ? "Q" : "Q+A"},
            {"accuracy", accuracy},
            {"macro_f1", macro_f1},
            {"per_claim", std::move(rows)}};
}

std::string ScoreReport::to_csv() const {
    std::ostringstream out;
    out << "claim_id,q,qa,label_pred,label_gold";
    for (const auto& [t, _] : averitec_score) out << ",pass@" << fixed(t, 2);
    out << '\n';
    out << std::setprecision(6);
    for (const auto& r : per_claim) {
        out << r.claim_id << ',' << fixed(r.hu_meteor_q, 6) << ',' << fixed(r.hu_meteor_qa, 6) << ",\""
            << to_string(r.predicted) << "\",\"" << to_string(r.gold) << '"';
        const double evidence = mode == MatchMode::QOnly ? r.hu_meteor_q : r.hu_meteor_qa;
        for (const auto& [t, _] : averitec_score) out << ',' << ((r.label_correct && evidence >= t) ? 1 : 0);
        out << '\n';
    }
    return out.str();
}

std::string ScoreReport::summary() const {
    std::ostringstream out;
    out << "claims:    " << per_claim.size() << '\n';
    out << "Q only:    " << fixed(q_score) << '\n';
    out << "Q+A:       " << fixed(qa_score) << '\n';
    for (const auto& [t, v] : averitec_score) out << "AVeriTeC@" << fixed(t, 2) << ": " << fixed(v) << '\n';
    out << "accuracy:  " << fixed(accuracy) << '\n';
    out << "macro-F1:  " << fixed(macro_f1) << '\n';
    return out.str();
}

}  // namespace factcheck::scoring
