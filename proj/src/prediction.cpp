#include "factcheck/prediction.hpp"

#include <fstream>
#include <sstream>

#include "factcheck/errors.hpp"

namespace factcheck {

using json = nlohmann::json;

json to_json(const Prediction& p) {
    json evidence = json::array();
    for (const auto& qa : p.evidence)
        evidence.push_back({{"question", qa.question},
                            {"answer", qa.answer},
                            {"source_url", qa.source_url},
                            {"answer_type", std::string(to_string(qa.answer_type))}});
    json ratings = json::object();
    for (auto label : kAllLabels) ratings[std::string(to_string(label))] = p.ratings[label_index(label)];
    json out = {{"claim_id", p.claim_id},
                {"claim", p.claim},
                {"evidence", std::move(evidence)},
                {"ratings", std::move(ratings)},
                {"verdict", std::string(to_string(p.verdict))}};
    if (p.probs) {
        json probs = json::object();
        for (auto label : kAllLabels) probs[std::string(to_string(label))] = (*p.probs)[label_index(label)];
        out["probs"] = std::move(probs);
    }
    return out;
}

Prediction prediction_from_json(const json& j) {
    try {
        Prediction p;
        p.claim_id = j.at("claim_id").get<ClaimId>();
        p.claim = j.value("claim", std::string{});
        for (const auto& e : j.at("evidence")) {
            PredictedQA qa;
            qa.question = e.at("question").get<std::string>();
            qa.answer = e.at("answer").get<std::string>();
            qa.source_url = e.value("source_url", std::string{});
            if (auto it = e.find("answer_type"); it != e.end() && it->is_string())
                qa.answer_type = parse_answer_type(it->get<std::string>());
            p.evidence.push_back(std::move(qa));
        }
        if (auto it = j.find("ratings"); it != j.end() && it->is_object())
            for (auto& [key, value] : it->items()) p.ratings[label_index(parse_label(key))] = value.get<int>();
        p.verdict = parse_label(j.at("verdict").get<std::string>());
        if (auto it = j.find("probs"); it != j.end() && it->is_object()) {
            std::array<double, kLabelCount> probs{};
            for (auto& [key, value] : it->items()) probs[label_index(parse_label(key))] = value.get<double>();
            p.probs = probs;
        }
        return p;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("prediction record: ") + e.what());
    }
}

std::vector<Prediction> load_predictions(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    json root;
    try {
        root = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    if (!root.is_array()) throw ParseError(path.string() + ": expected a JSON array");
    std::vector<Prediction> out;
    out.reserve(root.size());
    for (std::size_t i = 0; i < root.size(); ++i) {
        try {
            out.push_back(prediction_from_json(root[i]));
        } catch (const ValidationError& e) {
            throw ValidationError(path.string() + " element " + std::to_string(i) + ": " + e.what());
        }
    }
    return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

void write_predictions(const std::filesystem::path& path, const std::vector<Prediction>& predictions) {
    json root = json::array();
    for (const auto& p : predictions) root.push_back(to_json(p));
    write_file_atomic(path, root.dump(2) + "\n");
}

}  // namespace factcheck
