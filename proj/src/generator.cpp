#include "factcheck/generator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "factcheck/errors.hpp"
#include "factcheck/text.hpp"

namespace factcheck::generator {

using json = nlohmann::json;

void GeneratorConfig::validate() const {
    if (l == 0) throw ConfigError("generator.l must be >= 1");
}

FewshotSelector::FewshotSelector(std::vector<Claim> train_set, lexical::TokenizerConfig tokenizer)
    : tokenizer_(tokenizer) {
    for (auto& c : train_set)
        if (c.gold_label && !c.gold_evidence.empty()) train_.push_back(std::move(c));
    if (train_.empty()) return;
    std::vector<lexical::Tokens> docs;
    docs.reserve(train_.size());
    for (const auto& c : train_) docs.push_back(lexical::tokenize(c.text, tokenizer_));
    try {
        index_ = lexical::Bm25Index::build(docs);
    } catch (const std::invalid_argument&) {
        index_.reset();
    }
}

std::vector<Claim> FewshotSelector::select(const Claim& claim, std::size_t count,
                                           std::optional<ClaimId> exclude_id) const {
    if (count == 0 || !index_) return {};
    const auto query = lexical::tokenize(claim.text, tokenizer_);
    // One extra hit covers the excluded claim.
    const auto hits = index_->top(query, exclude_id ? count + 1 : count);
    std::vector<Claim> out;
    for (const auto& hit : hits) {
        if (out.size() == count) break;
        if (exclude_id && train_[hit.doc].id == *exclude_id) continue;
        out.push_back(train_[hit.doc]);
    }
    return out;
}

std::vector<Claim> select_fewshot(const Claim& claim, std::span<const Claim> train_set, std::size_t count,
                                  std::optional<ClaimId> exclude_id) {
    if (count == 0 || train_set.empty()) return {};
    return FewshotSelector(std::vector<Claim>(train_set.begin(), train_set.end())).select(claim, count, exclude_id);
}

namespace {

void write_instructions(std::ostringstream& out, const GeneratorConfig& cfg) {
    if (cfg.simplified) {
        out << "You are a professional fact checker, formulate up to " << cfg.l
            << " questions that cover all the facts needed to validate whether the factual statement (in User "
               "message) is true, false, uncertain or a matter of opinion, and answer them using the provided "
               "sources.\n"
            << "After formulating Your questions and their answers, you note the single likeliest veracity verdict "
               "(Supported, Refuted, Not Enough Evidence, or Conflicting Evidence/Cherrypicking) according to your "
               "best knowledge.\n";
        return;
    }
    out << "You are a professional fact checker, formulate up to " << cfg.l
        << " questions that cover all the facts needed to validate whether the factual statement (in User message) "
           "is true, false, uncertain or a matter of opinion. Each question has one of four answer types: Boolean, "
           "Extractive, Abstractive and Unanswerable using the provided sources.\n"
        << "After formulating Your questions and their answers using the provided sources, You evaluate the "
           "possible veracity verdicts (Supported claim, Refuted claim, Not enough evidence, or Conflicting "
           "evidence/Cherrypicking) given your claim and evidence on a Likert scale (1 - Strongly disagree, 2 - "
           "Disagree, 3 - Neutral, 4 - Agree, 5 - Strongly agree). Ultimately, you note the single likeliest "
           "veracity verdict according to your best knowledge.\n";
}

void write_sources(std::ostringstream& out, std::span<const retriever::RetrievedSource> sources) {
    out << "The facts must be coming from these sources, please refer them using assigned IDs:\n";
    out << "---\n";
    for (std::size_t i = 0; i < sources.size(); ++i) {
        const auto& s = sources[i];
        if (i) out << '\n';
        out << "## Source ID: " << s.rank << " [" << s.chunk.doc_url << "]\n";
        if (s.chunk.prev_context) out << *s.chunk.prev_context << '\n';
        out << s.chunk.text << '\n';
        if (s.chunk.next_context) out << *s.chunk.next_context << '\n';
    }
    out << '\n';
}

void write_output_format(std::ostringstream& out, const GeneratorConfig& cfg) {
    out << "---\n"
        << "## Output formatting\n"
        << "Please, you MUST only print the output in the following output format:\n"
        << "```json\n"
        << "{\n"
        << " \"questions\":\n"
        << "     [\n";
    if (cfg.simplified) {
        out << "         {\"question\": \"<Your first question>\", \"answer\": \"<The answer to the Your first "
               "question>\", \"source\": \"<Single numeric source ID backing the answer for Your first "
               "question>\"},\n"
            << "         {\"question\": \"<Your second question>\", \"answer\": \"<The answer to the Your second "
               "question>\", \"source\": \"<Single numeric Source ID backing the answer for Your second "
               "question>\"}\n"
            << "     ],\n";
    } else {
        out << "         {\"question\": \"<Your first question>\", \"answer\": \"<The answer to the Your first "
               "question>\", \"source\": \"<Single numeric source ID backing the answer for Your first "
               "question>\", \"answer_type\":\"<The type of first answer>\"},\n"
            << "         {\"question\": \"<Your second question>\", \"answer\": \"<The answer to the Your second "
               "question>\", \"source\": \"<Single numeric Source ID backing the answer for Your second "
               "question>\", \"answer_type\":\"<The type of second answer>\"}\n"
            << "     ],\n"
            << " \"claim_veracity\": {\n";
        for (std::size_t i = 0; i < kAllLabels.size(); ++i) {
            const auto name = to_string(kAllLabels[i]);
            out << "     \"" << name << "\": \"<Likert-scale rating of how much You agree with the '" << name
                << "' veracity classification>\"" << (i + 1 < kAllLabels.size() ? "," : "") << '\n';
        }
        out << " },\n";
    }
    out << " \"veracity_verdict\": \"<The suggested veracity classification for the claim>\"\n"
        << "}\n"
        << "```\n";
}

void write_fewshot(std::ostringstream& out, std::span<const Claim> fewshot) {
    out << "---\n"
        << "## Few-shot learning\n"
        << "You have access to the following few-shot learning examples for questions and answers.:\n";
    for (const auto& example : fewshot) {
        out << "\n### Question examples for claim \"" << example.text << "\" (verdict "
            << (example.gold_label ? to_string(*example.gold_label) : std::string_view("unknown")) << ")\n";
        for (const auto& qa : example.gold_evidence)
            out << "\"question\": \"" << qa.question << "\", \"answer\": \"" << qa.answer << "\", \"answer_type\": \""
                << to_string(qa.answer_type) << "\"\n";
    }
}

}  // namespace

Prompt build_prompt(const Claim& claim, std::span<const retriever::RetrievedSource> sources,
                    std::span<const Claim> fewshot, const GeneratorConfig& cfg) {
    std::ostringstream out;
    write_instructions(out, cfg);
    write_sources(out, sources);
    write_output_format(out, cfg);
    if (!cfg.simplified && !fewshot.empty()) write_fewshot(out, fewshot);
    return {out.str(), claim.text};
}

namespace {

// Text between the first ```json (or ```) fence and its closing fence, or the input.
std::string_view strip_fences(std::string_view raw) {
    auto open = raw.find("```");
    if (open == std::string_view::npos) return raw;
    auto body_start = raw.find('\n', open);
    if (body_start == std::string_view::npos) return raw;
    ++body_start;
    auto close = raw.find("```", body_start);
    if (close == std::string_view::npos) return raw.substr(body_start);
    return raw.substr(body_start, close - body_start);
}

// First balanced {...} that parses as a JSON object.
std::optional<json> first_json_object(std::string_view s) {
    for (std::size_t start = s.find('{'); start != std::string_view::npos; start = s.find('{', start + 1)) {
        int depth = 0;
        bool in_string = false;
        bool escaped = false;
        for (std::size_t i = start; i < s.size(); ++i) {
            const char c = s[i];
            if (in_string) {
                if (escaped)
                    escaped = false;
                else if (c == '\\')
                    escaped = true;
                else if (c == '"')
                    in_string = false;
                continue;
            }
            if (c == '"')
                in_string = true;
            else if (c == '{')
                ++depth;
            else if (c == '}' && --depth == 0) {
                auto parsed = json::parse(s.substr(start, i - start + 1), nullptr, false);
                if (!parsed.is_discarded() && parsed.is_object()) return parsed;
                break;
            }
        }
    }
    return std::nullopt;
}

std::string as_text(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_null()) return {};
    return v.dump();
}

// Source ids arrive as 3, "3", "Source ID: 3" or "[3]"; 0 when no number is present.
std::size_t parse_source(const json& v) {
    if (v.is_number_unsigned() || v.is_number_integer()) {
        const auto n = v.get<long long>();
        return n > 0 ? static_cast<std::size_t>(n) : 0;
    }
    if (v.is_number_float()) {
        const double d = v.get<double>();
        return d >= 1.0 ? static_cast<std::size_t>(d) : 0;
    }
    if (v.is_array() && !v.empty()) return parse_source(v.front());
    if (!v.is_string()) return 0;
    const auto s = v.get<std::string>();
    std::size_t i = 0;
    while (i < s.size() && !(s[i] >= '0' && s[i] <= '9')) ++i;
    std::size_t n = 0;
    bool any = false;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9' && n < 1000000) {
        n = n * 10 + static_cast<std::size_t>(s[i] - '0');
        any = true;
        ++i;
    }
    return any ? n : 0;
}

std::optional<double> parse_rating(const json& v) {
    if (v.is_number()) return v.get<double>();
    if (!v.is_string()) return std::nullopt;
    const auto s = std::string(text::trim(v.get<std::string>()));
    if (s.empty()) return std::nullopt;
    try {
        std::size_t used = 0;
        const double d = std::stod(s, &used);
        return d;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

}  // namespace

GeneratorOutput parse_output(const std::string& raw_text, std::size_t source_count, const GeneratorConfig& cfg) {
    auto object = first_json_object(strip_fences(raw_text));
    if (!object) object = first_json_object(raw_text);
    if (!object) throw OutputParseError("no JSON object in model output", raw_text);
    const json& root = *object;

    GeneratorOutput out;
    out.raw_text = raw_text;
    auto& warnings = out.parse_warnings;

    auto verdict_it = root.find("veracity_verdict");
    if (verdict_it == root.end() || !verdict_it->is_string())
        throw OutputParseError("model output lacks veracity_verdict", raw_text);
    const auto verdict = parse_label_lenient(verdict_it->get<std::string>());
    if (!verdict)
        throw OutputParseError("unknown veracity_verdict \"" + verdict_it->get<std::string>() + "\"", raw_text);
    out.verdict = *verdict;

    if (cfg.simplified && root.find("claim_veracity") == root.end()) {
        out.ratings = {1, 1, 1, 1};
        out.ratings[label_index(out.verdict)] = 5;
    } else {
        auto ratings_it = root.find("claim_veracity");
        if (ratings_it == root.end() || !ratings_it->is_object())
            throw OutputParseError("model output lacks claim_veracity ratings", raw_text);
        std::array<bool, kLabelCount> seen{};
        for (auto& [key, value] : ratings_it->items()) {
            const auto label = parse_label_lenient(key);
            if (!label) {
                warnings.push_back("ignored rating for unknown label \"" + key + "\"");
                continue;
            }
            auto rating = parse_rating(value);
            if (!rating || !std::isfinite(*rating))
                throw OutputParseError("rating for \"" + key + "\" is not a number", raw_text);
            double r = *rating;
            if (r != std::round(r)) {
                warnings.push_back("rating for \"" + key + "\" rounded from " + as_text(value));
                r = std::round(r);
            }
            if (r < 1.0 || r > 5.0) {
                warnings.push_back("rating for \"" + key + "\" clamped from " + as_text(value));
                r = std::clamp(r, 1.0, 5.0);
            }
            out.ratings[label_index(*label)] = static_cast<int>(r);
            seen[label_index(*label)] = true;
        }
        for (auto label : kAllLabels)
            if (!seen[label_index(label)])
                throw OutputParseError("claim_veracity lacks a rating for \"" + std::string(to_string(label)) + "\"",
                                       raw_text);
    }

    auto questions = root.find("questions");
    if (questions == root.end() || !questions->is_array()) {
        warnings.push_back("model output has no questions array");
    } else {
        std::size_t position = 0;
        for (const auto& item : *questions) {
            ++position;
            const std::string where = "evidence " + std::to_string(position);
            if (!item.is_object()) {
                warnings.push_back(where + ": not an object, skipped");
                continue;
            }
            EvidenceQA qa;
            if (auto it = item.find("question"); it != item.end()) qa.question = as_text(*it);
            if (auto it = item.find("answer"); it != item.end()) qa.answer = as_text(*it);
            if (text::trim(qa.question).empty() || text::trim(qa.answer).empty()) {
                warnings.push_back(where + ": empty question or answer, skipped");
                continue;
            }
            auto source = item.find("source");
            qa.source_rank = source == item.end() ? 0 : parse_source(*source);
            if (qa.source_rank < 1 || qa.source_rank > source_count)
                warnings.push_back(where + ": source " + (source == item.end() ? "missing" : as_text(*source)) +
                                   " outside 1.." + std::to_string(source_count));
            auto type = item.find("answer_type");
            if (type == item.end() || !type->is_string()) {
                if (!cfg.simplified) warnings.push_back(where + ": answer_type missing, using Abstractive");
            } else if (auto parsed = parse_answer_type_lenient(type->get<std::string>())) {
                qa.answer_type = *parsed;
            } else {
                warnings.push_back(where + ": unknown answer_type \"" + type->get<std::string>() +
                                   "\", using Abstractive");
            }
            out.evidence.push_back(std::move(qa));
        }
    }
    if (out.evidence.size() > cfg.l) {
        warnings.push_back("truncated " + std::to_string(out.evidence.size()) + " evidence items to " +
                           std::to_string(cfg.l));
        out.evidence.resize(cfg.l);
    }
    return out;
}

json to_llm_json(const GeneratorOutput& output) {
    json questions = json::array();
    for (const auto& qa : output.evidence)
        questions.push_back({{"question", qa.question},
                             {"answer", qa.answer},
                             {"source", std::to_string(qa.source_rank)},
                             {"answer_type", std::string(to_string(qa.answer_type))}});
    json veracity = json::object();
    for (auto label : kAllLabels)
        veracity[std::string(to_string(label))] = std::to_string(output.ratings[label_index(label)]);
    return {{"questions", std::move(questions)},
            {"claim_veracity", std::move(veracity)},
            {"veracity_verdict", std::string(to_string(output.verdict))}};
}

GeneratorOutput empty_retrieval_output() {
    GeneratorOutput out;
    out.ratings = {1, 1, 1, 1};
    out.ratings[label_index(VeracityLabel::NotEnoughEvidence)] = 5;
    out.verdict = VeracityLabel::NotEnoughEvidence;
    out.parse_warnings.push_back("empty retrieval: no sources, model not called");
    return out;
}

GeneratorOutput run_generation(const Claim& claim, std::span<const retriever::RetrievedSource> sources,
                               const FewshotSelector* fewshot, llm::ChatClient& client,
                               const GeneratorConfig& cfg) {
    cfg.validate();
    if (sources.empty()) return empty_retrieval_output();

    std::vector<Claim> examples;
    if (fewshot && !cfg.simplified)
        examples = fewshot->select(claim, cfg.fewshot_count,
                                   cfg.fewshot_exclude_self ? std::optional<ClaimId>(claim.id) : std::nullopt);
    const auto prompt = build_prompt(claim, sources, examples, cfg);
    const llm::ChatRequest request{claim.id, prompt.system, prompt.user};

    for (std::size_t attempt = 0;; ++attempt) {
        const auto raw = client.complete(request);
        try {
            auto out = parse_output(raw, sources.size(), cfg);
            out.retry_count = attempt;
            if (attempt > 0) out.parse_warnings.push_back("retry_count " + std::to_string(attempt));
            return out;
        } catch (const OutputParseError&) {
            if (attempt >= cfg.max_retries) throw;
        }
    }
}

}  // namespace factcheck::generator
