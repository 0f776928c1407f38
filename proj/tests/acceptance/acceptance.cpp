// Prints one PASS/FAIL line per acceptance criterion; exits nonzero on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "factcheck/commands.hpp"
#include "factcheck/corpus.hpp"
#include "factcheck/dense.hpp"
#include "factcheck/hungarian.hpp"
#include "factcheck/lexical.hpp"
#include "factcheck/meteor.hpp"
#include "factcheck/porter_stemmer.hpp"
#include "factcheck/scoring.hpp"
#include "factcheck/verdict.hpp"
#include "oracles/assignment_oracle.hpp"
#include "oracles/bm25_oracle.hpp"
#include "oracles/meteor_oracle.hpp"
#include "oracles/mmr_oracle.hpp"
#include "support.hpp"

using namespace factcheck;
using testing_support::data_dir;
using testing_support::read_file;
using testing_support::TempDir;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why) {
        if (pass) detail = why;
        pass = false;
    }
};

const config::EnvLookup no_env = [](const std::string&) -> std::optional<std::string> { return std::nullopt; };

config::AppConfig fixture_config(const std::filesystem::path& out) {
    return config::load_config(std::nullopt, no_env,
                               {{"paths.dataset", (data_dir() / "dev10.json").string()},
                                {"paths.knowledge_store", (data_dir() / "store10.jsonl").string()},
                                {"paths.output_dir", out.string()},
                                {"retrieval.max_chars", "300"}});
}

Outcome echo_end_to_end() {
    Outcome o;
    TempDir dir("accept_echo");
    const auto cfg = fixture_config(dir.path());
    std::ostringstream out, err;
    const auto t0 = std::chrono::steady_clock::now();
    if (app::cmd_verify(cfg, {}, out, err) != app::kExitOk) {
        o.fail("verify failed: " + err.str());
        return o;
    }
    if (app::cmd_evaluate(cfg, app::predictions_path(cfg), cfg.paths.dataset, {}, out, err) != app::kExitOk) {
        o.fail("evaluate failed: " + err.str());
        return o;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const auto report = nlohmann::json::parse(read_file(dir / "score_report.json"));
    const double score = report["averitec_score"]["0.25"].get<double>();
    const double accuracy = report["accuracy"].get<double>();
    std::ostringstream d;
    d << "AVeriTeC@0.25 " << score << ", accuracy " << accuracy << ", " << secs << " s";
    o.detail = d.str();
    if (score != 1.0 || accuracy != 1.0 || secs >= 10.0) o.fail(d.str());
    return o;
}

Outcome hungarian_oracle() {
    Outcome o;
    std::mt19937_64 rng(1001);
    std::uniform_real_distribution<double> u(-5, 5);
    for (int t = 0; t < 1000; ++t) {
        const std::size_t rows = 1 + rng() % 5, cols = 1 + rng() % 5;
        std::vector<std::vector<double>> m(rows, std::vector<double>(cols));
        scoring::Matrix mat(rows, cols);
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c) {
                m[r][c] = t % 2 ? u(rng) : static_cast<double>(rng() % 4);
                mat(r, c) = m[r][c];
            }
        const auto got = scoring::hungarian_max(mat);
        const auto want = oracle::brute_force_max(m);
        double recomputed = 0;
        for (const auto& [r, c] : got.pairs) recomputed += m[r][c];
        if (got.total != want.total || std::abs(recomputed - want.total) > 1e-9) {
            o.fail("trial " + std::to_string(t) + " total differs");
            break;
        }
    }
    if (o.pass) o.detail = "1000 matrices";
    return o;
}

Outcome mmr_oracle() {
    Outcome o;
    std::mt19937_64 rng(1003);
    std::normal_distribution<double> normal;
    for (int t = 0; t < 500 && o.pass; ++t) {
        const std::size_t n = 1 + rng() % 12, dim = 4 + rng() % 61, k = 1 + rng() % n;
        const double lambda = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        std::vector<std::vector<double>> raw(n, std::vector<double>(dim));
        std::vector<double> query(dim);
        for (auto& x : query) x = normal(rng);
        std::vector<dense::MmrCandidate> cands;
        std::vector<double> sims;
        dense::VectorIndex index;
        for (std::size_t i = 0; i < n; ++i) {
            for (auto& x : raw[i]) x = normal(rng);
            sims.push_back(oracle::cosine(raw[i], query));
            cands.push_back({std::to_string(i), dense::EmbeddingVector(raw[i]), sims.back()});
            index.add(std::to_string(i), dense::EmbeddingVector(raw[i]));
        }
        auto ids = [](const std::vector<std::size_t>& pos) {
            std::vector<std::string> out;
            for (auto p : pos) out.push_back(std::to_string(p));
            return out;
        };
        const auto got = dense::mmr_select(cands, {lambda, 40, k});
        if (got != ids(oracle::mmr_greedy(raw, sims, lambda, k))) o.fail("greedy mismatch at trial " + std::to_string(t));

        // With lambda = 1 the candidates carry their own query similarity, so
        // the selection must follow the index's nearest-neighbour order.
        std::vector<dense::MmrCandidate> knn_cands;
        const auto hits = index.knn(dense::EmbeddingVector(query), n);
        for (std::size_t i = 0; i < n; ++i) knn_cands.push_back({std::to_string(i), dense::EmbeddingVector(raw[i]), 0.0});
        for (const auto& h : hits) knn_cands[std::stoul(h.payload_id)].sim_to_query = h.sim;
        const auto greedy = dense::mmr_select(knn_cands, {1.0, 40, n});
        std::vector<std::string> knn_ids;
        for (const auto& h : hits) knn_ids.push_back(h.payload_id);
        if (greedy != knn_ids) o.fail("lambda=1 differs from knn at trial " + std::to_string(t));
    }
    if (o.pass) o.detail = "500 candidate sets";
    return o;
}

Outcome bm25_oracle() {
    Outcome o;
    const std::vector<lexical::Tokens> single{{"cat", "sat"}};
    const std::vector<std::string> q{"cat"};
    const auto idx = lexical::Bm25Index::build(single);
    const auto hand = idx.top(q, 1);
    if (hand.size() != 1 || std::abs(hand[0].score - 0.2877) > 1e-4) o.fail("hand case");

    std::mt19937_64 rng(1007);
    const std::vector<std::string> vocab{"a", "b", "c", "d", "e", "f", "g", "h", "i", "j", "k", "l"};
    for (int t = 0; t < 300 && o.pass; ++t) {
        std::vector<lexical::Tokens> docs(1 + rng() % 50);
        for (auto& d : docs) {
            d.resize(rng() % 15);
            for (auto& w : d) w = vocab[rng() % vocab.size()];
        }
        std::vector<std::string> query(1 + rng() % 4);
        for (auto& w : query) w = vocab[rng() % vocab.size()];
        const std::size_t omega = 1 + rng() % 60;
        const auto got = lexical::Bm25Index::build(docs).top(query, omega);
        const auto want = oracle::bm25_scan(docs, query, omega);
        bool same = got.size() == want.size();
        for (std::size_t i = 0; same && i < got.size(); ++i)
            same = got[i].doc == want[i].doc && std::abs(got[i].score - want[i].score) <= 1e-12 * std::max(1.0, want[i].score);
        if (!same) o.fail("scan mismatch at trial " + std::to_string(t));
    }
    if (o.pass) o.detail = "hand case " + std::to_string(hand[0].score) + ", 300 corpora";
    return o;
}

Outcome likert_softmax() {
    Outcome o;
    for (int code = 0; code < 625; ++code) {
        LikertRatings r;
        for (std::size_t i = 0, c = code; i < kLabelCount; ++i, c /= 5) r[i] = 1 + static_cast<int>(c % 5);
        const auto p = verdict::likert_softmax(r).probs();
        if (std::abs(std::accumulate(p.begin(), p.end(), 0.0) - 1.0) > 1e-9) o.fail("sum off for vector " + std::to_string(code));
        const auto top = std::max_element(r.begin(), r.end()) - r.begin();
        if (std::count(r.begin(), r.end(), r[top]) == 1 && std::max_element(p.begin(), p.end()) - p.begin() != top)
            o.fail("argmax moved for vector " + std::to_string(code));
    }
    LikertRatings example{};
    example[label_index(VeracityLabel::Supported)] = 2;
    example[label_index(VeracityLabel::Refuted)] = 5;
    example[label_index(VeracityLabel::ConflictingEvidenceCherrypicking)] = 4;
    example[label_index(VeracityLabel::NotEnoughEvidence)] = 2;
    const double want = std::exp(5.0) / (2 * std::exp(2.0) + std::exp(4.0) + std::exp(5.0));
    const double got = verdict::likert_softmax(example)[VeracityLabel::Refuted];
    if (std::abs(got - want) > 1e-3) o.fail("example gives " + std::to_string(got));
    if (o.pass) o.detail = "625 vectors, example Refuted " + std::to_string(got);
    return o;
}

Outcome meteor_lite() {
    Outcome o;
    const double same = scoring::meteor_lite("the council voted yes", "the council voted yes");
    if (std::abs(same - (1.0 - 0.5 / 64.0)) > 1e-9) o.fail("identical strings give " + std::to_string(same));
    if (scoring::meteor_lite("alpha beta", "gamma delta") != 0.0) o.fail("disjoint strings score nonzero");
    const std::vector<std::string> vocab{"the", "a", "cat", "cats", "run", "runs", "running", "vote", "voted", "votes"};
    std::mt19937_64 rng(1009);
    auto stem = [](const std::string& w) { return porter_stem(w); };
    for (int t = 0; t < 2000 && o.pass; ++t) {
        std::vector<std::string> cand(1 + rng() % 6), ref(1 + rng() % 6);
        for (auto& w : cand) w = vocab[rng() % vocab.size()];
        for (auto& w : ref) w = vocab[rng() % vocab.size()];
        const auto got = scoring::align_tokens(cand, ref, true);
        const auto want = oracle::meteor_exhaustive(cand, ref, stem);
        if (got.pairs.size() != want.matches || got.crossings != want.crossings || got.chunks != want.chunks)
            o.fail("alignment mismatch at trial " + std::to_string(t));
    }
    if (o.pass) o.detail = "identical " + std::to_string(same) + ", 2000 alignments";
    return o;
}

Outcome chunking() {
    Outcome o;
    std::mt19937_64 rng(1013);
    const std::string alphabet = "abcdefghij ";
    for (int t = 0; t < 1000 && o.pass; ++t) {
        Document doc{"https://example.org/" + std::to_string(t), {}};
        doc.sentences.resize(1 + rng() % 30);
        for (auto& s : doc.sentences) {
            s.resize(1 + rng() % 150);
            for (auto& ch : s) ch = alphabet[rng() % (alphabet.size() - 1)];
        }
        const std::size_t max_chars = 20 + rng() % 300;
        const auto chunks = corpus::chunk_document(doc, max_chars);
        std::vector<std::string> rebuilt;
        for (std::size_t i = 0; i < chunks.size(); ++i) {
            const auto& c = chunks[i];
            rebuilt.insert(rebuilt.end(), c.sentences.begin(), c.sentences.end());
            std::string joined;
            for (const auto& s : c.sentences) joined += (joined.empty() ? "" : " ") + s;
            if (joined != c.text) o.fail("chunk text is not its sentences joined");
            if (c.text.size() > max_chars && !(c.oversized && c.sentences.size() == 1)) o.fail("length bound broken");
            if (c.index_in_doc != i || c.doc_url != doc.url) o.fail("chunk identity wrong");
            const bool prev_ok = i == 0 ? !c.prev_context : c.prev_context == chunks[i - 1].text;
            const bool next_ok = i + 1 == chunks.size() ? !c.next_context : c.next_context == chunks[i + 1].text;
            if (!prev_ok || !next_ok) o.fail("context linkage broken");
        }
        if (rebuilt != doc.sentences) o.fail("round trip failed at document " + std::to_string(t));
    }
    if (o.pass) o.detail = "1000 documents";
    return o;
}

Outcome threshold_monotonicity() {
    Outcome o;
    std::mt19937_64 rng(1019);
    const std::vector<std::string> words{"who", "voted", "council", "tax", "rise", "mayor", "no", "yes", "in", "march", "report"};
    auto sentence = [&] {
        std::string s;
        for (std::size_t i = 0, n = 1 + rng() % 6; i < n; ++i) s += (s.empty() ? "" : " ") + words[rng() % words.size()];
        return s;
    };
    scoring::ScoringConfig cfg;
    cfg.thresholds = {0.1, 0.25, 0.5};
    for (int t = 0; t < 200 && o.pass; ++t) {
        std::vector<Claim> gold;
        std::vector<Prediction> preds;
        for (ClaimId id = 0, n = 1 + rng() % 8; id < n; ++id) {
            Claim c;
            c.id = id;
            c.text = "claim " + std::to_string(id);
            c.gold_label = kAllLabels[rng() % kLabelCount];
            for (std::size_t q = 0, m = 1 + rng() % 4; q < m; ++q)
                c.gold_evidence.push_back({sentence(), sentence(), AnswerType::Abstractive});
            Prediction p;
            p.claim_id = id;
            p.claim = c.text;
            p.verdict = rng() % 2 ? *c.gold_label : kAllLabels[rng() % kLabelCount];
            for (std::size_t q = 0, m = rng() % 5; q < m; ++q) {
                if (rng() % 3 == 0 && q < c.gold_evidence.size())
                    p.evidence.push_back({c.gold_evidence[q].question, c.gold_evidence[q].answer, "", AnswerType::Abstractive});
                else
                    p.evidence.push_back({sentence(), sentence(), "", AnswerType::Abstractive});
            }
            gold.push_back(std::move(c));
            preds.push_back(std::move(p));
        }
        const auto report = scoring::averitec_score(preds, gold, cfg);
        const double a = report.averitec_score.at(0.1), b = report.averitec_score.at(0.25), c = report.averitec_score.at(0.5);
        if (!(a >= b && b >= c)) o.fail("non-monotone at trial " + std::to_string(t));
        if (a > report.accuracy) o.fail("score above accuracy at trial " + std::to_string(t));
    }
    if (o.pass) o.detail = "200 fixtures";
    return o;
}

Outcome determinism() {
    Outcome o;
    TempDir a("accept_det_a"), b("accept_det_b");
    std::ostringstream out, err;
    const auto cfg_a = fixture_config(a.path()), cfg_b = fixture_config(b.path());
    if (app::cmd_retrieve(cfg_a, {}, out, err) != app::kExitOk || app::cmd_retrieve(cfg_b, {}, out, err) != app::kExitOk) {
        o.fail("retrieve failed: " + err.str());
        return o;
    }
    for (ClaimId id = 0; id < 10; ++id)
        if (read_file(app::trace_path(cfg_a, id)) != read_file(app::trace_path(cfg_b, id)))
            o.fail("trace " + std::to_string(id) + " differs");
    if (o.pass) o.detail = "10 traces identical";
    return o;
}

}  // namespace

int main() {
    const std::vector<std::function<Outcome()>> criteria{echo_end_to_end, hungarian_oracle, mmr_oracle,
                                                         bm25_oracle,     likert_softmax,   meteor_lite,
                                                         chunking,        threshold_monotonicity, determinism};
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i]();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        failures += o.pass ? 0 : 1;
        std::cout << "criterion " << i + 1 << ": " << (o.pass ? "PASS" : "FAIL") << " " << o.detail << '\n';
    }
    std::cout << "criterion 10: SKIP live smoke test needs credentials\n";
    return failures == 0 ? 0 : 1;
}
