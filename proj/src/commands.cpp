#include "factcheck/commands.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <sstream>

#include <json.hpp>

#include "factcheck/corpus.hpp"
#include "factcheck/errors.hpp"
#include "factcheck/llm.hpp"
#include "factcheck/prediction.hpp"
#include "factcheck/text.hpp"

namespace factcheck::app {

using json = nlohmann::json;
namespace fs = std::filesystem;

fs::path predictions_path(const config::AppConfig& cfg) { return cfg.paths.output_dir / "predictions.json"; }
fs::path progress_path(const config::AppConfig& cfg) { return cfg.paths.output_dir / "progress.jsonl"; }
fs::path errors_path(const config::AppConfig& cfg) { return cfg.paths.output_dir / "errors.json"; }
fs::path trace_path(const config::AppConfig& cfg, ClaimId id) {
    return cfg.paths.output_dir / "retrieval" / ("claim_" + std::to_string(id) + ".json");
}
fs::path embedding_cache_path(const config::AppConfig& cfg) { return cfg.paths.cache_dir / "embeddings.jsonl"; }

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Maps exceptions to exit codes: input and configuration problems are usage
// errors (2), everything else is a runtime failure (1).
template <typename Fn>
int guarded(std::ostream& err, const char* command, Fn&& fn) {
    try {
        return fn();
    } catch (const UsageError& e) {
        err << command << ": " << e.what() << '\n';
        return kExitUsage;
    } catch (const ConfigError& e) {
        err << command << ": configuration error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ValidationError& e) {
        err << command << ": validation error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ParseError& e) {
        err << command << ": parse error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << command << ": " << e.what() << '\n';
        return kExitRuntime;
    }
}

void require_path(const fs::path& p, const char* key) {
    if (p.empty()) throw UsageError(std::string(key) + " is not set");
    if (!fs::exists(p)) throw UsageError(std::string(key) + " does not exist: " + p.string());
}

std::vector<Claim> select_claims(const std::vector<Claim>& claims, const std::vector<ClaimId>& wanted) {
    if (wanted.empty()) return claims;
    std::map<ClaimId, const Claim*> by_id;
    for (const auto& c : claims) by_id.emplace(c.id, &c);
    std::vector<ClaimId> unknown;
    for (auto id : wanted)
        if (!by_id.count(id)) unknown.push_back(id);
    if (!unknown.empty()) {
        std::string msg = "unknown claim id";
        for (auto id : unknown) msg += " " + std::to_string(id);
        msg += "; valid ids:";
        std::size_t shown = 0;
        for (const auto& [id, _] : by_id) {
            if (++shown > 50) {
                msg += " ...";
                break;
            }
            msg += " " + std::to_string(id);
        }
        throw UsageError(msg);
    }
    const std::set<ClaimId> keep(wanted.begin(), wanted.end());
    std::vector<Claim> out;
    for (const auto& c : claims)
        if (keep.count(c.id)) out.push_back(c);
    return out;
}

// Knowledge stores come either as one multi-claim JSON-lines file or as a
// directory holding <claim_id>.json / <claim_id>.jsonl per claim.
class StoreSource {
public:
    explicit StoreSource(fs::path path) : path_(std::move(path)) {
        if (!fs::is_directory(path_)) stores_ = corpus::load_knowledge_stores(path_);
    }

    corpus::KnowledgeStore get(ClaimId id) const {
        if (stores_) {
            auto it = stores_->find(id);
            return it == stores_->end() ? corpus::KnowledgeStore{} : it->second;
        }
        for (const char* ext : {".json", ".jsonl"}) {
            const auto file = path_ / (std::to_string(id) + ext);
            if (fs::exists(file)) return corpus::load_knowledge_store(file, id);
        }
        return {};
    }

private:
    fs::path path_;
    std::optional<std::map<ClaimId, corpus::KnowledgeStore>> stores_;
};

struct Embedders {
    std::shared_ptr<embedding::EmbeddingProvider> base;
    std::shared_ptr<embedding::EmbeddingCache> cache;

    explicit Embedders(const config::AppConfig& cfg) : base(embedding::make_provider(cfg.embedding)) {
        if (!cfg.paths.cache_dir.empty()) cache = std::make_shared<embedding::EmbeddingCache>(embedding_cache_path(cfg));
    }

    std::shared_ptr<embedding::EmbeddingProvider> for_claim(ClaimId id) const {
        if (!cache) return base;
        return std::make_shared<embedding::CachingEmbedder>(base, cache, "claim_" + std::to_string(id));
    }
};

std::unique_ptr<llm::ChatClient> make_chat_client(const config::AppConfig& cfg, const std::vector<Claim>& dataset) {
    switch (cfg.chat.kind) {
        case config::ChatProviderKind::Echo: return std::make_unique<llm::EchoChatClient>(dataset);
        case config::ChatProviderKind::Mock:
            return llm::MockChatClient::from_file(cfg.chat.mock_script);
        case config::ChatProviderKind::Http: {
            llm::HttpChatConfig http;
            http.base_url = cfg.chat.base_url;
            http.model_name = cfg.chat.model_name;
            http.temperature = cfg.chat.temperature;
            http.timeout_s = cfg.chat.timeout_s;
            http.api_key_env = cfg.chat.api_key_env;
            return std::make_unique<llm::HttpChatClient>(http);
        }
    }
    throw ConfigError("unknown chat provider");
}

json error_record(ClaimId id, const std::string& message) { return {{"claim_id", id}, {"error", message}}; }

}  // namespace

int cmd_ingest(const config::AppConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, "ingest", [&] {
        require_path(cfg.paths.dataset, "paths.dataset");
        const auto claims = corpus::load_dataset(cfg.paths.dataset);
        std::array<std::size_t, kLabelCount> labels{};
        std::size_t labelled = 0, gold_pairs = 0;
        for (const auto& c : claims) {
            if (c.gold_label) {
                ++labelled;
                ++labels[label_index(*c.gold_label)];
            }
            gold_pairs += c.gold_evidence.size();
        }
        out << "dataset: " << cfg.paths.dataset.string() << '\n';
        out << "claims: " << claims.size() << " (" << labelled << " labelled, " << gold_pairs << " gold QA pairs)\n";
        for (auto label : kAllLabels) out << "  " << to_string(label) << ": " << labels[label_index(label)] << '\n';

        if (!cfg.paths.knowledge_store.empty()) {
            require_path(cfg.paths.knowledge_store, "paths.knowledge_store");
            const StoreSource stores(cfg.paths.knowledge_store);
            std::size_t docs = 0, dropped = 0, chunks = 0, oversized = 0, without = 0;
            std::vector<std::size_t> sentence_counts;
            for (const auto& c : claims) {
                const auto store = stores.get(c.id);
                if (store.documents.empty()) ++without;
                docs += store.documents.size();
                dropped += store.dropped;
                for (const auto& d : store.documents) {
                    sentence_counts.push_back(d.sentences.size());
                    for (const auto& ch : corpus::chunk_document(d, cfg.retrieval.max_chars)) {
                        ++chunks;
                        oversized += ch.oversized ? 1 : 0;
                    }
                }
            }
            std::size_t median = 0;
            if (!sentence_counts.empty()) {
                auto mid = sentence_counts.begin() + static_cast<std::ptrdiff_t>(sentence_counts.size() / 2);
                std::nth_element(sentence_counts.begin(), mid, sentence_counts.end());
                median = *mid;
            }
            out << "knowledge store: " << cfg.paths.knowledge_store.string() << '\n';
            out << "documents: " << docs << " (dropped " << dropped << " empty, median " << median
                << " sentences)\n";
            out << "chunks at max_chars=" << cfg.retrieval.max_chars << ": " << chunks << " (" << oversized
                << " oversized)\n";
            out << "claims without documents: " << without << '\n';
        }
        return kExitOk;
    });
}

int cmd_retrieve(const config::AppConfig& cfg, const RunOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, "retrieve", [&] {
        require_path(cfg.paths.dataset, "paths.dataset");
        require_path(cfg.paths.knowledge_store, "paths.knowledge_store");
        const auto claims = select_claims(corpus::load_dataset(cfg.paths.dataset), opts.claim_ids);
        const StoreSource stores(cfg.paths.knowledge_store);
        const Embedders embedders(cfg);

        std::mutex mutex;
        std::vector<json> errors;
        std::atomic<bool> stop{false};
        std::atomic<std::size_t> written{0};
        const long long n = static_cast<long long>(claims.size());
        const int threads = static_cast<int>(std::max<std::size_t>(opts.jobs, 1));
#pragma omp parallel for schedule(dynamic) num_threads(threads)
        for (long long i = 0; i < n; ++i) {
            if (stop) continue;
            const auto& claim = claims[static_cast<std::size_t>(i)];
            try {
                const auto store = stores.get(claim.id);
                auto embedder = embedders.for_claim(claim.id);
                const auto result = retriever::retrieve(claim, store.documents, cfg.retrieval, *embedder);
                auto trace = result.trace.to_json();
                trace["empty_retrieval"] = result.empty_retrieval();
                write_file_atomic(trace_path(cfg, claim.id), trace.dump(2) + "\n");
                ++written;
            } catch (const std::exception& e) {
                std::lock_guard lock(mutex);
                errors.push_back(error_record(claim.id, e.what()));
                if (!opts.keep_going) stop = true;
            }
        }

        if (!errors.empty() && !opts.keep_going) {
            for (const auto& e : errors)
                err << "retrieve: claim " << e["claim_id"] << ": " << e["error"].get<std::string>() << '\n';
            return kExitRuntime;
        }
        if (!errors.empty()) {
            std::sort(errors.begin(), errors.end(),
                      [](const json& a, const json& b) { return a["claim_id"] < b["claim_id"]; });
            write_file_atomic(cfg.paths.output_dir / "retrieval" / "errors.json", json(errors).dump(2) + "\n");
        }
        out << "retrieve: wrote " << written << " traces to " << (cfg.paths.output_dir / "retrieval").string()
            << ", " << errors.size() << " failed\n";
        return kExitOk;
    });
}

namespace {

std::map<ClaimId, Prediction> load_progress(const fs::path& path) {
    std::map<ClaimId, Prediction> done;
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) {
        if (text::trim(line).empty()) continue;
        // A torn final line from an interrupted run is skipped and redone.
        auto j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) continue;
        try {
            auto p = prediction_from_json(j);
            done.insert_or_assign(p.claim_id, std::move(p));
        } catch (const ValidationError&) {
        }
    }
    return done;
}

Prediction to_prediction(const Claim& claim, const generator::GeneratorOutput& gen,
                         std::span<const retriever::RetrievedSource> sources,
                         const std::optional<verdict::EnsembleConfig>& ensemble,
                         const std::map<ClaimId, verdict::LabelDistribution>& external) {
    Prediction p;
    p.claim_id = claim.id;
    p.claim = claim.text;
    for (const auto& qa : gen.evidence) {
        PredictedQA out{qa.question, qa.answer, {}, qa.answer_type};
        if (qa.source_rank >= 1 && qa.source_rank <= sources.size())
            out.source_url = sources[qa.source_rank - 1].chunk.doc_url;
        p.evidence.push_back(std::move(out));
    }
    p.ratings = gen.ratings;
    auto dist = verdict::likert_softmax(gen.ratings);
    p.verdict = gen.verdict;
    if (ensemble) {
        auto it = external.find(claim.id);
        if (it == external.end())
            throw ValidationError("no external probabilities for claim " + std::to_string(claim.id));
        dist = verdict::ensemble(dist, it->second, *ensemble);
        p.verdict = verdict::final_label(dist, gen.verdict);
    }
    p.probs = dist.probs();
    return p;
}

}  // namespace

int cmd_verify(const config::AppConfig& cfg, const RunOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, "verify", [&] {
        require_path(cfg.paths.dataset, "paths.dataset");
        require_path(cfg.paths.knowledge_store, "paths.knowledge_store");
        const auto dataset = corpus::load_dataset(cfg.paths.dataset);
        const auto claims = select_claims(dataset, opts.claim_ids);
        const StoreSource stores(cfg.paths.knowledge_store);
        const Embedders embedders(cfg);
        auto client = make_chat_client(cfg, dataset);

        auto gen_cfg = cfg.generator;
        std::unique_ptr<generator::FewshotSelector> fewshot;
        if (!cfg.paths.train_set.empty()) {
            require_path(cfg.paths.train_set, "paths.train_set");
            fewshot = std::make_unique<generator::FewshotSelector>(corpus::load_dataset(cfg.paths.train_set),
                                                                   cfg.retrieval.tokenizer);
            gen_cfg.fewshot_exclude_self = fs::equivalent(cfg.paths.train_set, cfg.paths.dataset);
        }

        std::map<ClaimId, verdict::LabelDistribution> external;
        if (cfg.ensemble) {
            require_path(cfg.external_probs, "ensemble.external_probs");
            external = verdict::load_external_probs(cfg.external_probs);
        }

        fs::create_directories(cfg.paths.output_dir);
        auto done = load_progress(progress_path(cfg));
        const std::size_t resumed = std::count_if(claims.begin(), claims.end(), [&](const Claim& c) { return done.count(c.id) > 0; });

        std::mutex mutex;
        std::ofstream progress(progress_path(cfg), std::ios::app);
        std::vector<json> errors;
        std::atomic<std::size_t> generated{0};
        const long long n = static_cast<long long>(claims.size());
        const int threads = static_cast<int>(std::max<std::size_t>(opts.jobs, 1));
#pragma omp parallel for schedule(dynamic) num_threads(threads)
        for (long long i = 0; i < n; ++i) {
            const auto& claim = claims[static_cast<std::size_t>(i)];
            {
                std::lock_guard lock(mutex);
                if (done.count(claim.id)) continue;
            }
            try {
                const auto store = stores.get(claim.id);
                auto embedder = embedders.for_claim(claim.id);
                const auto retrieval = retriever::retrieve(claim, store.documents, cfg.retrieval, *embedder);
                const auto gen = generator::run_generation(claim, retrieval.sources, fewshot.get(), *client, gen_cfg);
                auto prediction = to_prediction(claim, gen, retrieval.sources, cfg.ensemble, external);
                std::lock_guard lock(mutex);
                progress << to_json(prediction).dump() << '\n' << std::flush;
                done.insert_or_assign(claim.id, std::move(prediction));
                ++generated;
            } catch (const std::exception& e) {
                std::lock_guard lock(mutex);
                errors.push_back(error_record(claim.id, e.what()));
            }
        }
        progress.close();

        std::vector<Prediction> predictions;
        for (const auto& c : claims)
            if (auto it = done.find(c.id); it != done.end()) predictions.push_back(it->second);
        write_predictions(predictions_path(cfg), predictions);
        std::sort(errors.begin(), errors.end(),
                  [](const json& a, const json& b) { return a["claim_id"] < b["claim_id"]; });
        write_file_atomic(errors_path(cfg), json(errors).dump(2) + "\n");

        for (const auto& e : errors)
            err << "verify: claim " << e["claim_id"] << ": " << e["error"].get<std::string>() << '\n';
        out << "verify: " << predictions.size() << " predictions (" << generated << " new, " << resumed
            << " resumed), " << errors.size() << " failures -> " << predictions_path(cfg).string() << '\n';
        return errors.empty() ? kExitOk : kExitRuntime;
    });
}

int cmd_evaluate(const config::AppConfig& cfg, const fs::path& predictions, const fs::path& dataset,
                 const RunOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, "evaluate", [&] {
        require_path(predictions, "predictions");
        require_path(dataset, "dataset");
        const auto preds = load_predictions(predictions);
        const auto gold = select_claims(corpus::load_dataset(dataset), opts.claim_ids);
        const auto report = scoring::averitec_score(preds, gold, cfg.scoring);
        write_file_atomic(cfg.paths.output_dir / "score_report.json", report.to_json().dump(2) + "\n");
        write_file_atomic(cfg.paths.output_dir / "score_report.csv", report.to_csv());
        out << report.summary();
        return kExitOk;
    });
}

int cmd_cache(const config::AppConfig& cfg, CacheAction action, std::ostream& out, std::ostream& err) {
    return guarded(err, "cache", [&] {
        if (cfg.paths.cache_dir.empty()) throw UsageError("paths.cache_dir is not set");
        const auto file = embedding_cache_path(cfg);
        if (action == CacheAction::Clear) {
            const bool removed = fs::remove(file);
            out << "cache: " << (removed ? "removed " : "nothing to remove at ") << file.string() << '\n';
            return kExitOk;
        }
        if (!fs::exists(file)) {
            out << "cache: " << file.string() << " is empty\n";
            return kExitOk;
        }
        std::map<std::string, std::size_t> per_model;
        std::set<std::size_t> dims;
        std::ifstream in(file);
        std::string line;
        std::size_t entries = 0;
        while (std::getline(in, line)) {
            auto j = json::parse(line, nullptr, false);
            if (j.is_discarded()) continue;
            ++entries;
            const auto key = j.value("key", std::string{});
            per_model[key.substr(key.rfind(':') + 1)]++;
            dims.insert(j.value("dim", std::size_t{0}));
        }
        out << "cache: " << file.string() << '\n' << "entries: " << entries << " (" << fs::file_size(file)
            << " bytes)\n";
        for (const auto& [model, count] : per_model) out << "  " << model << ": " << count << '\n';
        out << "dims:";
        for (auto d : dims) out << ' ' << d;
        out << '\n';
        return kExitOk;
    });
}

}  // namespace factcheck::app
