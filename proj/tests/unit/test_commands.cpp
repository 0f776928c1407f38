#include <doctest.h>

#include <sstream>

#include "factcheck/commands.hpp"
#include "factcheck/corpus.hpp"
#include "factcheck/http.hpp"
#include "factcheck/llm.hpp"
#include "factcheck/prediction.hpp"
#include "support.hpp"

using namespace factcheck;
using namespace factcheck::app;
using testing_support::data_dir;
using testing_support::read_file;
using testing_support::TempDir;
using testing_support::write_file;

namespace {

const config::EnvLookup no_env = [](const std::string&) -> std::optional<std::string> { return std::nullopt; };

config::AppConfig fixture_config(const std::filesystem::path& out,
                                 std::vector<std::pair<std::string, std::string>> extra = {}) {
    std::vector<std::pair<std::string, std::string>> flags{{"paths.dataset", (data_dir() / "dev10.json").string()},
                                                           {"paths.knowledge_store", (data_dir() / "store10.jsonl").string()},
                                                           {"paths.output_dir", out.string()},
                                                           {"retrieval.max_chars", "300"}};
    flags.insert(flags.end(), extra.begin(), extra.end());
    return config::load_config(std::nullopt, no_env, flags);
}

struct Run {
    int code;
    std::string out, err;
};

template <typename Fn>
Run capture(Fn&& fn) {
    std::ostringstream out, err;
    const int code = fn(out, err);
    return {code, out.str(), err.str()};
}

Run retrieve(const config::AppConfig& cfg, RunOptions opts = {}) {
    return capture([&](auto& o, auto& e) { return cmd_retrieve(cfg, opts, o, e); });
}

Run verify(const config::AppConfig& cfg, RunOptions opts = {}) {
    return capture([&](auto& o, auto& e) { return cmd_verify(cfg, opts, o, e); });
}

Run evaluate(const config::AppConfig& cfg, const std::filesystem::path& preds, RunOptions opts = {}) {
    return capture([&](auto& o, auto& e) { return cmd_evaluate(cfg, preds, cfg.paths.dataset, opts, o, e); });
}

}  // namespace

TEST_SUITE("commands") {
    TEST_CASE("ingest prints corpus statistics") {
        TempDir dir("ingest");
        const auto r = capture([&](auto& o, auto& e) { return cmd_ingest(fixture_config(dir.path()), o, e); });
        CHECK(r.code == kExitOk);
        CHECK(r.out.find("claims: 10") != std::string::npos);
        CHECK(r.out.find("documents: 50 (dropped 1 empty") != std::string::npos);
    }

    TEST_CASE("missing inputs are usage errors") {
        TempDir dir("missing");
        auto cfg = fixture_config(dir.path(), {{"paths.knowledge_store", (dir / "nope.jsonl").string()}});
        CHECK(retrieve(cfg).code == kExitUsage);
        cfg.paths.dataset.clear();
        CHECK(verify(cfg).code == kExitUsage);
    }

    TEST_CASE("one claim gives one trace with k entries") {
        TempDir dir("one");
        const auto cfg = fixture_config(dir.path());
        RunOptions opts;
        opts.claim_ids = {3};
        CHECK(retrieve(cfg, opts).code == kExitOk);
        const auto trace = nlohmann::json::parse(read_file(trace_path(cfg, 3)));
        CHECK(trace["selected"].size() == cfg.retrieval.k);
        CHECK(trace["claim_id"] == 3);
        CHECK_FALSE(std::filesystem::exists(trace_path(cfg, 0)));
    }

    TEST_CASE("unknown claim id lists the valid ones") {
        TempDir dir("unknown");
        RunOptions opts;
        opts.claim_ids = {99};
        const auto r = retrieve(fixture_config(dir.path()), opts);
        CHECK(r.code == kExitUsage);
        CHECK(r.err.find("unknown claim id 99") != std::string::npos);
        CHECK(r.err.find("valid ids: 0 1 2 3 4 5 6 7 8 9") != std::string::npos);
    }

    TEST_CASE("ten traces match the golden files") {
        TempDir dir("golden");
        const auto cfg = fixture_config(dir.path());
        REQUIRE(retrieve(cfg).code == kExitOk);
        for (ClaimId id = 0; id < 10; ++id) CHECK(std::filesystem::exists(trace_path(cfg, id)));
        CHECK(read_file(trace_path(cfg, 0)) == read_file(data_dir() / "trace_claim0_golden.json"));
        CHECK(read_file(trace_path(cfg, 4)) == read_file(data_dir() / "trace_claim4_golden.json"));
    }

    TEST_CASE("worker count does not change the output") {
        TempDir a("jobs1"), b("jobs4");
        RunOptions serial, parallel;
        parallel.jobs = 4;
        REQUIRE(verify(fixture_config(a.path()), serial).code == kExitOk);
        REQUIRE(verify(fixture_config(b.path()), parallel).code == kExitOk);
        CHECK(read_file(a / "predictions.json") == read_file(b / "predictions.json"));
        for (ClaimId id = 0; id < 10; ++id) {
            retrieve(fixture_config(a.path()), serial);
            retrieve(fixture_config(b.path()), parallel);
            CHECK(read_file(a / "retrieval" / ("claim_" + std::to_string(id) + ".json")) ==
                  read_file(b / "retrieval" / ("claim_" + std::to_string(id) + ".json")));
        }
    }

    TEST_CASE("retrieval failures stop the run unless keep-going") {
        TempDir dir("keepgoing");
        write_file(dir / "ks" / "0.jsonl",
                                               R"({"url":"u","url2text":["The Springfield council vote on taxes."]})" "\n");
        write_file(dir / "ks" / "1.jsonl", "not json\n");
        auto cfg = fixture_config(dir / "out", {{"paths.knowledge_store", (dir / "ks").string()}});
        RunOptions opts;
        opts.claim_ids = {0, 1, 2};
        const auto strict = retrieve(cfg, opts);
        CHECK(strict.code == kExitRuntime);
        CHECK(strict.err.find("claim 1") != std::string::npos);

        opts.keep_going = true;
        const auto lenient = retrieve(cfg, opts);
        CHECK(lenient.code == kExitOk);
        const auto errors = nlohmann::json::parse(read_file(dir / "out" / "retrieval" / "errors.json"));
        REQUIRE(errors.size() == 1);
        CHECK(errors[0]["claim_id"] == 1);
        const auto trace0 = nlohmann::json::parse(read_file(trace_path(cfg, 0)));
        CHECK(trace0["selected"].size() == 1);
        // Claim 2 has no store file and gets an empty retrieval.
        CHECK(nlohmann::json::parse(read_file(trace_path(cfg, 2)))["empty_retrieval"] == true);
    }

    TEST_CASE("echo verification reproduces gold evidence") {
        TempDir dir("echo");
        const auto cfg = fixture_config(dir.path());
        RunOptions opts;
        opts.claim_ids = {0, 1, 2, 3, 4};
        const auto r = verify(cfg, opts);
        REQUIRE(r.code == kExitOk);
        CHECK(r.out.find("0 failures") != std::string::npos);
        REQUIRE(retrieve(cfg, opts).code == kExitOk);

        const auto gold = corpus::load_dataset(cfg.paths.dataset);
        const auto preds = load_predictions(predictions_path(cfg));
        REQUIRE(preds.size() == 5);
        for (std::size_t i = 0; i < preds.size(); ++i) {
            const auto& g = gold[i];
            Prediction want;
            want.claim_id = g.id;
            want.claim = g.text;
            want.verdict = *g.gold_label;
            want.ratings = {1, 1, 1, 1};
            want.ratings[label_index(*g.gold_label)] = 5;
            const auto trace = nlohmann::json::parse(read_file(trace_path(cfg, g.id)));
            const auto top_key = trace["selected"][0]["key"].get<std::string>();
            for (const auto& qa : g.gold_evidence)
                want.evidence.push_back({qa.question, qa.answer, top_key.substr(0, top_key.rfind('#')), qa.answer_type});
            want.probs = preds[i].probs;
            CHECK(preds[i] == want);
        }
        CHECK(nlohmann::json::parse(read_file(errors_path(cfg))).empty());
    }

    TEST_CASE("scripted failure leaves four predictions and one error") {
        TempDir dir("scripted");
        const auto gold = corpus::load_dataset(data_dir() / "dev10.json");
        llm::EchoChatClient echo(gold);
        nlohmann::json script;
        for (ClaimId id = 0; id < 5; ++id) {
            if (id == 2)
                script["2"] = {"nothing useful", "still nothing", "no", "never"};
            else
                script[std::to_string(id)] = {echo.complete({id, "", ""})};
        }
        write_file(dir / "script.json", script.dump());
        const auto cfg = fixture_config(dir / "out", {{"generator.provider", "mock"},
                                                      {"generator.mock_script", (dir / "script.json").string()}});
        RunOptions opts;
        opts.claim_ids = {0, 1, 2, 3, 4};
        const auto r = verify(cfg, opts);
        CHECK(r.code == kExitRuntime);
        CHECK(r.out.find("1 failures") != std::string::npos);
        const auto preds = load_predictions(predictions_path(cfg));
        REQUIRE(preds.size() == 4);
        for (const auto& p : preds) CHECK(p.claim_id != 2);
        const auto errors = nlohmann::json::parse(read_file(errors_path(cfg)));
        REQUIRE(errors.size() == 1);
        CHECK(errors[0]["claim_id"] == 2);
    }

    TEST_CASE("resumed run matches an uninterrupted one") {
        TempDir full("full"), resumed("resumed");
        REQUIRE(verify(fixture_config(full.path())).code == kExitOk);

        const auto cfg = fixture_config(resumed.path());
        RunOptions first;
        first.claim_ids = {0, 1, 2, 5};
        REQUIRE(verify(cfg, first).code == kExitOk);
        // Simulate a crash in the middle of appending a record.
        {
            std::ofstream progress(progress_path(cfg), std::ios::app);
            progress << R"({"claim_id": 6, "claim": "The senator vo)";
        }
        const auto r = verify(cfg);
        REQUIRE(r.code == kExitOk);
        CHECK(r.out.find("6 new, 4 resumed") != std::string::npos);
        CHECK(read_file(predictions_path(cfg)) == read_file(full / "predictions.json"));
    }

    TEST_CASE("completed claims are not sent to the model again") {
        TempDir dir("noresend");
        const auto gold = corpus::load_dataset(data_dir() / "dev10.json");
        llm::EchoChatClient echo(gold);
        nlohmann::json script{{"0", {echo.complete({0, "", ""})}}};
        write_file(dir / "script.json", script.dump());
        const auto cfg = fixture_config(dir / "out", {{"generator.provider", "mock"},
                                                      {"generator.mock_script", (dir / "script.json").string()}});
        RunOptions opts;
        opts.claim_ids = {0};
        REQUIRE(verify(cfg, opts).code == kExitOk);
        write_file(dir / "script.json", "{}");
        CHECK(verify(cfg, opts).code == kExitOk);
    }

    TEST_CASE("evaluate echo predictions") {
        TempDir dir("eval");
        const auto cfg = fixture_config(dir.path());
        REQUIRE(verify(cfg).code == kExitOk);
        const auto r = evaluate(cfg, predictions_path(cfg));
        REQUIRE(r.code == kExitOk);
        CHECK(r.out.find("AVeriTeC@0.25: 1.000") != std::string::npos);
        CHECK(std::filesystem::exists(dir / "score_report.json"));
        CHECK(std::filesystem::exists(dir / "score_report.csv"));
        const auto report = nlohmann::json::parse(read_file(dir / "score_report.json"));
        CHECK(report["accuracy"] == 1.0);
    }

    TEST_CASE("evaluate rejects empty or mismatched predictions") {
        TempDir dir("evalbad");
        const auto cfg = fixture_config(dir.path());
        write_file(dir / "empty.json", "[]");
        const auto r = evaluate(cfg, dir / "empty.json");
        CHECK(r.code == kExitUsage);
        CHECK(r.err.find("missing") != std::string::npos);
        write_file(dir / "broken.json", "[{");
        CHECK(evaluate(cfg, dir / "broken.json").code == kExitUsage);
    }

    TEST_CASE("evaluate the mixed four-claim fixture") {
        TempDir dir("mixed");
        const auto cfg = config::load_config(
            std::nullopt, no_env,
            {{"paths.dataset", (data_dir() / "mixed4_gold.json").string()}, {"paths.output_dir", dir.path().string()}});
        const auto r = evaluate(cfg, data_dir() / "mixed4_predictions.json");
        REQUIRE(r.code == kExitOk);
        const auto report = nlohmann::json::parse(read_file(dir / "score_report.json"));
        CHECK(report["averitec_score"]["0.25"].get<double>() == doctest::Approx(0.5));
        CHECK(report["accuracy"].get<double>() == doctest::Approx(0.75));
        CHECK(report["macro_f1"].get<double>() == doctest::Approx((2.0 / 3.0 + 1.0 + 0.0 + 1.0) / 4.0));
    }

    TEST_CASE("ensemble uses external probabilities") {
        TempDir dir("ensemble");
        nlohmann::json probs = nlohmann::json::array();
        for (int id = 0; id < 10; ++id)
            probs.push_back({{"claim_id", id},
                             {"probs", {{"Supported", 0.0}, {"Refuted", 0.0}, {"Not Enough Evidence", 1.0},
                                        {"Conflicting Evidence/Cherrypicking", 0.0}}}});
        write_file(dir / "probs.json", probs.dump());
        const auto cfg = fixture_config(dir / "out", {{"ensemble.weight_external", "1"},
                                                      {"ensemble.external_probs", (dir / "probs.json").string()}});
        REQUIRE(verify(cfg).code == kExitOk);
        for (const auto& p : load_predictions(predictions_path(cfg))) {
            CHECK(p.verdict == VeracityLabel::NotEnoughEvidence);
            REQUIRE(p.probs.has_value());
            CHECK((*p.probs)[label_index(VeracityLabel::NotEnoughEvidence)] == 1.0);
        }
    }

    TEST_CASE("cache inspect and clear") {
        TempDir dir("cachecmd");
        const auto cfg = fixture_config(dir / "out", {{"paths.cache_dir", (dir / "cache").string()}});
        REQUIRE(retrieve(cfg).code == kExitOk);
        const auto inspect = capture([&](auto& o, auto& e) { return cmd_cache(cfg, CacheAction::Inspect, o, e); });
        CHECK(inspect.code == kExitOk);
        CHECK(inspect.out.find("mock-hash-64") != std::string::npos);
        const auto before = read_file(trace_path(cfg, 0));
        REQUIRE(retrieve(cfg).code == kExitOk);
        CHECK(read_file(trace_path(cfg, 0)) == before);
        const auto clear = capture([&](auto& o, auto& e) { return cmd_cache(cfg, CacheAction::Clear, o, e); });
        CHECK(clear.code == kExitOk);
        CHECK_FALSE(std::filesystem::exists(embedding_cache_path(cfg)));
    }

    TEST_CASE("mock providers never touch the network") {
        TempDir dir("nonet");
        const auto before = http::request_count();
        const auto cfg = fixture_config(dir / "out", {{"paths.cache_dir", (dir / "cache").string()},
                                                      {"paths.train_set", (data_dir() / "train.json").string()}});
        CHECK(capture([&](auto& o, auto& e) { return cmd_ingest(cfg, o, e); }).code == kExitOk);
        CHECK(retrieve(cfg).code == kExitOk);
        CHECK(verify(cfg).code == kExitOk);
        CHECK(evaluate(cfg, predictions_path(cfg)).code == kExitOk);
        CHECK(capture([&](auto& o, auto& e) { return cmd_cache(cfg, CacheAction::Inspect, o, e); }).code == kExitOk);
        CHECK(http::request_count() == before);
    }

    TEST_CASE("http provider without a key fails before any request") {
        TempDir dir("nokey");
        const auto before = http::request_count();
        const auto cfg = fixture_config(dir.path(), {{"generator.provider", "http"},
                                                     {"generator.base_url", "http://127.0.0.1:9/v1"},
                                                     {"generator.model_name", "m"},
                                                     {"generator.api_key_env", "FACTCHECK_TEST_SURELY_UNSET_KEY"}});
        const auto r = verify(cfg);
        CHECK(r.code == kExitUsage);
        CHECK(r.err.find("FACTCHECK_TEST_SURELY_UNSET_KEY") != std::string::npos);
        CHECK(http::request_count() == before);
    }
}
