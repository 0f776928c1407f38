#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "factcheck/commands.hpp"
#include "factcheck/config.hpp"
#include "factcheck/errors.hpp"

namespace fc = factcheck;

namespace {

std::vector<std::pair<std::string, std::string>> parse_sets(const std::vector<std::string>& sets) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& s : sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw fc::ConfigError("--set expects key=value, got \"" + s + "\"");
        out.emplace_back(s.substr(0, eq), s.substr(eq + 1));
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Claim verification pipeline: retrieval, evidence generation and scoring"};
    app.require_subcommand(1);
    app.fallthrough();

    std::optional<std::string> config_file;
    std::vector<std::string> sets;
    std::string dataset, store, train, cache_dir, output_dir, provider, mock_script;
    app.add_option("-c,--config", config_file, "Config file of key = value lines");
    app.add_option("--set", sets, "Override a config key (key=value), repeatable");
    app.add_option("--dataset", dataset, "Claims JSON (paths.dataset)");
    app.add_option("--knowledge-store", store, "Knowledge store file or directory (paths.knowledge_store)");
    app.add_option("--train-set", train, "Few-shot source claims (paths.train_set)");
    app.add_option("--cache-dir", cache_dir, "Embedding cache directory (paths.cache_dir)");
    app.add_option("-o,--output-dir", output_dir, "Output directory (paths.output_dir)");
    app.add_option("--provider", provider, "Chat provider: http, mock or echo (generator.provider)");
    app.add_option("--mock-script", mock_script, "Scripted responses for the mock provider");

    fc::app::RunOptions opts;
    auto add_run_options = [&](CLI::App* sub) {
        sub->add_option("--claims", opts.claim_ids, "Claim ids to process (default: all)")->delimiter(',');
        sub->add_flag("--keep-going", opts.keep_going, "Record per-claim failures and continue");
        sub->add_option("-j,--jobs", opts.jobs, "Claims processed concurrently")->check(CLI::PositiveNumber);
    };

    auto* ingest = app.add_subcommand("ingest", "Load the dataset and knowledge store and print statistics");
    auto* retrieve = app.add_subcommand("retrieve", "Write retrieval traces per claim");
    add_run_options(retrieve);
    auto* verify = app.add_subcommand("verify", "Retrieve, generate evidence and predict verdicts");
    add_run_options(verify);

    auto* evaluate = app.add_subcommand("evaluate", "Score predictions against gold annotations");
    std::string predictions, gold;
    evaluate->add_option("--predictions", predictions, "Predictions JSON (default: <output_dir>/predictions.json)");
    evaluate->add_option("--gold", gold, "Gold dataset (default: paths.dataset)");
    evaluate->add_option("--claims", opts.claim_ids, "Restrict gold to these claim ids")->delimiter(',');

    auto* cache = app.add_subcommand("cache", "Inspect or clear the embedding cache");
    std::string cache_action = "inspect";
    cache->add_option("action", cache_action, "inspect or clear")->check(CLI::IsMember({"inspect", "clear"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? fc::app::kExitOk : fc::app::kExitUsage;
    }

    fc::config::AppConfig cfg;
    try {
        auto flags = parse_sets(sets);
        auto add = [&](const char* key, const std::string& value) {
            if (!value.empty()) flags.emplace_back(key, value);
        };
        add("paths.dataset", dataset);
        add("paths.knowledge_store", store);
        add("paths.train_set", train);
        add("paths.cache_dir", cache_dir);
        add("paths.output_dir", output_dir);
        add("generator.provider", provider);
        add("generator.mock_script", mock_script);
        std::optional<std::filesystem::path> file;
        if (config_file) file = *config_file;
        cfg = fc::config::load_config(file, fc::config::process_env, flags);
    } catch (const std::exception& e) {
        std::cerr << "config: " << e.what() << '\n';
        return fc::app::kExitUsage;
    }

    if (*ingest) return fc::app::cmd_ingest(cfg, std::cout, std::cerr);
    if (*retrieve) return fc::app::cmd_retrieve(cfg, opts, std::cout, std::cerr);
    if (*verify) return fc::app::cmd_verify(cfg, opts, std::cout, std::cerr);
    if (*evaluate) {
        const std::filesystem::path pred = predictions.empty() ? fc::app::predictions_path(cfg) : std::filesystem::path(predictions);
        const std::filesystem::path gold_path = gold.empty() ? cfg.paths.dataset : std::filesystem::path(gold);
        return fc::app::cmd_evaluate(cfg, pred, gold_path, opts, std::cout, std::cerr);
    }
    const auto action = cache_action == "clear" ? fc::app::CacheAction::Clear : fc::app::CacheAction::Inspect;
    return fc::app::cmd_cache(cfg, action, std::cout, std::cerr);
}
