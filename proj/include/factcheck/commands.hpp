#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "factcheck/config.hpp"

namespace factcheck::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

struct RunOptions {
    /// Empty means every claim in the dataset.
    std::vector<ClaimId> claim_ids;
    bool keep_going = false;
    std::size_t jobs = 1;
};

/// Loads the dataset and knowledge store and prints corpus statistics.
int cmd_ingest(const config::AppConfig& cfg, std::ostream& out, std::ostream& err);

/// Writes <output_dir>/retrieval/claim_<id>.json per selected claim.
int cmd_retrieve(const config::AppConfig& cfg, const RunOptions& opts, std::ostream& out, std::ostream& err);

/// Retrieval plus generation for each selected claim. Completed claims are
/// appended to <output_dir>/progress.jsonl and skipped on rerun; the final
/// <output_dir>/predictions.json lists successful claims in dataset order and
/// <output_dir>/errors.json the failed ones.
int cmd_verify(const config::AppConfig& cfg, const RunOptions& opts, std::ostream& out, std::ostream& err);

/// Scores predictions against gold; writes score_report.json and
/// score_report.csv to the output directory and prints a summary.
int cmd_evaluate(const config::AppConfig& cfg, const std::filesystem::path& predictions,
                 const std::filesystem::path& dataset, const RunOptions& opts, std::ostream& out,
                 std::ostream& err);

enum class CacheAction { Inspect, Clear };

int cmd_cache(const config::AppConfig& cfg, CacheAction action, std::ostream& out, std::ostream& err);

std::filesystem::path predictions_path(const config::AppConfig& cfg);
std::filesystem::path progress_path(const config::AppConfig& cfg);
std::filesystem::path errors_path(const config::AppConfig& cfg);
std::filesystem::path trace_path(const config::AppConfig& cfg, ClaimId id);
std::filesystem::path embedding_cache_path(const config::AppConfig& cfg);

}  // namespace factcheck::app
