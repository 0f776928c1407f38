#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace factcheck::scoring {

struct MeteorParams {
    double alpha = 0.9;
    double beta = 3.0;
    double gamma = 0.5;
    bool stemming = true;
};

struct MeteorAlignment {
    /// (candidate position, reference position), sorted by candidate position.
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::size_t crossings = 0;
    std::size_t chunks = 0;
};

/// Two-stage unigram alignment: exact matches first, then Porter-stem matches
/// among the still unmatched tokens. Each stage maximizes matches, then
/// minimizes crossings over the whole alignment, then minimizes chunks.
MeteorAlignment align_tokens(const std::vector<std::string>& candidate, const std::vector<std::string>& reference,
                             bool stemming);

/// Number of runs of matches adjacent in both candidate and reference order.
std::size_t count_chunks(const std::vector<std::pair<std::size_t, std::size_t>>& pairs_by_candidate);
std::size_t count_crossings(const std::vector<std::pair<std::size_t, std::size_t>>& pairs);

/// Score from alignment statistics: F * (1 - gamma * (chunks/m)^beta), with
/// F = P R / (alpha P + (1 - alpha) R). Zero when nothing matches.
double meteor_from_counts(std::size_t matches, std::size_t chunks, std::size_t candidate_len,
                          std::size_t reference_len, const MeteorParams& p);

std::vector<std::string> meteor_tokens(std::string_view text);

/// METEOR without the synonym stage, on lowercase alphanumeric tokens.
double meteor_lite(std::string_view candidate, std::string_view reference, const MeteorParams& p = {});

}  // namespace factcheck::scoring
