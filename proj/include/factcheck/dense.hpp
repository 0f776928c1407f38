#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace factcheck::dense {

/// A fixed-length embedding. Components are finite; dim() >= 1.
class EmbeddingVector {
public:
    EmbeddingVector() = default;
    /// Throws std::invalid_argument on an empty vector or a NaN/inf component.
    explicit EmbeddingVector(std::vector<double> values);

    std::size_t dim() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }
    double norm() const noexcept;
    /// Unit-length copy; throws std::invalid_argument for the zero vector.
    EmbeddingVector normalized() const;

    bool operator==(const EmbeddingVector&) const = default;

private:
    std::vector<double> values_;
};

/// dot(a,b) / (|a| |b|). Throws std::invalid_argument on dim mismatch or zero norm.
double cosine_sim(const EmbeddingVector& a, const EmbeddingVector& b);

struct Neighbor {
    std::string payload_id;
    double sim = 0.0;

    bool operator==(const Neighbor&) const = default;
};

/// Exact cosine index over unit-normalized copies of the inserted vectors.
class VectorIndex {
public:
    /// Throws std::invalid_argument on dim mismatch with earlier entries.
    void add(std::string payload_id, const EmbeddingVector& vector);

    std::size_t size() const noexcept { return ids_.size(); }
    std::size_t dim() const noexcept { return dim_; }
    bool empty() const noexcept { return ids_.empty(); }
    const std::vector<std::string>& payload_ids() const noexcept { return ids_; }
    EmbeddingVector stored(std::size_t i) const;

    /// Top-p by cosine, ties by insertion order. Empty index gives an empty list.
    std::vector<Neighbor> knn(const EmbeddingVector& query, std::size_t p) const;
    /// Same result computed with the serial scan kernel.
    std::vector<Neighbor> knn_serial(const EmbeddingVector& query, std::size_t p) const;

private:
    std::vector<Neighbor> rank(std::vector<double> sims, std::size_t p) const;

    std::vector<std::string> ids_;
    std::vector<double> flat_;  // row-major, unit rows
    std::size_t dim_ = 0;
};

inline std::vector<Neighbor> knn(const VectorIndex& index, const EmbeddingVector& query, std::size_t p) {
    return index.knn(query, p);
}

struct MmrConfig {
    double lambda = 0.75;
    std::size_t pool_size = 40;
    std::size_t select_size = 10;
};

struct MmrCandidate {
    std::string payload_id;
    EmbeddingVector vector;
    double sim_to_query = 0.0;
};

/// Greedy maximal-marginal-relevance selection. Each step picks the candidate
/// maximizing lambda * sim_to_query - (1 - lambda) * max cosine to the already
/// selected ones (0 while nothing is selected). Ties go to the higher
/// sim_to_query, then to the earlier candidate.
std::vector<std::string> mmr_select(std::span<const MmrCandidate> candidates, const MmrConfig& cfg);

}  // namespace factcheck::dense
