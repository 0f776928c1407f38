#include "factcheck/dense.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "factcheck/kernels.hpp"

namespace factcheck::dense {

EmbeddingVector::EmbeddingVector(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw std::invalid_argument("embedding: empty vector");
    for (double v : values_)
        if (!std::isfinite(v)) throw std::invalid_argument("embedding: non-finite component");
}

double EmbeddingVector::norm() const noexcept { return std::sqrt(kernels::dot(values_, values_)); }

EmbeddingVector EmbeddingVector::normalized() const {
    const double n = norm();
    if (n == 0.0) throw std::invalid_argument("embedding: zero-norm vector");
    std::vector<double> out(values_);
    for (auto& v : out) v /= n;
    return EmbeddingVector(std::move(out));
}

double cosine_sim(const EmbeddingVector& a, const EmbeddingVector& b) {
    if (a.dim() != b.dim())
        throw std::invalid_argument("cosine_sim: dimension mismatch " + std::to_string(a.dim()) + " vs " +
                                    std::to_string(b.dim()));
    const double na = a.norm();
    const double nb = b.norm();
    if (na == 0.0 || nb == 0.0) throw std::invalid_argument("cosine_sim: zero-norm vector");
    const double c = kernels::dot(a.values(), b.values()) / (na * nb);
    return std::clamp(c, -1.0, 1.0);
}

void VectorIndex::add(std::string payload_id, const EmbeddingVector& vector) {
    if (!ids_.empty() && vector.dim() != dim_)
        throw std::invalid_argument("vector index: dimension mismatch " + std::to_string(vector.dim()) + " vs " +
                                    std::to_string(dim_));
    const auto unit = vector.normalized();
    dim_ = unit.dim();
    flat_.insert(flat_.end(), unit.values().begin(), unit.values().end());
    ids_.push_back(std::move(payload_id));
}

EmbeddingVector VectorIndex::stored(std::size_t i) const {
    return EmbeddingVector(std::vector<double>(flat_.begin() + static_cast<std::ptrdiff_t>(i * dim_),
                                               flat_.begin() + static_cast<std::ptrdiff_t>((i + 1) * dim_)));
}

std::vector<Neighbor> VectorIndex::rank(std::vector<double> sims, std::size_t p) const {
    std::vector<std::size_t> order(sims.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const std::size_t keep = std::min(p, order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep), order.end(),
                      [&](std::size_t a, std::size_t b) {
                          if (sims[a] != sims[b]) return sims[a] > sims[b];
                          return a < b;
                      });
    std::vector<Neighbor> out;
    out.reserve(keep);
    for (std::size_t i = 0; i < keep; ++i) out.push_back({ids_[order[i]], sims[order[i]]});
    return out;
}

std::vector<Neighbor> VectorIndex::knn(const EmbeddingVector& query, std::size_t p) const {
    if (ids_.empty()) return {};
    if (query.dim() != dim_) throw std::invalid_argument("knn: query dimension mismatch");
    const auto unit = query.normalized();
    std::vector<double> sims(ids_.size());
    kernels::parallel::dot_scan({flat_, ids_.size(), dim_}, unit.values(), sims);
    return rank(std::move(sims), p);
}

std::vector<Neighbor> VectorIndex::knn_serial(const EmbeddingVector& query, std::size_t p) const {
    if (ids_.empty()) return {};
    if (query.dim() != dim_) throw std::invalid_argument("knn: query dimension mismatch");
    const auto unit = query.normalized();
    std::vector<double> sims(ids_.size());
    kernels::serial::dot_scan({flat_, ids_.size(), dim_}, unit.values(), sims);
    return rank(std::move(sims), p);
}

std::vector<std::string> mmr_select(std::span<const MmrCandidate> candidates, const MmrConfig& cfg) {
    const std::size_t n = candidates.size();
    if (n == 0) return {};
    const std::size_t dim = candidates.front().vector.dim();
    for (const auto& c : candidates)
        if (c.vector.dim() != dim) throw std::invalid_argument("mmr_select: vectors differ in dimension");

    // Pairwise cosine via the gram matrix of unit rows.
    std::vector<double> flat;
    flat.reserve(n * dim);
    for (const auto& c : candidates) {
        const auto unit = c.vector.normalized();
        flat.insert(flat.end(), unit.values().begin(), unit.values().end());
    }
    const auto sim = kernels::parallel::gram({flat, n, dim});

    const double lambda = cfg.lambda;
    const std::size_t want = std::min(cfg.select_size, n);
    std::vector<bool> taken(n, false);
    std::vector<double> redundancy(n, 0.0);  // max sim to the selected set, 0 while it is empty
    std::vector<std::string> selected;
    selected.reserve(want);

    while (selected.size() < want) {
        std::size_t best = n;
        double best_score = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (taken[i]) continue;
            const double score = lambda * candidates[i].sim_to_query - (1.0 - lambda) * redundancy[i];
            if (best == n || score > best_score ||
                (score == best_score && candidates[i].sim_to_query > candidates[best].sim_to_query)) {
                best = i;
                best_score = score;
            }
        }
        taken[best] = true;
        selected.push_back(candidates[best].payload_id);
        for (std::size_t i = 0; i < n; ++i) {
            const double s = std::clamp(sim[i * n + best], -1.0, 1.0);
            if (selected.size() == 1 || s > redundancy[i]) redundancy[i] = s;
        }
    }
    return selected;
}

}  // namespace factcheck::dense
