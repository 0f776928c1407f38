#pragma once

// Data-parallel inner loops. Every kernel has a serial reference in
// kernels::serial and an OpenMP version in kernels::parallel; both evaluate
// each output element with the same arithmetic, so results are bit-identical.

#include <cstddef>
#include <span>
#include <vector>

namespace factcheck::kernels {

/// Row-major matrix of doubles, one vector per row.
struct RowMatrix {
    std::span<const double> values;
    std::size_t rows = 0;
    std::size_t dim = 0;

    std::span<const double> row(std::size_t i) const { return values.subspan(i * dim, dim); }
};

inline double dot(std::span<const double> a, std::span<const double> b) noexcept {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
    return sum;
}

namespace serial {

/// out[i] = dot(rows[i], query)
void dot_scan(const RowMatrix& rows, std::span<const double> query, std::span<double> out);

/// Symmetric n x n matrix of row dot products, row-major.
std::vector<double> gram(const RowMatrix& rows);

/// out[r * cols + c] = cell(r, c)
template <typename CellFn>
std::vector<double> fill_matrix(std::size_t rows, std::size_t cols, CellFn&& cell) {
    std::vector<double> out(rows * cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) out[r * cols + c] = cell(r, c);
    return out;
}

}  // namespace serial

namespace parallel {

void dot_scan(const RowMatrix& rows, std::span<const double> query, std::span<double> out);

std::vector<double> gram(const RowMatrix& rows);

template <typename CellFn>
std::vector<double> fill_matrix(std::size_t rows, std::size_t cols, CellFn&& cell) {
    std::vector<double> out(rows * cols);
    const long long total = static_cast<long long>(rows * cols);
#pragma omp parallel for schedule(dynamic, 4)
    for (long long i = 0; i < total; ++i) {
        const auto r = static_cast<std::size_t>(i) / cols;
        const auto c = static_cast<std::size_t>(i) % cols;
        out[static_cast<std::size_t>(i)] = cell(r, c);
    }
    return out;
}

}  // namespace parallel

}  // namespace factcheck::kernels
