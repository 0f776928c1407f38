#include "factcheck/kernels.hpp"

namespace factcheck::kernels {

namespace serial {

void dot_scan(const RowMatrix& rows, std::span<const double> query, std::span<double> out) {
    for (std::size_t i = 0; i < rows.rows; ++i) out[i] = dot(rows.row(i), query);
}

std::vector<double> gram(const RowMatrix& rows) {
    const std::size_t n = rows.rows;
    std::vector<double> out(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) out[i * n + j] = out[j * n + i] = dot(rows.row(i), rows.row(j));
    return out;
}

}  // namespace serial

namespace parallel {

void dot_scan(const RowMatrix& rows, std::span<const double> query, std::span<double> out) {
    const long long n = static_cast<long long>(rows.rows);
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = dot(rows.row(static_cast<std::size_t>(i)), query);
}

std::vector<double> gram(const RowMatrix& rows) {
    const std::size_t n = rows.rows;
    std::vector<double> out(n * n);
    const long long ln = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 8)
    for (long long li = 0; li < ln; ++li) {
        const auto i = static_cast<std::size_t>(li);
        for (std::size_t j = i; j < n; ++j) out[i * n + j] = out[j * n + i] = dot(rows.row(i), rows.row(j));
    }
    return out;
}

}  // namespace parallel

}  // namespace factcheck::kernels
