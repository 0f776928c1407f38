#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace factcheck::scoring {

/// Dense row-major real matrix.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, std::vector<double> v) : rows(r), cols(c), values(std::move(v)) {}
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c, 0.0) {}

    double operator()(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
    double& operator()(std::size_t r, std::size_t c) { return values[r * cols + c]; }
};

struct Assignment {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (row, col), sorted by row
    double total = 0.0;
};

/// Maximum-weight one-to-one assignment of min(rows, cols) pairs (rectangular
/// input is zero-padded to square). Among optimal assignments the one whose
/// column sequence, read by ascending row, is lexicographically smallest is
/// returned. Total is the sum of the chosen entries in row order.
/// Throws ValidationError on an empty matrix or a non-finite entry.
Assignment hungarian_max(const Matrix& matrix);

}  // namespace factcheck::scoring
