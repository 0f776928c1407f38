#include "factcheck/hungarian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "factcheck/errors.hpp"

namespace factcheck::scoring {

namespace {

// Minimum-cost perfect assignment on an n x n cost matrix (potentials method,
// O(n^3)). Returns row_of_col[c] for c in [0, n).
std::vector<std::size_t> solve_min_cost(const std::vector<double>& cost, std::size_t n) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
    std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
    std::vector<bool> used(n + 1);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::fill(minv.begin(), minv.end(), inf);
        std::fill(used.begin(), used.end(), false);
        do {
            used[j0] = true;
            const std::size_t i0 = p[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<std::size_t> row_of_col(n);
    for (std::size_t j = 1; j <= n; ++j) row_of_col[j - 1] = p[j] - 1;
    return row_of_col;
}

// Best achievable total over the given rows and columns (zero padding).
double best_total(const Matrix& m, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) {
    const std::size_t n = std::max(rows.size(), cols.size());
    if (n == 0 || rows.empty() || cols.empty()) return 0.0;
    std::vector<double> cost(n * n, 0.0);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) cost[i * n + j] = -m(rows[i], cols[j]);
    const auto row_of_col = solve_min_cost(cost, n);
    double total = 0.0;
    for (std::size_t j = 0; j < cols.size(); ++j) {
        const std::size_t i = row_of_col[j];
        if (i < rows.size()) total += m(rows[i], cols[j]);
    }
    return total;
}

}  // namespace

Assignment hungarian_max(const Matrix& matrix) {
    if (matrix.rows == 0 || matrix.cols == 0) throw ValidationError("hungarian_max: empty matrix");
    if (matrix.values.size() != matrix.rows * matrix.cols) throw ValidationError("hungarian_max: malformed matrix");
    for (double v : matrix.values)
        if (!std::isfinite(v)) throw ValidationError("hungarian_max: non-finite entry");

    std::vector<std::size_t> rows(matrix.rows), cols(matrix.cols);
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    for (std::size_t j = 0; j < cols.size(); ++j) cols[j] = j;
    const double optimum = best_total(matrix, rows, cols);
    const double tol = 1e-9 * (1.0 + std::abs(optimum));

    // Fix rows in ascending order to the smallest column that still admits an
    // optimal completion; leaving a row unmatched ranks after every real column.
    Assignment out;
    double fixed_sum = 0.0;
    std::vector<std::size_t> free_rows = rows;
    std::vector<std::size_t> free_cols = cols;
    std::size_t unmatched_budget = matrix.rows > matrix.cols ? matrix.rows - matrix.cols : 0;
    for (std::size_t r = 0; r < matrix.rows; ++r) {
        free_rows.erase(std::find(free_rows.begin(), free_rows.end(), r));
        bool placed = false;
        for (std::size_t idx = 0; idx < free_cols.size() && !placed; ++idx) {
            const std::size_t c = free_cols[idx];
            auto rest_cols = free_cols;
            rest_cols.erase(rest_cols.begin() + static_cast<std::ptrdiff_t>(idx));
            const double candidate = fixed_sum + matrix(r, c) + best_total(matrix, free_rows, rest_cols);
            if (candidate >= optimum - tol) {
                out.pairs.emplace_back(r, c);
                fixed_sum += matrix(r, c);
                free_cols = std::move(rest_cols);
                placed = true;
            }
        }
        if (!placed) {
            // Only possible when more rows than columns remain.
            if (unmatched_budget == 0) throw ValidationError("hungarian_max: no optimal completion found");
            --unmatched_budget;
        }
        if (free_cols.empty()) break;
    }

    out.total = 0.0;
    for (const auto& [r, c] : out.pairs) out.total += matrix(r, c);
    return out;
}

}  // namespace factcheck::scoring
