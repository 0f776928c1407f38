#include <doctest.h>

#include <cmath>
#include <random>

#include "factcheck/errors.hpp"
#include "factcheck/hungarian.hpp"
#include "oracles/assignment_oracle.hpp"

using namespace factcheck;
using namespace factcheck::scoring;

namespace {

Matrix to_matrix(const std::vector<std::vector<double>>& rows) {
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t r = 0; r < m.rows; ++r)
        for (std::size_t c = 0; c < m.cols; ++c) m(r, c) = rows[r][c];
    return m;
}

}  // namespace

TEST_SUITE("hungarian") {
    TEST_CASE("identity matrix") {
        const auto a = hungarian_max(to_matrix({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}));
        CHECK(a.total == 3.0);
        CHECK(a.pairs == std::vector<std::pair<std::size_t, std::size_t>>{{0, 0}, {1, 1}, {2, 2}});
    }

    TEST_CASE("tie resolves to the lexicographically smallest columns") {
        const auto a = hungarian_max(to_matrix({{1, 2}, {3, 4}}));
        CHECK(a.total == 5.0);
        CHECK(a.pairs == std::vector<std::pair<std::size_t, std::size_t>>{{0, 0}, {1, 1}});
        const auto zeros = hungarian_max(Matrix(3, 3));
        CHECK(zeros.pairs == std::vector<std::pair<std::size_t, std::size_t>>{{0, 0}, {1, 1}, {2, 2}});
    }

    TEST_CASE("rectangular inputs") {
        const auto wide = hungarian_max(to_matrix({{0.1, 0.9, 0.3}}));
        CHECK(wide.pairs == std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}});
        CHECK(wide.total == 0.9);
        const auto tall = hungarian_max(to_matrix({{0.2}, {0.7}, {0.4}}));
        CHECK(tall.pairs == std::vector<std::pair<std::size_t, std::size_t>>{{1, 0}});
        CHECK(tall.total == 0.7);
    }

    TEST_CASE("invalid matrices") {
        CHECK_THROWS_AS(hungarian_max(Matrix{}), ValidationError);
        CHECK_THROWS_AS(hungarian_max(to_matrix({{1, NAN}})), ValidationError);
        CHECK_THROWS_AS(hungarian_max(to_matrix({{INFINITY}})), ValidationError);
    }

    TEST_CASE("random 4x4 matrices match all 24 permutations") {
        std::mt19937_64 rng(71);
        std::uniform_real_distribution<double> u(0, 1);
        for (int t = 0; t < 300; ++t) {
            std::vector<std::vector<double>> m(4, std::vector<double>(4));
            for (auto& row : m)
                for (auto& x : row) x = u(rng);
            const auto want = oracle::brute_force_max(m);
            const auto got = hungarian_max(to_matrix(m));
            CHECK(got.total == want.total);
            CHECK(got.pairs == want.pairs);
        }
    }

    TEST_CASE("integer matrices with many ties") {
        std::mt19937_64 rng(73);
        for (int t = 0; t < 500; ++t) {
            const std::size_t rows = 1 + rng() % 5, cols = rows + rng() % (6 - rows);
            std::vector<std::vector<double>> m(rows, std::vector<double>(cols));
            for (auto& row : m)
                for (auto& x : row) x = static_cast<double>(rng() % 3);
            const auto want = oracle::brute_force_max(m);
            const auto got = hungarian_max(to_matrix(m));
            CHECK(got.total == want.total);
            CHECK(got.pairs == want.pairs);
        }
    }
}
