// Serial vs OpenMP timings for the retrieval and scoring kernels.
//
//   bench_kernels [rows] [dim] [repeats]

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <omp.h>

#include "factcheck/kernels.hpp"
#include "factcheck/meteor.hpp"

namespace k = factcheck::kernels;
using Clock = std::chrono::steady_clock;

template <typename Fn>
double best_ms(int repeats, Fn&& fn) {
    double best = 1e300;
    for (int i = 0; i < repeats; ++i) {
        const auto t0 = Clock::now();
        fn();
        best = std::min(best, std::chrono::duration<double, std::milli>(Clock::now() - t0).count());
    }
    return best;
}

void report(const std::string& name, double serial_ms, double parallel_ms, bool same) {
    std::cout << std::left << std::setw(22) << name << std::right << std::fixed << std::setprecision(3)
              << std::setw(12) << serial_ms << std::setw(12) << parallel_ms << std::setw(9) << std::setprecision(2)
              << serial_ms / parallel_ms << "x" << (same ? "" : "  MISMATCH") << '\n';
}

int main(int argc, char** argv) {
    const std::size_t rows = argc > 1 ? std::stoul(argv[1]) : 6000;
    const std::size_t dim = argc > 2 ? std::stoul(argv[2]) : 256;
    const int repeats = argc > 3 ? std::stoi(argv[3]) : 5;

    std::mt19937_64 rng(7);
    std::normal_distribution<double> normal;
    std::vector<double> values(rows * dim);
    for (auto& v : values) v = normal(rng);
    std::vector<double> query(dim);
    for (auto& v : query) v = normal(rng);
    const k::RowMatrix matrix{values, rows, dim};

    std::cout << "threads " << omp_get_max_threads() << ", rows " << rows << ", dim " << dim << '\n';
    std::cout << std::left << std::setw(22) << "kernel" << std::right << std::setw(12) << "serial ms" << std::setw(12)
              << "omp ms" << std::setw(10) << "speedup" << '\n';

    std::vector<double> a(rows), b(rows);
    const double s1 = best_ms(repeats, [&] { k::serial::dot_scan(matrix, query, a); });
    const double p1 = best_ms(repeats, [&] { k::parallel::dot_scan(matrix, query, b); });
    report("dot_scan", s1, p1, a == b);

    const std::size_t gram_rows = std::min<std::size_t>(rows, 400);
    const k::RowMatrix pool{std::span<const double>(values).first(gram_rows * dim), gram_rows, dim};
    std::vector<double> ga, gb;
    const double s2 = best_ms(repeats, [&] { ga = k::serial::gram(pool); });
    const double p2 = best_ms(repeats, [&] { gb = k::parallel::gram(pool); });
    report("gram", s2, p2, ga == gb);

    const std::vector<std::string> words{"the", "claim", "was", "made", "by", "a", "senator", "in", "march",
                                         "report", "states", "that", "rates", "rose", "fell", "sharply"};
    auto sentence = [&](std::size_t n) {
        std::string s;
        for (std::size_t i = 0; i < n; ++i) s += words[rng() % words.size()] + " ";
        return s;
    };
    std::vector<std::string> pred, gold;
    for (int i = 0; i < 10; ++i) pred.push_back(sentence(12));
    for (int i = 0; i < 10; ++i) gold.push_back(sentence(12));
    auto cell = [&](std::size_t r, std::size_t c) { return factcheck::scoring::meteor_lite(pred[r], gold[c]); };
    std::vector<double> ma, mb;
    const double s3 = best_ms(repeats, [&] { ma = k::serial::fill_matrix(pred.size(), gold.size(), cell); });
    const double p3 = best_ms(repeats, [&] { mb = k::parallel::fill_matrix(pred.size(), gold.size(), cell); });
    report("meteor fill_matrix", s3, p3, ma == mb);
    return 0;
}
