#pragma once

// Exhaustive METEOR alignment: enumerates every one-to-one matching of
// candidate to reference positions whose pairs are exact or stem matches, then
// applies the ordering rules directly.
//   1. most exact matches
//   2. fewest crossings among those exact matches
//   3. most matches overall
//   4. fewest crossings overall
//   5. fewest chunks

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <tuple>
#include <vector>

namespace oracle {

struct MeteorStats {
    std::size_t matches = 0;
    std::size_t crossings = 0;
    std::size_t chunks = 0;
};

using PairList = std::vector<std::pair<std::size_t, std::size_t>>;

inline std::size_t crossings_of(const PairList& p) {
    std::size_t n = 0;
    for (std::size_t a = 0; a < p.size(); ++a)
        for (std::size_t b = 0; b < p.size(); ++b)
            if (p[a].first < p[b].first && p[a].second > p[b].second) ++n;
    return n;
}

inline std::size_t chunks_of(PairList p) {
    std::sort(p.begin(), p.end());
    std::size_t chunks = 0;
    for (std::size_t k = 0; k < p.size(); ++k)
        if (k == 0 || p[k].first != p[k - 1].first + 1 || p[k].second != p[k - 1].second + 1) ++chunks;
    return chunks;
}

inline MeteorStats meteor_exhaustive(const std::vector<std::string>& cand, const std::vector<std::string>& ref,
                                     const std::function<std::string(const std::string&)>& stem) {
    using Key = std::tuple<long, long, long, long, long>;  // smaller is better
    Key best_key{1, 1, 1, 1, 1};
    MeteorStats best;
    bool have = false;
    std::vector<bool> ref_used(ref.size(), false);
    PairList exact, fuzzy;

    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == cand.size()) {
            PairList all = exact;
            all.insert(all.end(), fuzzy.begin(), fuzzy.end());
            const Key key{-static_cast<long>(exact.size()), static_cast<long>(crossings_of(exact)),
                          -static_cast<long>(all.size()), static_cast<long>(crossings_of(all)),
                          static_cast<long>(chunks_of(all))};
            if (!have || key < best_key) {
                best_key = key;
                best = {all.size(), crossings_of(all), chunks_of(all)};
                have = true;
            }
            return;
        }
        rec(i + 1);
        for (std::size_t j = 0; j < ref.size(); ++j) {
            if (ref_used[j]) continue;
            const bool is_exact = cand[i] == ref[j];
            if (!is_exact && stem(cand[i]) != stem(ref[j])) continue;
            ref_used[j] = true;
            (is_exact ? exact : fuzzy).emplace_back(i, j);
            rec(i + 1);
            (is_exact ? exact : fuzzy).pop_back();
            ref_used[j] = false;
        }
    };
    rec(0);
    return best;
}

inline double meteor_score(std::size_t matches, std::size_t chunks, std::size_t cand_len, std::size_t ref_len) {
    if (matches == 0) return 0;
    const double p = double(matches) / double(cand_len), r = double(matches) / double(ref_len);
    const double f = 10 * p * r / (r + 9 * p);
    return f * (1 - 0.5 * std::pow(double(chunks) / double(matches), 3));
}

}  // namespace oracle
