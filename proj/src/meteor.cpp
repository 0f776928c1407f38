#include "factcheck/meteor.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "factcheck/lexical.hpp"
#include "factcheck/porter_stemmer.hpp"

namespace factcheck::scoring {

namespace {

using Pairs = std::vector<std::pair<std::size_t, std::size_t>>;

// Above this many joint choices the search keeps only the first option per class.
constexpr std::size_t kSearchBudget = 20000;

// All ways to match one class: pick min(|c|,|r|) positions from the larger
// side and pair them in order (crossing pairs inside a class never help).
// Stops one past the search budget.
std::vector<Pairs> class_options(const std::vector<std::size_t>& c, const std::vector<std::size_t>& r) {
    const bool cand_larger = c.size() > r.size();
    const auto& big = cand_larger ? c : r;
    const auto& small = cand_larger ? r : c;
    const std::size_t pick = small.size();

    std::vector<Pairs> options;
    std::vector<bool> mask(big.size(), false);
    std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(pick), true);
    do {
        Pairs pairs;
        std::size_t s = 0;
        for (std::size_t b = 0; b < big.size(); ++b) {
            if (!mask[b]) continue;
            pairs.emplace_back(cand_larger ? big[b] : small[s], cand_larger ? small[s] : big[b]);
            ++s;
        }
        options.push_back(std::move(pairs));
    } while (options.size() <= kSearchBudget && std::prev_permutation(mask.begin(), mask.end()));
    return options;
}

struct Classes {
    std::vector<std::vector<Pairs>> options;

    std::size_t combinations() const {
        std::size_t total = 1;
        for (const auto& o : options) {
            total *= o.size();
            if (total > kSearchBudget) return kSearchBudget + 1;
        }
        return total;
    }
};

// Groups unmatched positions by key and builds per-class options.
template <typename KeyFn>
Classes build_classes(const std::vector<std::string>& cand, const std::vector<std::string>& ref,
                      const std::vector<bool>& cand_used, const std::vector<bool>& ref_used, KeyFn&& key) {
    std::map<std::string, std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> groups;
    for (std::size_t i = 0; i < cand.size(); ++i)
        if (!cand_used[i]) groups[key(cand[i])].first.push_back(i);
    for (std::size_t j = 0; j < ref.size(); ++j)
        if (!ref_used[j]) groups[key(ref[j])].second.push_back(j);
    Classes classes;
    for (auto& [k, g] : groups)
        if (!g.first.empty() && !g.second.empty()) classes.options.push_back(class_options(g.first, g.second));
    return classes;
}

// Calls fn(pairs) for every joint choice (or only the first choice per class
// when the product exceeds the budget).
template <typename Fn>
void for_each_choice(const Classes& classes, const Pairs& base, Fn&& fn) {
    const bool exhaustive = classes.combinations() <= kSearchBudget;
    Pairs current = base;
    auto rec = [&](auto&& self, std::size_t k) -> void {
        if (k == classes.options.size()) {
            fn(current);
            return;
        }
        const std::size_t limit = exhaustive ? classes.options[k].size() : 1;
        for (std::size_t o = 0; o < limit; ++o) {
            const auto& opt = classes.options[k][o];
            current.insert(current.end(), opt.begin(), opt.end());
            self(self, k + 1);
            current.resize(current.size() - opt.size());
        }
    };
    rec(rec, 0);
}

Pairs sorted(Pairs p) {
    std::sort(p.begin(), p.end());
    return p;
}

}  // namespace

std::size_t count_crossings(const Pairs& pairs) {
    std::size_t n = 0;
    for (std::size_t a = 0; a < pairs.size(); ++a)
        for (std::size_t b = a + 1; b < pairs.size(); ++b) {
            const auto& [i1, j1] = pairs[a];
            const auto& [i2, j2] = pairs[b];
            if ((i1 < i2 && j1 > j2) || (i1 > i2 && j1 < j2)) ++n;
        }
    return n;
}

std::size_t count_chunks(const Pairs& pairs_by_candidate) {
    if (pairs_by_candidate.empty()) return 0;
    std::size_t chunks = 1;
    for (std::size_t k = 1; k < pairs_by_candidate.size(); ++k) {
        const auto& [pi, pj] = pairs_by_candidate[k - 1];
        const auto& [ci, cj] = pairs_by_candidate[k];
        if (!(ci == pi + 1 && cj == pj + 1)) ++chunks;
    }
    return chunks;
}

MeteorAlignment align_tokens(const std::vector<std::string>& candidate, const std::vector<std::string>& reference,
                             bool stemming) {
    std::vector<bool> cand_free(candidate.size(), false), ref_free(reference.size(), false);
    const auto exact = build_classes(candidate, reference, cand_free, ref_free, [](const std::string& s) { return s; });

    // Stage 1: every exact choice has the same (maximal) match count; keep the
    // ones with the fewest crossings.
    std::vector<Pairs> stage1;
    std::size_t best_cross = 0;
    for_each_choice(exact, {}, [&](const Pairs& p) {
        const auto c = count_crossings(p);
        if (stage1.empty() || c < best_cross) {
            stage1.clear();
            best_cross = c;
        }
        if (c == best_cross) stage1.push_back(p);
    });

    MeteorAlignment best;
    bool have = false;
    auto consider = [&](const Pairs& p) {
        auto s = sorted(p);
        const auto crossings = count_crossings(s);
        const auto chunks = count_chunks(s);
        if (!have || s.size() > best.pairs.size() ||
            (s.size() == best.pairs.size() &&
             (crossings < best.crossings || (crossings == best.crossings && chunks < best.chunks)))) {
            best = {std::move(s), crossings, chunks};
            have = true;
        }
    };

    for (const auto& base : stage1) {
        if (!stemming) {
            consider(base);
            continue;
        }
        std::vector<bool> cand_used(candidate.size(), false), ref_used(reference.size(), false);
        for (const auto& [i, j] : base) {
            cand_used[i] = true;
            ref_used[j] = true;
        }
        const auto stems = build_classes(candidate, reference, cand_used, ref_used,
                                         [](const std::string& s) { return porter_stem(s); });
        for_each_choice(stems, base, consider);
    }
    return best;
}

double meteor_from_counts(std::size_t matches, std::size_t chunks, std::size_t candidate_len,
                          std::size_t reference_len, const MeteorParams& p) {
    if (matches == 0 || candidate_len == 0 || reference_len == 0) return 0.0;
    const double m = static_cast<double>(matches);
    const double precision = m / static_cast<double>(candidate_len);
    const double recall = m / static_cast<double>(reference_len);
    const double fmean = precision * recall / (p.alpha * precision + (1.0 - p.alpha) * recall);
    const double penalty = p.gamma * std::pow(static_cast<double>(chunks) / m, p.beta);
    return fmean * (1.0 - penalty);
}

std::vector<std::string> meteor_tokens(std::string_view text) { return lexical::tokenize(text); }

double meteor_lite(std::string_view candidate, std::string_view reference, const MeteorParams& p) {
    const auto cand = meteor_tokens(candidate);
    const auto ref = meteor_tokens(reference);
    if (cand.empty() || ref.empty()) return 0.0;
    const auto alignment = align_tokens(cand, ref, p.stemming);
    return meteor_from_counts(alignment.pairs.size(), alignment.chunks, cand.size(), ref.size(), p);
}

}  // namespace factcheck::scoring
