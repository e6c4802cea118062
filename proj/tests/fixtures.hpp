#pragma once

#include <matchbandit/core.hpp>
#include <matchbandit/rng.hpp>

#include <algorithm>
#include <vector>

namespace fixtures {

using matchbandit::Instance;

// Agents a,b,c = 0,1,2; arms 1,2,3 = 0,1,2.

// a: 1>2>3, b: 2>1>3, c: 3>1>2; arms 1,2: a>b>c, arm 3: a>c>b.
inline Instance ex1() {
    return Instance(3, 3, {0.9, 0.6, 0.3, 0.7, 0.85, 0.2, 0.5, 0.4, 0.8}, {{0, 1, 2}, {0, 1, 2}, {0, 2, 1}});
}

// a, b: 1>2>3, c: 2>1>3; every arm a>b>c.
inline Instance ex_a() {
    return Instance(3, 3, {0.9, 0.6, 0.3, 0.85, 0.55, 0.25, 0.5, 0.8, 0.2}, {{0, 1, 2}, {0, 1, 2}, {0, 1, 2}});
}

// Agents as ex_a; arm 1: b>c>a, arm 2: b>a>c, arm 3: b>c>a.
inline Instance ex_c() {
    return Instance(3, 3, {0.9, 0.6, 0.3, 0.85, 0.55, 0.25, 0.5, 0.8, 0.2}, {{1, 2, 0}, {1, 0, 2}, {1, 2, 0}});
}

// a: 1>2, b: 2>1; arm 1: b>a, arm 2: a>b. Two stable matchings.
inline Instance double_stable() { return Instance(2, 2, {0.9, 0.4, 0.3, 0.8}, {{1, 0}, {0, 1}}); }

inline Instance random_instance(std::size_t n, std::size_t k, matchbandit::Rng& rng) {
    for (;;) {
        std::vector<double> means(n * k);
        for (auto& m : means) m = rng.uniform();
        auto sorted = means;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) continue;
        std::vector<std::vector<std::size_t>> prefs(k, std::vector<std::size_t>(n));
        for (auto& list : prefs) {
            for (std::size_t j = 0; j < n; ++j) list[j] = j;
            rng.shuffle(list);
        }
        return Instance(n, k, std::move(means), std::move(prefs));
    }
}

}  // namespace fixtures
