#pragma once

// Sum-of-pairwise-Hamming diversity and its per-element decomposition
//   Div(S_1..S_r) = sum_v p_v * (r - p_v),  p_v = |{i : v in S_i}|.

#include <algorithm>
#include <cstdint>
#include <iterator>
#include <span>
#include <stdexcept>
#include <vector>

#include "instances.hpp"

namespace diversekit {

using DiversityValue = std::int64_t;

/// r element-sets over the universe {0, ..., universe_size - 1}.
struct SolutionTuple {
    std::size_t universe_size = 0;
    std::vector<ElementSet> sets;
};

/// |S \ S'| + |S' \ S| for sorted sets.
inline DiversityValue hamming_distance(std::span<const ElementId> s, std::span<const ElementId> t) {
    DiversityValue count = 0;
    auto a = s.begin();
    auto b = t.begin();
    while (a != s.end() && b != t.end()) {
        if (*a < *b) {
            ++count;
            ++a;
        } else if (*b < *a) {
            ++count;
            ++b;
        } else {
            ++a;
            ++b;
        }
    }
    count += std::distance(a, s.end()) + std::distance(b, t.end());
    return count;
}

inline DiversityValue diversity(std::span<const ElementSet> sets) {
    DiversityValue total = 0;
    for (std::size_t i = 0; i < sets.size(); ++i) {
        for (std::size_t j = i + 1; j < sets.size(); ++j) total += hamming_distance(sets[i], sets[j]);
    }
    return total;
}

inline DiversityValue diversity(const SolutionTuple& t) { return diversity(std::span<const ElementSet>(t.sets)); }

/// Contribution of one element contained in exactly `members` of the r sets.
inline DiversityValue influence(std::int64_t members, std::int64_t r) {
    if (r < 0 || members < 0 || members > r) {
        throw std::domain_error("influence: membership count must lie in [0, r]");
    }
    return members * (r - members);
}

/// Upper bound on the diversity of any r sets over a universe of the given size.
inline DiversityValue max_possible_diversity(std::size_t universe_size, std::int64_t r) {
    return static_cast<DiversityValue>(universe_size) * (r / 2) * ((r + 1) / 2);
}

}  // namespace diversekit
