#include <gtest/gtest.h>

#include "diversekit/diversity.hpp"
#include "support.hpp"

using namespace diversekit;

namespace {

DiversityValue hd(const ElementSet& a, const ElementSet& b) { return hamming_distance(a, b); }

DiversityValue div_of(std::vector<ElementSet> sets) { return diversity(std::span<const ElementSet>(sets)); }

}  // namespace

TEST(HammingDistance, Examples) {
    EXPECT_EQ(hd({1, 2}, {2, 3}), 2);
    EXPECT_EQ(hd({4, 5, 9}, {4, 5, 9}), 0);
    EXPECT_EQ(hd({}, {1, 2, 3}), 3);
    EXPECT_EQ(hd({1, 2, 3}, {}), 3);
}

TEST(Diversity, Examples) {
    ElementSet s{0, 3, 7};
    EXPECT_EQ(div_of({s, s, s}), 0);
    EXPECT_EQ(div_of({{1}, {2}}), 2);
    EXPECT_EQ(div_of({{1, 2}, {2, 3}, {1, 3}}), 6);
    EXPECT_EQ(div_of({{5}}), 0);
    EXPECT_EQ(div_of({}), 0);
}

TEST(Influence, Examples) {
    EXPECT_EQ(influence(0, 5), 0);
    EXPECT_EQ(influence(1, 2), 1);
    EXPECT_EQ(influence(2, 5), 6);
    EXPECT_EQ(influence(5, 5), 0);
    EXPECT_THROW(influence(6, 5), std::domain_error);
    EXPECT_THROW(influence(-1, 5), std::domain_error);
}

TEST(Diversity, EqualsSumOfInfluences) {
    testkit::Rng rng(21);
    std::uniform_int_distribution<int> rd(1, 6), ud(1, 30);
    std::bernoulli_distribution coin(0.4);
    for (int trial = 0; trial < 2000; ++trial) {
        const int r = rd(rng), u = ud(rng);
        std::vector<ElementSet> sets(r);
        for (auto& s : sets) {
            for (int v = 0; v < u; ++v) {
                if (coin(rng)) s.push_back(static_cast<ElementId>(v));
            }
        }
        DiversityValue sum = 0;
        for (int v = 0; v < u; ++v) {
            std::int64_t p = 0;
            for (const auto& s : sets) p += std::binary_search(s.begin(), s.end(), static_cast<ElementId>(v));
            sum += influence(p, r);
        }
        ASSERT_EQ(div_of(sets), sum);
        ASSERT_LE(sum, max_possible_diversity(static_cast<std::size_t>(u), r));
    }
}

TEST(MaxPossibleDiversity, AttainedByBalancedSplit) {
    // half the sets take everything, the others nothing
    for (std::int64_t r = 1; r <= 6; ++r) {
        std::vector<ElementSet> sets(static_cast<std::size_t>(r));
        for (std::int64_t i = 0; i < r / 2; ++i) sets[static_cast<std::size_t>(i)] = {0, 1, 2, 3};
        EXPECT_EQ(div_of(sets), max_possible_diversity(4, r));
    }
}

TEST(SolutionTuple, DiversityOverload) {
    SolutionTuple t{4, {{0, 1}, {2, 3}}};
    EXPECT_EQ(diversity(t), 4);
}
