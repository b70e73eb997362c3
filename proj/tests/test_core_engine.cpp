#include <gtest/gtest.h>

#include "diversekit/core_engine.hpp"
#include "diversekit/cores.hpp"
#include "support.hpp"

using namespace diversekit;

namespace {

using S = ExplicitCore::State;
using Tuple = ProcessTuple<S>;

RootedTreeDecomposition random_tree(std::size_t nodes, testkit::Rng& rng) {
    std::vector<std::vector<Vertex>> bags(nodes);
    std::vector<NodeId> parent(nodes, kNoNode);
    for (NodeId t = 1; t < nodes; ++t) parent[t] = std::uniform_int_distribution<NodeId>(0, t - 1)(rng);
    return RootedTreeDecomposition(std::move(bags), std::move(parent));
}

/// Random Process relations over states {0..states-1}.
ExplicitCore random_core(const RootedTreeDecomposition& d, S states, double density, testkit::Rng& rng) {
    std::bernoulli_distribution coin(density);
    std::vector<std::vector<Tuple>> process(d.node_count());
    for (NodeId t = 0; t < d.node_count(); ++t) {
        const std::size_t delta = d.children(t).size();
        std::size_t combos = 1;
        for (std::size_t i = 0; i <= delta; ++i) combos *= states;
        for (std::size_t c = 0; c < combos; ++c) {
            if (!coin(rng)) continue;
            std::size_t x = c;
            Tuple tuple;
            tuple.parent = static_cast<S>(x % states);
            x /= states;
            for (std::size_t i = 0; i < delta; ++i, x /= states) tuple.children.push_back(static_cast<S>(x % states));
            process[t].push_back(tuple);
        }
    }
    std::vector<S> accept;
    for (S w = 0; w < states; ++w) {
        if (coin(rng)) accept.push_back(w);
    }
    return ExplicitCore(d, accept, process);
}

/// Whether any full assignment is a witness.
bool brute_force_accepts(const ExplicitCore& core, S states) {
    const auto& d = core.decomposition();
    Witness<S> alpha(d.node_count(), 0);
    for (;;) {
        if (is_witness(core, alpha)) return true;
        std::size_t i = 0;
        while (i < alpha.size() && ++alpha[i] == states) alpha[i++] = 0;
        if (i == alpha.size()) return false;
    }
}

}  // namespace

TEST(Evaluate, SingleNode) {
    RootedTreeDecomposition d;
    ExplicitCore yes(d, {7}, {{Tuple{7, {}}}});
    auto ev = evaluate(yes);
    EXPECT_TRUE(ev.accepted);
    auto alpha = extract_witness(yes, ev);
    ASSERT_TRUE(alpha.has_value());
    EXPECT_EQ(*alpha, (Witness<S>{7}));
    EXPECT_TRUE(is_witness(yes, *alpha));
}

TEST(Evaluate, EmptyAcceptMeansNo) {
    RootedTreeDecomposition d;
    ExplicitCore core(d, {}, {{Tuple{0, {}}, Tuple{1, {}}}});
    auto ev = evaluate(core);
    EXPECT_FALSE(ev.accepted);
    EXPECT_FALSE(extract_witness(core, ev).has_value());
}

TEST(Evaluate, ArityMismatchIsReported) {
    RootedTreeDecomposition d({{}, {}}, {kNoNode, 0});
    ExplicitCore core(d, {0}, {{Tuple{0, {}}}, {Tuple{0, {}}}});
    EXPECT_THROW(evaluate(core), std::invalid_argument);
}

TEST(Evaluate, MatchesExhaustiveWitnessSearch) {
    testkit::Rng rng(31);
    int yes = 0;
    for (int trial = 0; trial < 400; ++trial) {
        const std::size_t nodes = 1 + (trial / 2) % 6;
        const S states = static_cast<S>(2 + trial % 2);
        auto d = random_tree(nodes, rng);
        auto core = random_core(d, states, (trial / 12) % 2 ? 0.5 : 0.25, rng);
        auto ev = evaluate(core);
        ASSERT_EQ(ev.accepted, brute_force_accepts(core, states)) << "trial " << trial;
        if (ev.accepted) {
            ++yes;
            auto alpha = extract_witness(core, ev);
            ASSERT_TRUE(alpha.has_value());
            EXPECT_TRUE(is_witness(core, *alpha));
        }
        auto threaded = evaluate(core, {3, true});
        EXPECT_EQ(threaded.tables, ev.tables);
    }
    EXPECT_GT(yes, 40);
}

TEST(Evaluate, ChildDrivenAgreesWithFilter) {
    testkit::Rng rng(32);
    for (int i = 0; i < 60; ++i) {
        Graph g = testkit::random_graph(2 + i % 6, 0.4, rng);
        auto d = normalize(g, testkit::random_decomposition(g, rng));
        for (std::size_t k = 0; k <= 3; ++k) {
            for (bool lookahead : {false, true}) {
                VcCore core(g, d, k, lookahead);
                auto fast = evaluate(core, {1, true});
                auto slow = evaluate(core, {1, false});
                ASSERT_EQ(fast.tables, slow.tables);
                EXPECT_EQ(fast.accepted, slow.accepted);
                EXPECT_EQ(fast.accepted, find_vertex_cover(g, k).has_value());
            }
        }
    }
}

TEST(Evaluate, ThreadsDoNotChangeTables) {
    testkit::Rng rng(33);
    for (int i = 0; i < 20; ++i) {
        Graph g = testkit::random_graph(8, 0.3, rng);
        auto d = normalize(g, testkit::random_decomposition(g, rng));
        VcCore core(g, d, 3);
        auto one = evaluate(core, {1, true});
        auto four = evaluate(core, {4, true});
        EXPECT_EQ(one.tables, four.tables);
        EXPECT_EQ(one.back, four.back);
    }
}

TEST(SolutionFromWitness, ZeroMembershipGivesEmptySet) {
    RootedTreeDecomposition d({{}, {0, 1}}, {kNoNode, 0});
    Witness<S> alpha{0, 0};
    auto none = [](NodeId, Vertex, const S&) { return false; };
    EXPECT_TRUE(solution_from_witness(none, d, alpha).empty());
}

TEST(SolutionFromWitness, SingleEdgeCover) {
    Graph edge(2, {{0, 1}});
    auto d = normalize(edge, RootedTreeDecomposition({{}, {0, 1}}, {kNoNode, 0}));
    VcCore core(edge, d, 1);
    auto ev = evaluate(core);
    ASSERT_TRUE(ev.accepted);
    auto alpha = extract_witness(core, ev);
    ASSERT_TRUE(alpha.has_value());
    EXPECT_TRUE(is_witness(core, *alpha));
    auto s = solution_from_witness(core.membership(), d, *alpha);
    EXPECT_EQ(s.size(), 1u);
    EXPECT_TRUE(testkit::is_vertex_cover_set(edge, s));
}

TEST(SolutionFromWitness, InconsistentMembershipThrows) {
    RootedTreeDecomposition d({{}, {0}, {0}}, {kNoNode, 0, 1});
    Witness<S> alpha{0, 0, 0};
    auto flaky = [](NodeId t, Vertex, const S&) { return t == 2; };
    EXPECT_THROW(solution_from_witness(flaky, d, alpha), MembershipInconsistent);
}

TEST(SolutionFromWitness, VcWitnessesAreMinimalSizeCovers) {
    testkit::Rng rng(34);
    for (int i = 0; i < 80; ++i) {
        Graph g = testkit::random_graph(2 + i % 7, 0.45, rng);
        auto d = normalize(g, testkit::random_decomposition(g, rng));
        const std::size_t k = minimum_vertex_cover(g).size();
        VcCore core(g, d, k);
        auto ev = evaluate(core);
        ASSERT_TRUE(ev.accepted);
        auto s = solution_from_witness(core.membership(), d, *extract_witness(core, ev));
        EXPECT_TRUE(testkit::is_vertex_cover_set(g, s));
        EXPECT_EQ(s.size(), k);
        if (k > 0) {
            EXPECT_FALSE(evaluate(VcCore(g, d, k - 1)).accepted);
        }
    }
}
