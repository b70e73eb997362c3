#include <gtest/gtest.h>

#include <sstream>

#include "diversekit/decomposition.hpp"
#include "support.hpp"

using namespace diversekit;

namespace {

bool has_kind(const std::vector<Violation>& v, Violation::Kind k) {
    return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.kind == k; });
}

/// Every vertex forgotten at exactly one node.
bool forgets_partition(const Graph& g, const RootedTreeDecomposition& d) {
    auto a = annotate(d);
    std::vector<int> seen(g.vertex_count(), 0);
    for (const auto& f : a.forgotten) {
        for (Vertex v : f) ++seen[v];
    }
    return std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; });
}

}  // namespace

TEST(Validate, TriangleInOneBag) {
    Graph k3 = testkit::complete_graph(3);
    RootedTreeDecomposition d({{}, {0, 1, 2}}, {kNoNode, 0});
    EXPECT_TRUE(validate(k3, d).empty());
    EXPECT_EQ(d.width(), 2);
}

TEST(Validate, PathBagsAsSiblings) {
    Graph p3 = testkit::path_graph(3);
    // {0,1} and {1,2} both hang from the empty root: vertex 1 occurs in two
    // disconnected places.
    RootedTreeDecomposition siblings({{}, {0, 1}, {1, 2}}, {kNoNode, 0, 0});
    auto v = validate(p3, siblings);
    ASSERT_EQ(v.size(), 1u);
    EXPECT_EQ(v[0].kind, Violation::Kind::Disconnected);
    RootedTreeDecomposition chain({{}, {0, 1}, {1, 2}}, {kNoNode, 0, 1});
    EXPECT_TRUE(validate(p3, chain).empty());
}

TEST(Validate, ReportsEachProblem) {
    Graph g = testkit::path_graph(3);
    RootedTreeDecomposition missing_edge({{}, {0}, {1, 2}}, {kNoNode, 0, 0});
    EXPECT_TRUE(has_kind(validate(g, missing_edge), Violation::Kind::EdgeUncovered));
    RootedTreeDecomposition missing_vertex({{}, {1, 2}}, {kNoNode, 0});
    EXPECT_TRUE(has_kind(validate(g, missing_vertex), Violation::Kind::VertexUncovered));
    RootedTreeDecomposition out_of_range({{}, {0, 1, 2, 5}}, {kNoNode, 0});
    EXPECT_TRUE(has_kind(validate(g, out_of_range), Violation::Kind::VertexOutOfRange));
    RootedTreeDecomposition full_root({{0, 1, 2}}, {kNoNode});
    auto v = validate(g, full_root);
    ASSERT_EQ(v.size(), 1u);
    EXPECT_EQ(v[0].kind, Violation::Kind::RootBagNotEmpty);
}

TEST(Decomposition, RejectsBrokenTrees) {
    EXPECT_THROW(RootedTreeDecomposition({{}, {}}, {kNoNode, kNoNode}), std::invalid_argument);
    EXPECT_THROW(RootedTreeDecomposition({{}, {}, {}}, {kNoNode, 2, 1}), std::invalid_argument);
    EXPECT_THROW(RootedTreeDecomposition({{1, 1}}, {kNoNode}), std::invalid_argument);
    EXPECT_THROW(RootedTreeDecomposition({{}}, {}), std::invalid_argument);
}

TEST(Normalize, TriangleBecomesChain) {
    Graph k3 = testkit::complete_graph(3);
    RootedTreeDecomposition d({{}, {0, 1, 2}}, {kNoNode, 0});
    auto n = normalize(k3, d);
    EXPECT_TRUE(validate(k3, n).empty());
    EXPECT_TRUE(is_normalized(n));
    EXPECT_EQ(n.width(), 2);
    EXPECT_TRUE(n.is_path());
    EXPECT_TRUE(forgets_partition(k3, n));
}

TEST(Normalize, EmptyGraph) {
    Graph g(0, {});
    auto n = normalize(g, RootedTreeDecomposition());
    EXPECT_EQ(n.node_count(), 1u);
    EXPECT_TRUE(n.bag(n.root()).empty());
}

TEST(Normalize, AddsEmptyRootAndBinarizes) {
    Graph star = testkit::star_graph(4);
    // centre bag at the root with four leaf children
    RootedTreeDecomposition d({{0}, {0, 1}, {0, 2}, {0, 3}, {0, 4}}, {kNoNode, 0, 0, 0, 0});
    auto n = normalize(star, d);
    EXPECT_TRUE(validate(star, n).empty());
    EXPECT_TRUE(is_normalized(n));
    EXPECT_EQ(n.width(), 1);
    EXPECT_THROW(normalize(star, RootedTreeDecomposition({{}, {0, 1}}, {kNoNode, 0})), std::invalid_argument);
}

TEST(Normalize, IdempotentOnNormalizedInput) {
    testkit::Rng rng(3);
    for (int i = 0; i < 50; ++i) {
        Graph g = testkit::random_graph(2 + i % 8, 0.4, rng);
        auto once = normalize(g, testkit::random_decomposition(g, rng));
        auto twice = normalize(g, once);
        EXPECT_TRUE(is_normalized(twice));
        EXPECT_EQ(twice.width(), once.width());
        EXPECT_EQ(twice.node_count(), once.node_count());
    }
}

TEST(Normalize, InvariantsOnRandomDecompositions) {
    testkit::Rng rng(5);
    for (int i = 0; i < 200; ++i) {
        Graph g = testkit::random_graph(1 + i % 11, 0.3 + 0.05 * (i % 7), rng);
        auto d = testkit::random_decomposition(g, rng);
        ASSERT_TRUE(validate(g, d).empty());
        auto n = normalize(g, d);
        ASSERT_TRUE(validate(g, n).empty());
        EXPECT_TRUE(is_normalized(n));
        EXPECT_EQ(n.width(), d.width());
        EXPECT_TRUE(forgets_partition(g, n));
        auto a = annotate(n);
        EXPECT_LE(a.max_children, 2u);
    }
}

TEST(PathFromCover, StarWithCentre) {
    Graph star = testkit::star_graph(3);
    auto d = pd_from_vertex_cover(star, {0});
    EXPECT_EQ(d.node_count(), 4u);
    EXPECT_TRUE(d.is_path());
    EXPECT_EQ(d.width(), 1);
    EXPECT_TRUE(validate(star, d).empty());
    std::vector<std::vector<Vertex>> want{{}, {0, 1}, {0, 2}, {0, 3}};
    EXPECT_EQ(d.bags(), want);
}

TEST(PathFromCover, TriangleAndBadCover) {
    Graph k3 = testkit::complete_graph(3);
    EXPECT_EQ(pd_from_vertex_cover(k3, {0, 1}).width(), 2);
    EXPECT_THROW(pd_from_vertex_cover(k3, {0}), std::invalid_argument);
    // Z covering every vertex still yields a valid decomposition
    auto all = pd_from_vertex_cover(k3, {0, 1, 2});
    EXPECT_TRUE(validate(k3, all).empty());
}

TEST(PathFromCover, RandomPairsWidthIsCoverSize) {
    testkit::Rng rng(8);
    for (int i = 0; i < 200; ++i) {
        Graph g = testkit::random_graph(2 + i % 10, 0.35, rng);
        std::vector<Vertex> z = minimum_vertex_cover(g);
        std::bernoulli_distribution extra(0.2);
        for (Vertex v = 0; v < g.vertex_count(); ++v) {
            if (extra(rng) && std::find(z.begin(), z.end(), v) == z.end()) z.push_back(v);
        }
        auto d = pd_from_vertex_cover(g, z);
        ASSERT_TRUE(validate(g, d).empty());
        EXPECT_TRUE(d.is_path());
        if (z.size() < g.vertex_count()) {
            EXPECT_EQ(d.width(), static_cast<int>(z.size()));
        }
        auto n = normalize(g, d);
        EXPECT_EQ(n.width(), d.width());
        EXPECT_TRUE(is_normalized(n));
    }
}

TEST(FindVertexCover, Examples) {
    Graph edge(2, {{0, 1}});
    auto c = find_vertex_cover(edge, 1);
    ASSERT_TRUE(c.has_value());
    EXPECT_EQ(c->size(), 1u);
    EXPECT_FALSE(find_vertex_cover(testkit::complete_graph(3), 1).has_value());
    EXPECT_EQ(minimum_vertex_cover(testkit::complete_graph(4)).size(), 3u);
}

TEST(FindVertexCover, MatchesSubsetEnumeration) {
    testkit::Rng rng(9);
    for (int i = 0; i < 60; ++i) {
        Graph g = testkit::random_graph(10, 0.3, rng);
        bool exists = false;
        for (std::uint32_t mask = 0; mask < (1U << 10) && !exists; ++mask) {
            if (std::popcount(mask) > 4) continue;
            ElementSet s;
            for (Vertex v = 0; v < 10; ++v) {
                if ((mask >> v) & 1U) s.push_back(v);
            }
            exists = testkit::is_vertex_cover_set(g, s);
        }
        auto c = find_vertex_cover(g, 4);
        EXPECT_EQ(c.has_value(), exists);
        if (c) {
            EXPECT_LE(c->size(), 4u);
            EXPECT_TRUE(is_vertex_cover(g, *c));
        }
    }
}

TEST(ParseTd, ReadsPaceFormat) {
    std::istringstream in("c path\ns td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n");
    auto d = parse_td(in);
    EXPECT_EQ(d.node_count(), 3u);
    EXPECT_TRUE(d.bag(d.root()).empty());
    EXPECT_TRUE(validate(testkit::path_graph(3), d).empty());
    EXPECT_EQ(d.width(), 1);
}

TEST(ParseTd, RejectsMalformed) {
    auto bad = [](const std::string& s) {
        std::istringstream in(s);
        return parse_td(in);
    };
    EXPECT_THROW(bad("b 1 1\n"), ParseError);
    EXPECT_THROW(bad("s td 2 2 3\nb 1 1 2\n"), ParseError);
    EXPECT_THROW(bad("s td 2 1 3\nb 1 1 2\nb 2 3\n1 2\n"), ParseError);
    EXPECT_THROW(bad("s td 3 2 3\nb 1 1\nb 2 2\nb 3 3\n1 2\n"), ParseError);
    EXPECT_THROW(bad("s td 1 1 3\nb 1 4\n"), ParseError);
}

TEST(RestrictDecomposition, RelabelsKeptVertices) {
    RootedTreeDecomposition d({{}, {0, 2, 4}, {2, 3}}, {kNoNode, 0, 1});
    auto r = restrict_decomposition(d, {2, 3, 4});
    std::vector<std::vector<Vertex>> want{{}, {0, 2}, {0, 1}};
    EXPECT_EQ(r.bags(), want);
    EXPECT_EQ(r.parents(), d.parents());
}
