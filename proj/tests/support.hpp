#pragma once

// Random instance generators shared by the unit tests and the acceptance run.

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "diversekit/decomposition.hpp"
#include "diversekit/instances.hpp"

namespace testkit {

using namespace diversekit;
using Rng = std::mt19937_64;

inline Graph random_graph(std::size_t n, double p, Rng& rng) {
    std::bernoulli_distribution coin(p);
    std::vector<Graph::Edge> edges;
    for (Vertex u = 0; u < n; ++u) {
        for (Vertex v = u + 1; v < n; ++v) {
            if (coin(rng)) edges.emplace_back(u, v);
        }
    }
    return Graph(n, std::move(edges));
}

inline Graph complete_graph(std::size_t n) {
    std::vector<Graph::Edge> edges;
    for (Vertex u = 0; u < n; ++u) {
        for (Vertex v = u + 1; v < n; ++v) edges.emplace_back(u, v);
    }
    return Graph(n, std::move(edges));
}

inline Graph path_graph(std::size_t n) {
    std::vector<Graph::Edge> edges;
    for (Vertex v = 1; v < n; ++v) edges.emplace_back(v - 1, v);
    return Graph(n, std::move(edges));
}

inline Graph cycle_graph(std::size_t n) {
    std::vector<Graph::Edge> edges;
    for (Vertex v = 0; v < n; ++v) edges.emplace_back(v, static_cast<Vertex>((v + 1) % n));
    return Graph(n, std::move(edges));
}

/// K_{1,leaves}, centre 0.
inline Graph star_graph(std::size_t leaves) {
    std::vector<Graph::Edge> edges;
    for (Vertex v = 1; v <= leaves; ++v) edges.emplace_back(0, v);
    return Graph(leaves + 1, std::move(edges));
}

/// Random tree decomposition of g: an elimination ordering turned into a tree,
/// then shuffled node ids, under an empty root.
inline RootedTreeDecomposition random_decomposition(const Graph& g, Rng& rng) {
    const std::size_t n = g.vertex_count();
    std::vector<Vertex> order(n);
    std::iota(order.begin(), order.end(), Vertex{0});
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::size_t> rank(n);
    for (std::size_t i = 0; i < n; ++i) rank[order[i]] = i;
    std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
    for (const auto& [u, v] : g.edges()) adj[u][v] = adj[v][u] = 1;
    std::vector<std::vector<Vertex>> bags;
    for (std::size_t i = 0; i < n; ++i) {
        Vertex v = order[i];
        std::vector<Vertex> later;
        for (Vertex w = 0; w < n; ++w) {
            if (adj[v][w] && rank[w] > i) later.push_back(w);
        }
        for (Vertex a : later) {
            for (Vertex b : later) {
                if (a != b) adj[a][b] = 1;
            }
        }
        later.push_back(v);
        std::sort(later.begin(), later.end());
        bags.push_back(std::move(later));
    }
    // node i (bag of order[i]) hangs below the node of its earliest later neighbour
    std::vector<NodeId> parent(n + 1, kNoNode);
    std::vector<std::vector<Vertex>> all{{}};
    for (auto& b : bags) all.push_back(b);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t best = n;
        for (Vertex w : bags[i]) {
            if (w != order[i]) best = std::min(best, rank[w]);
        }
        parent[i + 1] = best == n ? 0 : static_cast<NodeId>(best + 1);
    }
    return RootedTreeDecomposition(std::move(all), std::move(parent));
}

inline Hypergraph random_hypergraph(std::size_t n, std::size_t m, std::size_t d, Rng& rng) {
    std::uniform_int_distribution<std::size_t> size_dist(1, d);
    std::vector<std::vector<Vertex>> edges;
    std::vector<Vertex> pool(n);
    std::iota(pool.begin(), pool.end(), Vertex{0});
    for (std::size_t i = 0; i < m; ++i) {
        std::shuffle(pool.begin(), pool.end(), rng);
        std::size_t s = std::min(size_dist(rng), n);
        edges.emplace_back(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(s));
    }
    return Hypergraph(n, d, std::move(edges));
}

/// Hyperedges sharing a hub vertex, plus a few random ones: sunflower-rich.
inline Hypergraph hub_hypergraph(std::size_t n, std::size_t m, std::size_t d, Rng& rng) {
    std::vector<std::vector<Vertex>> edges;
    std::uniform_int_distribution<Vertex> vd(1, static_cast<Vertex>(n - 1));
    std::uniform_int_distribution<std::size_t> sd(2, d);
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<Vertex> e{0};
        std::size_t want = sd(rng);
        while (e.size() < want) {
            Vertex v = vd(rng);
            if (std::find(e.begin(), e.end(), v) == e.end()) e.push_back(v);
        }
        edges.push_back(std::move(e));
    }
    return Hypergraph(n, d, std::move(edges));
}

inline PointSet random_points(std::size_t count, std::int64_t range, Rng& rng) {
    std::uniform_int_distribution<std::int64_t> cd(0, range);
    std::vector<Point> pts;
    while (pts.size() < count) {
        Point p{cd(rng), cd(rng)};
        if (std::find(pts.begin(), pts.end(), p) == pts.end()) pts.push_back(p);
    }
    return PointSet(std::move(pts));
}

/// Several points on a few lines through the origin region, then noise.
inline PointSet collinear_points(std::size_t count, Rng& rng) {
    std::uniform_int_distribution<int> dir(0, 3);
    std::uniform_int_distribution<std::int64_t> step(1, 5);
    std::uniform_int_distribution<std::int64_t> noise(-6, 6);
    const Point dirs[] = {{1, 0}, {0, 1}, {1, 1}, {1, -1}};
    std::vector<Point> pts;
    while (pts.size() < count) {
        Point p;
        if (pts.size() % 3 == 2) {
            p = {noise(rng), noise(rng)};
        } else {
            Point dv = dirs[dir(rng)];
            std::int64_t s = step(rng);
            p = {dv.x * s, dv.y * s};
        }
        if (std::find(pts.begin(), pts.end(), p) == pts.end()) pts.push_back(p);
    }
    return PointSet(std::move(pts));
}

inline Tournament random_tournament(std::size_t n, Rng& rng) {
    std::bernoulli_distribution coin(0.5);
    std::vector<Arc> arcs;
    for (Vertex u = 0; u < n; ++u) {
        for (Vertex v = u + 1; v < n; ++v) arcs.push_back(coin(rng) ? Arc{u, v} : Arc{v, u});
    }
    return Tournament(n, std::move(arcs));
}

/// Transitive along a random order, with `flips` arcs reversed.
inline Tournament near_transitive_tournament(std::size_t n, std::size_t flips, Rng& rng) {
    std::vector<Vertex> order(n);
    std::iota(order.begin(), order.end(), Vertex{0});
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<Arc> arcs;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) arcs.push_back({order[i], order[j]});
    }
    std::shuffle(arcs.begin(), arcs.end(), rng);
    for (std::size_t i = 0; i < std::min(flips, arcs.size()); ++i) std::swap(arcs[i].tail, arcs[i].head);
    return Tournament(n, std::move(arcs));
}

inline bool is_vertex_cover_set(const Graph& g, const ElementSet& s) {
    return std::all_of(g.edges().begin(), g.edges().end(), [&](const auto& e) {
        return std::binary_search(s.begin(), s.end(), e.first) || std::binary_search(s.begin(), s.end(), e.second);
    });
}

}  // namespace testkit
