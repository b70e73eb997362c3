#pragma once

// Rooted tree decompositions with an empty root bag.
//
// Per-node annotations follow these conventions:
//   forgotten(t)  = X_t \ X_parent(t)      (empty at the root)
//   introduced(t) = X_t \ union of child bags
// so every vertex is forgotten at exactly one node.

#include <algorithm>
#include <cstdint>
#include <istream>
#include <optional>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "instances.hpp"

namespace diversekit {

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = UINT32_MAX;

class RootedTreeDecomposition {
public:
    /// A single root node with an empty bag.
    RootedTreeDecomposition() : RootedTreeDecomposition({{}}, {kNoNode}) {}

    /// `parent[t]` is the parent of node t; exactly one node has parent
    /// kNoNode and becomes the root. Bags are sorted on construction.
    RootedTreeDecomposition(std::vector<std::vector<Vertex>> bags, std::vector<NodeId> parent)
        : bags_(std::move(bags)), parent_(std::move(parent)), children_(bags_.size()) {
        if (bags_.size() != parent_.size() || bags_.empty()) {
            throw std::invalid_argument("decomposition: need one parent entry per bag and at least one node");
        }
        for (auto& bag : bags_) {
            std::sort(bag.begin(), bag.end());
            if (std::adjacent_find(bag.begin(), bag.end()) != bag.end()) {
                throw std::invalid_argument("decomposition: repeated vertex in a bag");
            }
        }
        for (NodeId t = 0; t < parent_.size(); ++t) {
            if (parent_[t] == kNoNode) {
                if (root_ != kNoNode) throw std::invalid_argument("decomposition: more than one root");
                root_ = t;
            } else {
                if (parent_[t] >= parent_.size() || parent_[t] == t) {
                    throw std::invalid_argument("decomposition: bad parent link");
                }
                children_[parent_[t]].push_back(t);
            }
        }
        if (root_ == kNoNode) throw std::invalid_argument("decomposition: no root");
        // Reverse BFS order puts every child before its parent; reaching all
        // nodes from the root rules out cycles.
        std::vector<NodeId> order{root_};
        for (std::size_t i = 0; i < order.size(); ++i) {
            for (NodeId c : children_[order[i]]) order.push_back(c);
        }
        if (order.size() != bags_.size()) throw std::invalid_argument("decomposition: parent links do not form a tree");
        post_order_.assign(order.rbegin(), order.rend());
    }

    std::size_t node_count() const noexcept { return bags_.size(); }
    NodeId root() const noexcept { return root_; }
    NodeId parent(NodeId t) const { return parent_.at(t); }
    const std::vector<NodeId>& children(NodeId t) const { return children_.at(t); }
    const std::vector<Vertex>& bag(NodeId t) const { return bags_.at(t); }
    const std::vector<std::vector<Vertex>>& bags() const noexcept { return bags_; }
    const std::vector<NodeId>& parents() const noexcept { return parent_; }

    /// Children appear before their parents.
    const std::vector<NodeId>& post_order() const noexcept { return post_order_; }

    /// max |X_t| - 1; -1 when every bag is empty.
    int width() const {
        std::size_t widest = 0;
        for (const auto& b : bags_) widest = std::max(widest, b.size());
        return static_cast<int>(widest) - 1;
    }

    bool is_path() const {
        return std::all_of(children_.begin(), children_.end(), [](const auto& c) { return c.size() <= 1; });
    }

private:
    std::vector<std::vector<Vertex>> bags_;
    std::vector<NodeId> parent_;
    std::vector<std::vector<NodeId>> children_;
    std::vector<NodeId> post_order_;
    NodeId root_ = kNoNode;
};

struct NodeAnnotations {
    std::vector<std::vector<Vertex>> forgotten;
    std::vector<std::vector<Vertex>> introduced;
    std::vector<std::size_t> child_count;
    int width = -1;
    std::size_t max_children = 0;
};

inline NodeAnnotations annotate(const RootedTreeDecomposition& d) {
    NodeAnnotations a;
    const auto n = d.node_count();
    a.forgotten.resize(n);
    a.introduced.resize(n);
    a.child_count.resize(n);
    a.width = d.width();
    for (NodeId t = 0; t < n; ++t) {
        const auto& bag = d.bag(t);
        if (t != d.root()) {
            const auto& up = d.bag(d.parent(t));
            std::set_difference(bag.begin(), bag.end(), up.begin(), up.end(), std::back_inserter(a.forgotten[t]));
        }
        std::vector<Vertex> below;
        for (NodeId c : d.children(t)) below.insert(below.end(), d.bag(c).begin(), d.bag(c).end());
        std::sort(below.begin(), below.end());
        std::set_difference(bag.begin(), bag.end(), below.begin(), below.end(), std::back_inserter(a.introduced[t]));
        a.child_count[t] = d.children(t).size();
        a.max_children = std::max(a.max_children, a.child_count[t]);
    }
    return a;
}

// ---------------------------------------------------------------------------
// Validation

struct Violation {
    enum class Kind { VertexOutOfRange, VertexUncovered, EdgeUncovered, Disconnected, RootBagNotEmpty };
    Kind kind;
    std::string detail;
    std::vector<NodeId> nodes;
    std::vector<Vertex> vertices;
};

inline std::string_view to_string(Violation::Kind k) {
    switch (k) {
        case Violation::Kind::VertexOutOfRange: return "vertex out of range";
        case Violation::Kind::VertexUncovered: return "vertex uncovered";
        case Violation::Kind::EdgeUncovered: return "edge uncovered";
        case Violation::Kind::Disconnected: return "occurrence subtree disconnected";
        case Violation::Kind::RootBagNotEmpty: return "root bag not empty";
    }
    return "?";
}

/// Checks vertex and edge coverage, connectivity of every vertex's occurrence
/// subtree, and the empty-root convention. An empty result means valid.
inline std::vector<Violation> validate(const Graph& g, const RootedTreeDecomposition& d) {
    using K = Violation::Kind;
    std::vector<Violation> out;
    const auto n = g.vertex_count();
    if (!d.bag(d.root()).empty()) {
        out.push_back({K::RootBagNotEmpty, "root bag has " + std::to_string(d.bag(d.root()).size()) + " vertices",
                       {d.root()}, d.bag(d.root())});
    }
    // Tops: nodes containing v whose parent does not. Connected iff exactly one.
    std::vector<std::vector<NodeId>> tops(n);
    std::vector<char> covered(n, 0);
    for (NodeId t = 0; t < d.node_count(); ++t) {
        for (Vertex v : d.bag(t)) {
            if (v >= n) {
                out.push_back({K::VertexOutOfRange, "vertex " + std::to_string(v) + " not in graph", {t}, {v}});
                continue;
            }
            covered[v] = 1;
            NodeId p = d.parent(t);
            if (p == kNoNode || !std::binary_search(d.bag(p).begin(), d.bag(p).end(), v)) tops[v].push_back(t);
        }
    }
    for (Vertex v = 0; v < n; ++v) {
        if (!covered[v]) {
            out.push_back({K::VertexUncovered, "vertex " + std::to_string(v) + " in no bag", {}, {v}});
        } else if (tops[v].size() > 1) {
            out.push_back({K::Disconnected, "bags containing vertex " + std::to_string(v) + " are not connected",
                           tops[v], {v}});
        }
    }
    // An edge lies in some bag iff it lies in the top bag of its lower-top endpoint;
    // checking every bag keeps this independent of connectivity.
    std::vector<std::vector<NodeId>> occurrences(n);
    for (NodeId t = 0; t < d.node_count(); ++t) {
        for (Vertex v : d.bag(t)) {
            if (v < n) occurrences[v].push_back(t);
        }
    }
    for (const auto& [u, v] : g.edges()) {
        bool found = false;
        for (NodeId t : occurrences[u]) {
            if (std::binary_search(d.bag(t).begin(), d.bag(t).end(), v)) {
                found = true;
                break;
            }
        }
        if (!found) {
            out.push_back({K::EdgeUncovered,
                           "edge {" + std::to_string(u) + "," + std::to_string(v) + "} in no bag", {}, {u, v}});
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Normalization

/// Returns a decomposition of the same width with an empty root bag, at most
/// two children per node and at most one introduced vertex per node. Nodes
/// with more than two children become a binary comb of bag copies; several
/// introduced vertices become a chain that introduces them in ascending id
/// order. Output nodes are numbered in pre-order from the root (node 0).
inline RootedTreeDecomposition normalize(const Graph& g, const RootedTreeDecomposition& d) {
    if (auto v = validate(g, d); !v.empty()) {
        std::erase_if(v, [](const Violation& x) { return x.kind == Violation::Kind::RootBagNotEmpty; });
        if (!v.empty()) throw std::invalid_argument("normalize: invalid decomposition (" + v.front().detail + ")");
    }
    std::vector<std::vector<Vertex>> bags = d.bags();
    std::vector<std::vector<NodeId>> kids(d.node_count());
    for (NodeId t = 0; t < d.node_count(); ++t) kids[t] = d.children(t);
    NodeId root = d.root();

    auto add_node = [&](std::vector<Vertex> bag) {
        bags.push_back(std::move(bag));
        kids.emplace_back();
        return static_cast<NodeId>(bags.size() - 1);
    };

    if (!bags[root].empty()) {
        NodeId top = add_node({});
        kids[top] = {root};
        root = top;
    }

    const auto original = static_cast<NodeId>(bags.size());
    for (NodeId t = 0; t < original; ++t) {
        if (kids[t].size() <= 2) continue;
        std::vector<NodeId> list = kids[t];
        NodeId cur = t;
        for (std::size_t i = 0; i + 2 < list.size(); ++i) {
            NodeId copy = add_node(bags[t]);
            kids[cur] = {list[i], copy};
            cur = copy;
        }
        kids[cur] = {list[list.size() - 2], list.back()};
    }

    const auto combed = static_cast<NodeId>(bags.size());
    for (NodeId t = 0; t < combed; ++t) {
        std::vector<Vertex> below;
        for (NodeId c : kids[t]) below.insert(below.end(), bags[c].begin(), bags[c].end());
        std::sort(below.begin(), below.end());
        std::vector<Vertex> fresh;
        std::set_difference(bags[t].begin(), bags[t].end(), below.begin(), below.end(), std::back_inserter(fresh));
        if (fresh.size() <= 1) continue;
        // Chain t -> u_{m-1} -> ... -> u_1 [-> u_0], where u_j drops fresh[j..m-1].
        const std::size_t m = fresh.size();
        std::vector<NodeId> old_kids = kids[t];
        NodeId cur = t;
        const std::size_t lowest = old_kids.empty() ? 1 : 0;
        for (std::size_t j = m - 1; j + 1 > lowest; --j) {
            std::vector<Vertex> bag;
            std::set_difference(bags[t].begin(), bags[t].end(), fresh.begin() + static_cast<std::ptrdiff_t>(j),
                                fresh.end(), std::back_inserter(bag));
            NodeId u = add_node(std::move(bag));
            kids[cur] = {u};
            cur = u;
            if (j == 0) break;
        }
        kids[cur] = old_kids;
    }

    // Renumber in pre-order.
    std::vector<std::vector<Vertex>> out_bags;
    std::vector<NodeId> out_parent;
    std::vector<std::pair<NodeId, NodeId>> stack{{root, kNoNode}};
    while (!stack.empty()) {
        auto [t, p] = stack.back();
        stack.pop_back();
        auto id = static_cast<NodeId>(out_bags.size());
        out_bags.push_back(bags[t]);
        out_parent.push_back(p);
        for (auto it = kids[t].rbegin(); it != kids[t].rend(); ++it) stack.emplace_back(*it, id);
    }
    return RootedTreeDecomposition(std::move(out_bags), std::move(out_parent));
}

inline bool is_normalized(const RootedTreeDecomposition& d) {
    if (!d.bag(d.root()).empty()) return false;
    auto a = annotate(d);
    for (NodeId t = 0; t < d.node_count(); ++t) {
        if (a.child_count[t] > 2 || a.introduced[t].size() > 1) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Vertex covers and the path decomposition built from one

inline bool is_vertex_cover(const Graph& g, const std::vector<Vertex>& z) {
    std::vector<char> in(g.vertex_count(), 0);
    for (Vertex v : z) {
        if (v >= g.vertex_count()) return false;
        in[v] = 1;
    }
    return std::all_of(g.edges().begin(), g.edges().end(), [&](const auto& e) { return in[e.first] || in[e.second]; });
}

/// Bags Z + {v} for each v outside Z in ascending order, strung below an empty
/// root. Width |Z| whenever some vertex lies outside Z.
inline RootedTreeDecomposition pd_from_vertex_cover(const Graph& g, std::vector<Vertex> z) {
    std::sort(z.begin(), z.end());
    z.erase(std::unique(z.begin(), z.end()), z.end());
    if (!is_vertex_cover(g, z)) throw std::invalid_argument("pd_from_vertex_cover: Z is not a vertex cover");
    std::vector<std::vector<Vertex>> bags{{}};
    std::vector<NodeId> parent{kNoNode};
    std::vector<char> in(g.vertex_count(), 0);
    for (Vertex v : z) in[v] = 1;
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        if (in[v]) continue;
        auto bag = z;
        bag.insert(std::upper_bound(bag.begin(), bag.end(), v), v);
        parent.push_back(static_cast<NodeId>(bags.size() - 1));
        bags.push_back(std::move(bag));
    }
    if (bags.size() == 1 && !z.empty()) {
        bags.push_back(z);
        parent.push_back(0);
    }
    return RootedTreeDecomposition(std::move(bags), std::move(parent));
}

namespace detail {

inline bool cover_search(const Graph& g, std::vector<char>& taken, std::size_t budget, std::size_t from) {
    const auto& edges = g.edges();
    std::size_t i = from;
    while (i < edges.size() && (taken[edges[i].first] || taken[edges[i].second])) ++i;
    if (i == edges.size()) return true;
    if (budget == 0) return false;
    for (Vertex pick : {edges[i].first, edges[i].second}) {
        taken[pick] = 1;
        if (cover_search(g, taken, budget - 1, i + 1)) return true;
        taken[pick] = 0;
    }
    return false;
}

}  // namespace detail

/// Bounded search tree: branch on the two endpoints of the first uncovered
/// edge, depth at most k.
inline std::optional<std::vector<Vertex>> find_vertex_cover(const Graph& g, std::size_t k) {
    std::vector<char> taken(g.vertex_count(), 0);
    if (!detail::cover_search(g, taken, k, 0)) return std::nullopt;
    std::vector<Vertex> cover;
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        if (taken[v]) cover.push_back(v);
    }
    return cover;
}

inline std::vector<Vertex> minimum_vertex_cover(const Graph& g) {
    for (std::size_t k = 0;; ++k) {
        if (auto c = find_vertex_cover(g, k)) return *c;
    }
}

/// Keeps only the vertices in `keep` (sorted) and relabels them 0..|keep|-1.
inline RootedTreeDecomposition restrict_decomposition(const RootedTreeDecomposition& d,
                                                      const std::vector<Vertex>& keep) {
    std::vector<std::vector<Vertex>> bags;
    for (const auto& bag : d.bags()) {
        std::vector<Vertex> b;
        for (Vertex v : bag) {
            auto it = std::lower_bound(keep.begin(), keep.end(), v);
            if (it != keep.end() && *it == v) b.push_back(static_cast<Vertex>(it - keep.begin()));
        }
        bags.push_back(std::move(b));
    }
    return RootedTreeDecomposition(std::move(bags), d.parents());
}

// ---------------------------------------------------------------------------
// PACE 2017 .td format

/// `s td N w+1 n`, `b i v1 ...`, tree edges `i j`; 1-based. The result is
/// rooted at an added empty node 0 whose only child is bag 1 (node 1).
inline RootedTreeDecomposition parse_td(std::istream& in) {
    std::size_t bag_count = 0, declared = 0, n = 0;
    bool have_header = false;
    std::vector<std::vector<Vertex>> bags;
    std::vector<char> seen;
    std::vector<std::vector<std::size_t>> adj;
    std::size_t edge_count = 0;
    detail::for_each_record(in, 'c', [&](std::size_t line_no, const auto& tok) {
        if (tok[0] == "s") {
            if (have_header) throw ParseError(line_no, "duplicate header");
            if (tok.size() != 5 || tok[1] != "td") throw ParseError(line_no, "malformed header, expected 's td N w n'");
            bag_count = detail::parse_int<std::size_t>(tok[2], line_no);
            declared = detail::parse_int<std::size_t>(tok[3], line_no);
            n = detail::parse_int<std::size_t>(tok[4], line_no);
            bags.assign(bag_count, {});
            seen.assign(bag_count, 0);
            adj.assign(bag_count, {});
            have_header = true;
        } else if (!have_header) {
            throw ParseError(line_no, "record before 's td' header");
        } else if (tok[0] == "b") {
            if (tok.size() < 2) throw ParseError(line_no, "malformed bag line");
            auto i = detail::parse_vertex(tok[1], bag_count, line_no);
            if (seen[i]) throw ParseError(line_no, "bag defined twice");
            seen[i] = 1;
            for (std::size_t j = 2; j < tok.size(); ++j) bags[i].push_back(detail::parse_vertex(tok[j], n, line_no));
            if (bags[i].size() > declared) throw ParseError(line_no, "bag larger than declared w+1");
        } else {
            if (tok.size() != 2) throw ParseError(line_no, "malformed tree edge");
            auto i = detail::parse_vertex(tok[0], bag_count, line_no);
            auto j = detail::parse_vertex(tok[1], bag_count, line_no);
            adj[i].push_back(j);
            adj[j].push_back(i);
            ++edge_count;
        }
    });
    if (!have_header) throw ParseError(0, "missing 's td' header");
    for (std::size_t i = 0; i < bag_count; ++i) {
        if (!seen[i]) throw ParseError(0, "bag " + std::to_string(i + 1) + " never defined");
    }
    if (bag_count > 0 && edge_count != bag_count - 1) throw ParseError(0, "tree must have N-1 edges");
    std::vector<std::vector<Vertex>> out_bags{{}};
    std::vector<NodeId> parent{kNoNode};
    for (auto& b : bags) out_bags.push_back(std::move(b));
    parent.resize(bag_count + 1, kNoNode);
    if (bag_count > 0) {
        std::vector<char> visited(bag_count, 0);
        std::queue<std::size_t> queue;
        queue.push(0);
        visited[0] = 1;
        parent[1] = 0;
        while (!queue.empty()) {
            auto i = queue.front();
            queue.pop();
            for (auto j : adj[i]) {
                if (visited[j]) continue;
                visited[j] = 1;
                parent[j + 1] = static_cast<NodeId>(i + 1);
                queue.push(j);
            }
        }
        if (std::find(visited.begin(), visited.end(), 0) != visited.end()) throw ParseError(0, "tree is disconnected");
    }
    return RootedTreeDecomposition(std::move(out_bags), std::move(parent));
}

}  // namespace diversekit
