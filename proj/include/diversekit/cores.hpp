#pragma once

// Concrete dynamic cores.
//
//  * VcCore: Vertex Cover with budget k. States (S, s): S is the selected part
//    of the bag, s the number of selected vertices already forgotten in the
//    subtree (including at the node itself). Selected bag vertices that are not
//    forgotten yet get counted exactly once further up, so with lookahead on,
//    states with s + |S \ forg(t)| > k are dropped as well.
//  * DiverseProductCore: r component cores run side by side plus a diversity
//    accumulator capped at the target d. A tuple's accumulator is the sum of
//    its children's accumulators plus the influence of the vertices forgotten
//    at the node.
//  * solve_diverse_vc_direct: the same Diverse Vertex Cover tables built by a
//    hand-written DP that does not go through the core engine; it serves as an
//    independent check on the product construction.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "core_engine.hpp"
#include "decomposition.hpp"
#include "diversity.hpp"
#include "instances.hpp"

namespace diversekit {

inline constexpr std::size_t kMaxBagSize = 62;

/// Moves the bits of `value` selected by `from`, in order, onto the bits of `to`.
inline std::uint64_t transfer_bits(std::uint64_t value, std::uint64_t from, std::uint64_t to) {
    std::uint64_t out = 0;
    while (from != 0) {
        std::uint64_t fb = from & (~from + 1);
        std::uint64_t tb = to & (~to + 1);
        if (value & fb) out |= tb;
        from ^= fb;
        to ^= tb;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Vertex Cover core

struct VcState {
    std::uint64_t selected = 0;  ///< bit i <=> i-th vertex of the (sorted) bag is in S
    std::uint32_t count = 0;     ///< s
    auto operator<=>(const VcState&) const = default;
};

class VcCore {
public:
    using State = VcState;

    VcCore(const Graph& g, const RootedTreeDecomposition& d, std::size_t k, bool lookahead = true)
        : d_(&d), k_(k), lookahead_(lookahead) {
        if (!d.bag(d.root()).empty()) throw std::invalid_argument("VcCore: root bag must be empty");
        const auto notes = annotate(d);
        layout_.resize(d.node_count());
        for (NodeId t = 0; t < d.node_count(); ++t) {
            const auto& bag = d.bag(t);
            if (bag.size() > kMaxBagSize) throw std::length_error("VcCore: bag larger than 62 vertices");
            Layout& l = layout_[t];
            l.size = bag.size();
            l.full = bag.empty() ? 0 : (~std::uint64_t{0} >> (64 - bag.size()));
            for (std::size_t i = 0; i < bag.size(); ++i) {
                for (std::size_t j = i + 1; j < bag.size(); ++j) {
                    if (g.adjacent(bag[i], bag[j])) l.edges.push_back((std::uint64_t{1} << i) | (std::uint64_t{1} << j));
                }
            }
            for (Vertex v : notes.forgotten[t]) l.forgotten |= bit_of(bag, v);
            for (NodeId c : d.children(t)) {
                Link link;
                const auto& cb = d.bag(c);
                for (std::size_t i = 0; i < cb.size(); ++i) {
                    if (std::binary_search(bag.begin(), bag.end(), cb[i])) {
                        link.child_shared |= std::uint64_t{1} << i;
                        link.parent_shared |= bit_of(bag, cb[i]);
                    }
                }
                l.links.push_back(link);
            }
        }
    }

    const RootedTreeDecomposition& decomposition() const { return *d_; }
    std::size_t budget() const { return k_; }

    std::vector<State> accept() const {
        std::vector<State> out;
        for (std::uint32_t s = 0; s <= k_; ++s) out.push_back({0, s});
        return out;
    }

    template <class Sink>
    void for_each_parent(NodeId t, std::span<const State> kids, Sink&& sink) const {
        const Layout& l = layout_[t];
        std::uint64_t base = 0, known = 0;
        std::size_t below = 0;
        for (std::size_t i = 0; i < kids.size(); ++i) {
            const Link& link = l.links[i];
            std::uint64_t proj = transfer_bits(kids[i].selected, link.child_shared, link.parent_shared);
            if ((proj ^ base) & known & link.parent_shared) return;
            base |= proj;
            known |= link.parent_shared;
            below += kids[i].count;
        }
        if (below > k_) return;
        const std::uint64_t free = l.full & ~known;
        std::uint64_t sub = 0;
        do {
            std::uint64_t s = base | sub;
            if (covers(l, s)) {
                std::size_t count = below + static_cast<std::size_t>(std::popcount(s & l.forgotten));
                if (fits(l, s, count)) sink(State{s, static_cast<std::uint32_t>(count)});
            }
            sub = (sub - free) & free;
        } while (sub != 0);
    }

    /// The full Process(t); exponential in the bag sizes, meant for checking.
    std::vector<ProcessTuple<State>> process(NodeId t) const {
        const Layout& l = layout_[t];
        const auto& kids = d_->children(t);
        if (l.size > 20) throw std::length_error("VcCore::process: bag too large to materialize");
        std::vector<ProcessTuple<State>> out;
        for (std::uint64_t s = 0; s <= l.full; ++s) {
            if (!covers(l, s)) continue;
            std::vector<std::vector<State>> options(kids.size());
            bool empty = false;
            for (std::size_t i = 0; i < kids.size(); ++i) {
                const Layout& cl = layout_[kids[i]];
                const Link& link = l.links[i];
                for (std::uint64_t cs = 0; cs <= cl.full; ++cs) {
                    if (!covers(cl, cs)) continue;
                    if (transfer_bits(cs, link.child_shared, link.parent_shared) != (s & link.parent_shared)) continue;
                    for (std::uint32_t c = 0; c <= k_; ++c) options[i].push_back({cs, c});
                }
                empty = empty || options[i].empty();
            }
            if (empty) continue;
            std::vector<std::size_t> idx(kids.size(), 0);
            for (;;) {
                std::size_t count = static_cast<std::size_t>(std::popcount(s & l.forgotten));
                ProcessTuple<State> tuple;
                for (std::size_t i = 0; i < kids.size(); ++i) {
                    tuple.children.push_back(options[i][idx[i]]);
                    count += options[i][idx[i]].count;
                }
                if (fits(l, s, count)) {
                    tuple.parent = State{s, static_cast<std::uint32_t>(count)};
                    out.push_back(std::move(tuple));
                }
                std::size_t i = 0;
                while (i < kids.size() && ++idx[i] == options[i].size()) idx[i++] = 0;
                if (i == kids.size()) break;
            }
        }
        return out;
    }

    bool contains(NodeId t, Vertex v, const State& w) const {
        const auto& bag = d_->bag(t);
        auto it = std::lower_bound(bag.begin(), bag.end(), v);
        if (it == bag.end() || *it != v) return false;
        return (w.selected >> (it - bag.begin())) & 1U;
    }

    auto membership() const {
        return [this](NodeId t, Vertex v, const State& w) { return contains(t, v, w); };
    }

private:
    struct Link {
        std::uint64_t child_shared = 0;
        std::uint64_t parent_shared = 0;
    };
    struct Layout {
        std::size_t size = 0;
        std::uint64_t full = 0;
        std::uint64_t forgotten = 0;
        std::vector<std::uint64_t> edges;
        SmallVec<Link, 2> links;
    };

    static std::uint64_t bit_of(const std::vector<Vertex>& bag, Vertex v) {
        return std::uint64_t{1} << (std::lower_bound(bag.begin(), bag.end(), v) - bag.begin());
    }

    bool fits(const Layout& l, std::uint64_t s, std::size_t count) const {
        if (lookahead_) count += static_cast<std::size_t>(std::popcount(s & ~l.forgotten));
        return count <= k_;
    }

    static bool covers(const Layout& l, std::uint64_t s) {
        return std::all_of(l.edges.begin(), l.edges.end(), [s](std::uint64_t e) { return (e & s) != 0; });
    }

    const RootedTreeDecomposition* d_;
    std::size_t k_;
    bool lookahead_;
    std::vector<Layout> layout_;
};

// ---------------------------------------------------------------------------
// Diverse product core

template <class W>
struct DiverseState {
    SmallVec<W, 4> parts;
    std::uint32_t diversity = 0;  ///< accumulated diversity, capped at the target

    friend bool operator==(const DiverseState& a, const DiverseState& b) {
        return a.diversity == b.diversity && std::equal(a.parts.begin(), a.parts.end(), b.parts.begin(), b.parts.end());
    }
    friend std::strong_ordering operator<=>(const DiverseState& a, const DiverseState& b) {
        auto c = std::lexicographical_compare_three_way(a.parts.begin(), a.parts.end(), b.parts.begin(), b.parts.end());
        if (c != 0) return c;
        return a.diversity <=> b.diversity;
    }
};

template <DynamicCore Base, class Rho>
    requires MembershipFunction<Rho, typename Base::State>
class DiverseProductCore {
public:
    using Component = typename Base::State;
    using State = DiverseState<Component>;

    /// The same core may appear several times; it is then evaluated once per
    /// distinct child context.
    DiverseProductCore(std::vector<const Base*> cores, std::vector<Rho> memberships, DiversityValue target)
        : cores_(std::move(cores)), rho_(std::move(memberships)), target_(target) {
        if (cores_.empty() || cores_.size() != rho_.size()) {
            throw std::invalid_argument("DiverseProductCore: need r >= 1 cores, each with a membership function");
        }
        if (target_ < 0 || target_ > UINT32_MAX) throw std::invalid_argument("DiverseProductCore: bad target");
        for (const Base* c : cores_) {
            if (&c->decomposition() != &cores_.front()->decomposition()) {
                throw std::invalid_argument("DiverseProductCore: component cores built over different decompositions");
            }
        }
        forgotten_ = annotate(decomposition()).forgotten;
    }

    const RootedTreeDecomposition& decomposition() const { return cores_.front()->decomposition(); }
    std::size_t arity() const { return cores_.size(); }
    DiversityValue target() const { return target_; }
    const Rho& membership(std::size_t i) const { return rho_.at(i); }

    std::vector<State> accept() const {
        std::vector<std::vector<Component>> parts;
        for (const Base* c : cores_) parts.push_back(c->accept());
        std::vector<State> out;
        cartesian(parts, [&](const SmallVec<Component, 4>& combo) {
            out.push_back(State{combo, static_cast<std::uint32_t>(target_)});
        });
        return out;
    }

    template <class Sink>
    void for_each_parent(NodeId t, std::span<const State> kids, Sink&& sink) const {
        const std::size_t r = cores_.size();
        std::vector<std::vector<Component>> options(r);
        SmallVec<Component, 2> comp_kids;
        for (std::size_t i = 0; i < r; ++i) {
            std::size_t same = i;
            for (std::size_t j = 0; j < i && same == i; ++j) {
                if (cores_[j] != cores_[i]) continue;
                bool equal = std::all_of(kids.begin(), kids.end(), [&](const State& k) { return k.parts[j] == k.parts[i]; });
                if (equal) same = j;
            }
            if (same != i) {
                options[i] = options[same];
            } else {
                comp_kids.clear();
                for (const State& k : kids) comp_kids.push_back(k.parts[i]);
                cores_[i]->for_each_parent(t, std::span<const Component>(comp_kids.data(), comp_kids.size()),
                                           [&](const Component& w) { options[i].push_back(w); });
            }
            if (options[i].empty()) return;
        }
        std::int64_t below = 0;
        for (const State& k : kids) below += k.diversity;
        emit_combinations(t, options, below, sink);
    }

    /// The full Process(t): every combination of component tuples and child
    /// accumulator values in [0, d]. Meant for checking on small inputs.
    std::vector<ProcessTuple<State>> process(NodeId t) const {
        const std::size_t r = cores_.size();
        const std::size_t delta = decomposition().children(t).size();
        std::vector<std::vector<ProcessTuple<Component>>> comp(r);
        for (std::size_t i = 0; i < r; ++i) comp[i] = cores_[i]->process(t);
        std::vector<ProcessTuple<State>> out;
        std::vector<std::size_t> pick(r, 0);
        if (std::any_of(comp.begin(), comp.end(), [](const auto& c) { return c.empty(); })) return out;
        for (;;) {
            SmallVec<Component, 4> parents;
            for (std::size_t i = 0; i < r; ++i) parents.push_back(comp[i][pick[i]].parent);
            const std::int64_t infl = influence_at(t, parents);
            std::vector<std::uint32_t> ell(delta, 0);
            for (;;) {
                ProcessTuple<State> tuple;
                std::int64_t sum = infl;
                for (std::size_t c = 0; c < delta; ++c) {
                    State child;
                    for (std::size_t i = 0; i < r; ++i) child.parts.push_back(comp[i][pick[i]].children[c]);
                    child.diversity = ell[c];
                    sum += ell[c];
                    tuple.children.push_back(std::move(child));
                }
                tuple.parent = State{parents, static_cast<std::uint32_t>(std::min<std::int64_t>(sum, target_))};
                out.push_back(std::move(tuple));
                std::size_t c = 0;
                while (c < delta && ++ell[c] > static_cast<std::uint32_t>(target_)) ell[c++] = 0;
                if (c == delta) break;
            }
            std::size_t i = 0;
            while (i < r && ++pick[i] == comp[i].size()) pick[i++] = 0;
            if (i == r) break;
        }
        return out;
    }

    /// Projection of a product witness onto component i.
    Witness<Component> project(const Witness<State>& alpha, std::size_t i) const {
        Witness<Component> out;
        out.reserve(alpha.size());
        for (const State& w : alpha) out.push_back(w.parts.at(i));
        return out;
    }

private:
    template <class Fn>
    static void cartesian(const std::vector<std::vector<Component>>& lists, Fn&& fn) {
        if (std::any_of(lists.begin(), lists.end(), [](const auto& l) { return l.empty(); })) return;
        std::vector<std::size_t> idx(lists.size(), 0);
        SmallVec<Component, 4> combo(lists.size());
        for (;;) {
            for (std::size_t i = 0; i < lists.size(); ++i) combo[i] = lists[i][idx[i]];
            fn(combo);
            std::size_t i = 0;
            while (i < lists.size() && ++idx[i] == lists[i].size()) idx[i++] = 0;
            if (i == lists.size()) break;
        }
    }

    std::int64_t influence_at(NodeId t, const SmallVec<Component, 4>& parts) const {
        const auto r = static_cast<std::int64_t>(parts.size());
        std::int64_t total = 0;
        for (Vertex v : forgotten_[t]) {
            std::int64_t members = 0;
            for (std::size_t i = 0; i < parts.size(); ++i) members += rho_[i](t, v, parts[i]) ? 1 : 0;
            total += influence(members, r);
        }
        return total;
    }

    template <class Sink>
    void emit_combinations(NodeId t, const std::vector<std::vector<Component>>& options, std::int64_t below,
                           Sink& sink) const {
        const std::size_t r = options.size();
        const auto& forg = forgotten_[t];
        // membership[i][j]: bit b set <=> forg[b] belongs to option j of component i
        std::vector<std::vector<std::uint64_t>> membership(r);
        for (std::size_t i = 0; i < r; ++i) {
            membership[i].reserve(options[i].size());
            for (const Component& w : options[i]) {
                std::uint64_t bits = 0;
                for (std::size_t b = 0; b < forg.size(); ++b) {
                    if (rho_[i](t, forg[b], w)) bits |= std::uint64_t{1} << b;
                }
                membership[i].push_back(bits);
            }
        }
        const auto rr = static_cast<std::int64_t>(r);
        std::vector<std::size_t> idx(r, 0);
        State out;
        out.parts.resize(r);
        for (;;) {
            std::int64_t infl = 0;
            for (std::size_t b = 0; b < forg.size(); ++b) {
                std::int64_t members = 0;
                for (std::size_t i = 0; i < r; ++i) members += (membership[i][idx[i]] >> b) & 1U;
                infl += members * (rr - members);
            }
            for (std::size_t i = 0; i < r; ++i) out.parts[i] = options[i][idx[i]];
            out.diversity = static_cast<std::uint32_t>(std::min<std::int64_t>(below + infl, target_));
            sink(out);
            std::size_t i = 0;
            while (i < r && ++idx[i] == options[i].size()) idx[i++] = 0;
            if (i == r) break;
        }
    }

    std::vector<const Base*> cores_;
    std::vector<Rho> rho_;
    DiversityValue target_;
    std::vector<std::vector<Vertex>> forgotten_;
};

// ---------------------------------------------------------------------------
// Solving

struct TableStats {
    std::size_t nodes = 0;
    int width = -1;
    std::size_t max_states = 0;
    std::size_t total_tuples = 0;
    std::vector<NodeTrace> trace;
};

struct DiverseResult {
    bool yes = false;
    std::vector<ElementSet> solutions;  ///< vertex sets; empty when the answer is no
    DiversityValue diversity = 0;
    TableStats stats;
};

/// (2^|X_t| * (k+1))^r * (d+1): the size of the table universe at a node.
inline long double table_size_bound(std::size_t bag_size, std::size_t k, std::size_t r, DiversityValue d) {
    return std::pow(std::ldexp(1.0L, static_cast<int>(bag_size)) * static_cast<long double>(k + 1),
                    static_cast<long double>(r)) *
           static_cast<long double>(d + 1);
}

template <class Base, class Rho>
DiverseResult solve_diverse(const DiverseProductCore<Base, Rho>& core, EvaluateOptions options = {}) {
    const auto& d = core.decomposition();
    auto ev = evaluate(core, options);
    DiverseResult result;
    result.stats = {d.node_count(), d.width(), ev.max_states(), ev.total_tuples(), ev.trace};
    if (!ev.accepted) return result;
    auto alpha = extract_witness(core, ev);
    result.yes = true;
    for (std::size_t i = 0; i < core.arity(); ++i) {
        result.solutions.push_back(solution_from_witness(core.membership(i), d, core.project(*alpha, i)));
    }
    result.diversity = diversity(std::span<const ElementSet>(result.solutions));
    return result;
}

/// Diverse Vertex Cover through the product of r copies of the VC core (the
/// copy is built once and shared).
inline DiverseResult solve_diverse_vc(const Graph& g, const RootedTreeDecomposition& d, std::size_t k, std::size_t r,
                                      DiversityValue target, EvaluateOptions options = {}, bool lookahead = true) {
    if (r == 0) throw std::invalid_argument("solve_diverse_vc: r must be at least 1");
    VcCore base(g, d, k, lookahead);
    using Rho = decltype(base.membership());
    DiverseProductCore<VcCore, Rho> product(std::vector<const VcCore*>(r, &base), std::vector<Rho>(r, base.membership()),
                                            target);
    return solve_diverse(product, options);
}

// ---------------------------------------------------------------------------
// Direct Diverse Vertex Cover tables

namespace detail {

/// A table entry ((S_1,s_1),...,(S_r,s_r),l) flattened as
/// [S_1, s_1, ..., S_r, s_r, l]; S_j is a bitmask over the node's sorted bag.
using DirectKey = SmallVec<std::uint64_t, 8>;

struct DirectNode {
    std::vector<Vertex> bag;
    std::vector<std::pair<std::size_t, std::size_t>> bag_edges;  // bag positions
    std::vector<std::size_t> forgotten;                          // bag positions
    std::uint64_t forgotten_mask = 0;
    std::vector<std::size_t> fresh;                              // bag positions outside every child bag
    /// per child: (position in child bag, position in this bag) of shared vertices
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> shared;
};

}  // namespace detail

/// With `lookahead`, entries whose selected bag vertices outside forg(t) would
/// push some s_j past k are dropped, as in VcCore.
inline DiverseResult solve_diverse_vc_direct(const Graph& g, const RootedTreeDecomposition& d, std::size_t k,
                                             std::size_t r, DiversityValue target, bool lookahead = true) {
    using detail::DirectKey;
    if (r == 0) throw std::invalid_argument("solve_diverse_vc_direct: r must be at least 1");
    if (target < 0) throw std::invalid_argument("solve_diverse_vc_direct: negative target");
    if (!d.bag(d.root()).empty()) throw std::invalid_argument("solve_diverse_vc_direct: root bag must be empty");

    const auto n_nodes = d.node_count();
    std::vector<detail::DirectNode> nodes(n_nodes);
    for (NodeId t = 0; t < n_nodes; ++t) {
        auto& node = nodes[t];
        node.bag = d.bag(t);
        if (node.bag.size() > kMaxBagSize) throw std::length_error("solve_diverse_vc_direct: bag larger than 62 vertices");
        auto pos = [&](const std::vector<Vertex>& bag, Vertex v) -> std::ptrdiff_t {
            auto it = std::lower_bound(bag.begin(), bag.end(), v);
            return (it != bag.end() && *it == v) ? it - bag.begin() : -1;
        };
        for (std::size_t i = 0; i < node.bag.size(); ++i) {
            for (Vertex u : g.neighbors(node.bag[i])) {
                auto j = pos(node.bag, u);
                if (j > static_cast<std::ptrdiff_t>(i)) node.bag_edges.emplace_back(i, static_cast<std::size_t>(j));
            }
            NodeId p = d.parent(t);
            if (p != kNoNode && pos(d.bag(p), node.bag[i]) < 0) {
                node.forgotten.push_back(i);
                node.forgotten_mask |= std::uint64_t{1} << i;
            }
            bool below = false;
            for (NodeId c : d.children(t)) below = below || pos(d.bag(c), node.bag[i]) >= 0;
            if (!below) node.fresh.push_back(i);
        }
        for (NodeId c : d.children(t)) {
            std::vector<std::pair<std::size_t, std::size_t>> pairs;
            const auto& cb = d.bag(c);
            for (std::size_t i = 0; i < cb.size(); ++i) {
                auto j = pos(node.bag, cb[i]);
                if (j >= 0) pairs.emplace_back(i, static_cast<std::size_t>(j));
            }
            node.shared.push_back(std::move(pairs));
        }
    }

    std::vector<std::vector<DirectKey>> tables(n_nodes);
    std::vector<std::vector<ChildIndices>> back(n_nodes);
    std::vector<NodeTrace> trace(n_nodes);
    const auto rr = static_cast<std::int64_t>(r);

    for (NodeId t : d.post_order()) {
        const auto& node = nodes[t];
        const auto& kids = d.children(t);
        std::vector<std::pair<DirectKey, ChildIndices>> found;
        std::size_t generated = 0;
        bool dead = std::any_of(kids.begin(), kids.end(), [&](NodeId c) { return tables[c].empty(); });
        ChildIndices idx(kids.size(), 0);
        while (!dead) {
            // Per solution index j, the admissible (S_j, s_j) given the chosen child entries.
            std::vector<std::vector<std::pair<std::uint64_t, std::uint64_t>>> options(r);
            std::int64_t child_ell = 0;
            bool ok = true;
            for (std::size_t j = 0; j < r && ok; ++j) {
                std::uint64_t set = 0, known = 0, count = 0;
                for (std::size_t i = 0; i < kids.size() && ok; ++i) {
                    const DirectKey& key = tables[kids[i]][idx[i]];
                    count += key[2 * j + 1];
                    for (auto [cp, pp] : node.shared[i]) {
                        std::uint64_t bit = (key[2 * j] >> cp) & 1U;
                        if ((known >> pp) & 1U) {
                            ok = ((set >> pp) & 1U) == bit;
                        } else {
                            known |= std::uint64_t{1} << pp;
                            set |= bit << pp;
                        }
                        if (!ok) break;
                    }
                }
                if (!ok || count > k) {
                    ok = false;
                    break;
                }
                const std::size_t choices = std::size_t{1} << node.fresh.size();
                for (std::size_t pick = 0; pick < choices; ++pick) {
                    std::uint64_t s = set;
                    for (std::size_t b = 0; b < node.fresh.size(); ++b) {
                        if ((pick >> b) & 1U) s |= std::uint64_t{1} << node.fresh[b];
                    }
                    bool cover = std::all_of(node.bag_edges.begin(), node.bag_edges.end(), [&](const auto& e) {
                        return ((s >> e.first) & 1U) || ((s >> e.second) & 1U);
                    });
                    if (!cover) continue;
                    std::uint64_t total = count;
                    for (std::size_t p : node.forgotten) total += (s >> p) & 1U;
                    std::uint64_t pending = lookahead ? static_cast<std::uint64_t>(std::popcount(s & ~node.forgotten_mask)) : 0;
                    if (total + pending <= k) options[j].emplace_back(s, total);
                }
                ok = !options[j].empty();
            }
            if (ok) {
                for (std::size_t i = 0; i < kids.size(); ++i) child_ell += static_cast<std::int64_t>(tables[kids[i]][idx[i]].back());
                std::vector<std::size_t> pick(r, 0);
                for (;;) {
                    DirectKey key;
                    std::int64_t m = child_ell;
                    for (std::size_t p : node.forgotten) {
                        std::int64_t in = 0;
                        for (std::size_t j = 0; j < r; ++j) in += (options[j][pick[j]].first >> p) & 1U;
                        m += in * (rr - in);
                    }
                    for (std::size_t j = 0; j < r; ++j) {
                        key.push_back(options[j][pick[j]].first);
                        key.push_back(options[j][pick[j]].second);
                    }
                    key.push_back(static_cast<std::uint64_t>(std::min<std::int64_t>(target, m)));
                    found.emplace_back(std::move(key), idx);
                    ++generated;
                    std::size_t j = 0;
                    while (j < r && ++pick[j] == options[j].size()) pick[j++] = 0;
                    if (j == r) break;
                }
            }
            std::size_t i = 0;
            while (i < kids.size() && ++idx[i] == tables[kids[i]].size()) idx[i++] = 0;
            if (i == kids.size()) break;
        }
        detail::keep_first_per_state(found, tables[t], back[t]);
        trace[t] = NodeTrace{t, kids.size(), tables[t].size(), generated};
    }

    DiverseResult result;
    result.stats.nodes = n_nodes;
    result.stats.width = d.width();
    for (const auto& tr : trace) {
        result.stats.max_states = std::max(result.stats.max_states, tr.states);
        result.stats.total_tuples += tr.tuples;
    }
    result.stats.trace = trace;

    const auto& top = tables[d.root()];
    auto hit = std::find_if(top.begin(), top.end(),
                            [&](const DirectKey& key) { return static_cast<DiversityValue>(key.back()) == target; });
    if (hit == top.end()) return result;
    result.yes = true;
    std::vector<std::vector<ElementId>> sets(r);
    std::vector<std::pair<NodeId, std::uint32_t>> stack{{d.root(), static_cast<std::uint32_t>(hit - top.begin())}};
    while (!stack.empty()) {
        auto [t, at] = stack.back();
        stack.pop_back();
        const DirectKey& key = tables[t][at];
        for (std::size_t j = 0; j < r; ++j) {
            for (std::size_t p = 0; p < nodes[t].bag.size(); ++p) {
                if ((key[2 * j] >> p) & 1U) sets[j].push_back(nodes[t].bag[p]);
            }
        }
        const auto& kids = d.children(t);
        for (std::size_t i = 0; i < kids.size(); ++i) stack.emplace_back(kids[i], back[t][at][i]);
    }
    for (auto& s : sets) result.solutions.push_back(make_element_set(std::move(s)));
    result.diversity = diversity(std::span<const ElementSet>(result.solutions));
    return result;
}

}  // namespace diversekit
