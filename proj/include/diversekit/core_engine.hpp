#pragma once

// Dynamic cores and their bottom-up evaluation.
//
// A core supplies, for a rooted tree decomposition, a root Accept set and for
// every node t a Process relation of (delta(t)+1)-tuples of states, parent
// state first. A witness assigns a state to every node so that each node's
// tuple lies in Process and the root state lies in Accept. evaluate() builds,
// bottom-up, the set Pi(t) of states that admit a witness for the subtree at t,
// recording one witnessing child-state tuple per surviving state.

#include <algorithm>
#include <atomic>
#include <concepts>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "decomposition.hpp"

namespace diversekit {

template <class T, std::size_t N>
using SmallVec = boost::container::small_vector<T, N>;

template <class State>
struct ProcessTuple {
    State parent;
    SmallVec<State, 2> children;

    friend bool operator==(const ProcessTuple&, const ProcessTuple&) = default;
    friend auto operator<=>(const ProcessTuple& a, const ProcessTuple& b) {
        if (auto c = a.parent <=> b.parent; c != 0) return c;
        return std::lexicographical_compare_three_way(a.children.begin(), a.children.end(), b.children.begin(),
                                                      b.children.end());
    }
};

template <class C>
concept DynamicCore = requires(const C& core, NodeId t) {
    typename C::State;
    requires std::totally_ordered<typename C::State>;
    { core.decomposition() } -> std::same_as<const RootedTreeDecomposition&>;
    { core.accept() } -> std::convertible_to<std::vector<typename C::State>>;
    { core.process(t) } -> std::convertible_to<std::vector<ProcessTuple<typename C::State>>>;
};

/// A core that can list, for concrete child states, every parent state w with
/// (w, children...) in Process(t). The engine then only ever generates tuples
/// whose children are already known to be reachable.
template <class C>
concept ChildDrivenCore =
    DynamicCore<C> && requires(const C& core, NodeId t, std::span<const typename C::State> kids,
                               std::function<void(const typename C::State&)> sink) {
        core.for_each_parent(t, kids, sink);
    };

/// Vertex-membership function: rho(t, v, state) -> bool, with `state` taken
/// at node t (whose bag gives the state its meaning).
template <class F, class State>
concept MembershipFunction = requires(const F& rho, NodeId t, Vertex v, const State& w) {
    { rho(t, v, w) } -> std::convertible_to<bool>;
};

struct NodeTrace {
    NodeId node = 0;
    std::size_t delta = 0;
    std::size_t states = 0;
    std::size_t tuples = 0;
};

using ChildIndices = SmallVec<std::uint32_t, 2>;

template <class State>
struct Evaluation {
    bool accepted = false;
    std::vector<std::vector<State>> tables;
    /// back[t][i]: indices into the child tables witnessing tables[t][i].
    std::vector<std::vector<ChildIndices>> back;
    std::vector<NodeTrace> trace;

    std::size_t max_states() const {
        std::size_t m = 0;
        for (const auto& t : tables) m = std::max(m, t.size());
        return m;
    }

    std::size_t total_tuples() const {
        std::size_t total = 0;
        for (const auto& t : trace) total += t.tuples;
        return total;
    }
};

struct EvaluateOptions {
    unsigned threads = 1;
    /// Use for_each_parent when the core offers it; otherwise filter the full
    /// Process relation against the child tables.
    bool child_driven = true;
};

namespace detail {

/// Runs fn(t) for every node, children strictly before parents. Nodes of equal
/// height are independent and are spread over `threads` workers.
template <class Fn>
void bottom_up(const RootedTreeDecomposition& d, unsigned threads, Fn&& fn) {
    if (threads <= 1) {
        for (NodeId t : d.post_order()) fn(t);
        return;
    }
    std::vector<std::size_t> height(d.node_count(), 0);
    std::size_t tallest = 0;
    for (NodeId t : d.post_order()) {
        for (NodeId c : d.children(t)) height[t] = std::max(height[t], height[c] + 1);
        tallest = std::max(tallest, height[t]);
    }
    std::vector<std::vector<NodeId>> waves(tallest + 1);
    for (NodeId t : d.post_order()) waves[height[t]].push_back(t);
    for (const auto& wave : waves) {
        if (wave.size() == 1) {
            fn(wave.front());
            continue;
        }
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t i = next++; i < wave.size(); i = next++) fn(wave[i]);
        };
        std::vector<std::jthread> pool;
        const auto extra = std::min<std::size_t>(threads, wave.size()) - 1;
        for (std::size_t i = 0; i < extra; ++i) pool.emplace_back(worker);
        worker();
    }
}

template <class State>
void keep_first_per_state(std::vector<std::pair<State, ChildIndices>>& found, std::vector<State>& table,
                          std::vector<ChildIndices>& back) {
    std::stable_sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    table.clear();
    back.clear();
    for (auto& [state, idx] : found) {
        if (!table.empty() && table.back() == state) continue;
        table.push_back(std::move(state));
        back.push_back(std::move(idx));
    }
}

}  // namespace detail

template <DynamicCore Core>
Evaluation<typename Core::State> evaluate(const Core& core, EvaluateOptions options = {}) {
    using State = typename Core::State;
    const RootedTreeDecomposition& d = core.decomposition();
    Evaluation<State> ev;
    ev.tables.resize(d.node_count());
    ev.back.resize(d.node_count());
    ev.trace.resize(d.node_count());

    auto run_filter = [&](NodeId t, std::vector<std::pair<State, ChildIndices>>& found) {
        const auto& kids = d.children(t);
        auto tuples = core.process(t);
        for (const auto& tuple : tuples) {
            if (tuple.children.size() != kids.size()) {
                throw std::invalid_argument("process tuple arity does not match child count at node " +
                                            std::to_string(t));
            }
            ChildIndices idx;
            bool ok = true;
            for (std::size_t i = 0; i < kids.size() && ok; ++i) {
                const auto& table = ev.tables[kids[i]];
                auto it = std::lower_bound(table.begin(), table.end(), tuple.children[i]);
                ok = it != table.end() && *it == tuple.children[i];
                idx.push_back(static_cast<std::uint32_t>(it - table.begin()));
            }
            if (ok) found.emplace_back(tuple.parent, std::move(idx));
        }
        return tuples.size();
    };

    // takes the core as a parameter so the body is only instantiated for
    // child-driven cores
    auto run_child_driven = [&](const auto& c, NodeId t, std::vector<std::pair<State, ChildIndices>>& found) {
        const auto& kids = d.children(t);
        for (NodeId child : kids) {
            if (ev.tables[child].empty()) return std::size_t{0};
        }
        std::size_t emitted = 0;
        ChildIndices idx(kids.size(), 0);
        SmallVec<State, 2> states;
        auto sink = [&](const State& w) {
            found.emplace_back(w, idx);
            ++emitted;
        };
        for (;;) {
            states.clear();
            for (std::size_t i = 0; i < kids.size(); ++i) states.push_back(ev.tables[kids[i]][idx[i]]);
            c.for_each_parent(t, std::span<const State>(states.data(), states.size()), sink);
            std::size_t i = 0;
            while (i < kids.size() && ++idx[i] == ev.tables[kids[i]].size()) idx[i++] = 0;
            if (i == kids.size()) break;
        }
        return emitted;
    };

    detail::bottom_up(d, options.threads, [&](NodeId t) {
        std::vector<std::pair<State, ChildIndices>> found;
        std::size_t tuples = 0;
        if constexpr (ChildDrivenCore<Core>) {
            tuples = options.child_driven ? run_child_driven(core, t, found) : run_filter(t, found);
        } else {
            tuples = run_filter(t, found);
        }
        detail::keep_first_per_state(found, ev.tables[t], ev.back[t]);
        ev.trace[t] = NodeTrace{t, d.children(t).size(), ev.tables[t].size(), tuples};
    });

    auto accept = core.accept();
    std::sort(accept.begin(), accept.end());
    const auto& top = ev.tables[d.root()];
    ev.accepted = std::any_of(top.begin(), top.end(),
                              [&](const State& w) { return std::binary_search(accept.begin(), accept.end(), w); });
    return ev;
}

/// A witness: one state per node, indexed by node id.
template <class State>
using Witness = std::vector<State>;

/// Follows backpointers from the smallest accepted root state.
template <class State>
std::optional<Witness<State>> extract_witness(const RootedTreeDecomposition& d, const Evaluation<State>& ev,
                                              std::vector<State> accept) {
    std::sort(accept.begin(), accept.end());
    const auto& top = ev.tables[d.root()];
    auto it = std::find_if(top.begin(), top.end(),
                           [&](const State& w) { return std::binary_search(accept.begin(), accept.end(), w); });
    if (it == top.end()) return std::nullopt;
    std::vector<std::uint32_t> chosen(d.node_count(), 0);
    chosen[d.root()] = static_cast<std::uint32_t>(it - top.begin());
    Witness<State> alpha(d.node_count());
    std::vector<NodeId> stack{d.root()};
    while (!stack.empty()) {
        NodeId t = stack.back();
        stack.pop_back();
        alpha[t] = ev.tables[t][chosen[t]];
        const auto& kids = d.children(t);
        const auto& idx = ev.back[t][chosen[t]];
        for (std::size_t i = 0; i < kids.size(); ++i) {
            chosen[kids[i]] = idx[i];
            stack.push_back(kids[i]);
        }
    }
    return alpha;
}

template <DynamicCore Core>
std::optional<Witness<typename Core::State>> extract_witness(const Core& core,
                                                             const Evaluation<typename Core::State>& ev) {
    return extract_witness(core.decomposition(), ev, core.accept());
}

/// Checks a full assignment directly against the materialized Process
/// relations and the Accept set.
template <DynamicCore Core>
bool is_witness(const Core& core, const Witness<typename Core::State>& alpha) {
    const auto& d = core.decomposition();
    if (alpha.size() != d.node_count()) return false;
    auto accept = core.accept();
    if (std::find(accept.begin(), accept.end(), alpha[d.root()]) == accept.end()) return false;
    for (NodeId t = 0; t < d.node_count(); ++t) {
        ProcessTuple<typename Core::State> want{alpha[t], {}};
        for (NodeId c : d.children(t)) want.children.push_back(alpha[c]);
        auto tuples = core.process(t);
        if (std::find(tuples.begin(), tuples.end(), want) == tuples.end()) return false;
    }
    return true;
}

class MembershipInconsistent : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// S_rho = { v : rho(t, v, alpha(t)) = 1 for some node t with v in X_t }.
/// Throws when rho disagrees about a vertex shared by adjacent bags.
template <class State, class Rho>
    requires MembershipFunction<Rho, State>
ElementSet solution_from_witness(const Rho& rho, const RootedTreeDecomposition& d, const Witness<State>& alpha) {
    std::vector<ElementId> out;
    for (NodeId t = 0; t < d.node_count(); ++t) {
        const auto& bag = d.bag(t);
        for (Vertex v : bag) {
            bool here = rho(t, v, alpha[t]);
            if (here) out.push_back(v);
            NodeId p = d.parent(t);
            if (p != kNoNode && std::binary_search(d.bag(p).begin(), d.bag(p).end(), v) &&
                static_cast<bool>(rho(p, v, alpha[p])) != here) {
                throw MembershipInconsistent("membership of vertex " + std::to_string(v) + " differs between nodes " +
                                             std::to_string(t) + " and " + std::to_string(p));
            }
        }
    }
    return make_element_set(std::move(out));
}

/// A core given by explicit tables; states are plain integers.
class ExplicitCore {
public:
    using State = std::uint32_t;

    ExplicitCore(const RootedTreeDecomposition& d, std::vector<State> accept,
                 std::vector<std::vector<ProcessTuple<State>>> process)
        : d_(&d), accept_(std::move(accept)), process_(std::move(process)) {
        if (process_.size() != d.node_count()) throw std::invalid_argument("ExplicitCore: one relation per node");
    }

    const RootedTreeDecomposition& decomposition() const { return *d_; }
    std::vector<State> accept() const { return accept_; }
    std::vector<ProcessTuple<State>> process(NodeId t) const { return process_.at(t); }

private:
    const RootedTreeDecomposition* d_;
    std::vector<State> accept_;
    std::vector<std::vector<ProcessTuple<State>>> process_;
};

}  // namespace diversekit
