#pragma once

// Loss-less kernels for VC, d-HS, PLC and FAST, domain recovery, and the
// transform that turns a loss-less kernel into a kernel for the diverse problem.
//
// A kernel either rejects (I, k) or returns (I', F, A) with (F, A) a partition
// of domain(I) \ domain(I'): every solution of size at most k contains F, and
// elements of A can be added to any solution without harm.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <iterator>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "diversity.hpp"
#include "instances.hpp"

namespace diversekit {

struct LosslessKernelResult {
    ProblemInstance reduced;
    ElementSet forced;
    ElementSet allowed;
    std::size_t k_reduced = 0;
    /// f: bound on kernel_size(reduced).
    std::size_t size_bound = 0;
    /// g: growth of kernel_size when s allowed elements are recovered.
    std::function<std::size_t(std::size_t)> recovery_cost;
};

struct KernelNo {
    std::string reason;
};

using KernelOutcome = std::variant<LosslessKernelResult, KernelNo>;

inline bool is_no(const KernelOutcome& o) { return std::holds_alternative<KernelNo>(o); }

/// The size measure the kernel bounds refer to: vertices for VC/HS (domain
/// size), points for PLC, tournament vertices for FAST.
inline std::size_t kernel_size(const ProblemInstance& inst) { return instance_vertex_count(inst); }

// ---------------------------------------------------------------------------
// Domain recovery

/// I' with the removed elements S put back. VC/HS: S returns as isolated
/// vertices. PLC: S returns as lines covering no remaining point. FAST: the
/// endpoints of every arc in S return together with all their arcs, which keep
/// the orientation they had when the kernel finished; only arcs of S join the
/// domain, the other returned arcs cannot be deleted.
inline ProblemInstance domain_recover(const ProblemInstance& reduced, const ProblemInstance& original,
                                      const ElementSet& s) {
    if (reduced.kind != original.kind) throw std::invalid_argument("domain_recover: instances of different problems");
    for (ElementId e : s) {
        if (std::binary_search(reduced.domain.begin(), reduced.domain.end(), e)) {
            throw std::invalid_argument("domain_recover: element " + std::to_string(e) + " already in the domain");
        }
        if (!std::binary_search(original.domain.begin(), original.domain.end(), e)) {
            throw std::invalid_argument("domain_recover: element " + std::to_string(e) + " not in the original domain");
        }
    }
    ProblemInstance out = reduced;
    ElementSet merged;
    std::set_union(reduced.domain.begin(), reduced.domain.end(), s.begin(), s.end(), std::back_inserter(merged));
    out.domain = std::move(merged);
    if (out.kind == ProblemKind::FeedbackArcSet) {
        auto& f = std::get<FastPayload>(out.payload);
        for (ElementId e : s) {
            f.present.at(f.arcs.at(e).tail) = 1;
            f.present.at(f.arcs.at(e).head) = 1;
        }
    }
    return out;
}

namespace detail {

inline ElementSet complement_within(const ElementSet& universe, const ElementSet& a, const ElementSet& b) {
    ElementSet ab, out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(ab));
    std::set_difference(universe.begin(), universe.end(), ab.begin(), ab.end(), std::back_inserter(out));
    return out;
}

inline std::size_t linear_cost(std::size_t s) { return s; }

}  // namespace detail

// ---------------------------------------------------------------------------
// Vertex Cover

/// Vertices of degree above the remaining budget are forced; vertices left
/// without edges are allowed. Rejects when the budget runs out or when the
/// remaining graph has more than k'^2 edges or k'^2 + k' vertices.
inline KernelOutcome vc_lossless_kernel(const ProblemInstance& inst, std::size_t k) {
    const Graph& g = inst.graph();
    const std::size_t n = g.vertex_count();
    std::vector<char> alive(n, 0);
    for (ElementId v : inst.domain) alive[v] = 1;
    for (const auto& [u, v] : g.edges()) {
        if (!alive[u] || !alive[v]) throw InvalidInstance("vc kernel: edge leaves the domain");
    }
    std::vector<std::size_t> degree(n, 0);
    for (const auto& [u, v] : g.edges()) {
        ++degree[u];
        ++degree[v];
    }
    auto budget = static_cast<std::int64_t>(k);
    ElementSet forced;
    for (bool changed = true; changed;) {
        changed = false;
        for (Vertex v = 0; v < n; ++v) {
            if (!alive[v] || static_cast<std::int64_t>(degree[v]) <= budget) continue;
            forced.push_back(v);
            alive[v] = 0;
            for (Vertex u : g.neighbors(v)) {
                if (alive[u]) --degree[u];
            }
            degree[v] = 0;
            if (--budget < 0) return KernelNo{"vertex cover needs more than k vertices of high degree"};
            changed = true;
            break;
        }
    }
    std::vector<Graph::Edge> kept;
    for (const auto& [u, v] : g.edges()) {
        if (alive[u] && alive[v]) kept.emplace_back(u, v);
    }
    ElementSet domain;
    for (Vertex v = 0; v < n; ++v) {
        if (alive[v] && degree[v] > 0) domain.push_back(v);
    }
    const auto kk = static_cast<std::size_t>(budget);
    if (kept.size() > kk * kk) return KernelNo{"more than k'^2 edges remain"};
    if (domain.size() > kk * kk + kk) return KernelNo{"more than k'^2 + k' vertices remain"};

    LosslessKernelResult out;
    std::sort(forced.begin(), forced.end());
    out.allowed = detail::complement_within(inst.domain, domain, forced);
    out.forced = std::move(forced);
    out.reduced = ProblemInstance{ProblemKind::VertexCover, Graph(n, std::move(kept)), std::move(domain)};
    out.k_reduced = kk;
    out.size_bound = kk * kk + kk;
    out.recovery_cost = detail::linear_cost;
    return out;
}

// ---------------------------------------------------------------------------
// d-Hitting Set

namespace detail {

struct Sunflower {
    std::vector<Vertex> core;
    std::vector<std::size_t> petals;  ///< indices into the family
};

/// Looks for a sunflower with `petals` petals among distinct sets of one common
/// size. Greedy: a maximal disjoint subfamily either is large enough (empty
/// core) or its union meets every set, and then the most frequent element of
/// that union goes into the core. Succeeds whenever the family has more than
/// j! * (petals-1)^j sets of size j.
inline std::optional<Sunflower> find_sunflower(const std::vector<std::vector<Vertex>>& family,
                                               const std::vector<std::size_t>& members, std::size_t petals) {
    std::vector<std::size_t> disjoint;
    std::vector<Vertex> used;
    for (std::size_t i : members) {
        const auto& e = family[i];
        bool clash = std::any_of(e.begin(), e.end(), [&](Vertex v) { return std::binary_search(used.begin(), used.end(), v); });
        if (clash) continue;
        disjoint.push_back(i);
        used.insert(used.end(), e.begin(), e.end());
        std::sort(used.begin(), used.end());
        if (disjoint.size() == petals) return Sunflower{{}, disjoint};
    }
    Vertex best = 0;
    std::size_t best_count = 0;
    for (Vertex u : used) {
        std::size_t c = 0;
        for (std::size_t i : members) c += std::binary_search(family[i].begin(), family[i].end(), u) ? 1 : 0;
        if (c > best_count) {
            best = u;
            best_count = c;
        }
    }
    if (best_count < petals) return std::nullopt;
    std::vector<std::vector<Vertex>> reduced;
    std::vector<std::size_t> origin;
    for (std::size_t i : members) {
        const auto& e = family[i];
        if (!std::binary_search(e.begin(), e.end(), best)) continue;
        std::vector<Vertex> rest;
        std::copy_if(e.begin(), e.end(), std::back_inserter(rest), [&](Vertex v) { return v != best; });
        if (rest.empty()) continue;
        reduced.push_back(std::move(rest));
        origin.push_back(i);
    }
    std::vector<std::size_t> all(reduced.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    auto inner = find_sunflower(reduced, all, petals);
    if (!inner) return std::nullopt;
    Sunflower out;
    out.core = std::move(inner->core);
    out.core.insert(std::lower_bound(out.core.begin(), out.core.end(), best), best);
    for (std::size_t p : inner->petals) out.petals.push_back(origin[p]);
    return out;
}

inline std::size_t factorial(std::size_t j) {
    std::size_t f = 1;
    for (std::size_t i = 2; i <= j; ++i) f *= i;
    return f;
}

}  // namespace detail

/// sum_{j=1..d} j * j! * k^j: vertices spanned by at most j! k^j edges of each
/// size j.
inline std::size_t hs_size_bound(std::size_t d, std::size_t k) {
    std::size_t total = 0, power = 1;
    for (std::size_t j = 1; j <= d; ++j) {
        power *= k;
        total += j * detail::factorial(j) * power;
    }
    return total;
}

/// Singleton edges force their vertex. A sunflower with k'+1 petals and empty
/// core rejects; with a nonempty core Y its petals are replaced by the edge Y,
/// which every hitting set of size at most k' must hit anyway. Vertices left in
/// no edge are allowed.
inline KernelOutcome hs_lossless_kernel(const ProblemInstance& inst, std::size_t k) {
    const Hypergraph& h = inst.hypergraph();
    const std::size_t n = h.vertex_count();
    std::vector<char> in_domain(n, 0);
    for (ElementId v : inst.domain) in_domain[v] = 1;
    for (const auto& e : h.edges()) {
        for (Vertex v : e) {
            if (!in_domain[v]) throw InvalidInstance("hs kernel: hyperedge leaves the domain");
        }
    }
    std::vector<std::vector<Vertex>> edges = h.edges();
    auto budget = static_cast<std::int64_t>(k);
    ElementSet forced;
    for (bool changed = true; changed;) {
        changed = false;
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        auto single = std::find_if(edges.begin(), edges.end(), [](const auto& e) { return e.size() == 1; });
        if (single != edges.end()) {
            Vertex v = single->front();
            forced.push_back(v);
            std::erase_if(edges, [&](const auto& e) { return std::binary_search(e.begin(), e.end(), v); });
            if (--budget < 0) return KernelNo{"more than k forced vertices"};
            changed = true;
            continue;
        }
        for (std::size_t j = 2; j <= h.max_arity() && !changed; ++j) {
            std::vector<std::size_t> members;
            for (std::size_t i = 0; i < edges.size(); ++i) {
                if (edges[i].size() == j) members.push_back(i);
            }
            auto flower = detail::find_sunflower(edges, members, static_cast<std::size_t>(budget) + 1);
            if (!flower) continue;
            if (flower->core.empty()) return KernelNo{"k'+1 pairwise disjoint hyperedges"};
            std::vector<char> drop(edges.size(), 0);
            for (std::size_t p : flower->petals) drop[p] = 1;
            std::vector<std::vector<Vertex>> next;
            for (std::size_t i = 0; i < edges.size(); ++i) {
                if (!drop[i]) next.push_back(std::move(edges[i]));
            }
            next.push_back(std::move(flower->core));
            edges = std::move(next);
            changed = true;
        }
    }
    ElementSet domain;
    for (const auto& e : edges) domain.insert(domain.end(), e.begin(), e.end());
    domain = make_element_set(std::move(domain));
    const auto kk = static_cast<std::size_t>(budget);

    LosslessKernelResult out;
    std::sort(forced.begin(), forced.end());
    out.allowed = detail::complement_within(inst.domain, domain, forced);
    out.forced = std::move(forced);
    out.reduced = ProblemInstance{ProblemKind::HittingSet, Hypergraph(n, h.max_arity(), std::move(edges)), std::move(domain)};
    out.k_reduced = kk;
    out.size_bound = hs_size_bound(h.max_arity(), kk);
    out.recovery_cost = detail::linear_cost;
    return out;
}

// ---------------------------------------------------------------------------
// Point Line Cover

/// A line through at least max(2, k'+1) remaining points is forced and its
/// points are removed. Afterwards more than k'^2 points reject. Lines meeting
/// no remaining point are allowed; the others stay in the domain.
inline KernelOutcome plc_lossless_kernel(const ProblemInstance& inst, std::size_t k) {
    const PlcPayload& plc = inst.plc();
    std::vector<Point> points = plc.points;
    auto budget = static_cast<std::int64_t>(k);
    ElementSet forced;
    std::vector<char> is_forced(plc.line_table.size(), 0);
    auto on = [&](ElementId id, const Point& p) { return on_line(plc.line_table.at(id), p); };
    for (bool changed = true; changed;) {
        changed = false;
        const auto need = static_cast<std::size_t>(std::max<std::int64_t>(2, budget + 1));
        for (ElementId id : inst.domain) {
            if (is_forced[id]) continue;
            auto count = static_cast<std::size_t>(std::count_if(points.begin(), points.end(), [&](const Point& p) { return on(id, p); }));
            if (count < need) continue;
            forced.push_back(id);
            is_forced[id] = 1;
            std::erase_if(points, [&](const Point& p) { return on(id, p); });
            if (--budget < 0) return KernelNo{"more than k lines carry k'+1 points"};
            changed = true;
            break;
        }
    }
    const auto kk = static_cast<std::size_t>(budget);
    if (points.size() > kk * kk) return KernelNo{"more than k'^2 points remain"};
    ElementSet domain;
    for (ElementId id : inst.domain) {
        if (is_forced[id]) continue;
        if (std::any_of(points.begin(), points.end(), [&](const Point& p) { return on(id, p); })) domain.push_back(id);
    }

    LosslessKernelResult out;
    std::sort(forced.begin(), forced.end());
    out.allowed = detail::complement_within(inst.domain, domain, forced);
    out.forced = std::move(forced);
    out.reduced = ProblemInstance{ProblemKind::PointLineCover, PlcPayload{std::move(points), plc.line_table}, std::move(domain)};
    out.k_reduced = kk;
    out.size_bound = kk * kk;
    out.recovery_cost = [](std::size_t) { return std::size_t{0}; };
    return out;
}

// ---------------------------------------------------------------------------
// Feedback Arc Set in Tournaments

/// An arc in at least k'+1 directed triangles is forced: it is reversed, keeps
/// its id, leaves the domain and cannot be deleted afterwards (a non-deletable
/// arc in k'+1 triangles rejects). Then every vertex in no triangle is removed
/// and its remaining domain arcs are allowed. More than k'(k'+2) vertices
/// reject.
inline KernelOutcome fast_lossless_kernel(const ProblemInstance& inst, std::size_t k) {
    FastPayload f = inst.fast();
    const std::size_t n = f.n;
    std::vector<char> beats(n * n, 0);
    for (const Arc& a : f.arcs) beats[a.tail * n + a.head] = 1;
    std::vector<char> deletable(f.arcs.size(), 0);
    for (ElementId id : inst.domain) {
        if (!f.active(f.arcs.at(id))) throw InvalidInstance("fast kernel: domain arc leaves the tournament");
        deletable[id] = 1;
    }
    auto triangles = [&](const Arc& a) {
        std::size_t c = 0;
        for (Vertex w = 0; w < n; ++w) {
            if (f.present[w] && beats[a.head * n + w] && beats[w * n + a.tail]) ++c;
        }
        return c;
    };
    auto budget = static_cast<std::int64_t>(k);
    ElementSet forced;
    for (bool changed = true; changed;) {
        changed = false;
        for (ElementId id = 0; id < f.arcs.size(); ++id) {
            Arc& a = f.arcs[id];
            if (!f.active(a) || static_cast<std::int64_t>(triangles(a)) <= budget) continue;
            if (!deletable[id]) return KernelNo{"an arc that cannot be deleted lies in k'+1 triangles"};
            beats[a.tail * n + a.head] = 0;
            beats[a.head * n + a.tail] = 1;
            std::swap(a.tail, a.head);
            deletable[id] = 0;
            forced.push_back(id);
            if (--budget < 0) return KernelNo{"more than k arcs lie in k'+1 triangles"};
            changed = true;
            break;
        }
    }
    std::vector<char> in_triangle(n, 0);
    for (const Arc& a : f.arcs) {
        if (!f.active(a)) continue;
        for (Vertex w = 0; w < n; ++w) {
            if (f.present[w] && beats[a.head * n + w] && beats[w * n + a.tail]) {
                in_triangle[a.tail] = in_triangle[a.head] = in_triangle[w] = 1;
            }
        }
    }
    for (Vertex v = 0; v < n; ++v) f.present[v] = f.present[v] && in_triangle[v];
    ElementSet domain;
    for (ElementId id : inst.domain) {
        if (deletable[id] && f.active(f.arcs[id])) domain.push_back(id);
    }
    const auto kk = static_cast<std::size_t>(budget);
    const std::size_t vertices = static_cast<std::size_t>(std::count(f.present.begin(), f.present.end(), 1));
    if (vertices > kk * (kk + 2)) return KernelNo{"more than k'(k'+2) vertices remain"};

    LosslessKernelResult out;
    std::sort(forced.begin(), forced.end());
    out.allowed = detail::complement_within(inst.domain, domain, forced);
    out.forced = std::move(forced);
    out.reduced = ProblemInstance{ProblemKind::FeedbackArcSet, std::move(f), std::move(domain)};
    out.k_reduced = kk;
    out.size_bound = kk * (kk + 2);
    out.recovery_cost = [](std::size_t s) { return 2 * s; };
    return out;
}

inline KernelOutcome lossless_kernel(const ProblemInstance& inst, std::size_t k) {
    switch (inst.kind) {
        case ProblemKind::VertexCover: return vc_lossless_kernel(inst, k);
        case ProblemKind::HittingSet: return hs_lossless_kernel(inst, k);
        case ProblemKind::PointLineCover: return plc_lossless_kernel(inst, k);
        case ProblemKind::FeedbackArcSet: return fast_lossless_kernel(inst, k);
    }
    throw std::invalid_argument("lossless_kernel: unknown problem");
}

// ---------------------------------------------------------------------------
// Diverse kernel

struct DiverseKernelOutput {
    ProblemInstance instance;
    std::size_t k_reduced = 0;
    std::size_t r = 0;
    DiversityValue d = 0;
    ElementSet a_star;
    ElementSet forced;

    /// A solution of the reduced diverse instance as a solution of the original.
    ElementSet lift(const ElementSet& s) const {
        ElementSet out;
        std::set_union(s.begin(), s.end(), forced.begin(), forced.end(), std::back_inserter(out));
        return out;
    }
};

using DiverseKernelOutcome = std::variant<DiverseKernelOutput, KernelNo>;

/// Keeps at most kr allowed elements (the lowest ids) and recovers them into
/// the reduced instance; (I, k, r, d) and (result, k', r, d) are equivalent.
inline DiverseKernelOutcome diverse_kernel_transform(const ProblemInstance& inst, std::size_t k, std::size_t r,
                                                     DiversityValue d, const KernelOutcome& kernel) {
    if (const auto* no = std::get_if<KernelNo>(&kernel)) return *no;
    const auto& res = std::get<LosslessKernelResult>(kernel);
    ElementSet a_star = res.allowed;
    if (a_star.size() > k * r) a_star.resize(k * r);
    DiverseKernelOutput out;
    out.instance = domain_recover(res.reduced, inst, a_star);
    out.k_reduced = res.k_reduced;
    out.r = r;
    out.d = d;
    out.a_star = std::move(a_star);
    out.forced = res.forced;
    return out;
}

inline DiverseKernelOutcome diverse_kernelize(const ProblemInstance& inst, std::size_t k, std::size_t r,
                                              DiversityValue d) {
    return diverse_kernel_transform(inst, k, r, d, lossless_kernel(inst, k));
}

}  // namespace diversekit
