#pragma once

// Exhaustive reference solver for small instances: every solution of size at
// most k, and the maximum diversity over r-tuples of them.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "diversity.hpp"
#include "instances.hpp"

namespace diversekit {

inline constexpr std::size_t kOracleDomainLimit = 24;
inline constexpr double kOracleTupleLimit = 1e7;

class OracleGuardExceeded : public std::length_error {
public:
    using std::length_error::length_error;
};

struct SolutionSpace {
    std::size_t k = 0;
    ElementSet domain;
    /// Ordered by size, then lexicographically by domain position.
    std::vector<ElementSet> solutions;
    /// solutions[i] as a bitmask over positions in `domain`.
    std::vector<std::uint32_t> masks;
};

namespace detail {

/// Kahn's algorithm on the given vertices and arcs.
inline bool is_acyclic(std::size_t n, const std::vector<Vertex>& vertices, const std::vector<Arc>& arcs) {
    std::vector<std::uint32_t> indeg(n, 0);
    std::vector<std::vector<Vertex>> out(n);
    for (const Arc& a : arcs) {
        out[a.tail].push_back(a.head);
        ++indeg[a.head];
    }
    std::vector<Vertex> ready;
    for (Vertex v : vertices) {
        if (indeg[v] == 0) ready.push_back(v);
    }
    std::size_t seen = 0;
    while (!ready.empty()) {
        Vertex v = ready.back();
        ready.pop_back();
        ++seen;
        for (Vertex w : out[v]) {
            if (--indeg[w] == 0) ready.push_back(w);
        }
    }
    return seen == vertices.size();
}

/// Feasibility test for subsets of the domain, given as bitmasks over domain
/// positions.
class FeasibilityCheck {
public:
    explicit FeasibilityCheck(const ProblemInstance& inst) : inst_(&inst) {
        const auto& dom = inst.domain;
        auto position = [&](ElementId e) -> int {
            auto it = std::lower_bound(dom.begin(), dom.end(), e);
            return (it != dom.end() && *it == e) ? static_cast<int>(it - dom.begin()) : -1;
        };
        auto bit = [&](ElementId e) -> std::uint32_t {
            int p = position(e);
            return p < 0 ? 0U : std::uint32_t{1} << p;
        };
        switch (inst.kind) {
            case ProblemKind::VertexCover:
                for (const auto& [u, v] : inst.graph().edges()) hit_.push_back(bit(u) | bit(v));
                break;
            case ProblemKind::HittingSet:
                for (const auto& e : inst.hypergraph().edges()) {
                    std::uint32_t m = 0;
                    for (Vertex v : e) m |= bit(v);
                    hit_.push_back(m);
                }
                break;
            case ProblemKind::PointLineCover: {
                const auto& plc = inst.plc();
                for (const Point& p : plc.points) {
                    std::uint32_t m = 0;
                    for (ElementId id : dom) {
                        if (on_line(plc.line_table.at(id), p)) m |= bit(id);
                    }
                    hit_.push_back(m);
                }
                break;
            }
            case ProblemKind::FeedbackArcSet: {
                const auto& f = inst.fast();
                for (ElementId id = 0; id < f.arcs.size(); ++id) {
                    if (!f.active(f.arcs[id])) continue;
                    arcs_.push_back(f.arcs[id]);
                    arc_bit_.push_back(bit(id));
                }
                vertices_ = f.vertices();
                break;
            }
        }
    }

    bool operator()(std::uint32_t mask) const {
        if (inst_->kind != ProblemKind::FeedbackArcSet) {
            return std::all_of(hit_.begin(), hit_.end(), [&](std::uint32_t h) { return (h & mask) != 0; });
        }
        return acyclic_without(mask);
    }

private:
    bool acyclic_without(std::uint32_t mask) const {
        std::vector<Arc> kept;
        for (std::size_t i = 0; i < arcs_.size(); ++i) {
            if (!(arc_bit_[i] & mask)) kept.push_back(arcs_[i]);
        }
        return is_acyclic(inst_->fast().n, vertices_, kept);
    }

    const ProblemInstance* inst_;
    std::vector<std::uint32_t> hit_;
    std::vector<Arc> arcs_;
    std::vector<std::uint32_t> arc_bit_;
    std::vector<Vertex> vertices_;
};

inline ElementSet mask_to_set(const ElementSet& domain, std::uint32_t mask) {
    ElementSet out;
    for (std::size_t p = 0; p < domain.size(); ++p) {
        if ((mask >> p) & 1U) out.push_back(domain[p]);
    }
    return out;
}

}  // namespace detail

/// Whether `x` (sorted) is a solution of the instance: a subset of the domain
/// that covers every edge / hits every hyperedge / covers every point / leaves
/// the tournament acyclic. No size limit is applied.
inline bool is_solution(const ProblemInstance& inst, const ElementSet& x) {
    const auto& dom = inst.domain;
    if (!std::includes(dom.begin(), dom.end(), x.begin(), x.end())) return false;
    switch (inst.kind) {
        case ProblemKind::VertexCover: {
            const auto& g = inst.graph();
            return std::all_of(g.edges().begin(), g.edges().end(), [&](const auto& e) {
                return std::binary_search(x.begin(), x.end(), e.first) || std::binary_search(x.begin(), x.end(), e.second);
            });
        }
        case ProblemKind::HittingSet: {
            const auto& h = inst.hypergraph();
            return std::all_of(h.edges().begin(), h.edges().end(), [&](const auto& e) {
                return std::any_of(e.begin(), e.end(), [&](Vertex v) { return std::binary_search(x.begin(), x.end(), v); });
            });
        }
        case ProblemKind::PointLineCover: {
            const auto& plc = inst.plc();
            return std::all_of(plc.points.begin(), plc.points.end(), [&](const Point& p) {
                return std::any_of(x.begin(), x.end(), [&](ElementId id) { return on_line(plc.line_table.at(id), p); });
            });
        }
        case ProblemKind::FeedbackArcSet: {
            const auto& f = inst.fast();
            std::vector<Arc> kept;
            for (ElementId id = 0; id < f.arcs.size(); ++id) {
                const Arc& a = f.arcs[id];
                if (f.active(a) && !std::binary_search(x.begin(), x.end(), id)) kept.push_back(a);
            }
            return detail::is_acyclic(f.n, f.vertices(), kept);
        }
    }
    return false;
}

/// All solutions of size at most k. Throws OracleGuardExceeded when the domain
/// has more than 24 elements.
inline SolutionSpace enumerate_solutions(const ProblemInstance& inst, std::size_t k) {
    const std::size_t n = inst.domain.size();
    if (n > kOracleDomainLimit) {
        throw OracleGuardExceeded("oracle: domain of " + std::to_string(n) + " elements exceeds the limit of 24");
    }
    SolutionSpace space{k, inst.domain, {}, {}};
    detail::FeasibilityCheck feasible(inst);
    const std::size_t top = std::min(k, n);
    for (std::size_t size = 0; size <= top; ++size) {
        // positions of the current size-subset in lexicographic order
        std::vector<std::size_t> pos(size);
        for (std::size_t i = 0; i < size; ++i) pos[i] = i;
        for (;;) {
            std::uint32_t mask = 0;
            for (std::size_t p : pos) mask |= std::uint32_t{1} << p;
            if (feasible(mask)) {
                space.masks.push_back(mask);
                space.solutions.push_back(detail::mask_to_set(inst.domain, mask));
            }
            std::size_t i = size;
            while (i > 0 && pos[i - 1] == n - size + i - 1) --i;
            if (i == 0) break;
            ++pos[i - 1];
            for (std::size_t j = i; j < size; ++j) pos[j] = pos[j - 1] + 1;
        }
    }
    return space;
}

struct MaxDiversity {
    DiversityValue value = 0;
    std::vector<ElementSet> witness;  ///< empty when there is no solution
};

/// Maximum diversity over r-tuples of solutions (repetition allowed). With
/// `stop_at` set, returns as soon as a tuple of at least that diversity is found.
inline MaxDiversity max_diversity(const SolutionSpace& space, std::size_t r,
                                  DiversityValue stop_at = INT64_MAX) {
    if (r == 0) throw std::invalid_argument("max_diversity: r must be at least 1");
    const std::size_t m = space.masks.size();
    MaxDiversity best;
    if (m == 0) return best;
    if (std::pow(static_cast<double>(m), static_cast<double>(r)) > kOracleTupleLimit) {
        throw OracleGuardExceeded("oracle: " + std::to_string(m) + "^" + std::to_string(r) +
                                  " solution tuples exceed the limit of 1e7");
    }
    // Nondecreasing index tuples cover every multiset once.
    std::vector<std::size_t> idx(r, 0);
    std::vector<std::size_t> best_idx(r, 0);
    best.value = -1;
    bool stop = false;
    auto search = [&](auto& self, std::size_t depth, std::size_t from, DiversityValue sum) -> void {
        if (depth == r) {
            if (sum > best.value) {
                best.value = sum;
                best_idx = idx;
                stop = sum >= stop_at;
            }
            return;
        }
        for (std::size_t i = from; i < m && !stop; ++i) {
            idx[depth] = i;
            DiversityValue gain = 0;
            for (std::size_t j = 0; j < depth; ++j) gain += std::popcount(space.masks[idx[j]] ^ space.masks[i]);
            self(self, depth + 1, i, sum + gain);
        }
    };
    search(search, 0, 0, 0);
    for (std::size_t j = 0; j < r; ++j) best.witness.push_back(space.solutions[best_idx[j]]);
    return best;
}

/// Yes iff some r solutions of size at most k have diversity at least d.
inline bool decide_diverse(const ProblemInstance& inst, std::size_t k, std::size_t r, DiversityValue d) {
    if (r == 0) throw std::invalid_argument("decide_diverse: r must be at least 1");
    auto space = enumerate_solutions(inst, k);
    if (space.solutions.empty()) return false;
    return max_diversity(space, r, d).value >= d;
}

}  // namespace diversekit
