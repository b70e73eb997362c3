#pragma once

// The command-line pipeline: read an instance, optionally kernelize, solve the
// diverse problem and report the result as JSON.

#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cores.hpp"
#include "decomposition.hpp"
#include "diversity.hpp"
#include "instances.hpp"
#include "kernels.hpp"
#include "oracle.hpp"

namespace diversekit {

enum class SolveMode { Auto, Direct, Framework, Oracle };

struct RunConfig {
    ProblemKind problem = ProblemKind::VertexCover;
    std::size_t k = 0;
    std::size_t r = 1;
    DiversityValue d = 0;
    std::string input;
    std::optional<std::string> td;
    SolveMode mode = SolveMode::Auto;
    bool kernelize = false;
    unsigned threads = 1;
    std::optional<std::string> trace;
};

struct RunResult {
    int exit_code = 2;
    nlohmann::ordered_json output;  ///< null on usage or input errors
    std::string message;            ///< human-readable summary or error
};

/// Thrown for inconsistent flags; reported with exit status 2.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline std::optional<ProblemKind> parse_problem(const std::string& s) {
    if (s == "vc") return ProblemKind::VertexCover;
    if (s == "hs") return ProblemKind::HittingSet;
    if (s == "plc") return ProblemKind::PointLineCover;
    if (s == "fast") return ProblemKind::FeedbackArcSet;
    return std::nullopt;
}

inline std::optional<SolveMode> parse_mode(const std::string& s) {
    if (s == "auto") return SolveMode::Auto;
    if (s == "direct") return SolveMode::Direct;
    if (s == "framework") return SolveMode::Framework;
    if (s == "oracle") return SolveMode::Oracle;
    return std::nullopt;
}

namespace detail {

/// Element ids as printed: vertices 1-based, lines and arcs by their 0-based id.
inline nlohmann::ordered_json external_ids(ProblemKind kind, const ElementSet& s) {
    auto out = nlohmann::ordered_json::array();
    const bool vertices = kind == ProblemKind::VertexCover || kind == ProblemKind::HittingSet;
    for (ElementId e : s) out.push_back(vertices ? e + 1 : e);
    return out;
}

inline nlohmann::ordered_json describe_element(const ProblemInstance& inst, ElementId e) {
    if (inst.kind == ProblemKind::PointLineCover) {
        const Line& l = inst.plc().line_table.at(e);
        return {l.a, l.b, l.c};
    }
    const Arc& a = inst.fast().arcs.at(e);
    return {a.tail + 1, a.head + 1};
}

struct SolveOutcome {
    bool yes = false;
    std::vector<ElementSet> solutions;
    std::optional<TableStats> stats;
};

/// Diverse VC on the subgraph induced by the domain, through the tree
/// decomposition DP. Solutions come back in the instance's vertex ids.
inline SolveOutcome solve_vc_dp(const ProblemInstance& inst, std::size_t k, std::size_t r, DiversityValue d,
                                const std::optional<RootedTreeDecomposition>& td, SolveMode mode, unsigned threads) {
    const auto& keep = inst.domain;
    Graph g = inst.graph().induced(keep);
    RootedTreeDecomposition raw;
    if (td) {
        raw = restrict_decomposition(*td, keep);
    } else {
        auto cover = find_vertex_cover(g, k);
        if (!cover) return {};
        raw = pd_from_vertex_cover(g, *cover);
    }
    auto dec = normalize(g, raw);
    DiverseResult res = mode == SolveMode::Direct ? solve_diverse_vc_direct(g, dec, k, r, d)
                                                  : solve_diverse_vc(g, dec, k, r, d, {threads, true});
    SolveOutcome out;
    out.yes = res.yes;
    out.stats = res.stats;
    for (const auto& s : res.solutions) {
        ElementSet mapped;
        for (ElementId v : s) mapped.push_back(keep.at(v));
        out.solutions.push_back(std::move(mapped));
    }
    return out;
}

inline SolveOutcome solve_oracle(const ProblemInstance& inst, std::size_t k, std::size_t r, DiversityValue d) {
    auto space = enumerate_solutions(inst, k);
    SolveOutcome out;
    if (space.solutions.empty()) return out;
    auto best = max_diversity(space, r, d);
    if (best.value < d) return out;
    out.yes = true;
    out.solutions = std::move(best.witness);
    return out;
}

inline void write_trace(const std::string& path, const std::vector<NodeTrace>& trace) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write trace file " + path);
    out << "node,delta,states,tuples\n";
    for (const auto& t : trace) out << t.node << ',' << t.delta << ',' << t.states << ',' << t.tuples << '\n';
}

}  // namespace detail

/// Runs the pipeline. Exit status 0 for yes, 1 for no, 2 for any usage or
/// input error (with `message` set and `output` null).
inline RunResult run(const RunConfig& cfg) {
    using json = nlohmann::ordered_json;
    RunResult result;
    try {
        const bool vc = cfg.problem == ProblemKind::VertexCover;
        if (cfg.r == 0) throw UsageError("--r must be at least 1");
        if (cfg.d < 0) throw UsageError("--d must be nonnegative");
        if (!vc && (cfg.mode == SolveMode::Direct || cfg.mode == SolveMode::Framework)) {
            throw UsageError("--mode direct/framework is only available for vc; hs, plc and fast are solved by "
                             "kernelization followed by the exhaustive oracle");
        }
        if (!vc && cfg.td) throw UsageError("--td is only accepted for vc");
        if (cfg.threads == 0) throw UsageError("--threads must be at least 1");

        const ProblemInstance original = read_instance(cfg.input, cfg.problem);
        std::optional<RootedTreeDecomposition> td;
        if (cfg.td) {
            std::ifstream in(*cfg.td);
            if (!in) throw std::runtime_error("cannot open " + *cfg.td);
            td = parse_td(in);
            if (auto v = validate(original.graph(), *td); !v.empty()) {
                throw std::invalid_argument("decomposition invalid: " + std::string(to_string(v.front().kind)) + " " +
                                            v.front().detail);
            }
        }

        const bool use_dp = vc && cfg.mode != SolveMode::Oracle;
        const bool kernelize = cfg.kernelize || (!vc && cfg.mode == SolveMode::Auto);

        json kernel_report = nullptr;
        const ProblemInstance* target = &original;
        std::size_t k = cfg.k;
        std::optional<DiverseKernelOutput> reduced;
        bool decided_no = false;
        if (kernelize) {
            auto outcome = lossless_kernel(original, cfg.k);
            auto diverse = diverse_kernel_transform(original, cfg.k, cfg.r, cfg.d, outcome);
            if (const auto* no = std::get_if<KernelNo>(&diverse)) {
                kernel_report = json{{"verdict", "no"}, {"reason", no->reason}};
                decided_no = true;
            } else {
                const auto& kres = std::get<LosslessKernelResult>(outcome);
                reduced = std::get<DiverseKernelOutput>(diverse);
                kernel_report = json{{"forced", detail::external_ids(cfg.problem, kres.forced)},
                                     {"allowed", detail::external_ids(cfg.problem, kres.allowed)},
                                     {"k_reduced", kres.k_reduced},
                                     {"domain_before", original.domain.size()},
                                     {"domain_after", reduced->instance.domain.size()}};
                target = &reduced->instance;
                k = reduced->k_reduced;
            }
        }

        detail::SolveOutcome solved;
        if (!decided_no) {
            if (use_dp) {
                solved = detail::solve_vc_dp(*target, k, cfg.r, cfg.d, td, cfg.mode, cfg.threads);
            } else {
                solved = detail::solve_oracle(*target, k, cfg.r, cfg.d);
            }
        }

        std::vector<ElementSet> solutions;
        for (const auto& s : solved.solutions) solutions.push_back(reduced ? reduced->lift(s) : s);
        const DiversityValue div = diversity(std::span<const ElementSet>(solutions));
        if (solved.yes) {
            for (const auto& s : solutions) {
                if (s.size() > cfg.k || !is_solution(original, s)) {
                    throw std::logic_error("internal error: extracted set is not a solution of size at most k");
                }
            }
            if (div < cfg.d) throw std::logic_error("internal error: extracted solutions are not diverse enough");
        }

        json out;
        out["answer"] = solved.yes ? "yes" : "no";
        auto sols = json::array();
        for (const auto& s : solutions) sols.push_back(detail::external_ids(cfg.problem, s));
        out["solutions"] = std::move(sols);
        out["diversity"] = div;
        if (cfg.problem == ProblemKind::PointLineCover || cfg.problem == ProblemKind::FeedbackArcSet) {
            ElementSet used;
            for (const auto& s : solutions) used.insert(used.end(), s.begin(), s.end());
            used = make_element_set(std::move(used));
            json elements = json::object();
            for (ElementId e : used) elements[std::to_string(e)] = detail::describe_element(original, e);
            out["elements"] = std::move(elements);
        }
        out["kernel"] = std::move(kernel_report);
        if (solved.stats) {
            out["tables"] = json{{"nodes", solved.stats->nodes},
                                 {"width", solved.stats->width},
                                 {"max_states", solved.stats->max_states},
                                 {"total_tuples", solved.stats->total_tuples}};
            if (cfg.trace) detail::write_trace(*cfg.trace, solved.stats->trace);
        } else {
            out["tables"] = nullptr;
            if (cfg.trace) detail::write_trace(*cfg.trace, {});
        }
        result.exit_code = solved.yes ? 0 : 1;
        result.output = std::move(out);
        result.message = std::string(solved.yes ? "yes" : "no") + ": " + std::to_string(solutions.size()) +
                         " solutions, diversity " + std::to_string(div);
    } catch (const std::exception& e) {
        result.exit_code = 2;
        result.output = nullptr;
        result.message = e.what();
    }
    return result;
}

}  // namespace diversekit
