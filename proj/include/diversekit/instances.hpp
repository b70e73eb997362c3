#pragma once

// Problem instances (graphs, hypergraphs, point sets, tournaments), their
// solution domains, and the plain-text file formats they are read from.

#include <algorithm>
#include <charconv>
#include <compare>
#include <cstdint>
#include <fstream>
#include <istream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace diversekit {

using Vertex = std::uint32_t;
using ElementId = std::uint32_t;
/// Sorted, duplicate-free list of domain element ids.
using ElementSet = std::vector<ElementId>;

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class InvalidInstance : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline ElementSet make_element_set(std::vector<ElementId> ids) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

// ---------------------------------------------------------------------------
// Graph

class Graph {
public:
    using Edge = std::pair<Vertex, Vertex>;

    Graph() = default;

    /// Edges are stored with first < second and sorted. Self-loops, duplicate
    /// edges and out-of-range endpoints are rejected.
    explicit Graph(std::size_t n, std::vector<Edge> edges = {}) : n_(n), adj_(n) {
        for (auto& [u, v] : edges) {
            if (u >= n || v >= n) {
                throw InvalidInstance("edge endpoint out of range");
            }
            if (u == v) {
                throw InvalidInstance("self-loop on vertex " + std::to_string(u));
            }
            if (u > v) std::swap(u, v);
        }
        std::sort(edges.begin(), edges.end());
        if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
            throw InvalidInstance("duplicate edge");
        }
        edges_ = std::move(edges);
        for (const auto& [u, v] : edges_) {
            adj_[u].push_back(v);
            adj_[v].push_back(u);
        }
        for (auto& list : adj_) std::sort(list.begin(), list.end());
    }

    std::size_t vertex_count() const noexcept { return n_; }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const std::vector<Vertex>& neighbors(Vertex v) const { return adj_.at(v); }
    std::size_t degree(Vertex v) const { return adj_.at(v).size(); }

    bool adjacent(Vertex u, Vertex v) const {
        const auto& list = adj_.at(u);
        return std::binary_search(list.begin(), list.end(), v);
    }

    /// Subgraph induced by `keep` (sorted), relabelled to 0..|keep|-1 in order.
    Graph induced(const std::vector<Vertex>& keep) const {
        std::vector<std::uint32_t> index(n_, UINT32_MAX);
        for (std::size_t i = 0; i < keep.size(); ++i) index.at(keep[i]) = static_cast<std::uint32_t>(i);
        std::vector<Edge> sub;
        for (const auto& [u, v] : edges_) {
            if (index[u] != UINT32_MAX && index[v] != UINT32_MAX) sub.emplace_back(index[u], index[v]);
        }
        return Graph(keep.size(), std::move(sub));
    }

    friend bool operator==(const Graph&, const Graph&) = default;

private:
    std::size_t n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<Vertex>> adj_;
};

// ---------------------------------------------------------------------------
// Hypergraph

class Hypergraph {
public:
    Hypergraph() = default;

    Hypergraph(std::size_t n, std::size_t max_arity, std::vector<std::vector<Vertex>> edges)
        : n_(n), max_arity_(max_arity) {
        for (auto& e : edges) {
            if (e.empty()) throw InvalidInstance("empty hyperedge");
            std::sort(e.begin(), e.end());
            if (std::adjacent_find(e.begin(), e.end()) != e.end()) {
                throw InvalidInstance("repeated vertex inside a hyperedge");
            }
            if (e.size() > max_arity) throw InvalidInstance("hyperedge exceeds arity bound");
            if (e.back() >= n) throw InvalidInstance("hyperedge member out of range");
        }
        edges_ = std::move(edges);
    }

    std::size_t vertex_count() const noexcept { return n_; }
    std::size_t max_arity() const noexcept { return max_arity_; }
    const std::vector<std::vector<Vertex>>& edges() const noexcept { return edges_; }

    friend bool operator==(const Hypergraph&, const Hypergraph&) = default;

private:
    std::size_t n_ = 0;
    std::size_t max_arity_ = 0;
    std::vector<std::vector<Vertex>> edges_;
};

// ---------------------------------------------------------------------------
// Points and lines

struct Point {
    std::int64_t x = 0;
    std::int64_t y = 0;
    auto operator<=>(const Point&) const = default;
};

/// The line a*x + b*y = c, stored with gcd(a,b,c) = 1 and the first nonzero of
/// (a, b) positive, so every line has exactly one representation.
struct Line {
    std::int64_t a = 0;
    std::int64_t b = 0;
    std::int64_t c = 0;
    auto operator<=>(const Line&) const = default;
};

namespace detail {

inline __int128 abs128(__int128 v) { return v < 0 ? -v : v; }

inline __int128 gcd128(__int128 a, __int128 b) {
    a = abs128(a);
    b = abs128(b);
    while (b != 0) {
        __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline std::int64_t narrow_checked(__int128 v) {
    if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error("line coefficient exceeds 64 bits");
    return static_cast<std::int64_t>(v);
}

}  // namespace detail

inline Line canonical_line(Point p, Point q) {
    if (p == q) throw std::invalid_argument("canonical_line: points coincide");
    __int128 a = static_cast<__int128>(q.y) - p.y;
    __int128 b = static_cast<__int128>(p.x) - q.x;
    __int128 c = a * p.x + b * p.y;
    __int128 g = detail::gcd128(detail::gcd128(a, b), c);
    a /= g;
    b /= g;
    c /= g;
    if (a < 0 || (a == 0 && b < 0)) {
        a = -a;
        b = -b;
        c = -c;
    }
    return Line{detail::narrow_checked(a), detail::narrow_checked(b), detail::narrow_checked(c)};
}

inline bool on_line(const Line& line, Point p) {
    return static_cast<__int128>(line.a) * p.x + static_cast<__int128>(line.b) * p.y ==
           static_cast<__int128>(line.c);
}

class PointSet {
public:
    PointSet() = default;

    explicit PointSet(std::vector<Point> points) : points_(std::move(points)) {
        std::vector<Point> sorted = points_;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            throw InvalidInstance("duplicate point");
        }
        for (std::size_t i = 0; i < points_.size(); ++i) {
            for (std::size_t j = i + 1; j < points_.size(); ++j) {
                lines_.push_back(canonical_line(points_[i], points_[j]));
            }
        }
        std::sort(lines_.begin(), lines_.end());
        lines_.erase(std::unique(lines_.begin(), lines_.end()), lines_.end());
    }

    const std::vector<Point>& points() const noexcept { return points_; }
    /// L(P): every line through at least two points, sorted; index = line id.
    const std::vector<Line>& lines() const noexcept { return lines_; }

    friend bool operator==(const PointSet&, const PointSet&) = default;

private:
    std::vector<Point> points_;
    std::vector<Line> lines_;
};

// ---------------------------------------------------------------------------
// Tournaments

struct Arc {
    Vertex tail = 0;
    Vertex head = 0;
    auto operator<=>(const Arc&) const = default;
};

class Tournament {
public:
    Tournament() = default;

    /// Arcs are sorted by (tail, head); the index of an arc is its id.
    Tournament(std::size_t n, std::vector<Arc> arcs) : n_(n) {
        std::vector<char> seen(n * n, 0);
        for (const Arc& a : arcs) {
            if (a.tail >= n || a.head >= n) throw InvalidInstance("arc endpoint out of range");
            if (a.tail == a.head) throw InvalidInstance("self-loop arc");
            auto lo = std::min(a.tail, a.head), hi = std::max(a.tail, a.head);
            char& slot = seen[static_cast<std::size_t>(lo) * n + hi];
            if (slot) throw InvalidInstance("pair connected by more than one arc");
            slot = 1;
        }
        if (arcs.size() != n * (n - (n > 0 ? 1 : 0)) / 2) {
            throw InvalidInstance("not a tournament: some pair has no arc");
        }
        std::sort(arcs.begin(), arcs.end());
        arcs_ = std::move(arcs);
    }

    std::size_t vertex_count() const noexcept { return n_; }
    const std::vector<Arc>& arcs() const noexcept { return arcs_; }

    friend bool operator==(const Tournament&, const Tournament&) = default;

private:
    std::size_t n_ = 0;
    std::vector<Arc> arcs_;
};

// ---------------------------------------------------------------------------
// Problem instances

enum class ProblemKind { VertexCover, HittingSet, PointLineCover, FeedbackArcSet };

inline std::string_view to_string(ProblemKind kind) {
    switch (kind) {
        case ProblemKind::VertexCover: return "vc";
        case ProblemKind::HittingSet: return "hs";
        case ProblemKind::PointLineCover: return "plc";
        case ProblemKind::FeedbackArcSet: return "fast";
    }
    return "?";
}

/// Point Line Cover payload. Line ids index `line_table`, which is L(P) of the
/// instance the payload descends from, so ids survive kernelization.
struct PlcPayload {
    std::vector<Point> points;
    std::vector<Line> line_table;
    friend bool operator==(const PlcPayload&, const PlcPayload&) = default;
};

/// Feedback Arc Set payload. `arcs[id]` is arc `id` in its current orientation
/// over the original vertex range; only arcs with both endpoints present belong
/// to the tournament, and only arcs whose id is in the domain may be deleted.
struct FastPayload {
    std::size_t n = 0;
    std::vector<Arc> arcs;
    std::vector<char> present;
    friend bool operator==(const FastPayload&, const FastPayload&) = default;

    bool active(const Arc& a) const { return present[a.tail] && present[a.head]; }

    std::vector<Vertex> vertices() const {
        std::vector<Vertex> out;
        for (Vertex v = 0; v < n; ++v) {
            if (present[v]) out.push_back(v);
        }
        return out;
    }
};

/// An instance of one of the four subset-minimization problems. Element ids in
/// `domain` are stable: vertices for VC/HS, line ids for PLC, arc ids for FAST.
/// Removed VC/HS vertices stay in the id range but carry no edges.
struct ProblemInstance {
    ProblemKind kind = ProblemKind::VertexCover;
    std::variant<Graph, Hypergraph, PlcPayload, FastPayload> payload;
    ElementSet domain;

    const Graph& graph() const { return std::get<Graph>(payload); }
    const Hypergraph& hypergraph() const { return std::get<Hypergraph>(payload); }
    const PlcPayload& plc() const { return std::get<PlcPayload>(payload); }
    const FastPayload& fast() const { return std::get<FastPayload>(payload); }

    friend bool operator==(const ProblemInstance&, const ProblemInstance&) = default;
};

inline ElementSet iota_set(std::size_t n) {
    ElementSet ids(n);
    std::iota(ids.begin(), ids.end(), ElementId{0});
    return ids;
}

inline ProblemInstance make_instance(Graph g) {
    auto n = g.vertex_count();
    return {ProblemKind::VertexCover, std::move(g), iota_set(n)};
}

inline ProblemInstance make_instance(Hypergraph h) {
    auto n = h.vertex_count();
    return {ProblemKind::HittingSet, std::move(h), iota_set(n)};
}

inline ProblemInstance make_instance(const PointSet& p) {
    return {ProblemKind::PointLineCover, PlcPayload{p.points(), p.lines()}, iota_set(p.lines().size())};
}

inline ProblemInstance make_instance(const Tournament& t) {
    FastPayload payload{t.vertex_count(), t.arcs(), std::vector<char>(t.vertex_count(), 1)};
    return {ProblemKind::FeedbackArcSet, std::move(payload), iota_set(t.arcs().size())};
}

/// Domain elements in id order.
inline std::vector<ElementId> enumerate_domain(const ProblemInstance& inst) { return inst.domain; }

/// Number of "vertices" of an instance in the sense used by kernel size
/// bounds: domain vertices for VC/HS, points for PLC, tournament vertices for
/// FAST.
inline std::size_t instance_vertex_count(const ProblemInstance& inst) {
    switch (inst.kind) {
        case ProblemKind::VertexCover:
        case ProblemKind::HittingSet: return inst.domain.size();
        case ProblemKind::PointLineCover: return inst.plc().points.size();
        case ProblemKind::FeedbackArcSet: return inst.fast().vertices().size();
    }
    return 0;
}

// ---------------------------------------------------------------------------
// Text formats

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

template <class Int>
Int parse_int(std::string_view token, std::size_t line_no) {
    Int value{};
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
        throw ParseError(line_no, "expected integer, got '" + std::string(token) + "'");
    }
    return value;
}

/// 1-based id in a file -> 0-based id, range-checked against n.
inline Vertex parse_vertex(std::string_view token, std::size_t n, std::size_t line_no) {
    auto v = parse_int<std::int64_t>(token, line_no);
    if (v < 1 || static_cast<std::uint64_t>(v) > n) {
        throw ParseError(line_no, "vertex " + std::string(token) + " out of range 1.." + std::to_string(n));
    }
    return static_cast<Vertex>(v - 1);
}

/// Calls fn(line_no, tokens) for every non-empty line whose first character
/// is not `comment`.
template <class Fn>
void for_each_record(std::istream& in, char comment, Fn&& fn) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto tokens = split_ws(line);
        if (tokens.empty() || tokens.front().front() == comment) continue;
        fn(line_no, tokens);
    }
}

}  // namespace detail

/// DIMACS edge format: `c` comments, `p edge n m`, then m lines `e u v`.
inline Graph parse_graph(std::istream& in) {
    std::size_t n = 0, m = 0;
    bool have_header = false;
    std::vector<Graph::Edge> edges;
    std::vector<std::size_t> edge_lines;
    detail::for_each_record(in, 'c', [&](std::size_t line_no, const auto& tok) {
        if (tok[0] == "p") {
            if (have_header) throw ParseError(line_no, "duplicate header");
            if (tok.size() != 4 || tok[1] != "edge") throw ParseError(line_no, "malformed header, expected 'p edge n m'");
            n = detail::parse_int<std::size_t>(tok[2], line_no);
            m = detail::parse_int<std::size_t>(tok[3], line_no);
            have_header = true;
        } else if (tok[0] == "e") {
            if (!have_header) throw ParseError(line_no, "edge before header");
            if (tok.size() != 3) throw ParseError(line_no, "malformed edge line");
            Vertex u = detail::parse_vertex(tok[1], n, line_no);
            Vertex v = detail::parse_vertex(tok[2], n, line_no);
            if (u == v) throw ParseError(line_no, "self-loop");
            edges.emplace_back(std::min(u, v), std::max(u, v));
            edge_lines.push_back(line_no);
        } else {
            throw ParseError(line_no, "unknown record '" + std::string(tok[0]) + "'");
        }
    });
    if (!have_header) throw ParseError(0, "missing 'p edge' header");
    std::vector<std::size_t> order(edges.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return edges[a] < edges[b]; });
    for (std::size_t i = 1; i < order.size(); ++i) {
        if (edges[order[i]] == edges[order[i - 1]]) throw ParseError(edge_lines[order[i]], "duplicate edge");
    }
    if (edges.size() != m) {
        throw ParseError(0, "header announces " + std::to_string(m) + " edges, found " + std::to_string(edges.size()));
    }
    return Graph(n, std::move(edges));
}

inline std::string serialize_graph(const Graph& g) {
    std::ostringstream out;
    out << "p edge " << g.vertex_count() << ' ' << g.edge_count() << '\n';
    for (const auto& [u, v] : g.edges()) out << "e " << u + 1 << ' ' << v + 1 << '\n';
    return out.str();
}

/// `p hs n m d`, then m lines `h v1 ... vj` with j <= d.
inline Hypergraph parse_hypergraph(std::istream& in) {
    std::size_t n = 0, m = 0, d = 0;
    bool have_header = false;
    std::vector<std::vector<Vertex>> edges;
    detail::for_each_record(in, 'c', [&](std::size_t line_no, const auto& tok) {
        if (tok[0] == "p") {
            if (have_header) throw ParseError(line_no, "duplicate header");
            if (tok.size() != 5 || tok[1] != "hs") throw ParseError(line_no, "malformed header, expected 'p hs n m d'");
            n = detail::parse_int<std::size_t>(tok[2], line_no);
            m = detail::parse_int<std::size_t>(tok[3], line_no);
            d = detail::parse_int<std::size_t>(tok[4], line_no);
            have_header = true;
        } else if (tok[0] == "h") {
            if (!have_header) throw ParseError(line_no, "hyperedge before header");
            if (tok.size() < 2) throw ParseError(line_no, "empty hyperedge");
            if (tok.size() - 1 > d) throw ParseError(line_no, "hyperedge larger than d");
            std::vector<Vertex> e;
            for (std::size_t i = 1; i < tok.size(); ++i) e.push_back(detail::parse_vertex(tok[i], n, line_no));
            std::sort(e.begin(), e.end());
            if (std::adjacent_find(e.begin(), e.end()) != e.end()) throw ParseError(line_no, "repeated vertex in hyperedge");
            edges.push_back(std::move(e));
        } else {
            throw ParseError(line_no, "unknown record '" + std::string(tok[0]) + "'");
        }
    });
    if (!have_header) throw ParseError(0, "missing 'p hs' header");
    if (edges.size() != m) {
        throw ParseError(0, "header announces " + std::to_string(m) + " hyperedges, found " + std::to_string(edges.size()));
    }
    return Hypergraph(n, d, std::move(edges));
}

inline std::string serialize_hypergraph(const Hypergraph& h) {
    std::ostringstream out;
    out << "p hs " << h.vertex_count() << ' ' << h.edges().size() << ' ' << h.max_arity() << '\n';
    for (const auto& e : h.edges()) {
        out << 'h';
        for (Vertex v : e) out << ' ' << v + 1;
        out << '\n';
    }
    return out.str();
}

/// One `x y` integer pair per line; `#` starts a comment line. Coordinates are
/// limited to 32-bit range so that line coefficients stay exact.
inline PointSet parse_points(std::istream& in) {
    std::vector<Point> points;
    detail::for_each_record(in, '#', [&](std::size_t line_no, const auto& tok) {
        if (tok.size() != 2) throw ParseError(line_no, "expected 'x y'");
        Point p{detail::parse_int<std::int64_t>(tok[0], line_no), detail::parse_int<std::int64_t>(tok[1], line_no)};
        if (p.x < INT32_MIN || p.x > INT32_MAX || p.y < INT32_MIN || p.y > INT32_MAX) {
            throw ParseError(line_no, "coordinate outside 32-bit range");
        }
        if (std::find(points.begin(), points.end(), p) != points.end()) throw ParseError(line_no, "duplicate point");
        points.push_back(p);
    });
    return PointSet(std::move(points));
}

inline std::string serialize_points(const PointSet& p) {
    std::ostringstream out;
    for (const Point& q : p.points()) out << q.x << ' ' << q.y << '\n';
    return out.str();
}

/// `p tour n`, then one line `a u v` per arc u -> v.
inline Tournament parse_tournament(std::istream& in) {
    std::size_t n = 0;
    bool have_header = false;
    std::vector<Arc> arcs;
    detail::for_each_record(in, 'c', [&](std::size_t line_no, const auto& tok) {
        if (tok[0] == "p") {
            if (have_header) throw ParseError(line_no, "duplicate header");
            if (tok.size() != 3 || tok[1] != "tour") throw ParseError(line_no, "malformed header, expected 'p tour n'");
            n = detail::parse_int<std::size_t>(tok[2], line_no);
            have_header = true;
        } else if (tok[0] == "a") {
            if (!have_header) throw ParseError(line_no, "arc before header");
            if (tok.size() != 3) throw ParseError(line_no, "malformed arc line");
            Arc a{detail::parse_vertex(tok[1], n, line_no), detail::parse_vertex(tok[2], n, line_no)};
            if (a.tail == a.head) throw ParseError(line_no, "self-loop");
            arcs.push_back(a);
        } else {
            throw ParseError(line_no, "unknown record '" + std::string(tok[0]) + "'");
        }
    });
    if (!have_header) throw ParseError(0, "missing 'p tour' header");
    try {
        return Tournament(n, std::move(arcs));
    } catch (const InvalidInstance& e) {
        throw ParseError(0, e.what());
    }
}

inline std::string serialize_tournament(const Tournament& t) {
    std::ostringstream out;
    out << "p tour " << t.vertex_count() << '\n';
    for (const Arc& a : t.arcs()) out << "a " << a.tail + 1 << ' ' << a.head + 1 << '\n';
    return out.str();
}

template <class Parser>
auto parse_text(std::string_view text, Parser&& parser) {
    std::istringstream in{std::string(text)};
    return parser(in);
}

inline ProblemInstance read_instance(const std::string& path, ProblemKind kind) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    switch (kind) {
        case ProblemKind::VertexCover: return make_instance(parse_graph(in));
        case ProblemKind::HittingSet: return make_instance(parse_hypergraph(in));
        case ProblemKind::PointLineCover: return make_instance(parse_points(in));
        case ProblemKind::FeedbackArcSet: return make_instance(parse_tournament(in));
    }
    throw std::logic_error("unknown problem kind");
}

}  // namespace diversekit
