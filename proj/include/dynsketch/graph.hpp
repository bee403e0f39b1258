#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dynsketch/errors.hpp"

namespace dynsketch {

struct Edge {
    std::uint32_t u = 0;
    std::uint32_t v = 0;
    std::uint64_t weight = 1;  // weight or capacity depending on the problem
    std::uint64_t id = 0;
};

/// Static input graph: dense vertex ids 0..n-1, ordered terminal list,
/// optional designated source/sink. Parallel edges are first-class and keep
/// distinct ids.
struct Graph {
    std::uint32_t n = 0;
    bool directed = false;
    std::vector<Edge> edges;
    std::vector<std::uint32_t> terminals;
    std::optional<std::uint32_t> source;
    std::optional<std::uint32_t> sink;

    std::size_t k() const { return terminals.size(); }

    std::uint64_t next_edge_id() const {
        std::uint64_t next = 0;
        for (const Edge& e : edges) next = std::max(next, e.id + 1);
        return next;
    }

    void validate() const {
        std::set<std::uint32_t> seen;
        for (std::uint32_t t : terminals) {
            if (t >= n) throw Error("terminal vertex out of range");
            if (!seen.insert(t).second) throw Error("duplicate terminal vertex");
        }
        if (terminals.size() > n) throw Error("more terminals than vertices");
        for (const Edge& e : edges) {
            if (e.u >= n || e.v >= n) throw Error("edge endpoint out of range");
        }
        if (source && *source >= n) throw Error("source vertex out of range");
        if (sink && *sink >= n) throw Error("sink vertex out of range");
        if (source && sink && *source == *sink) throw Error("source and sink must differ");
    }
};

struct QueryEdge {
    std::uint32_t i = 0;  // terminal indices, not vertex ids
    std::uint32_t j = 0;
    std::uint64_t weight = 1;
};

/// Terminal-terminal edges to insert at extraction time. Pairs are ordered
/// for directed problems and unordered for undirected ones.
struct Query {
    std::vector<QueryEdge> edges;

    std::size_t size() const { return edges.size(); }
    bool empty() const { return edges.empty(); }
};

inline void validate_query(const Query& q, std::size_t k, bool ordered_pairs) {
    std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
    for (const QueryEdge& e : q.edges) {
        if (e.i >= k || e.j >= k) throw InvalidQueryError("query terminal index out of range");
        if (e.i == e.j) throw InvalidQueryError("query self-loop");
        auto key = ordered_pairs ? std::pair{e.i, e.j} : std::pair{std::min(e.i, e.j), std::max(e.i, e.j)};
        if (!seen.insert(key).second) throw InvalidQueryError("duplicate query pair");
    }
}

/// Disjoint nonempty terminal-index sets to separate.
struct TerminalCut {
    std::vector<std::uint32_t> a;
    std::vector<std::uint32_t> b;

    void validate(std::size_t k) const {
        if (a.empty() || b.empty()) throw InvalidCutError("cut sides must be nonempty");
        std::set<std::uint32_t> sa(a.begin(), a.end()), sb(b.begin(), b.end());
        if (sa.size() != a.size() || sb.size() != b.size()) throw InvalidCutError("repeated terminal in cut side");
        for (std::uint32_t t : sa) {
            if (t >= k) throw InvalidCutError("cut terminal index out of range");
            if (sb.count(t)) throw InvalidCutError("cut sides overlap");
        }
        for (std::uint32_t t : sb) {
            if (t >= k) throw InvalidCutError("cut terminal index out of range");
        }
    }
};

/// G^Q: G with the query edges appended (fresh ids); G itself is untouched.
inline Graph apply_query(const Graph& g, const Query& q) {
    validate_query(q, g.k(), g.directed);
    Graph out = g;
    std::uint64_t id = g.next_edge_id();
    for (const QueryEdge& e : q.edges) {
        out.edges.push_back(Edge{g.terminals[e.i], g.terminals[e.j], e.weight, id++});
    }
    return out;
}

/// Replace every capacity-c edge by c parallel unit edges; zero-capacity
/// edges vanish. Bounded so a bad capacity cannot silently allocate the moon.
inline Graph expand_capacities(const Graph& g, std::uint64_t max_edges = 1'000'000) {
    std::uint64_t total = 0;
    for (const Edge& e : g.edges) {
        total += e.weight;
        if (total > max_edges) {
            throw CapacityOverflowError("expanded edge count exceeds bound of " + std::to_string(max_edges));
        }
    }
    Graph out = g;
    out.edges.clear();
    std::uint64_t id = 0;
    for (const Edge& e : g.edges) {
        for (std::uint64_t c = 0; c < e.weight; ++c) {
            out.edges.push_back(Edge{e.u, e.v, 1, id++});
        }
    }
    return out;
}

/// Total capacity of edges touching at least one terminal, each edge once.
inline std::uint64_t terminal_capacity(const Graph& g) {
    std::vector<bool> is_terminal(g.n, false);
    for (std::uint32_t t : g.terminals) is_terminal[t] = true;
    std::uint64_t c = 0;
    for (const Edge& e : g.edges) {
        if (is_terminal[e.u] || is_terminal[e.v]) c += e.weight;
    }
    return c;
}

// --- text formats ---------------------------------------------------------
//
// Graph file, one record per line:
//   n k directed?          header; directed? is 0 or 1
//   t <vertex>             k times, in terminal order
//   s <vertex>             optional designated source
//   d <vertex>             optional designated sink
//   e <u> <v> <w>          per edge
// Blank lines and lines starting with '#' are skipped.
//
// Query file: lines `q <i> <j> [w]` with terminal indices, weight default 1.

namespace detail {

inline bool parse_u64(const std::string& tok, std::uint64_t& out) {
    if (tok.empty()) return false;
    out = 0;
    for (char c : tok) {
        if (c < '0' || c > '9') return false;
        std::uint64_t d = static_cast<std::uint64_t>(c - '0');
        if (out > (UINT64_MAX - d) / 10) return false;
        out = out * 10 + d;
    }
    return true;
}

inline std::uint64_t need_u64(const std::string& tok, std::size_t line, const char* what) {
    std::uint64_t v;
    if (!parse_u64(tok, v)) throw ParseError(line, std::string("expected nonnegative integer for ") + what);
    return v;
}

}  // namespace detail

inline Graph parse_graph(std::istream& in) {
    Graph g;
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    std::size_t expect_terminals = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok) || tok[0] == '#') continue;
        if (!have_header) {
            std::uint64_t n = detail::need_u64(tok, lineno, "vertex count");
            std::string ktok, dtok;
            if (!(ls >> ktok >> dtok)) throw ParseError(lineno, "header needs `n k directed?`");
            std::uint64_t k = detail::need_u64(ktok, lineno, "terminal count");
            std::uint64_t d = detail::need_u64(dtok, lineno, "directed flag");
            if (d > 1) throw ParseError(lineno, "directed flag must be 0 or 1");
            g.n = static_cast<std::uint32_t>(n);
            g.directed = d == 1;
            expect_terminals = k;
            have_header = true;
            continue;
        }
        if (tok == "t") {
            std::string v;
            if (!(ls >> v)) throw ParseError(lineno, "terminal line needs a vertex");
            g.terminals.push_back(static_cast<std::uint32_t>(detail::need_u64(v, lineno, "terminal vertex")));
        } else if (tok == "s" || tok == "d") {
            std::string v;
            if (!(ls >> v)) throw ParseError(lineno, "designated vertex line needs a vertex");
            std::uint32_t vertex = static_cast<std::uint32_t>(detail::need_u64(v, lineno, "designated vertex"));
            if (tok == "s")
                g.source = vertex;
            else
                g.sink = vertex;
        } else if (tok == "e") {
            std::string u, v, w;
            if (!(ls >> u >> v >> w)) throw ParseError(lineno, "edge line needs `e u v w`");
            Edge e;
            e.u = static_cast<std::uint32_t>(detail::need_u64(u, lineno, "edge endpoint"));
            e.v = static_cast<std::uint32_t>(detail::need_u64(v, lineno, "edge endpoint"));
            e.weight = detail::need_u64(w, lineno, "edge weight");
            e.id = g.edges.size();
            g.edges.push_back(e);
        } else {
            throw ParseError(lineno, "unknown record `" + tok + "`");
        }
    }
    if (!have_header) throw ParseError(lineno == 0 ? 1 : lineno, "missing header line");
    if (g.terminals.size() != expect_terminals) {
        throw ParseError(lineno, "header promised " + std::to_string(expect_terminals) + " terminals, found " +
                                     std::to_string(g.terminals.size()));
    }
    try {
        g.validate();
    } catch (const Error& e) {
        throw ParseError(lineno, e.what());
    }
    return g;
}

inline void format_graph(const Graph& g, std::ostream& out) {
    out << g.n << ' ' << g.k() << ' ' << (g.directed ? 1 : 0) << '\n';
    for (std::uint32_t t : g.terminals) out << "t " << t << '\n';
    if (g.source) out << "s " << *g.source << '\n';
    if (g.sink) out << "d " << *g.sink << '\n';
    for (const Edge& e : g.edges) out << "e " << e.u << ' ' << e.v << ' ' << e.weight << '\n';
}

inline Query parse_query(std::istream& in) {
    Query q;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok) || tok[0] == '#') continue;
        if (tok != "q") throw ParseError(lineno, "unknown record `" + tok + "` (expected `q i j [w]`)");
        std::string i, j, w;
        if (!(ls >> i >> j)) throw ParseError(lineno, "query line needs `q i j [w]`");
        QueryEdge e;
        e.i = static_cast<std::uint32_t>(detail::need_u64(i, lineno, "terminal index"));
        e.j = static_cast<std::uint32_t>(detail::need_u64(j, lineno, "terminal index"));
        if (ls >> w) e.weight = detail::need_u64(w, lineno, "query weight");
        q.edges.push_back(e);
    }
    return q;
}

/// Cut spec of the form "A:0,2 B:1".
inline TerminalCut parse_cut_spec(const std::string& spec) {
    TerminalCut cut;
    std::istringstream in(spec);
    std::string tok;
    while (in >> tok) {
        std::vector<std::uint32_t>* side = nullptr;
        if (tok.rfind("A:", 0) == 0)
            side = &cut.a;
        else if (tok.rfind("B:", 0) == 0)
            side = &cut.b;
        else
            throw InvalidCutError("cut spec token must start with A: or B:");
        std::string rest = tok.substr(2);
        std::istringstream items(rest);
        std::string item;
        while (std::getline(items, item, ',')) {
            std::uint64_t v;
            if (!detail::parse_u64(item, v)) throw InvalidCutError("bad terminal index `" + item + "` in cut spec");
            side->push_back(static_cast<std::uint32_t>(v));
        }
    }
    return cut;
}

}  // namespace dynsketch
