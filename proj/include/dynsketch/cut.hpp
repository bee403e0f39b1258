#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "dynsketch/errors.hpp"
#include "dynsketch/graph.hpp"
#include "dynsketch/matching.hpp"

namespace dynsketch {

/// For one terminal-edge incidence, the G'-terminal indices of the q-side
/// gadget vertex and the edge-side vertex it gets paired with at query time.
struct GadgetPair {
    std::uint32_t q_vertex = 0;  // q->e or q<-e, as a terminal index of G'
    std::uint32_t e_vertex = 0;  // e- or e+
};

struct CutGadgetIndex {
    std::vector<std::vector<GadgetPair>> outgoing;  // per original terminal
    std::vector<std::vector<GadgetPair>> incoming;
};

struct CutGadget {
    Graph gprime;
    CutGadgetIndex index;
};

/// Antiparallel directed copy of an undirected graph; self-loops are dropped
/// either way (they cross no cut).
inline Graph to_directed(const Graph& g) {
    Graph out = g;
    out.directed = true;
    out.edges.clear();
    std::uint64_t id = 0;
    for (const Edge& e : g.edges) {
        if (e.u == e.v) continue;
        out.edges.push_back(Edge{e.u, e.v, e.weight, id++});
        if (!g.directed) out.edges.push_back(Edge{e.v, e.u, e.weight, id++});
    }
    return out;
}

/// The bipartite matching instance of the cut reduction: e-/e+ per edge,
/// q-side vertices per terminal-edge incidence, an (e-,e+) edge per edge and
/// an (e1+,e2-) edge whenever e1's head is e2's tail. Expects a directed
/// uncapacitated multigraph (run expand_capacities first).
inline CutGadget build_bipartite_gadget(const Graph& g) {
    if (!g.directed) throw BuildError("bipartite gadget expects a directed graph");
    for (const Edge& e : g.edges) {
        if (e.weight != 1) throw BuildError("bipartite gadget expects unit capacities; expand first");
        if (e.u == e.v) throw BuildError("bipartite gadget expects no self-loops");
    }
    const std::size_t m = g.edges.size();
    const std::size_t k = g.k();

    CutGadget out;
    Graph& gp = out.gprime;
    gp.directed = false;
    // e- = 2*idx, e+ = 2*idx + 1; q-side vertices appended after
    std::uint32_t next_vertex = static_cast<std::uint32_t>(2 * m);

    out.index.outgoing.resize(k);
    out.index.incoming.resize(k);
    for (std::size_t qi = 0; qi < k; ++qi) {
        std::uint32_t q = g.terminals[qi];
        for (std::size_t e = 0; e < m; ++e) {
            if (g.edges[e].u != q) continue;
            std::uint32_t qv = next_vertex++;
            std::uint32_t ev = static_cast<std::uint32_t>(2 * e);  // e-
            gp.terminals.push_back(qv);
            gp.terminals.push_back(ev);
            out.index.outgoing[qi].push_back(
                GadgetPair{static_cast<std::uint32_t>(gp.terminals.size() - 2),
                           static_cast<std::uint32_t>(gp.terminals.size() - 1)});
        }
        for (std::size_t e = 0; e < m; ++e) {
            if (g.edges[e].v != q) continue;
            std::uint32_t qv = next_vertex++;
            std::uint32_t ev = static_cast<std::uint32_t>(2 * e + 1);  // e+
            gp.terminals.push_back(qv);
            gp.terminals.push_back(ev);
            out.index.incoming[qi].push_back(
                GadgetPair{static_cast<std::uint32_t>(gp.terminals.size() - 2),
                           static_cast<std::uint32_t>(gp.terminals.size() - 1)});
        }
    }
    if (gp.terminals.empty()) throw BuildError("no terminal-incident edges: the gadget has no query surface");
    gp.n = next_vertex;

    std::uint64_t id = 0;
    for (std::size_t e = 0; e < m; ++e) {
        gp.edges.push_back(Edge{static_cast<std::uint32_t>(2 * e), static_cast<std::uint32_t>(2 * e + 1), 1, id++});
    }
    // group edges by endpoint so head-to-tail pairs come out per vertex
    std::vector<std::vector<std::uint32_t>> in_at(g.n), out_at(g.n);
    for (std::size_t e = 0; e < m; ++e) {
        out_at[g.edges[e].u].push_back(static_cast<std::uint32_t>(e));
        in_at[g.edges[e].v].push_back(static_cast<std::uint32_t>(e));
    }
    for (std::uint32_t v = 0; v < g.n; ++v) {
        for (std::uint32_t e1 : in_at[v]) {
            for (std::uint32_t e2 : out_at[v]) {
                gp.edges.push_back(Edge{static_cast<std::uint32_t>(2 * e1 + 1),
                                        static_cast<std::uint32_t>(2 * e2), 1, id++});
            }
        }
    }
    return out;
}

/// Cut-preserving sketch: one matching sketch over the bipartite gadget plus
/// the incidence index that translates terminal cuts into queries.
struct CutSketch {
    MatchingSketch inner;
    std::uint64_t edge_count = 0;       // m of the expanded graph
    std::size_t terminal_count = 0;     // original k
    CutGadgetIndex index;
};

/// Failure budget for answering every one of the <= 3^k cut queries at once.
inline double amplified_delta(double delta, std::size_t k) {
    double budget = delta / std::pow(3.0, static_cast<double>(k));
    if (budget <= 0.0) throw Error("amplified delta underflows for k = " + std::to_string(k));
    return budget;
}

inline CutSketch compress_cut(const Graph& g, double delta, std::uint64_t seed, bool amplify = true,
                              std::uint64_t max_expanded_edges = 1'000'000) {
    g.validate();
    const std::size_t k = g.k();
    if (k < 2) throw BuildError("cut sketch needs at least two terminals");
    Graph directed = to_directed(g);
    Graph expanded = expand_capacities(directed, max_expanded_edges);
    CutGadget gadget = build_bipartite_gadget(expanded);
    double inner_delta = amplify ? amplified_delta(delta, k) : delta;
    CutSketch out;
    out.inner = compress_matching(gadget.gprime, inner_delta, seed);
    out.edge_count = expanded.edges.size();
    out.terminal_count = k;
    out.index = std::move(gadget.index);
    return out;
}

/// Min cut separating A from B: attach A's outgoing and B's incoming gadget
/// pairs, extract the matching size, subtract the base matching m.
inline std::uint64_t query_cut(const CutSketch& s, const TerminalCut& cut) {
    cut.validate(s.terminal_count);
    Query q;
    for (std::uint32_t t : cut.a) {
        for (const GadgetPair& gp : s.index.outgoing[t]) q.edges.push_back(QueryEdge{gp.q_vertex, gp.e_vertex, 1});
    }
    for (std::uint32_t t : cut.b) {
        for (const GadgetPair& gp : s.index.incoming[t]) q.edges.push_back(QueryEdge{gp.q_vertex, gp.e_vertex, 1});
    }
    std::uint64_t nu = extract_matching(s.inner, q);
    return nu >= s.edge_count ? nu - s.edge_count : 0;
}

/// Single-bipartition cut (A, T \ A).
inline std::uint64_t query_bipartition_min(const CutSketch& s, const std::vector<std::uint32_t>& a) {
    if (a.empty() || a.size() >= s.terminal_count) throw InvalidCutError("bipartition side must be a proper nonempty subset");
    std::vector<bool> in_a(s.terminal_count, false);
    for (std::uint32_t t : a) in_a[t] = true;
    TerminalCut cut;
    cut.a = a;
    for (std::uint32_t t = 0; t < s.terminal_count; ++t) {
        if (!in_a[t]) cut.b.push_back(t);
    }
    return query_cut(s, cut);
}

/// General (A,B) answered the roundabout way: minimum over every bipartition
/// that separates A from B. Cross-validates the direct query.
inline std::uint64_t query_cut_via_bipartitions(const CutSketch& s, const TerminalCut& cut) {
    cut.validate(s.terminal_count);
    std::vector<std::uint32_t> free_terminals;
    std::vector<bool> in_a(s.terminal_count, false), in_b(s.terminal_count, false);
    for (std::uint32_t t : cut.a) in_a[t] = true;
    for (std::uint32_t t : cut.b) in_b[t] = true;
    for (std::uint32_t t = 0; t < s.terminal_count; ++t) {
        if (!in_a[t] && !in_b[t]) free_terminals.push_back(t);
    }
    std::uint64_t best = UINT64_MAX;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << free_terminals.size()); ++mask) {
        std::vector<std::uint32_t> side = cut.a;
        for (std::size_t i = 0; i < free_terminals.size(); ++i) {
            if (mask & (std::uint64_t{1} << i)) side.push_back(free_terminals[i]);
        }
        best = std::min(best, query_bipartition_min(s, side));
    }
    return best;
}

/// The s-t counterpart of a capacitated digraph: fresh s and t, an s->q edge
/// of capacity c+(q) and a q->t edge of capacity c-(q) per terminal, both
/// kept even at capacity zero (expansion drops them later). s and t join the
/// terminal list and become the designated endpoints.
inline Graph st_counterpart(const Graph& g) {
    if (!g.directed) throw BuildError("s-t counterpart expects a directed graph");
    g.validate();
    Graph out = g;
    std::uint32_t s = g.n, t = g.n + 1;
    out.n = g.n + 2;
    std::uint64_t id = out.next_edge_id();
    for (std::uint32_t q : g.terminals) {
        std::uint64_t cap_out = 0, cap_in = 0;
        for (const Edge& e : g.edges) {
            if (e.u == q) cap_out += e.weight;
            if (e.v == q) cap_in += e.weight;
        }
        out.edges.push_back(Edge{s, q, cap_out, id++});
        out.edges.push_back(Edge{q, t, cap_in, id++});
    }
    out.terminals.push_back(s);
    out.terminals.push_back(t);
    out.source = s;
    out.sink = t;
    return out;
}

}  // namespace dynsketch
