#pragma once

#include <cstdint>
#include <vector>

#include "dynsketch/errors.hpp"
#include "dynsketch/graph.hpp"
#include "dynsketch/matching.hpp"

namespace dynsketch {

/// Make the designated endpoints flow-normal: drop incoming edges of s and
/// outgoing edges of t, then, if either endpoint is itself a terminal, splice
/// in a fresh non-terminal endpoint behind a fan of two-hop unit paths wide
/// enough to never constrain the flow.
inline Graph normalize_st(const Graph& g) {
    if (!g.directed) throw BuildError("s-t normalization expects a directed graph");
    if (!g.source || !g.sink) throw BuildError("s-t normalization needs designated source and sink");
    g.validate();
    Graph out = g;
    const std::uint32_t s = *g.source, t = *g.sink;
    out.edges.clear();
    for (const Edge& e : g.edges) {
        if (e.v == s || e.u == t) continue;
        out.edges.push_back(e);
    }
    std::uint64_t id = out.next_edge_id();
    auto is_terminal = [&](std::uint32_t v) {
        for (std::uint32_t q : out.terminals)
            if (q == v) return true;
        return false;
    };
    if (is_terminal(s)) {
        std::uint64_t fan = 0;
        for (const Edge& e : out.edges)
            if (e.u == s) ++fan;
        std::uint32_t fresh_source = out.n++;
        for (std::uint64_t i = 0; i < fan; ++i) {
            std::uint32_t relay = out.n++;
            out.edges.push_back(Edge{fresh_source, relay, 1, id++});
            out.edges.push_back(Edge{relay, s, 1, id++});
        }
        out.source = fresh_source;
    }
    if (is_terminal(t)) {
        std::uint64_t fan = 0;
        for (const Edge& e : out.edges)
            if (e.v == t) ++fan;
        std::uint32_t fresh_sink = out.n++;
        for (std::uint64_t i = 0; i < fan; ++i) {
            std::uint32_t relay = out.n++;
            out.edges.push_back(Edge{t, relay, 1, id++});
            out.edges.push_back(Edge{relay, fresh_sink, 1, id++});
        }
        out.sink = fresh_sink;
    }
    return out;
}

/// G'-terminal indices of the four gadget vertices tied to one ordered
/// terminal pair's dynamic edge slot.
struct PairSlots {
    std::uint32_t e_minus = 0;
    std::uint32_t e_plus = 0;
    std::uint32_t ehat_minus = 0;
    std::uint32_t ehat_plus = 0;
};

/// O(k^4)-word dynamic sketch for s-t edge connectivity: a matching sketch
/// over the edge-adjacency gadget of G with every ordered terminal pair's
/// edge slot present, plus the slot index and the base matching size.
struct StconnSketch {
    MatchingSketch inner;
    std::uint64_t matched_base = 0;  // static (e-,e+) pairs in the base matching
    std::size_t terminal_count = 0;
    std::vector<PairSlots> slots;  // ordered pairs, row-major by (i, j)

    std::size_t pair_count() const { return slots.size(); }

    std::size_t slot_of(std::uint32_t i, std::uint32_t j) const {
        const std::size_t k = terminal_count;
        return static_cast<std::size_t>(i) * (k - 1) + j - (j > i ? 1 : 0);
    }
};

inline StconnSketch compress_stconn(const Graph& g, double delta, std::uint64_t seed,
                                    std::uint64_t max_expanded_edges = 1'000'000) {
    g.validate();
    if (!g.directed) throw BuildError("s-t connectivity sketch expects a directed graph");
    if (!g.source || !g.sink) throw BuildError("s-t connectivity sketch needs designated source and sink");
    if (g.k() < 1) throw BuildError("s-t connectivity sketch needs at least one terminal");
    Graph loopless = g;
    loopless.edges.clear();
    for (const Edge& e : g.edges) {
        if (e.u != e.v) loopless.edges.push_back(e);
    }
    Graph norm = normalize_st(expand_capacities(loopless, max_expanded_edges));
    const std::uint32_t s = *norm.source, t = *norm.sink;
    const std::size_t k = norm.k();
    const std::size_t ms = norm.edges.size();

    // the full edge list of G^{Q_forall}: static edges then one slot per
    // ordered terminal pair
    struct Slot {
        std::uint32_t u, v;
    };
    std::vector<Slot> all;
    all.reserve(ms + k * (k - 1));
    for (const Edge& e : norm.edges) all.push_back(Slot{e.u, e.v});
    for (std::uint32_t i = 0; i < k; ++i) {
        for (std::uint32_t j = 0; j < k; ++j) {
            if (i != j) all.push_back(Slot{norm.terminals[i], norm.terminals[j]});
        }
    }
    const std::size_t pair_count = all.size() - ms;

    // e- exists unless the edge leaves s without ending at t; e+ unless it
    // enters t without starting at s (a direct s->t edge keeps both)
    auto has_minus = [&](const Slot& e) { return e.u != s || e.v == t; };
    auto has_plus = [&](const Slot& e) { return e.v != t || e.u == s; };

    Graph gp;
    gp.directed = false;
    std::vector<std::uint32_t> vminus(all.size(), UINT32_MAX), vplus(all.size(), UINT32_MAX);
    std::uint32_t next = 0;
    for (std::size_t e = 0; e < all.size(); ++e) {
        if (has_minus(all[e])) vminus[e] = next++;
        if (has_plus(all[e])) vplus[e] = next++;
    }
    StconnSketch out;
    out.terminal_count = k;
    out.slots.resize(pair_count);
    for (std::size_t pi = 0; pi < pair_count; ++pi) {
        std::uint32_t ehat_minus = next++;
        std::uint32_t ehat_plus = next++;
        std::size_t e = ms + pi;
        std::uint32_t base = static_cast<std::uint32_t>(gp.terminals.size());
        gp.terminals.push_back(vminus[e]);
        gp.terminals.push_back(vplus[e]);
        gp.terminals.push_back(ehat_minus);
        gp.terminals.push_back(ehat_plus);
        out.slots[pi] = PairSlots{base, static_cast<std::uint32_t>(base + 1), static_cast<std::uint32_t>(base + 2),
                                  static_cast<std::uint32_t>(base + 3)};
    }
    gp.n = next;

    std::uint64_t id = 0;
    std::uint64_t matched = 0;
    for (std::size_t e = 0; e < ms; ++e) {
        if (vminus[e] == UINT32_MAX || vplus[e] == UINT32_MAX) continue;
        gp.edges.push_back(Edge{vminus[e], vplus[e], 1, id++});
        // a direct s->t edge keeps its pair free: it is itself a unit of
        // connectivity, not part of the base matching
        if (all[e].u != s && all[e].v != t) ++matched;
    }
    std::vector<std::vector<std::uint32_t>> in_at(norm.n), out_at(norm.n);
    for (std::size_t e = 0; e < all.size(); ++e) {
        out_at[all[e].u].push_back(static_cast<std::uint32_t>(e));
        in_at[all[e].v].push_back(static_cast<std::uint32_t>(e));
    }
    for (std::uint32_t v = 0; v < norm.n; ++v) {
        for (std::uint32_t e1 : in_at[v]) {
            for (std::uint32_t e2 : out_at[v]) {
                gp.edges.push_back(Edge{vplus[e1], vminus[e2], 1, id++});
            }
        }
    }
    out.matched_base = matched;
    out.inner = compress_matching(gp, delta, seed);
    return out;
}

/// Connectivity of G^Q: switch each chosen slot live, park every unchosen
/// slot against its hat vertices, and read off the matching surplus.
inline std::uint64_t extract_stconn(const StconnSketch& s, const Query& q) {
    validate_query(q, s.terminal_count, /*ordered_pairs=*/true);
    std::vector<bool> chosen(s.pair_count(), false);
    for (const QueryEdge& e : q.edges) chosen[s.slot_of(e.i, e.j)] = true;
    Query inner_q;
    for (std::size_t pi = 0; pi < s.pair_count(); ++pi) {
        const PairSlots& ps = s.slots[pi];
        if (chosen[pi]) {
            inner_q.edges.push_back(QueryEdge{ps.e_minus, ps.e_plus, 1});
        } else {
            inner_q.edges.push_back(QueryEdge{ps.e_minus, ps.ehat_plus, 1});
            inner_q.edges.push_back(QueryEdge{ps.e_plus, ps.ehat_minus, 1});
        }
    }
    std::uint64_t nu = extract_matching(s.inner, inner_q);
    std::uint64_t baseline = s.matched_base + 2 * s.pair_count() - q.size();
    return nu >= baseline ? nu - baseline : 0;
}

}  // namespace dynsketch
