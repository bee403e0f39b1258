#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <numeric>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "dynsketch/errors.hpp"
#include "dynsketch/graph.hpp"

namespace dynsketch {

struct OracleResult {
    std::uint64_t value = 0;
    std::string method;
};

inline constexpr std::uint64_t kUnreachable = std::numeric_limits<std::uint64_t>::max();

namespace detail {

inline int matching_dp(std::uint32_t mask, const std::vector<std::uint32_t>& adj, std::vector<int8_t>& memo) {
    if (mask == 0) return 0;
    int8_t& slot = memo[mask];
    if (slot >= 0) return slot;
    std::uint32_t v = static_cast<std::uint32_t>(std::countr_zero(mask));
    std::uint32_t rest = mask & (mask - 1);  // drop v
    int best = matching_dp(rest, adj, memo);
    std::uint32_t nb = adj[v] & rest;
    while (nb) {
        std::uint32_t u = static_cast<std::uint32_t>(std::countr_zero(nb));
        nb &= nb - 1;
        best = std::max(best, 1 + matching_dp(rest & ~(std::uint32_t{1} << u), adj, memo));
    }
    slot = static_cast<int8_t>(best);
    return best;
}

}  // namespace detail

/// Exact maximum matching size by subset DP. Deliberately simpler than the
/// sketches it judges; capped at n <= 24.
inline std::size_t oracle_matching(const Graph& g) {
    if (g.directed) throw Error("matching oracle expects an undirected graph");
    if (g.n > 24) throw SizeLimitError("matching oracle capped at n <= 24");
    std::vector<std::uint32_t> adj(g.n, 0);
    for (const Edge& e : g.edges) {
        if (e.u == e.v) continue;
        adj[e.u] |= std::uint32_t{1} << e.v;
        adj[e.v] |= std::uint32_t{1} << e.u;
    }
    if (g.n == 0) return 0;
    std::vector<int8_t> memo(std::size_t{1} << g.n, -1);
    std::uint32_t full = (g.n == 32) ? ~std::uint32_t{0} : ((std::uint32_t{1} << g.n) - 1);
    return static_cast<std::size_t>(detail::matching_dp(full, adj, memo));
}

/// Exact A-B max-flow (= min cut) by shortest augmenting paths over a
/// super-source/super-sink. Undirected edges become antiparallel arc pairs.
inline std::uint64_t oracle_maxflow(const Graph& g, std::span<const std::uint32_t> sources,
                                    std::span<const std::uint32_t> sinks) {
    if (sources.empty() || sinks.empty()) throw InvalidCutError("flow oracle needs nonempty source and sink sets");
    std::vector<bool> is_source(g.n, false), is_sink(g.n, false);
    for (std::uint32_t v : sources) {
        if (v >= g.n) throw InvalidCutError("source vertex out of range");
        is_source[v] = true;
    }
    for (std::uint32_t v : sinks) {
        if (v >= g.n) throw InvalidCutError("sink vertex out of range");
        if (is_source[v]) throw InvalidCutError("source and sink sets overlap");
        is_sink[v] = true;
    }

    const std::uint32_t s = g.n, t = g.n + 1;
    const std::uint32_t nodes = g.n + 2;
    struct Arc {
        std::uint32_t to;
        std::uint64_t cap;
        std::size_t rev;
    };
    std::vector<std::vector<Arc>> arcs(nodes);
    auto add_arc = [&](std::uint32_t from, std::uint32_t to, std::uint64_t cap) {
        arcs[from].push_back(Arc{to, cap, arcs[to].size()});
        arcs[to].push_back(Arc{from, 0, arcs[from].size() - 1});
    };

    std::uint64_t cap_sum = 0;
    for (const Edge& e : g.edges) cap_sum += e.weight;
    const std::uint64_t inf = cap_sum + 1;

    for (const Edge& e : g.edges) {
        if (e.weight == 0 || e.u == e.v) continue;
        add_arc(e.u, e.v, e.weight);
        if (!g.directed) add_arc(e.v, e.u, e.weight);
    }
    for (std::uint32_t v = 0; v < g.n; ++v) {
        if (is_source[v]) add_arc(s, v, inf);
        if (is_sink[v]) add_arc(v, t, inf);
    }

    std::uint64_t flow = 0;
    std::vector<std::pair<std::uint32_t, std::size_t>> parent(nodes);
    for (;;) {
        std::vector<bool> seen(nodes, false);
        std::queue<std::uint32_t> bfs;
        bfs.push(s);
        seen[s] = true;
        while (!bfs.empty() && !seen[t]) {
            std::uint32_t v = bfs.front();
            bfs.pop();
            for (std::size_t i = 0; i < arcs[v].size(); ++i) {
                const Arc& a = arcs[v][i];
                if (a.cap == 0 || seen[a.to]) continue;
                seen[a.to] = true;
                parent[a.to] = {v, i};
                bfs.push(a.to);
            }
        }
        if (!seen[t]) break;
        std::uint64_t push = kUnreachable;
        for (std::uint32_t v = t; v != s;) {
            auto [pv, pi] = parent[v];
            push = std::min(push, arcs[pv][pi].cap);
            v = pv;
        }
        for (std::uint32_t v = t; v != s;) {
            auto [pv, pi] = parent[v];
            Arc& a = arcs[pv][pi];
            a.cap -= push;
            arcs[a.to][a.rev].cap += push;
            v = pv;
        }
        flow += push;
    }
    return flow;
}

struct ForestWeight {
    std::uint64_t weight = 0;
    std::size_t components = 0;
};

/// Exact minimum spanning forest weight via Kruskal ordered by
/// (weight, edge id); the explicit ordinal makes the forest unique.
inline ForestWeight oracle_mst(const Graph& g) {
    std::vector<std::size_t> order(g.edges.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const Edge &ea = g.edges[a], &eb = g.edges[b];
        return std::pair{ea.weight, ea.id} < std::pair{eb.weight, eb.id};
    });
    std::vector<std::uint32_t> parent(g.n);
    std::iota(parent.begin(), parent.end(), 0u);
    auto find = [&](std::uint32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    ForestWeight out;
    out.components = g.n;
    for (std::size_t idx : order) {
        const Edge& e = g.edges[idx];
        if (e.u == e.v) continue;
        std::uint32_t ru = find(e.u), rv = find(e.v);
        if (ru == rv) continue;
        parent[ru] = rv;
        out.weight += e.weight;
        --out.components;
    }
    return out;
}

/// Exact s-t distance by Dijkstra; kUnreachable when disconnected.
inline std::uint64_t oracle_shortest_path(const Graph& g, std::uint32_t s, std::uint32_t t) {
    if (s >= g.n || t >= g.n) throw Error("shortest-path endpoints out of range");
    std::vector<std::vector<std::pair<std::uint32_t, std::uint64_t>>> adj(g.n);
    for (const Edge& e : g.edges) {
        adj[e.u].push_back({e.v, e.weight});
        if (!g.directed) adj[e.v].push_back({e.u, e.weight});
    }
    std::vector<std::uint64_t> dist(g.n, kUnreachable);
    using Item = std::pair<std::uint64_t, std::uint32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[s] = 0;
    pq.push({0, s});
    while (!pq.empty()) {
        auto [d, v] = pq.top();
        pq.pop();
        if (d != dist[v]) continue;
        if (v == t) break;
        for (auto [to, w] : adj[v]) {
            std::uint64_t nd = d + w;
            if (nd < dist[to]) {
                dist[to] = nd;
                pq.push({nd, to});
            }
        }
    }
    return dist[t];
}

}  // namespace dynsketch
