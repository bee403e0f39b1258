#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <queue>
#include <vector>

#include "dynsketch/errors.hpp"
#include "dynsketch/graph.hpp"

namespace dynsketch {

inline constexpr std::uint64_t kInfiniteDistance = std::numeric_limits<std::uint64_t>::max();

inline std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
    if (a == kInfiniteDistance || b == kInfiniteDistance) return kInfiniteDistance;
    std::uint64_t s = a + b;
    return s < a ? kInfiniteDistance : s;
}

/// All-pairs terminal distance table; s and t are promoted to terminals at
/// compression so the table always covers them.
struct PathSketch {
    std::size_t k = 0;
    bool directed = true;
    std::uint32_t source_index = 0;
    std::uint32_t sink_index = 0;
    std::vector<std::uint64_t> table;  // k*k row-major, kInfiniteDistance when unreachable

    std::uint64_t at(std::size_t i, std::size_t j) const { return table[i * k + j]; }

    bool operator==(const PathSketch&) const = default;
};

namespace detail {

inline std::vector<std::uint64_t> sssp_distances(
    const std::vector<std::vector<std::pair<std::uint32_t, std::uint64_t>>>& adj, std::uint32_t from) {
    std::vector<std::uint64_t> dist(adj.size(), kInfiniteDistance);
    using Item = std::pair<std::uint64_t, std::uint32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[from] = 0;
    pq.push({0, from});
    while (!pq.empty()) {
        auto [d, v] = pq.top();
        pq.pop();
        if (d != dist[v]) continue;
        for (auto [to, w] : adj[v]) {
            std::uint64_t nd = saturating_add(d, w);
            if (nd < dist[to]) {
                dist[to] = nd;
                pq.push({nd, to});
            }
        }
    }
    return dist;
}

}  // namespace detail

/// The terminal list with s and t appended when they are not terminals
/// already; path queries index into this list.
inline std::vector<std::uint32_t> promoted_terminals(const Graph& g) {
    if (!g.source || !g.sink) throw BuildError("path sketch needs designated source and sink");
    std::vector<std::uint32_t> terminals = g.terminals;
    for (std::uint32_t v : {*g.source, *g.sink}) {
        if (std::find(terminals.begin(), terminals.end(), v) == terminals.end()) terminals.push_back(v);
    }
    return terminals;
}

/// G^Q for a path query: edges land between promoted-terminal indices.
inline Graph apply_path_query(const Graph& g, const Query& q) {
    std::vector<std::uint32_t> terminals = promoted_terminals(g);
    validate_query(q, terminals.size(), g.directed);
    Graph out = g;
    std::uint64_t id = g.next_edge_id();
    for (const QueryEdge& e : q.edges) {
        out.edges.push_back(Edge{terminals[e.i], terminals[e.j], e.weight, id++});
    }
    return out;
}

inline PathSketch compress_paths(const Graph& g) {
    g.validate();
    std::vector<std::uint32_t> terminals = promoted_terminals(g);
    auto index_of = [&](std::uint32_t v) -> std::uint32_t {
        for (std::size_t i = 0; i < terminals.size(); ++i) {
            if (terminals[i] == v) return static_cast<std::uint32_t>(i);
        }
        return UINT32_MAX;
    };
    PathSketch out;
    out.source_index = index_of(*g.source);
    out.sink_index = index_of(*g.sink);
    out.k = terminals.size();
    out.directed = g.directed;
    std::vector<std::vector<std::pair<std::uint32_t, std::uint64_t>>> adj(g.n);
    for (const Edge& e : g.edges) {
        adj[e.u].push_back({e.v, e.weight});
        if (!g.directed) adj[e.v].push_back({e.u, e.weight});
    }
    out.table.assign(out.k * out.k, kInfiniteDistance);
    for (std::size_t i = 0; i < out.k; ++i) {
        std::vector<std::uint64_t> dist = detail::sssp_distances(adj, terminals[i]);
        for (std::size_t j = 0; j < out.k; ++j) out.table[i * out.k + j] = dist[terminals[j]];
    }
    return out;
}

/// Shortest s-t distance in G^Q: relax over the k-vertex table graph with the
/// query edges overlaid.
inline std::uint64_t extract_path(const PathSketch& s, const Query& q) {
    validate_query(q, s.k, s.directed);
    std::vector<std::vector<std::pair<std::uint32_t, std::uint64_t>>> adj(s.k);
    for (std::size_t i = 0; i < s.k; ++i) {
        for (std::size_t j = 0; j < s.k; ++j) {
            if (i != j && s.at(i, j) != kInfiniteDistance) {
                adj[i].push_back({static_cast<std::uint32_t>(j), s.at(i, j)});
            }
        }
    }
    for (const QueryEdge& e : q.edges) {
        adj[e.i].push_back({e.j, e.weight});
        if (!s.directed) adj[e.j].push_back({e.i, e.weight});
    }
    return detail::sssp_distances(adj, s.source_index)[s.sink_index];
}

}  // namespace dynsketch
