#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <queue>
#include <vector>

#include "dynsketch/errors.hpp"
#include "dynsketch/graph.hpp"

namespace dynsketch {

/// Total order on edges: weight first, then the edge id as a deterministic
/// tie-break, which makes every minimum spanning forest unique.
struct WeightKey {
    std::uint64_t weight = 0;
    std::uint64_t ordinal = 0;

    auto operator<=>(const WeightKey&) const = default;
};

inline WeightKey edge_key(const Edge& e) { return WeightKey{e.weight, e.id}; }

/// Kruskal under the WeightKey order; returns the forest's edge list.
inline std::vector<Edge> kruskal_forest(const Graph& g) {
    std::vector<std::size_t> order(g.edges.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return edge_key(g.edges[a]) < edge_key(g.edges[b]); });
    std::vector<std::uint32_t> parent(g.n);
    std::iota(parent.begin(), parent.end(), 0u);
    auto find = [&](std::uint32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    std::vector<Edge> forest;
    for (std::size_t idx : order) {
        const Edge& e = g.edges[idx];
        if (e.u == e.v) continue;
        std::uint32_t ru = find(e.u), rv = find(e.v);
        if (ru == rv) continue;
        parent[ru] = rv;
        forest.push_back(e);
    }
    return forest;
}

/// Deterministic O(k)-size sketch: the spanning forest with non-terminal
/// leaves pruned and clean paths contracted to their heaviest edge, plus the
/// pruned-away weight w*.
struct MstSketch {
    Graph hprime;                    // forest; vertex i < k is terminal i
    std::uint64_t weight_offset = 0;  // w*
    std::uint64_t ordinal_base = 0;   // query edges take ordinals from here up
};

struct MstCompression {
    MstSketch sketch;
    std::vector<Edge> forest;                    // the uncompressed spanning forest of G
    std::vector<std::uint32_t> original_vertex;  // hprime vertex -> vertex of G
};

inline MstCompression compress_mst_traced(const Graph& g) {
    if (g.directed) throw BuildError("minimum spanning tree sketch expects an undirected graph");
    g.validate();
    const std::size_t k = g.k();
    if (k < 1) throw BuildError("minimum spanning tree sketch needs at least one terminal");

    std::vector<Edge> forest = kruskal_forest(g);
    std::uint64_t forest_weight = 0;
    for (const Edge& e : forest) forest_weight += e.weight;

    std::vector<bool> is_terminal(g.n, false);
    for (std::uint32_t t : g.terminals) is_terminal[t] = true;

    std::vector<std::vector<std::size_t>> adj(g.n);
    for (std::size_t e = 0; e < forest.size(); ++e) {
        adj[forest[e].u].push_back(e);
        adj[forest[e].v].push_back(e);
    }
    std::vector<bool> edge_alive(forest.size(), true);
    std::vector<bool> vertex_alive(g.n, true);
    std::vector<std::size_t> degree(g.n, 0);
    for (std::size_t e = 0; e < forest.size(); ++e) {
        ++degree[forest[e].u];
        ++degree[forest[e].v];
    }

    // (2a) shed non-terminal leaves (and isolated non-terminals) until none remain
    std::queue<std::uint32_t> shed;
    for (std::uint32_t v = 0; v < g.n; ++v) {
        if (!is_terminal[v] && degree[v] <= 1) shed.push(v);
    }
    while (!shed.empty()) {
        std::uint32_t v = shed.front();
        shed.pop();
        if (!vertex_alive[v] || degree[v] > 1) continue;
        vertex_alive[v] = false;
        for (std::size_t e : adj[v]) {
            if (!edge_alive[e]) continue;
            edge_alive[e] = false;
            std::uint32_t other = forest[e].u == v ? forest[e].v : forest[e].u;
            --degree[v];
            --degree[other];
            if (!is_terminal[other] && degree[other] <= 1) shed.push(other);
        }
    }

    // (2b) contract each maximal clean path into one edge carrying the
    // heaviest key on the path
    auto is_anchor = [&](std::uint32_t v) { return is_terminal[v] || degree[v] != 2; };
    std::vector<bool> edge_visited(forest.size(), false);
    struct Summary {
        std::uint32_t u, v;
        WeightKey key;
    };
    std::vector<Summary> summaries;
    for (std::uint32_t a = 0; a < g.n; ++a) {
        if (!vertex_alive[a] || !is_anchor(a)) continue;
        for (std::size_t e0 : adj[a]) {
            if (!edge_alive[e0] || edge_visited[e0]) continue;
            std::uint32_t prev = a;
            std::size_t cur = e0;
            edge_visited[cur] = true;
            WeightKey best = edge_key(forest[cur]);
            std::uint32_t next = forest[cur].u == prev ? forest[cur].v : forest[cur].u;
            while (!is_anchor(next)) {
                std::size_t follow = SIZE_MAX;
                for (std::size_t e : adj[next]) {
                    if (edge_alive[e] && e != cur) {
                        follow = e;
                        break;
                    }
                }
                prev = next;
                cur = follow;
                edge_visited[cur] = true;
                best = std::max(best, edge_key(forest[cur]));
                next = forest[cur].u == prev ? forest[cur].v : forest[cur].u;
            }
            summaries.push_back(Summary{a, next, best});
        }
    }

    // re-index: terminal i keeps index i, surviving branch vertices follow
    std::vector<std::uint32_t> remap(g.n, UINT32_MAX);
    MstCompression out;
    for (std::size_t i = 0; i < k; ++i) {
        remap[g.terminals[i]] = static_cast<std::uint32_t>(i);
        out.original_vertex.push_back(g.terminals[i]);
    }
    // interior path vertices were contracted away; only branch points remain
    std::uint32_t next_index = static_cast<std::uint32_t>(k);
    for (std::uint32_t v = 0; v < g.n; ++v) {
        if (vertex_alive[v] && !is_terminal[v] && degree[v] >= 3) {
            remap[v] = next_index++;
            out.original_vertex.push_back(v);
        }
    }

    out.forest = forest;
    MstSketch& sk = out.sketch;
    sk.hprime.n = next_index;
    sk.hprime.directed = false;
    sk.hprime.terminals.resize(k);
    std::iota(sk.hprime.terminals.begin(), sk.hprime.terminals.end(), 0u);
    std::uint64_t kept_weight = 0;
    for (const Summary& s : summaries) {
        sk.hprime.edges.push_back(Edge{remap[s.u], remap[s.v], s.key.weight, s.key.ordinal});
        kept_weight += s.key.weight;
    }
    sk.weight_offset = forest_weight - kept_weight;
    sk.ordinal_base = g.next_edge_id();
    return out;
}

inline MstSketch compress_mst(const Graph& g) { return compress_mst_traced(g).sketch; }

struct MstAnswer {
    std::uint64_t weight = 0;
    std::size_t components = 0;
};

/// Minimum spanning forest weight of G^Q: Kruskal over the contracted forest
/// plus the query edges, shifted back by w*.
inline MstAnswer extract_mst(const MstSketch& s, const Query& q) {
    validate_query(q, s.hprime.k(), /*ordered_pairs=*/false);
    Graph h = s.hprime;
    std::uint64_t id = s.ordinal_base;
    for (const QueryEdge& e : q.edges) h.edges.push_back(Edge{e.i, e.j, e.weight, id++});
    std::vector<Edge> forest = kruskal_forest(h);
    MstAnswer out;
    for (const Edge& e : forest) out.weight += e.weight;
    out.weight += s.weight_offset;
    out.components = h.n - forest.size();
    return out;
}

/// Insert one edge into a forest; if it closes a cycle, evict the heaviest
/// key on that cycle (possibly the new edge itself).
inline void mst_insert(Graph& forest, const Edge& e) {
    std::vector<std::vector<std::size_t>> adj(forest.n);
    for (std::size_t i = 0; i < forest.edges.size(); ++i) {
        adj[forest.edges[i].u].push_back(i);
        adj[forest.edges[i].v].push_back(i);
    }
    // path from e.u to e.v, if the endpoints are already connected
    std::vector<std::size_t> via(forest.n, SIZE_MAX);
    std::vector<bool> seen(forest.n, false);
    std::queue<std::uint32_t> bfs;
    bfs.push(e.u);
    seen[e.u] = true;
    while (!bfs.empty() && !seen[e.v]) {
        std::uint32_t v = bfs.front();
        bfs.pop();
        for (std::size_t ei : adj[v]) {
            const Edge& f = forest.edges[ei];
            std::uint32_t to = f.u == v ? f.v : f.u;
            if (seen[to]) continue;
            seen[to] = true;
            via[to] = ei;
            bfs.push(to);
        }
    }
    if (!seen[e.v]) {
        forest.edges.push_back(e);  // joins two trees, nothing to evict
        return;
    }
    std::size_t heaviest = SIZE_MAX;
    WeightKey best = edge_key(e);
    for (std::uint32_t v = e.v; v != e.u;) {
        std::size_t ei = via[v];
        const Edge& f = forest.edges[ei];
        if (edge_key(f) > best) {
            best = edge_key(f);
            heaviest = ei;
        }
        v = f.u == v ? f.v : f.u;
    }
    if (heaviest == SIZE_MAX) return;  // the new edge is the heaviest: skip it
    forest.edges.erase(forest.edges.begin() + static_cast<std::ptrdiff_t>(heaviest));
    forest.edges.push_back(e);
}

/// The incremental forest-update route: equivalent to Kruskal on H union Q.
inline Graph mst_algorithm(Graph forest, const std::vector<Edge>& inserts) {
    for (const Edge& e : inserts) mst_insert(forest, e);
    return forest;
}

}  // namespace dynsketch
