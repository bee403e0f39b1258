#pragma once

#include <cstdint>
#include <vector>

#include "dynsketch/field.hpp"
#include "dynsketch/graph.hpp"

namespace dynsketch {

/// Corpus generators shared by the verify command and the test suites. All
/// draws come from the caller's Rng so corpora are reproducible.

struct RandomGraphParams {
    std::uint32_t min_n = 2;
    std::uint32_t max_n = 12;
    std::uint32_t min_k = 1;
    std::uint32_t max_k = 4;
    bool directed = false;
    std::uint64_t max_weight = 1;    // uniform in [1, max_weight]
    double edge_probability = 0.35;  // per vertex pair (per direction when directed)
    bool with_st = false;            // designate source/sink vertices
};

inline Graph random_graph(Rng& rng, const RandomGraphParams& params) {
    Graph g;
    std::uint32_t lo_n = std::max(params.min_n, params.min_k);
    std::uint32_t span = params.max_n >= lo_n ? params.max_n - lo_n + 1 : 1;
    g.n = lo_n + static_cast<std::uint32_t>(rng.uniform_below(span));
    g.directed = params.directed;
    std::uint32_t k_hi = std::min(params.max_k, g.n);
    std::uint32_t k_lo = std::min(params.min_k, k_hi);
    std::uint32_t k = k_lo + static_cast<std::uint32_t>(rng.uniform_below(k_hi - k_lo + 1));

    std::vector<std::uint32_t> perm(g.n);
    for (std::uint32_t i = 0; i < g.n; ++i) perm[i] = i;
    for (std::uint32_t i = g.n; i > 1; --i) {
        std::uint32_t j = static_cast<std::uint32_t>(rng.uniform_below(i));
        std::swap(perm[i - 1], perm[j]);
    }
    g.terminals.assign(perm.begin(), perm.begin() + k);

    const std::uint64_t denom = 1'000'000;
    const std::uint64_t threshold = static_cast<std::uint64_t>(params.edge_probability * static_cast<double>(denom));
    std::uint64_t id = 0;
    for (std::uint32_t u = 0; u < g.n; ++u) {
        for (std::uint32_t v = params.directed ? 0 : u + 1; v < g.n; ++v) {
            if (u == v) continue;
            if (rng.uniform_below(denom) >= threshold) continue;
            std::uint64_t w = 1 + rng.uniform_below(params.max_weight);
            g.edges.push_back(Edge{u, v, w, id++});
        }
    }
    if (params.with_st && g.n >= 2) {
        std::uint32_t s = perm[g.n - 1];
        std::uint32_t t = perm[g.n - 2];
        g.source = s;
        g.sink = t;
    }
    return g;
}

/// Uniform query over unordered (or ordered) terminal pairs: each candidate
/// pair joins independently; weights uniform in [1, max_weight].
inline Query random_query(Rng& rng, std::size_t k, bool ordered, double pair_probability,
                          std::uint64_t max_weight = 1) {
    Query q;
    const std::uint64_t denom = 1'000'000;
    const std::uint64_t threshold = static_cast<std::uint64_t>(pair_probability * static_cast<double>(denom));
    for (std::uint32_t i = 0; i < k; ++i) {
        for (std::uint32_t j = ordered ? 0 : i + 1; j < k; ++j) {
            if (i == j) continue;
            if (rng.uniform_below(denom) >= threshold) continue;
            q.edges.push_back(QueryEdge{i, j, 1 + rng.uniform_below(max_weight)});
        }
    }
    return q;
}

/// All unordered terminal pairs in row-major order; the query bitmask
/// enumeration below indexes into this.
inline std::vector<std::pair<std::uint32_t, std::uint32_t>> unordered_pairs(std::size_t k) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    for (std::uint32_t i = 0; i < k; ++i) {
        for (std::uint32_t j = i + 1; j < k; ++j) pairs.push_back({i, j});
    }
    return pairs;
}

inline std::vector<std::pair<std::uint32_t, std::uint32_t>> ordered_pairs(std::size_t k) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    for (std::uint32_t i = 0; i < k; ++i) {
        for (std::uint32_t j = 0; j < k; ++j) {
            if (i != j) pairs.push_back({i, j});
        }
    }
    return pairs;
}

inline Query query_from_mask(const std::vector<std::pair<std::uint32_t, std::uint32_t>>& pairs, std::uint64_t mask,
                             std::uint64_t weight = 1) {
    Query q;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (mask & (std::uint64_t{1} << i)) q.edges.push_back(QueryEdge{pairs[i].first, pairs[i].second, weight});
    }
    return q;
}

}  // namespace dynsketch
