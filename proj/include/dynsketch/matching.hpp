#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "dynsketch/errors.hpp"
#include "dynsketch/field.hpp"
#include "dynsketch/graph.hpp"
#include "dynsketch/matrix.hpp"

namespace dynsketch {

/// Vertex <-> Tutte-matrix index mapping; terminals occupy indices 0..k-1 in
/// terminal-list order, the remaining vertices follow in ascending id order.
struct TutteLayout {
    std::vector<std::uint32_t> position;  // vertex id -> matrix index
    std::vector<std::uint32_t> vertex;    // matrix index -> vertex id
};

inline TutteLayout make_tutte_layout(const Graph& g) {
    TutteLayout layout;
    layout.position.assign(g.n, UINT32_MAX);
    layout.vertex.assign(g.n, UINT32_MAX);
    std::uint32_t idx = 0;
    for (std::uint32_t t : g.terminals) {
        layout.position[t] = idx;
        layout.vertex[idx] = t;
        ++idx;
    }
    for (std::uint32_t v = 0; v < g.n; ++v) {
        if (layout.position[v] == UINT32_MAX) {
            layout.position[v] = idx;
            layout.vertex[idx] = v;
            ++idx;
        }
    }
    return layout;
}

/// O(k^2)-word summary answering max matching size for any terminal-edge
/// query: the rank r of the evaluated non-terminal block plus four k x k
/// matrices over Z_p.
struct MatchingSketch {
    std::size_t k = 0;
    FieldSpec field;
    std::uint64_t block_rank = 0;  // r, rank of the evaluated D block
    ZpMatrix a_hat;    // pre-sampled skew values, one per potential terminal edge
    ZpMatrix a_prime;  // numeric content of the terminal block after elimination
    ZpMatrix b_sel;    // k independent columns picked from B'
    ZpMatrix c_sel;    // k independent rows picked from C'

    bool operator==(const MatchingSketch&) const = default;
};

inline constexpr std::size_t kSketchHeaderWords = 6;

/// Exact serialized size: four k x k matrices plus the fixed container header.
inline std::size_t sketch_size_words(const MatchingSketch& s) {
    return 4 * s.k * s.k + kSketchHeaderWords;
}

struct MatchingCompression {
    MatchingSketch sketch;
    TutteLayout layout;
    // evaluated matrices after steps 1..3; the terminal block holds only the
    // numeric part, query values are substituted on top at extraction
    ZpMatrix step1;
    ZpMatrix step2;
    ZpMatrix step3;
};

/// Full compression pipeline, keeping the intermediate matrices for tests
/// that check rank preservation step by step.
inline MatchingCompression compress_matching_traced(const Graph& g, double delta, std::uint64_t seed) {
    if (g.directed) throw Error("matching sketch expects an undirected graph");
    g.validate();
    // k = 0 degenerates cleanly (only the empty query exists); the reductions
    // built on top produce such instances for single-terminal inputs
    const std::size_t k = g.k();
    const std::size_t n = g.n;

    MatchingCompression out;
    out.sketch.k = k;
    out.sketch.field = choose_prime(std::max<std::size_t>(n, 1), delta, seed);
    const std::uint64_t p = out.sketch.field.prime;
    Rng rng(seed);
    out.layout = make_tutte_layout(g);

    // step 1: evaluate every static edge slot with a fresh uniform draw;
    // skew-symmetry puts x at (min,max) and -x at (max,min). Static
    // terminal-terminal edges land in the terminal block here and ride along
    // into a_prime, so extraction keeps them regardless of the query.
    ZpMatrix m1(n, n, p);
    for (const Edge& e : g.edges) {
        if (e.u == e.v) continue;  // loops never contribute to a matching
        std::uint32_t i = out.layout.position[e.u];
        std::uint32_t j = out.layout.position[e.v];
        std::uint32_t lo = std::min(i, j), hi = std::max(i, j);
        std::uint64_t val = rng.uniform_below(p);
        m1.at(lo, hi) = addmod(m1.at(lo, hi), val, p);
        m1.at(hi, lo) = submod(m1.at(hi, lo), val, p);
    }
    out.step1 = m1;

    // step 2: diagonalize the non-terminal block
    BlockDiagonalization diag = diagonalize_block(std::move(m1), k);
    const std::size_t r = diag.rank;
    out.sketch.block_rank = r;
    out.step2 = diag.matrix;

    // step 3: clear the cross blocks; the terminal block accumulates A'
    ZpMatrix m3 = eliminate_cross_blocks(std::move(diag.matrix), k, r);
    out.step3 = m3;

    ZpMatrix a_prime(k, k, p);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) a_prime.at(i, j) = m3.at(i, j);
    }

    // step 4: keep k independent columns of B' and rows of C', zero-padded
    // when the graph is too small to supply k of them
    const std::size_t side = n - k - r;
    ZpMatrix b_prime(k, side, p), c_prime(side, k, p);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < side; ++j) b_prime.at(i, j) = m3.at(i, k + r + j);
    }
    for (std::size_t i = 0; i < side; ++i) {
        for (std::size_t j = 0; j < k; ++j) c_prime.at(i, j) = m3.at(k + r + i, j);
    }
    std::vector<std::size_t> bcols = independent_columns(b_prime, k);
    std::vector<std::size_t> crows = independent_columns(transposed(c_prime), k);
    ZpMatrix b_sel(k, k, p), c_sel(k, k, p);
    for (std::size_t t = 0; t < bcols.size(); ++t) {
        for (std::size_t i = 0; i < k; ++i) b_sel.at(i, t) = b_prime.at(i, bcols[t]);
    }
    for (std::size_t t = 0; t < crows.size(); ++t) {
        for (std::size_t j = 0; j < k; ++j) c_sel.at(t, j) = c_prime.at(crows[t], j);
    }

    // the dynamic slots: one uniform draw per unordered terminal pair,
    // mirrored with negation (the matrix being evaluated is skew-symmetric)
    ZpMatrix a_hat(k, k, p);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            std::uint64_t val = rng.uniform_below(p);
            a_hat.at(i, j) = val;
            a_hat.at(j, i) = negmod(val, p);
        }
    }

    out.sketch.a_hat = std::move(a_hat);
    out.sketch.a_prime = std::move(a_prime);
    out.sketch.b_sel = std::move(b_sel);
    out.sketch.c_sel = std::move(c_sel);
    return out;
}

inline MatchingSketch compress_matching(const Graph& g, double delta, std::uint64_t seed) {
    return compress_matching_traced(g, delta, seed).sketch;
}

/// The 2k x 2k extraction matrix [[A_Q + A', B''], [C'', 0]].
inline ZpMatrix assemble_query_matrix(const MatchingSketch& s, const Query& q) {
    validate_query(q, s.k, /*ordered_pairs=*/false);
    const std::size_t k = s.k;
    const std::uint64_t p = s.field.prime;
    ZpMatrix m(2 * k, 2 * k, p);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            m.at(i, j) = s.a_prime.at(i, j);
            m.at(i, k + j) = s.b_sel.at(i, j);
            m.at(k + i, j) = s.c_sel.at(i, j);
        }
    }
    for (const QueryEdge& e : q.edges) {
        m.at(e.i, e.j) = addmod(m.at(e.i, e.j), s.a_hat.at(e.i, e.j), p);
        m.at(e.j, e.i) = addmod(m.at(e.j, e.i), s.a_hat.at(e.j, e.i), p);
    }
    return m;
}

/// Maximum matching size of G^Q: (rank of the assembled matrix + r) / 2.
inline std::size_t extract_matching(const MatchingSketch& s, const Query& q) {
    return (rank(assemble_query_matrix(s, q)) + s.block_rank) / 2;
}

}  // namespace dynsketch
