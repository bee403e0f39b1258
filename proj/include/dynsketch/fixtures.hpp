#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "dynsketch/errors.hpp"
#include "dynsketch/graph.hpp"

namespace dynsketch {

/// The membership-reduction graph: two chains of perfect matchings with a
/// middle layer wired by the encoded set S. The two-edge query for an
/// element e* raises the matching size by one exactly when e* is in S.
struct MembershipGadget {
    Graph graph;
    std::size_t domain = 0;  // N
    std::size_t side = 0;    // sqrt(N)
    std::vector<bool> member;  // 1-based membership of [N]

    // terminal order: u, w, V1 in order, V4 in order
    std::uint32_t term_u() const { return 0; }
    std::uint32_t term_w() const { return 1; }
    std::uint32_t term_v1(std::size_t i) const { return static_cast<std::uint32_t>(2 + (i - 1)); }
    std::uint32_t term_v4(std::size_t j) const { return static_cast<std::uint32_t>(2 + side + (j - 1)); }

    /// Row-major bijection [N] -> [sqrt(N)] x [sqrt(N)], all 1-based.
    std::pair<std::size_t, std::size_t> position_of(std::size_t element) const {
        std::size_t i = (element - 1) / side + 1;
        std::size_t j = (element - 1) % side + 1;
        return {i, j};
    }

    Query query_for(std::size_t element) const {
        if (element < 1 || element > domain) throw Error("membership element out of range");
        auto [i, j] = position_of(element);
        Query q;
        q.edges.push_back(QueryEdge{term_u(), term_v1(i), 1});
        q.edges.push_back(QueryEdge{term_v4(j), term_w(), 1});
        return q;
    }

    std::size_t expected_matching(std::size_t element) const {
        return 2 * side + (member[element] ? 1 : 0);
    }
};

inline MembershipGadget gen_membership(std::size_t domain, const std::vector<std::size_t>& members) {
    std::size_t side = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(domain))));
    if (domain == 0 || side * side != domain) throw Error("membership gadget needs a perfect-square domain");
    MembershipGadget out;
    out.domain = domain;
    out.side = side;
    out.member.assign(domain + 1, false);
    for (std::size_t e : members) {
        if (e < 1 || e > domain) throw Error("membership element out of range");
        out.member[e] = true;
    }

    Graph& g = out.graph;
    g.directed = false;
    g.n = static_cast<std::uint32_t>(4 * side + 2);
    // vertex ids: u=0, w=1, then V1, V2, V3, V4 blocks of `side`
    auto v1 = [&](std::size_t i) { return static_cast<std::uint32_t>(2 + (i - 1)); };
    auto v2 = [&](std::size_t i) { return static_cast<std::uint32_t>(2 + side + (i - 1)); };
    auto v3 = [&](std::size_t i) { return static_cast<std::uint32_t>(2 + 2 * side + (i - 1)); };
    auto v4 = [&](std::size_t i) { return static_cast<std::uint32_t>(2 + 3 * side + (i - 1)); };

    g.terminals.push_back(0);
    g.terminals.push_back(1);
    for (std::size_t i = 1; i <= side; ++i) g.terminals.push_back(v1(i));
    for (std::size_t j = 1; j <= side; ++j) g.terminals.push_back(v4(j));

    std::uint64_t id = 0;
    for (std::size_t i = 1; i <= side; ++i) g.edges.push_back(Edge{v1(i), v2(i), 1, id++});
    for (std::size_t i = 1; i <= side; ++i) g.edges.push_back(Edge{v3(i), v4(i), 1, id++});
    for (std::size_t e = 1; e <= domain; ++e) {
        if (!out.member[e]) continue;
        auto [i, j] = out.position_of(e);
        g.edges.push_back(Edge{v2(i), v3(j), 1, id++});
    }
    return out;
}

/// The cut lower-bound graph G_v: N = C(k', k'/2) bits planted so that the
/// terminal cut TC(S_i) reads off bit i shifted by a fixed offset.
struct CutLbGadget {
    Graph graph;
    std::size_t k_prime = 0;
    std::size_t dimension = 0;               // N
    std::vector<std::uint8_t> planted;       // v
    std::vector<std::vector<std::uint32_t>> subsets;  // S_i as terminal indices of the q block

    // terminal order: s, q_1..q_k', t
    std::uint32_t term_s() const { return 0; }
    std::uint32_t term_t() const { return static_cast<std::uint32_t>(k_prime + 1); }

    TerminalCut cut_for(std::size_t i) const {
        TerminalCut cut;
        cut.a.push_back(term_s());
        for (std::uint32_t q : subsets[i]) cut.a.push_back(q);
        cut.b.push_back(term_t());
        return cut;
    }

    /// c = (k+1)N - 1 with k counting all terminals (k' + 2).
    std::uint64_t offset() const { return (k_prime + 3) * dimension - 1; }
};

/// C(k', k'/2): the number of planted bits a k'-gadget carries.
inline std::size_t cut_lb_dimension(std::size_t k_prime) {
    std::uint64_t num = 1, den = 1;
    for (std::uint64_t i = 0; i < k_prime / 2; ++i) {
        num *= k_prime - i;
        den *= i + 1;
    }
    return static_cast<std::size_t>(num / den);
}

inline CutLbGadget gen_cut_lb(std::size_t k_prime, const std::vector<std::uint8_t>& planted) {
    if (k_prime == 0 || k_prime % 2 != 0) throw Error("cut gadget needs an even positive k'");
    if (k_prime > 20) throw SizeLimitError("cut gadget capped at k' <= 20");
    CutLbGadget out;
    out.k_prime = k_prime;

    // all (k'/2)-subsets of the q block in colexicographic order, which is
    // exactly ascending bitmask order
    for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << k_prime); ++mask) {
        if (static_cast<std::size_t>(std::popcount(mask)) != k_prime / 2) continue;
        std::vector<std::uint32_t> subset;
        for (std::size_t b = 0; b < k_prime; ++b) {
            if (mask & (std::uint32_t{1} << b)) subset.push_back(static_cast<std::uint32_t>(1 + b));
        }
        out.subsets.push_back(std::move(subset));
    }
    out.dimension = out.subsets.size();
    if (planted.size() != out.dimension) {
        throw Error("planted vector must have one bit per " + std::to_string(k_prime / 2) + "-subset (" +
                    std::to_string(out.dimension) + ")");
    }
    out.planted = planted;

    const std::size_t n_subsets = out.dimension;
    Graph& g = out.graph;
    g.directed = false;
    // vertex ids: s=0, q_1..q_k' = 1..k', t = k'+1, u block, v block
    const std::uint32_t t = static_cast<std::uint32_t>(k_prime + 1);
    auto u_vertex = [&](std::size_t j) { return static_cast<std::uint32_t>(k_prime + 2 + (j - 1)); };
    auto v_vertex = [&](std::size_t i) { return static_cast<std::uint32_t>(2 * k_prime + 2 + (i - 1)); };
    g.n = static_cast<std::uint32_t>(2 * k_prime + 2 + n_subsets);
    g.terminals.push_back(0);
    for (std::size_t q = 1; q <= k_prime; ++q) g.terminals.push_back(static_cast<std::uint32_t>(q));
    g.terminals.push_back(t);

    // Note: s gets no direct (s, u_j) edges. With them, s's supply alone
    // saturates every edge incident on t and all N terminal cuts collapse to
    // the same value; the recovery property needs u_j fed only through q_j
    // and the unit v-side relays.
    const std::uint64_t N = n_subsets;
    std::uint64_t id = 0;
    for (std::size_t j = 1; j <= k_prime; ++j) {
        g.edges.push_back(Edge{static_cast<std::uint32_t>(j), u_vertex(j), N, id++});
    }
    for (std::size_t i = 1; i <= n_subsets; ++i) g.edges.push_back(Edge{v_vertex(i), t, 1, id++});
    std::uint64_t middle_edges = 0;
    for (std::size_t j = 1; j <= k_prime; ++j) {
        for (std::size_t i = 1; i <= n_subsets; ++i) {
            bool q_in_subset = false;
            for (std::uint32_t q : out.subsets[i - 1]) {
                if (q == j) q_in_subset = true;
            }
            if (!(out.planted[i - 1] == 1 || !q_in_subset)) continue;
            g.edges.push_back(Edge{u_vertex(j), v_vertex(i), 1, id++});
            g.edges.push_back(Edge{0, v_vertex(i), 1, id++});
            g.edges.push_back(Edge{u_vertex(j), t, 1, id++});
            ++middle_edges;
        }
    }
    // capacity kN - m with k the full terminal count k' + 2
    std::uint64_t k_total = k_prime + 2;
    g.edges.push_back(Edge{0, t, k_total * N - middle_edges, id++});
    return out;
}

/// Recover the planted bits by running every TC(S_i) through the supplied
/// cut evaluator and stripping the fixed offset.
inline std::vector<std::uint8_t> check_output_profile(
    const CutLbGadget& gadget, const std::function<std::uint64_t(const TerminalCut&)>& cut_value) {
    std::vector<std::uint8_t> recovered(gadget.dimension, 0);
    const std::uint64_t c = gadget.offset();
    for (std::size_t i = 0; i < gadget.dimension; ++i) {
        std::uint64_t value = cut_value(gadget.cut_for(i));
        if (value < c || value > c + 1) {
            throw Error("output profile entry " + std::to_string(i) + " = " + std::to_string(value) +
                        " is outside [c, c+1] for c = " + std::to_string(c));
        }
        recovered[i] = static_cast<std::uint8_t>(value - c);
    }
    return recovered;
}

}  // namespace dynsketch
