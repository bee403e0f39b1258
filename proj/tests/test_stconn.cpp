#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "dynsketch/container.hpp"
#include "dynsketch/oracles.hpp"
#include "dynsketch/random_graphs.hpp"
#include "dynsketch/stconn.hpp"

using namespace dynsketch;

namespace {

Graph parse(const std::string& text) {
    std::istringstream in(text);
    return parse_graph(in);
}

std::uint64_t st_oracle(const Graph& g, const Query& q) {
    Graph gq = apply_query(g, q);
    std::vector<std::uint32_t> a{*g.source}, b{*g.sink};
    return oracle_maxflow(gq, a, b);
}

}  // namespace

TEST_CASE("normalization strips backward edges at the endpoints") {
    SECTION("already normal graphs pass through") {
        Graph g = parse("4 1 1\nt 1\ns 0\nd 3\ne 0 1 1\ne 1 3 1\n");
        Graph norm = normalize_st(g);
        CHECK(norm.n == g.n);
        CHECK(norm.edges.size() == g.edges.size());
        CHECK(*norm.source == 0);
        CHECK(*norm.sink == 3);
    }

    SECTION("incoming edges of s are dropped without changing the flow") {
        Graph g = parse("4 1 1\nt 1\ns 0\nd 3\ne 0 1 1\ne 1 3 1\ne 1 0 1\n");
        Graph norm = normalize_st(g);
        CHECK(norm.edges.size() == 2);
        std::vector<std::uint32_t> a{*g.source}, b{*g.sink};
        CHECK(oracle_maxflow(g, a, b) == oracle_maxflow(norm, a, b));
    }

    SECTION("a terminal source gets the two-hop fan") {
        Graph g = parse("3 1 1\nt 0\ns 0\nd 2\ne 0 1 1\ne 0 2 1\ne 1 2 1\n");
        Graph norm = normalize_st(g);
        // s' plus two relay vertices, four new edges
        CHECK(norm.n == g.n + 3);
        CHECK(norm.edges.size() == g.edges.size() + 4);
        CHECK(*norm.source != *g.source);
        std::vector<std::uint32_t> a0{*g.source}, b0{*g.sink};
        std::vector<std::uint32_t> a1{*norm.source}, b1{*norm.sink};
        CHECK(oracle_maxflow(g, a0, b0) == oracle_maxflow(norm, a1, b1));
    }
}

TEST_CASE("degenerate connectivity builds are rejected") {
    CHECK_THROWS_AS(compress_stconn(parse("3 0 1\ns 0\nd 2\ne 0 2 1\n"), 0.01, 1), BuildError);  // k = 0
    CHECK_THROWS_AS(compress_stconn(parse("3 1 1\nt 1\ne 0 2 1\n"), 0.01, 1), BuildError);       // no s/t
    CHECK_THROWS_AS(compress_stconn(parse("3 1 0\nt 1\ns 0\nd 2\ne 0 2 1\n"), 0.01, 1), BuildError);  // undirected
}

TEST_CASE("single s-t edge with a bystander terminal") {
    Graph g = parse("3 1 1\nt 2\ns 0\nd 1\ne 0 1 1\n");
    StconnSketch s = compress_stconn(g, 0.01, 3);
    CHECK(s.pair_count() == 0);
    CHECK(extract_stconn(s, Query{}) == 1);
}

TEST_CASE("relay through a terminal appears only when queried in") {
    // s -> q1, q2 -> t: connectivity needs the (q1, q2) query edge
    Graph g = parse("4 2 1\nt 1\nt 2\ns 0\nd 3\ne 0 1 1\ne 2 3 1\n");
    StconnSketch s = compress_stconn(g, 0.01, 7);
    CHECK(s.pair_count() == 2);
    CHECK(extract_stconn(s, Query{}) == 0);
    Query forward;
    forward.edges.push_back(QueryEdge{0, 1, 1});
    CHECK(extract_stconn(s, forward) == 1);
    Query backward;
    backward.edges.push_back(QueryEdge{1, 0, 1});
    CHECK(extract_stconn(s, backward) == 0);
}

TEST_CASE("zero-connectivity gadgets sit exactly on the base matching") {
    // interior edges exist but s and t see nothing: every answer must be 0,
    // which pins nu(G'^Q') to the m + 2|Q_all| - |Q| accounting exactly
    Graph g = parse("6 2 1\nt 2\nt 3\ns 0\nd 1\ne 2 4 1\ne 4 3 1\ne 5 2 1\n");
    StconnSketch s = compress_stconn(g, 0.001, 11);
    CHECK(s.matched_base == 3);
    auto pairs = ordered_pairs(2);
    for (std::uint64_t mask = 0; mask < 4; ++mask) {
        CHECK(extract_stconn(s, query_from_mask(pairs, mask)) == 0);
    }
}

TEST_CASE("exhaustive queries agree with the flow oracle") {
    Rng rng(67);
    std::size_t total = 0, failures = 0;
    for (int trial = 0; trial < 12; ++trial) {
        RandomGraphParams params;
        params.directed = true;
        params.min_n = 3;
        params.max_n = 8;
        params.max_k = 2;
        params.with_st = true;
        params.edge_probability = 0.4;
        Graph g = random_graph(rng, params);
        StconnSketch s = compress_stconn(g, 0.05, rng.next());
        auto pairs = ordered_pairs(g.k());
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs.size()); ++mask) {
            Query q = query_from_mask(pairs, mask);
            ++total;
            if (extract_stconn(s, q) != st_oracle(g, q)) ++failures;
        }
    }
    REQUIRE(total > 0);
    CHECK(static_cast<double>(failures) <= std::max(2.0, 0.05 * static_cast<double>(total)));
}

TEST_CASE("three terminals exercise the full slot indexing") {
    // s -> q1, q2 -> q3 (static), q3 -> t: connectivity appears once the
    // (q1, q2) slot is switched on
    Graph g = parse("6 3 1\nt 1\nt 2\nt 3\ns 0\nd 4\ne 0 1 1\ne 2 3 1\ne 3 4 1\n");
    StconnSketch s = compress_stconn(g, 0.01, 23);
    CHECK(s.pair_count() == 6);
    auto pairs = ordered_pairs(3);
    Rng rng(29);
    std::vector<std::uint64_t> masks{0, 1, 5, 9, 63, rng.uniform_below(64), rng.uniform_below(64)};
    for (std::uint64_t mask : masks) {
        Query q = query_from_mask(pairs, mask);
        CHECK(extract_stconn(s, q) == st_oracle(g, q));
    }
}

TEST_CASE("answers are monotone in the query when correct") {
    Rng rng(71);
    std::size_t violations = 0;
    for (int trial = 0; trial < 20; ++trial) {
        RandomGraphParams params;
        params.directed = true;
        params.min_n = 3;
        params.max_n = 8;
        params.max_k = 2;
        params.with_st = true;
        params.edge_probability = 0.5;
        Graph g = random_graph(rng, params);
        StconnSketch s = compress_stconn(g, 0.001, rng.next());
        auto pairs = ordered_pairs(g.k());
        if (pairs.empty()) continue;
        std::uint64_t full = (std::uint64_t{1} << pairs.size()) - 1;
        std::uint64_t sub = rng.uniform_below(full + 1);
        std::uint64_t super = sub | rng.uniform_below(full + 1);
        if (extract_stconn(s, query_from_mask(pairs, sub)) > extract_stconn(s, query_from_mask(pairs, super))) {
            ++violations;
        }
    }
    CHECK(violations <= 2);
}

TEST_CASE("capacitated edges are expanded before sketching") {
    Graph g = parse("2 1 1\nt 0\ns 0\nd 1\ne 0 1 3\n");
    // s is the terminal here, so normalization also splices in the fan
    StconnSketch s = compress_stconn(g, 0.01, 13);
    CHECK(extract_stconn(s, Query{}) == 3);
}

TEST_CASE("inner sketch size is the closed-form k^4 bound") {
    Graph g = parse("4 2 1\nt 1\nt 2\ns 0\nd 3\ne 0 1 1\ne 2 3 1\n");
    StconnSketch s = compress_stconn(g, 0.01, 17);
    std::size_t tprime = 4 * 2 * (2 - 1);  // 4 k (k-1)
    CHECK(s.inner.k == tprime);
    CHECK(sketch_size_words(s.inner) == 4 * tprime * tprime + kSketchHeaderWords);
}

TEST_CASE("ordered query validation") {
    Graph g = parse("4 2 1\nt 1\nt 2\ns 0\nd 3\ne 0 1 1\ne 2 3 1\n");
    StconnSketch s = compress_stconn(g, 0.01, 19);
    Query both;
    both.edges.push_back(QueryEdge{0, 1, 1});
    both.edges.push_back(QueryEdge{1, 0, 1});
    CHECK_NOTHROW(extract_stconn(s, both));  // ordered pairs: both directions are distinct
    Query dup;
    dup.edges.push_back(QueryEdge{0, 1, 1});
    dup.edges.push_back(QueryEdge{0, 1, 1});
    CHECK_THROWS_AS(extract_stconn(s, dup), InvalidQueryError);
    Query self;
    self.edges.push_back(QueryEdge{0, 0, 1});
    CHECK_THROWS_AS(extract_stconn(s, self), InvalidQueryError);
}
