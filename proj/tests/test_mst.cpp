#include <catch2/catch_amalgamated.hpp>

#include <queue>
#include <sstream>

#include "dynsketch/mst.hpp"
#include "dynsketch/oracles.hpp"
#include "dynsketch/random_graphs.hpp"

using namespace dynsketch;

namespace {

Graph parse(const std::string& text) {
    std::istringstream in(text);
    return parse_graph(in);
}

// max edge key on the tree path between two vertices; nullopt when disconnected
std::optional<WeightKey> path_max(const Graph& forest, std::uint32_t from, std::uint32_t to) {
    std::vector<std::vector<std::size_t>> adj(forest.n);
    for (std::size_t i = 0; i < forest.edges.size(); ++i) {
        adj[forest.edges[i].u].push_back(i);
        adj[forest.edges[i].v].push_back(i);
    }
    std::vector<std::size_t> via(forest.n, SIZE_MAX);
    std::vector<bool> seen(forest.n, false);
    std::queue<std::uint32_t> bfs;
    bfs.push(from);
    seen[from] = true;
    while (!bfs.empty()) {
        std::uint32_t v = bfs.front();
        bfs.pop();
        for (std::size_t ei : adj[v]) {
            const Edge& e = forest.edges[ei];
            std::uint32_t next = e.u == v ? e.v : e.u;
            if (seen[next]) continue;
            seen[next] = true;
            via[next] = ei;
            bfs.push(next);
        }
    }
    if (!seen[to]) return std::nullopt;
    std::optional<WeightKey> best;
    for (std::uint32_t v = to; v != from;) {
        const Edge& e = forest.edges[via[v]];
        WeightKey key = edge_key(e);
        if (!best || key > *best) best = key;
        v = e.u == v ? e.v : e.u;
    }
    return best;
}

}  // namespace

TEST_CASE("terminal star is incompressible") {
    // hub has degree k >= 3, nothing prunes or contracts
    Graph g = parse("4 3 0\nt 0\nt 1\nt 2\ne 0 3 2\ne 1 3 4\ne 2 3 6\n");
    MstSketch s = compress_mst(g);
    CHECK(s.hprime.n == 4);
    CHECK(s.hprime.edges.size() == 3);
    CHECK(s.weight_offset == 0);
    CHECK(extract_mst(s, Query{}).weight == 12);
}

TEST_CASE("clean path contracts to its heaviest edge") {
    Graph g = parse("4 2 0\nt 0\nt 3\ne 0 1 1\ne 1 2 5\ne 2 3 2\n");
    MstSketch s = compress_mst(g);
    CHECK(s.hprime.n == 2);
    REQUIRE(s.hprime.edges.size() == 1);
    CHECK(s.hprime.edges[0].weight == 5);
    CHECK(s.weight_offset == 3);

    SECTION("empty query returns the spanning tree weight") {
        MstAnswer a = extract_mst(s, Query{});
        CHECK(a.weight == 8);
        CHECK(a.components == 1);
    }

    SECTION("a lighter query edge displaces the summary edge") {
        Query q;
        q.edges.push_back(QueryEdge{0, 1, 4});
        CHECK(extract_mst(s, q).weight == 7);
        CHECK(oracle_mst(apply_query(g, q)).weight == 7);
    }
}

TEST_CASE("dangling non-terminal trees fold into the offset") {
    Graph g = parse("5 2 0\nt 0\nt 1\ne 0 1 3\ne 1 2 7\ne 2 3 1\ne 2 4 2\n");
    MstSketch s = compress_mst(g);
    CHECK(s.hprime.n == 2);
    CHECK(s.hprime.edges.size() == 1);
    CHECK(s.weight_offset == 10);
    CHECK(extract_mst(s, Query{}).weight == 13);
}

TEST_CASE("isolated terminals survive as sketch vertices") {
    Graph g = parse("4 3 0\nt 0\nt 1\nt 3\ne 0 1 5\n");
    MstSketch s = compress_mst(g);
    CHECK(s.hprime.n == 3);
    MstAnswer empty = extract_mst(s, Query{});
    CHECK(empty.weight == 5);
    CHECK(empty.components == 2);
    Query join;
    join.edges.push_back(QueryEdge{1, 2, 4});
    MstAnswer joined = extract_mst(s, join);
    CHECK(joined.weight == 9);
    CHECK(joined.components == 1);
}

TEST_CASE("compression invariants on random graphs") {
    Rng rng(73);
    for (int trial = 0; trial < 40; ++trial) {
        RandomGraphParams params;
        params.min_n = 2;
        params.max_n = 30;
        params.max_k = 5;
        params.max_weight = 12;
        params.edge_probability = 0.25;
        Graph g = random_graph(rng, params);
        MstSketch s = compress_mst(g);
        std::size_t k = g.k();
        CHECK(s.hprime.n <= 4 * k);
        // no surviving non-terminal may have degree <= 2
        std::vector<std::size_t> degree(s.hprime.n, 0);
        for (const Edge& e : s.hprime.edges) {
            ++degree[e.u];
            ++degree[e.v];
        }
        for (std::uint32_t v = static_cast<std::uint32_t>(k); v < s.hprime.n; ++v) CHECK(degree[v] >= 3);

        // compressing the sketch forest again is a no-op
        MstSketch twice = compress_mst(s.hprime);
        CHECK(twice.weight_offset == 0);
        CHECK(twice.hprime.n == s.hprime.n);
        CHECK(twice.hprime.edges.size() == s.hprime.edges.size());

        // weight answers are exact, both for empty and random queries
        CHECK(extract_mst(s, Query{}).weight == oracle_mst(g).weight);
        for (int q_i = 0; q_i < 5; ++q_i) {
            Query q = random_query(rng, k, false, 0.5, 12);
            CHECK(extract_mst(s, q).weight == oracle_mst(apply_query(g, q)).weight);
        }
    }
}

TEST_CASE("single-edge forest updates") {
    Graph forest = parse("3 1 0\nt 0\ne 0 1 2\ne 1 2 3\n");

    SECTION("an edge heavier than the whole cycle is itself discarded") {
        Graph out = forest;
        mst_insert(out, Edge{0, 2, 9, 10});
        CHECK(out.edges.size() == 2);
        CHECK(oracle_mst(out).weight == 5);
    }

    SECTION("a bridge between trees is always kept") {
        Graph two = parse("4 1 0\nt 0\ne 0 1 2\ne 2 3 3\n");
        Graph out = two;
        mst_insert(out, Edge{1, 2, 50, 10});
        CHECK(out.edges.size() == 3);
    }

    SECTION("a light edge evicts the heaviest cycle edge") {
        Graph out = forest;
        mst_insert(out, Edge{0, 2, 1, 10});
        CHECK(out.edges.size() == 2);
        CHECK(oracle_mst(out).weight == 3);
    }
}

TEST_CASE("incremental updates agree with Kruskal") {
    Rng rng(79);
    for (int trial = 0; trial < 30; ++trial) {
        RandomGraphParams params;
        params.max_n = 14;
        params.max_k = 4;
        params.max_weight = 9;
        Graph g = random_graph(rng, params);
        std::vector<Edge> base = kruskal_forest(g);
        Graph forest;
        forest.n = g.n;
        forest.terminals = g.terminals;
        forest.edges = base;

        std::vector<Edge> inserts;
        std::uint64_t id = g.next_edge_id();
        for (int i = 0; i < 4; ++i) {
            std::uint32_t u = static_cast<std::uint32_t>(rng.uniform_below(g.n));
            std::uint32_t v = static_cast<std::uint32_t>(rng.uniform_below(g.n));
            if (u == v) continue;
            inserts.push_back(Edge{u, v, 1 + rng.uniform_below(9), id++});
        }
        Graph updated = mst_algorithm(forest, inserts);

        Graph reference = forest;
        for (const Edge& e : inserts) reference.edges.push_back(e);
        CHECK(oracle_mst(updated).weight == oracle_mst(reference).weight);
        CHECK(updated.edges.size() == kruskal_forest(reference).size());
    }
}

TEST_CASE("every sketch edge summarizes a forest path, step by step") {
    Rng rng(83);
    for (int trial = 0; trial < 15; ++trial) {
        RandomGraphParams params;
        params.min_n = 3;
        params.max_n = 16;
        params.max_k = 4;
        params.max_weight = 10;
        params.edge_probability = 0.3;
        Graph g = random_graph(rng, params);
        MstCompression tr = compress_mst_traced(g);

        Graph full;  // H in G's vertex space
        full.n = g.n;
        full.terminals = g.terminals;
        full.edges = tr.forest;
        Graph compact = tr.sketch.hprime;  // H' in sketch space

        std::uint64_t ord = tr.sketch.ordinal_base;
        for (int step = 0; step < 4; ++step) {
            std::uint32_t i = static_cast<std::uint32_t>(rng.uniform_below(g.k()));
            std::uint32_t j = static_cast<std::uint32_t>(rng.uniform_below(g.k()));
            if (i == j) continue;
            std::uint64_t w = 1 + rng.uniform_below(10);
            mst_insert(full, Edge{g.terminals[i], g.terminals[j], w, ord});
            mst_insert(compact, Edge{i, j, w, ord});
            ++ord;

            for (const Edge& e : compact.edges) {
                auto summary = path_max(full, tr.original_vertex[e.u], tr.original_vertex[e.v]);
                REQUIRE(summary.has_value());
                CHECK(summary->weight == e.weight);
                CHECK(summary->ordinal == e.id);
            }
        }
    }
}

TEST_CASE("degenerate inputs") {
    CHECK_THROWS_AS(compress_mst(parse("2 0 0\ne 0 1 1\n")), BuildError);
    Graph directed = parse("2 1 1\nt 0\ne 0 1 1\n");
    CHECK_THROWS_AS(compress_mst(directed), BuildError);
    MstSketch s = compress_mst(parse("3 2 0\nt 0\nt 2\ne 0 1 4\ne 1 2 4\n"));
    Query bad;
    bad.edges.push_back(QueryEdge{0, 0, 1});
    CHECK_THROWS_AS(extract_mst(s, bad), InvalidQueryError);
}
