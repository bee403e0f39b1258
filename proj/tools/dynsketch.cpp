// dynsketch: build, query and verify dynamic graph sketches.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dynsketch/dynsketch.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitParse = 2;
constexpr int kExitVerification = 3;

struct VerificationFailure : dynsketch::Error {
    using Error::Error;
};

dynsketch::Graph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw dynsketch::Error("cannot open " + path);
    return dynsketch::parse_graph(in);
}

dynsketch::Query load_query(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw dynsketch::Error("cannot open " + path);
    return dynsketch::parse_query(in);
}

std::vector<std::size_t> parse_csv_sizes(const std::string& csv) {
    std::vector<std::size_t> out;
    std::istringstream in(csv);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stoull(item));
    }
    return out;
}

std::string format_distance(std::uint64_t d) {
    return d == dynsketch::kInfiniteDistance ? std::string("inf") : std::to_string(d);
}

std::vector<std::uint32_t> terminal_vertices(const dynsketch::Graph& g, const std::vector<std::uint32_t>& indices) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t i : indices) {
        if (i >= g.k()) throw dynsketch::InvalidCutError("cut terminal index out of range");
        out.push_back(g.terminals[i]);
    }
    return out;
}

// Empirical failure gate: delta plus three binomial standard deviations plus
// slack for tiny sample counts.
double failure_gate(double delta, std::size_t total) {
    if (total == 0) return delta;
    double t = static_cast<double>(total);
    return delta + 3.0 * std::sqrt(delta * (1.0 - delta) / t) + 2.0 / t;
}

struct BuildOptions {
    std::string problem;
    std::string input;
    std::string output;
    double delta = 0.01;
    std::uint64_t seed = 0;
    bool per_query_delta = false;
    std::uint64_t max_expanded = 1'000'000;
};

int run_build(const BuildOptions& opt) {
    dynsketch::Graph g = load_graph(opt.input);
    dynsketch::AnySketch sketch;
    if (opt.problem == "matching") {
        sketch = dynsketch::compress_matching(g, opt.delta, opt.seed);
    } else if (opt.problem == "cut") {
        sketch = dynsketch::compress_cut(g, opt.delta, opt.seed, !opt.per_query_delta, opt.max_expanded);
    } else if (opt.problem == "stconn") {
        sketch = dynsketch::compress_stconn(g, opt.delta, opt.seed, opt.max_expanded);
    } else if (opt.problem == "mst") {
        sketch = dynsketch::compress_mst(g);
    } else {
        sketch = dynsketch::compress_paths(g);
    }
    dynsketch::write_sketch_file(opt.output, sketch);
    std::vector<std::uint64_t> words = dynsketch::serialize_sketch(sketch);
    std::cout << opt.output << ": " << words.size() << " words (" << words.size() * 8 << " bytes)\n";
    return kExitOk;
}

struct QueryOptions {
    std::string input;
    std::string query_file;
    std::string cut_spec;
    bool components = false;
};

int run_query(const QueryOptions& opt) {
    dynsketch::AnySketch sketch = dynsketch::read_sketch_file(opt.input);
    dynsketch::Query q;
    if (!opt.query_file.empty()) q = load_query(opt.query_file);

    if (const auto* m = std::get_if<dynsketch::MatchingSketch>(&sketch)) {
        std::cout << dynsketch::extract_matching(*m, q) << "\n";
    } else if (const auto* c = std::get_if<dynsketch::CutSketch>(&sketch)) {
        if (opt.cut_spec.empty()) throw dynsketch::InvalidCutError("cut container needs --cut \"A:... B:...\"");
        std::cout << dynsketch::query_cut(*c, dynsketch::parse_cut_spec(opt.cut_spec)) << "\n";
    } else if (const auto* s = std::get_if<dynsketch::StconnSketch>(&sketch)) {
        std::cout << dynsketch::extract_stconn(*s, q) << "\n";
    } else if (const auto* m = std::get_if<dynsketch::MstSketch>(&sketch)) {
        dynsketch::MstAnswer a = dynsketch::extract_mst(*m, q);
        if (opt.components)
            std::cout << a.weight << " " << a.components << "\n";
        else
            std::cout << a.weight << "\n";
    } else if (const auto* p = std::get_if<dynsketch::PathSketch>(&sketch)) {
        std::cout << format_distance(dynsketch::extract_path(*p, q)) << "\n";
    }
    return kExitOk;
}

struct OracleOptions {
    std::string problem;
    std::string input;
    std::string query_file;
    std::string cut_spec;
};

int run_oracle(const OracleOptions& opt) {
    dynsketch::Graph g = load_graph(opt.input);
    dynsketch::Query q;
    if (!opt.query_file.empty()) q = load_query(opt.query_file);

    if (opt.problem == "matching") {
        std::cout << dynsketch::oracle_matching(dynsketch::apply_query(g, q)) << "\n";
    } else if (opt.problem == "cut") {
        if (opt.cut_spec.empty()) throw dynsketch::InvalidCutError("cut oracle needs --cut \"A:... B:...\"");
        dynsketch::TerminalCut cut = dynsketch::parse_cut_spec(opt.cut_spec);
        cut.validate(g.k());
        dynsketch::Graph dg = dynsketch::to_directed(g);
        std::cout << dynsketch::oracle_maxflow(dg, terminal_vertices(g, cut.a), terminal_vertices(g, cut.b))
                  << "\n";
    } else if (opt.problem == "stconn") {
        if (!g.source || !g.sink) throw dynsketch::Error("stconn oracle needs designated s and d vertices");
        dynsketch::Graph gq = dynsketch::apply_query(g, q);
        std::vector<std::uint32_t> a{*g.source}, b{*g.sink};
        std::cout << dynsketch::oracle_maxflow(gq, a, b) << "\n";
    } else if (opt.problem == "mst") {
        dynsketch::ForestWeight w = dynsketch::oracle_mst(dynsketch::apply_query(g, q));
        std::cout << w.weight << "\n";
    } else {
        if (!g.source || !g.sink) throw dynsketch::Error("path oracle needs designated s and d vertices");
        dynsketch::Graph gq = dynsketch::apply_path_query(g, q);
        std::cout << format_distance(dynsketch::oracle_shortest_path(gq, *g.source, *g.sink)) << "\n";
    }
    return kExitOk;
}

struct FixtureOptions {
    std::string name;
    std::string output;
    std::uint64_t domain = 9;
    std::string members;
    bool random_members = false;
    std::uint64_t k_prime = 2;
    std::string bits;
    bool random_bits = false;
    std::uint64_t seed = 0;
    std::string queries_out;
};

int run_fixture(const FixtureOptions& opt) {
    std::ostringstream graph_text;
    std::ostringstream queries_text;
    if (opt.name == "membership") {
        std::vector<std::size_t> members;
        if (opt.random_members) {
            dynsketch::Rng rng(opt.seed);
            for (std::size_t e = 1; e <= opt.domain; ++e) {
                if (rng.uniform_below(2) == 1) members.push_back(e);
            }
        } else if (!opt.members.empty()) {
            members = parse_csv_sizes(opt.members);
        }
        dynsketch::MembershipGadget gadget = dynsketch::gen_membership(opt.domain, members);
        dynsketch::format_graph(gadget.graph, graph_text);
        for (std::size_t e = 1; e <= gadget.domain; ++e) {
            dynsketch::Query q = gadget.query_for(e);
            queries_text << "# element " << e << " expects " << gadget.expected_matching(e) << "\n";
            for (const dynsketch::QueryEdge& qe : q.edges) queries_text << "q " << qe.i << " " << qe.j << "\n";
        }
    } else if (opt.name == "cutlb") {
        std::vector<std::uint8_t> bits;
        if (opt.random_bits) {
            dynsketch::Rng rng(opt.seed);
            bits.resize(dynsketch::cut_lb_dimension(opt.k_prime));
            for (auto& b : bits) b = static_cast<std::uint8_t>(rng.uniform_below(2));
        } else {
            for (char c : opt.bits) {
                if (c == '0' || c == '1') bits.push_back(static_cast<std::uint8_t>(c - '0'));
            }
        }
        dynsketch::CutLbGadget gadget = dynsketch::gen_cut_lb(opt.k_prime, bits);
        dynsketch::format_graph(gadget.graph, graph_text);
        for (std::size_t i = 0; i < gadget.dimension; ++i) {
            dynsketch::TerminalCut cut = gadget.cut_for(i);
            queries_text << "A:";
            for (std::size_t j = 0; j < cut.a.size(); ++j) queries_text << (j ? "," : "") << cut.a[j];
            queries_text << " B:";
            for (std::size_t j = 0; j < cut.b.size(); ++j) queries_text << (j ? "," : "") << cut.b[j];
            queries_text << "\n";
        }
    } else {
        throw dynsketch::Error("unknown fixture `" + opt.name + "`");
    }

    if (opt.output.empty()) {
        std::cout << graph_text.str();
    } else {
        std::ofstream out(opt.output);
        if (!out) throw dynsketch::Error("cannot open " + opt.output + " for writing");
        out << graph_text.str();
    }
    if (!opt.queries_out.empty()) {
        std::ofstream out(opt.queries_out);
        if (!out) throw dynsketch::Error("cannot open " + opt.queries_out + " for writing");
        out << queries_text.str();
    }
    return kExitOk;
}

struct VerifyOptions {
    std::string problem;
    std::size_t trials = 50;
    std::size_t seeds = 5;
    double delta = 0.01;
    std::uint32_t max_n = 10;
    std::uint32_t max_k = 3;
    std::uint64_t seed = 0;
};

int run_verify(const VerifyOptions& opt) {
    using namespace dynsketch;
    Rng corpus_rng(opt.seed);
    std::size_t total = 0, failures = 0;
    bool exact_problem = false;

    if (opt.problem == "matching") {
        for (std::size_t g_i = 0; g_i < opt.trials; ++g_i) {
            RandomGraphParams params;
            params.max_n = std::min(opt.max_n, 12u);
            params.max_k = std::min(opt.max_k, 4u);
            Graph g = random_graph(corpus_rng, params);
            auto pairs = unordered_pairs(g.k());
            std::vector<std::size_t> expected;
            for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs.size()); ++mask) {
                expected.push_back(oracle_matching(apply_query(g, query_from_mask(pairs, mask))));
            }
            for (std::size_t s_i = 0; s_i < opt.seeds; ++s_i) {
                MatchingSketch sk = compress_matching(g, opt.delta, corpus_rng.next());
                for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs.size()); ++mask) {
                    ++total;
                    if (extract_matching(sk, query_from_mask(pairs, mask)) != expected[mask]) ++failures;
                }
            }
        }
    } else if (opt.problem == "cut") {
        for (std::size_t g_i = 0; g_i < opt.trials; ++g_i) {
            RandomGraphParams params;
            params.directed = true;
            params.min_n = 3;
            params.max_n = std::min(opt.max_n, 8u);
            params.min_k = 2;
            params.max_k = std::min(std::max(opt.max_k, 2u), 3u);
            params.max_weight = 2;
            Graph g = random_graph(corpus_rng, params);
            Graph dg = to_directed(g);
            if (terminal_capacity(dg) == 0) continue;
            for (std::size_t s_i = 0; s_i < opt.seeds; ++s_i) {
                CutSketch sk = compress_cut(g, opt.delta, corpus_rng.next());
                std::size_t k = g.k();
                for (std::uint64_t code = 0; code < std::uint64_t(std::pow(3.0, double(k))); ++code) {
                    TerminalCut cut;
                    std::uint64_t c = code;
                    for (std::size_t t = 0; t < k; ++t, c /= 3) {
                        if (c % 3 == 1) cut.a.push_back(static_cast<std::uint32_t>(t));
                        if (c % 3 == 2) cut.b.push_back(static_cast<std::uint32_t>(t));
                    }
                    if (cut.a.empty() || cut.b.empty()) continue;
                    ++total;
                    std::uint64_t want = oracle_maxflow(dg, terminal_vertices(g, cut.a), terminal_vertices(g, cut.b));
                    if (query_cut(sk, cut) != want) ++failures;
                }
            }
        }
    } else if (opt.problem == "stconn") {
        for (std::size_t g_i = 0; g_i < opt.trials; ++g_i) {
            RandomGraphParams params;
            params.directed = true;
            params.min_n = 3;
            params.max_n = std::min(opt.max_n, 10u);
            params.max_k = std::min(opt.max_k, 2u);
            params.with_st = true;
            Graph g = random_graph(corpus_rng, params);
            auto pairs = ordered_pairs(g.k());
            for (std::size_t s_i = 0; s_i < opt.seeds; ++s_i) {
                StconnSketch sk = compress_stconn(g, opt.delta, corpus_rng.next());
                for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs.size()); ++mask) {
                    Query q = query_from_mask(pairs, mask);
                    Graph gq = apply_query(g, q);
                    std::vector<std::uint32_t> a{*g.source}, b{*g.sink};
                    ++total;
                    if (extract_stconn(sk, q) != oracle_maxflow(gq, a, b)) ++failures;
                }
            }
        }
    } else if (opt.problem == "mst") {
        exact_problem = true;
        for (std::size_t g_i = 0; g_i < opt.trials; ++g_i) {
            RandomGraphParams params;
            params.max_n = std::min(opt.max_n, 30u);
            params.max_k = std::min(opt.max_k, 5u);
            params.max_weight = 20;
            Graph g = random_graph(corpus_rng, params);
            MstSketch sk = compress_mst(g);
            for (std::size_t q_i = 0; q_i < 20; ++q_i) {
                Query q = random_query(corpus_rng, g.k(), false, 0.4, 20);
                ++total;
                if (extract_mst(sk, q).weight != oracle_mst(apply_query(g, q)).weight) ++failures;
            }
        }
    } else if (opt.problem == "path") {
        exact_problem = true;
        for (std::size_t g_i = 0; g_i < opt.trials; ++g_i) {
            RandomGraphParams params;
            params.directed = true;
            params.min_n = 2;
            params.max_n = std::min(opt.max_n, 30u);
            params.max_k = opt.max_k;
            params.max_weight = 20;
            params.with_st = true;
            Graph g = random_graph(corpus_rng, params);
            PathSketch sk = compress_paths(g);
            for (std::size_t q_i = 0; q_i < 20; ++q_i) {
                Query q = random_query(corpus_rng, g.k(), g.directed, 0.4, 20);
                Graph gq = apply_query(g, q);
                ++total;
                if (extract_path(sk, q) != oracle_shortest_path(gq, *g.source, *g.sink)) ++failures;
            }
        }
    } else if (opt.problem == "membership") {
        for (std::size_t t_i = 0; t_i < opt.trials; ++t_i) {
            std::vector<std::size_t> members;
            for (std::size_t e = 1; e <= 9; ++e) {
                if (corpus_rng.uniform_below(2) == 1) members.push_back(e);
            }
            MembershipGadget gadget = gen_membership(9, members);
            MatchingSketch sk = compress_matching(gadget.graph, opt.delta, corpus_rng.next());
            for (std::size_t e = 1; e <= 9; ++e) {
                Query q = gadget.query_for(e);
                std::size_t want = gadget.expected_matching(e);
                if (oracle_matching(apply_query(gadget.graph, q)) != want) {
                    throw VerificationFailure("membership oracle disagrees with the gadget prediction");
                }
                ++total;
                if (extract_matching(sk, q) != want) ++failures;
            }
        }
    } else if (opt.problem == "cutlb") {
        std::uint64_t kp = std::max<std::uint32_t>(2, opt.max_k & ~1u);
        for (std::size_t t_i = 0; t_i < opt.trials; ++t_i) {
            std::vector<std::uint8_t> bits(cut_lb_dimension(kp));
            for (auto& b : bits) b = static_cast<std::uint8_t>(corpus_rng.uniform_below(2));
            CutLbGadget gadget = gen_cut_lb(kp, bits);
            auto oracle_value = [&](const TerminalCut& cut) {
                return oracle_maxflow(to_directed(gadget.graph), terminal_vertices(gadget.graph, cut.a),
                                      terminal_vertices(gadget.graph, cut.b));
            };
            if (check_output_profile(gadget, oracle_value) != bits) {
                throw VerificationFailure("cut gadget oracle profile differs from the planted bits");
            }
            CutSketch sk = compress_cut(gadget.graph, opt.delta, corpus_rng.next());
            auto sketch_value = [&](const TerminalCut& cut) { return query_cut(sk, cut); };
            for (std::size_t i = 0; i < gadget.dimension; ++i) {
                ++total;
                if (sketch_value(gadget.cut_for(i)) != oracle_value(gadget.cut_for(i))) ++failures;
            }
        }
    } else {
        throw dynsketch::Error("unknown verify problem `" + opt.problem + "`");
    }

    double rate = total == 0 ? 0.0 : static_cast<double>(failures) / static_cast<double>(total);
    double gate = exact_problem ? 0.0 : failure_gate(opt.delta, total);
    std::cout << opt.problem << ": checks=" << total << " failures=" << failures << " rate=" << rate
              << " gate=" << gate << "\n";
    if (total == 0) throw VerificationFailure("verification corpus produced no checks");
    if (exact_problem ? failures > 0 : rate > gate) {
        throw VerificationFailure("failure rate exceeds the gate");
    }
    std::cout << "OK\n";
    return kExitOk;
}

int run_size(const std::string& input) {
    dynsketch::AnySketch sketch = dynsketch::read_sketch_file(input);
    std::vector<std::uint64_t> words = dynsketch::serialize_sketch(sketch);
    std::cout << "total: " << words.size() << " words (" << words.size() * 8 << " bytes)\n";
    std::cout << "header: " << dynsketch::kSketchHeaderWords << " words\n";
    if (const auto* m = std::get_if<dynsketch::MatchingSketch>(&sketch)) {
        std::cout << "payload: 4 * " << m->k << "^2 = " << 4 * m->k * m->k << " field words\n";
    } else if (const auto* c = std::get_if<dynsketch::CutSketch>(&sketch)) {
        std::cout << "inner terminals: " << c->inner.k << "\n";
        std::cout << "inner matrices: " << 4 * c->inner.k * c->inner.k << " field words\n";
    } else if (const auto* s = std::get_if<dynsketch::StconnSketch>(&sketch)) {
        std::cout << "inner terminals: " << s->inner.k << "\n";
        std::cout << "inner matrices: " << 4 * s->inner.k * s->inner.k << " field words\n";
    } else if (const auto* m = std::get_if<dynsketch::MstSketch>(&sketch)) {
        std::cout << "forest: " << m->hprime.n << " vertices, " << m->hprime.edges.size() << " edges\n";
    } else if (const auto* p = std::get_if<dynsketch::PathSketch>(&sketch)) {
        std::cout << "table: " << p->k << "^2 = " << p->k * p->k << " words\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dynamic graph sketches: compress once, answer terminal-edge insertion queries forever"};
    app.require_subcommand(1);

    BuildOptions build_opt;
    CLI::App* build = app.add_subcommand("build", "compress a graph into a sketch container");
    build->add_option("--problem", build_opt.problem, "matching|cut|stconn|mst|path")
        ->required()
        ->check(CLI::IsMember({"matching", "cut", "stconn", "mst", "path"}));
    build->add_option("-i,--input", build_opt.input, "graph file")->required();
    build->add_option("-o,--output", build_opt.output, "container file")->required();
    build->add_option("--delta", build_opt.delta, "per-query failure probability");
    build->add_option("--seed", build_opt.seed, "RNG seed")->envname("DYNSKETCH_SEED");
    build->add_flag("--per-query-delta", build_opt.per_query_delta,
                    "cut: skip the 3^k amplification and spend delta per query");
    build->add_option("--max-expanded-edges", build_opt.max_expanded, "capacity expansion bound");

    QueryOptions query_opt;
    CLI::App* query = app.add_subcommand("query", "extract an answer from a sketch container");
    query->add_option("-i,--input", query_opt.input, "container file")->required();
    query->add_option("-q,--query", query_opt.query_file, "query file (`q i j [w]` lines)");
    query->add_option("--cut", query_opt.cut_spec, "terminal cut, e.g. \"A:0,2 B:1\"");
    query->add_flag("--components", query_opt.components, "mst: also print the component count");

    OracleOptions oracle_opt;
    CLI::App* oracle = app.add_subcommand("oracle", "brute-force ground truth on the graph itself");
    oracle->add_option("--problem", oracle_opt.problem, "matching|cut|stconn|mst|path")
        ->required()
        ->check(CLI::IsMember({"matching", "cut", "stconn", "mst", "path"}));
    oracle->add_option("-i,--input", oracle_opt.input, "graph file")->required();
    oracle->add_option("-q,--query", oracle_opt.query_file, "query file");
    oracle->add_option("--cut", oracle_opt.cut_spec, "terminal cut spec");

    FixtureOptions fixture_opt;
    CLI::App* fixture = app.add_subcommand("fixture", "emit a lower-bound gadget graph");
    fixture->add_option("--name", fixture_opt.name, "membership|cutlb")
        ->required()
        ->check(CLI::IsMember({"membership", "cutlb"}));
    fixture->add_option("-o,--output", fixture_opt.output, "graph file (stdout when omitted)");
    fixture->add_option("--domain", fixture_opt.domain, "membership: N (perfect square)");
    fixture->add_option("--members", fixture_opt.members, "membership: comma-separated 1-based elements of S");
    fixture->add_flag("--random-members", fixture_opt.random_members, "membership: sample S from --seed");
    fixture->add_option("--kprime", fixture_opt.k_prime, "cutlb: k' (even)");
    fixture->add_option("--bits", fixture_opt.bits, "cutlb: planted bit string");
    fixture->add_flag("--random-bits", fixture_opt.random_bits, "cutlb: sample bits from --seed");
    fixture->add_option("--seed", fixture_opt.seed, "seed for random fixture content")->envname("DYNSKETCH_SEED");
    fixture->add_option("--queries-out", fixture_opt.queries_out, "also write the gadget's query/cut list");

    VerifyOptions verify_opt;
    CLI::App* verify = app.add_subcommand("verify", "sketches vs. oracles over a random corpus");
    verify->add_option("--problem", verify_opt.problem, "matching|cut|stconn|mst|path|membership|cutlb")
        ->required()
        ->check(CLI::IsMember({"matching", "cut", "stconn", "mst", "path", "membership", "cutlb"}));
    verify->add_option("--trials", verify_opt.trials, "number of random instances");
    verify->add_option("--seeds", verify_opt.seeds, "sketch seeds per instance");
    verify->add_option("--delta", verify_opt.delta, "per-query failure probability");
    verify->add_option("--max-n", verify_opt.max_n, "vertex cap");
    verify->add_option("--max-k", verify_opt.max_k, "terminal cap");
    verify->add_option("--seed", verify_opt.seed, "corpus seed")->envname("DYNSKETCH_SEED");

    std::string size_input;
    CLI::App* size = app.add_subcommand("size", "report a container's size breakdown");
    size->add_option("-i,--input", size_input, "container file")->required();

    try {
        app.parse(argc, argv);
        if (build->parsed()) return run_build(build_opt);
        if (query->parsed()) return run_query(query_opt);
        if (oracle->parsed()) return run_oracle(oracle_opt);
        if (fixture->parsed()) return run_fixture(fixture_opt);
        if (verify->parsed()) return run_verify(verify_opt);
        if (size->parsed()) return run_size(size_input);
        return kExitUsage;
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    } catch (const VerificationFailure& e) {
        std::cerr << "verification failed: " << e.what() << "\n";
        return kExitVerification;
    } catch (const dynsketch::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const dynsketch::ContainerFormatError& e) {
        std::cerr << "container error: " << e.what() << "\n";
        return kExitParse;
    } catch (const dynsketch::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
