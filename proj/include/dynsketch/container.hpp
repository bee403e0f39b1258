#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <variant>
#include <vector>

#include "dynsketch/cut.hpp"
#include "dynsketch/errors.hpp"
#include "dynsketch/matching.hpp"
#include "dynsketch/mst.hpp"
#include "dynsketch/path.hpp"
#include "dynsketch/stconn.hpp"

namespace dynsketch {

// Container layout, little-endian 64-bit words:
//   word 0   "DSK1" | format version << 32
//   word 1   problem tag ("MAT1", "CUT1", "STC1", "MST1", "PTH1") | flags << 32
//   word 2   k (terminal count; table size for the path sketch)
//   word 3   field prime (0 for the deterministic sketches)
//   word 4   seed
//   word 5   r (rank of the evaluated non-terminal block, where applicable)
//   then the per-problem payload.

inline constexpr std::uint32_t kContainerVersion = 1;

inline constexpr std::uint32_t fourcc(const char (&s)[5]) {
    return static_cast<std::uint32_t>(static_cast<unsigned char>(s[0])) |
           static_cast<std::uint32_t>(static_cast<unsigned char>(s[1])) << 8 |
           static_cast<std::uint32_t>(static_cast<unsigned char>(s[2])) << 16 |
           static_cast<std::uint32_t>(static_cast<unsigned char>(s[3])) << 24;
}

inline constexpr std::uint32_t kMagic = fourcc("DSK1");
inline constexpr std::uint32_t kTagMatching = fourcc("MAT1");
inline constexpr std::uint32_t kTagCut = fourcc("CUT1");
inline constexpr std::uint32_t kTagStconn = fourcc("STC1");
inline constexpr std::uint32_t kTagMst = fourcc("MST1");
inline constexpr std::uint32_t kTagPath = fourcc("PTH1");

using AnySketch = std::variant<MatchingSketch, CutSketch, StconnSketch, MstSketch, PathSketch>;

inline std::uint32_t sketch_tag(const AnySketch& s) {
    switch (s.index()) {
        case 0: return kTagMatching;
        case 1: return kTagCut;
        case 2: return kTagStconn;
        case 3: return kTagMst;
        default: return kTagPath;
    }
}

inline std::string tag_name(std::uint32_t tag) {
    std::string name(4, ' ');
    for (int i = 0; i < 4; ++i) name[static_cast<std::size_t>(i)] = static_cast<char>((tag >> (8 * i)) & 0xff);
    return name;
}

namespace detail {

class WordReader {
public:
    explicit WordReader(const std::vector<std::uint64_t>& words) : words_(words) {}

    std::uint64_t next() {
        if (pos_ >= words_.size()) throw ContainerFormatError("container truncated");
        return words_[pos_++];
    }

    bool done() const { return pos_ == words_.size(); }

private:
    const std::vector<std::uint64_t>& words_;
    std::size_t pos_ = 0;
};

inline void put_matrix(std::vector<std::uint64_t>& words, const ZpMatrix& m) {
    words.insert(words.end(), m.data().begin(), m.data().end());
}

inline ZpMatrix get_matrix(WordReader& r, std::size_t rows, std::size_t cols, std::uint64_t p) {
    ZpMatrix m(rows, cols, p);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            std::uint64_t v = r.next();
            if (v >= p) throw ContainerFormatError("matrix entry exceeds the field modulus");
            m.at(i, j) = v;
        }
    }
    return m;
}

inline void put_inner_matrices(std::vector<std::uint64_t>& words, const MatchingSketch& s) {
    put_matrix(words, s.a_hat);
    put_matrix(words, s.a_prime);
    put_matrix(words, s.b_sel);
    put_matrix(words, s.c_sel);
}

inline void get_inner_matrices(WordReader& r, MatchingSketch& s) {
    s.a_hat = get_matrix(r, s.k, s.k, s.field.prime);
    s.a_prime = get_matrix(r, s.k, s.k, s.field.prime);
    s.b_sel = get_matrix(r, s.k, s.k, s.field.prime);
    s.c_sel = get_matrix(r, s.k, s.k, s.field.prime);
}

}  // namespace detail

inline std::vector<std::uint64_t> serialize_sketch(const AnySketch& sketch) {
    std::vector<std::uint64_t> w;
    std::uint64_t k = 0, p = 0, seed = 0, r = 0;
    if (const auto* m = std::get_if<MatchingSketch>(&sketch)) {
        k = m->k;
        p = m->field.prime;
        seed = m->field.seed;
        r = m->block_rank;
    } else if (const auto* c = std::get_if<CutSketch>(&sketch)) {
        k = c->terminal_count;
        p = c->inner.field.prime;
        seed = c->inner.field.seed;
        r = c->inner.block_rank;
    } else if (const auto* s = std::get_if<StconnSketch>(&sketch)) {
        k = s->terminal_count;
        p = s->inner.field.prime;
        seed = s->inner.field.seed;
        r = s->inner.block_rank;
    } else if (const auto* m = std::get_if<MstSketch>(&sketch)) {
        k = m->hprime.k();
    } else if (const auto* ps = std::get_if<PathSketch>(&sketch)) {
        k = ps->k;
    }
    w.push_back(static_cast<std::uint64_t>(kMagic) | (std::uint64_t{kContainerVersion} << 32));
    w.push_back(static_cast<std::uint64_t>(sketch_tag(sketch)));
    w.push_back(k);
    w.push_back(p);
    w.push_back(seed);
    w.push_back(r);

    if (const auto* m = std::get_if<MatchingSketch>(&sketch)) {
        detail::put_inner_matrices(w, *m);
    } else if (const auto* c = std::get_if<CutSketch>(&sketch)) {
        w.push_back(c->edge_count);
        w.push_back(c->inner.k);
        for (std::size_t t = 0; t < c->terminal_count; ++t) {
            w.push_back(c->index.outgoing[t].size());
            for (const GadgetPair& gp : c->index.outgoing[t]) {
                w.push_back(gp.q_vertex);
                w.push_back(gp.e_vertex);
            }
            w.push_back(c->index.incoming[t].size());
            for (const GadgetPair& gp : c->index.incoming[t]) {
                w.push_back(gp.q_vertex);
                w.push_back(gp.e_vertex);
            }
        }
        detail::put_inner_matrices(w, c->inner);
    } else if (const auto* s = std::get_if<StconnSketch>(&sketch)) {
        w.push_back(s->matched_base);
        w.push_back(s->inner.k);
        w.push_back(s->slots.size());
        for (const PairSlots& ps : s->slots) {
            w.push_back(ps.e_minus);
            w.push_back(ps.e_plus);
            w.push_back(ps.ehat_minus);
            w.push_back(ps.ehat_plus);
        }
        detail::put_inner_matrices(w, s->inner);
    } else if (const auto* m = std::get_if<MstSketch>(&sketch)) {
        w.push_back(m->hprime.n);
        w.push_back(m->hprime.edges.size());
        w.push_back(m->weight_offset);
        w.push_back(m->ordinal_base);
        for (const Edge& e : m->hprime.edges) {
            w.push_back(e.u);
            w.push_back(e.v);
            w.push_back(e.weight);
            w.push_back(e.id);
        }
    } else if (const auto* ps = std::get_if<PathSketch>(&sketch)) {
        w.push_back(ps->directed ? 1 : 0);
        w.push_back(ps->source_index);
        w.push_back(ps->sink_index);
        w.insert(w.end(), ps->table.begin(), ps->table.end());
    }
    return w;
}

inline AnySketch parse_sketch(const std::vector<std::uint64_t>& words) {
    detail::WordReader r(words);
    std::uint64_t word0 = r.next();
    if (static_cast<std::uint32_t>(word0 & 0xffffffffu) != kMagic) {
        throw ContainerFormatError("not a sketch container (bad magic)");
    }
    std::uint32_t version = static_cast<std::uint32_t>(word0 >> 32);
    if (version != kContainerVersion) {
        throw ContainerFormatError("unsupported container format version " + std::to_string(version));
    }
    std::uint32_t tag = static_cast<std::uint32_t>(r.next() & 0xffffffffu);
    std::uint64_t k = r.next();
    std::uint64_t p = r.next();
    std::uint64_t seed = r.next();
    std::uint64_t rank_word = r.next();
    if (k > (std::uint64_t{1} << 20)) throw ContainerFormatError("implausible terminal count");

    auto read_field = [&]() {
        FieldSpec f{p, seed};
        f.validate();
        return f;
    };
    auto checked_count = [&](std::uint64_t v, const char* what) {
        if (v > (std::uint64_t{1} << 20)) throw ContainerFormatError(std::string("implausible ") + what);
        return v;
    };

    AnySketch out;
    if (tag == kTagMatching) {
        MatchingSketch s;
        s.k = k;
        s.field = read_field();
        s.block_rank = rank_word;
        detail::get_inner_matrices(r, s);
        out = std::move(s);
    } else if (tag == kTagCut) {
        CutSketch s;
        s.terminal_count = k;
        s.edge_count = r.next();
        s.inner.k = checked_count(r.next(), "inner terminal count");
        s.inner.field = read_field();
        s.inner.block_rank = rank_word;
        s.index.outgoing.resize(k);
        s.index.incoming.resize(k);
        for (std::uint64_t t = 0; t < k; ++t) {
            std::uint64_t on = r.next();
            for (std::uint64_t i = 0; i < on; ++i) {
                std::uint32_t qv = static_cast<std::uint32_t>(r.next());
                std::uint32_t ev = static_cast<std::uint32_t>(r.next());
                s.index.outgoing[t].push_back(GadgetPair{qv, ev});
            }
            std::uint64_t in = r.next();
            for (std::uint64_t i = 0; i < in; ++i) {
                std::uint32_t qv = static_cast<std::uint32_t>(r.next());
                std::uint32_t ev = static_cast<std::uint32_t>(r.next());
                s.index.incoming[t].push_back(GadgetPair{qv, ev});
            }
        }
        detail::get_inner_matrices(r, s.inner);
        out = std::move(s);
    } else if (tag == kTagStconn) {
        StconnSketch s;
        s.terminal_count = k;
        s.matched_base = r.next();
        s.inner.k = checked_count(r.next(), "inner terminal count");
        s.inner.field = read_field();
        s.inner.block_rank = rank_word;
        std::uint64_t pairs = r.next();
        for (std::uint64_t i = 0; i < pairs; ++i) {
            PairSlots ps;
            ps.e_minus = static_cast<std::uint32_t>(r.next());
            ps.e_plus = static_cast<std::uint32_t>(r.next());
            ps.ehat_minus = static_cast<std::uint32_t>(r.next());
            ps.ehat_plus = static_cast<std::uint32_t>(r.next());
            s.slots.push_back(ps);
        }
        detail::get_inner_matrices(r, s.inner);
        out = std::move(s);
    } else if (tag == kTagMst) {
        MstSketch s;
        s.hprime.directed = false;
        s.hprime.n = static_cast<std::uint32_t>(r.next());
        std::uint64_t edges = r.next();
        s.weight_offset = r.next();
        s.ordinal_base = r.next();
        s.hprime.terminals.resize(k);
        for (std::uint64_t i = 0; i < k; ++i) s.hprime.terminals[i] = static_cast<std::uint32_t>(i);
        for (std::uint64_t i = 0; i < edges; ++i) {
            Edge e;
            e.u = static_cast<std::uint32_t>(r.next());
            e.v = static_cast<std::uint32_t>(r.next());
            e.weight = r.next();
            e.id = r.next();
            s.hprime.edges.push_back(e);
        }
        s.hprime.validate();
        out = std::move(s);
    } else if (tag == kTagPath) {
        PathSketch s;
        s.k = k;
        s.directed = r.next() != 0;
        s.source_index = static_cast<std::uint32_t>(r.next());
        s.sink_index = static_cast<std::uint32_t>(r.next());
        if (s.source_index >= k || s.sink_index >= k) throw ContainerFormatError("endpoint index out of range");
        for (std::uint64_t i = 0; i < k * k; ++i) s.table.push_back(r.next());
        out = std::move(s);
    } else {
        throw ContainerFormatError("unknown problem tag `" + tag_name(tag) + "`");
    }
    if (!r.done()) throw ContainerFormatError("trailing data after payload");
    return out;
}

inline std::vector<std::uint8_t> to_bytes(const std::vector<std::uint64_t>& words) {
    std::vector<std::uint8_t> bytes;
    bytes.reserve(words.size() * 8);
    for (std::uint64_t w : words) {
        for (int b = 0; b < 8; ++b) bytes.push_back(static_cast<std::uint8_t>((w >> (8 * b)) & 0xff));
    }
    return bytes;
}

inline std::vector<std::uint64_t> from_bytes(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() % 8 != 0) throw ContainerFormatError("container length is not word-aligned");
    std::vector<std::uint64_t> words(bytes.size() / 8, 0);
    for (std::size_t i = 0; i < bytes.size(); ++i) {
        words[i / 8] |= static_cast<std::uint64_t>(bytes[i]) << (8 * (i % 8));
    }
    return words;
}

inline void write_sketch_file(const std::filesystem::path& path, const AnySketch& sketch) {
    std::vector<std::uint8_t> bytes = to_bytes(serialize_sketch(sketch));
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("write failed for " + path.string());
}

inline AnySketch read_sketch_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_sketch(from_bytes(bytes));
}

}  // namespace dynsketch
