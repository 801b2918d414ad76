#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qsem/derivation.hpp"
#include "qsem/layout.hpp"
#include "qsem/numeric.hpp"
#include "qsem/syntax.hpp"

namespace qsem {

// Tensor-space interpretation of syntactic types.
//
//   n  ->  N                      (noun space, dim_n)
//   s  ->  S                      (sentence space, dim_s)
//   w  ->  I (x) N (x) I (x) S    (question space; I has dim 2^index_qubits)
//   compound types concatenate their parts' factors left to right.
//
// Every factor remembers which type leaf produced it; functor/argument
// blocks are recovered from leaf counts when contractions are planned.

enum class Role { N, S, I };

struct Factor {
    Role role;
    std::size_t dim;
    std::size_t leaf; // ordinal of the producing type leaf, left to right
};

struct SemanticSpace {
    std::vector<Factor> factors;

    std::vector<std::size_t> dims() const {
        std::vector<std::size_t> d;
        d.reserve(factors.size());
        for (const Factor& f : factors) d.push_back(f.dim);
        return d;
    }
    std::size_t size() const { return total_dim(dims()); }
};

struct SpaceConfig {
    std::size_t dim_n = 2;
    std::size_t dim_s = 2;
    std::size_t index_qubits = 1; // p; the I factors have dim 2^p

    std::size_t dim_i() const { return std::size_t{1} << index_qubits; }
};

inline std::size_t leaf_count(const TypePtr& t) {
    if (t->is_primitive()) return 1;
    return leaf_count(t->left()) + leaf_count(t->right());
}

inline std::size_t factor_count(const TypePtr& t, const SpaceConfig&) {
    if (t->is_primitive()) return t->prim() == Prim::W ? 4 : 1;
    // factor widths do not depend on the config beyond the w expansion
    SpaceConfig cfg;
    return factor_count(t->left(), cfg) + factor_count(t->right(), cfg);
}

namespace detail {
inline void append_factors(const TypePtr& t, const SpaceConfig& cfg, std::size_t& next_leaf,
                           std::vector<Factor>& out) {
    if (!t->is_primitive()) {
        append_factors(t->left(), cfg, next_leaf, out);
        append_factors(t->right(), cfg, next_leaf, out);
        return;
    }
    const std::size_t leaf = next_leaf++;
    switch (t->prim()) {
        case Prim::N: out.push_back({Role::N, cfg.dim_n, leaf}); break;
        case Prim::S: out.push_back({Role::S, cfg.dim_s, leaf}); break;
        case Prim::W:
            out.push_back({Role::I, cfg.dim_i(), leaf});
            out.push_back({Role::N, cfg.dim_n, leaf});
            out.push_back({Role::I, cfg.dim_i(), leaf});
            out.push_back({Role::S, cfg.dim_s, leaf});
            break;
    }
}
} // namespace detail

inline SemanticSpace interpret_type(const TypePtr& t, const SpaceConfig& cfg) {
    SemanticSpace space;
    std::size_t next_leaf = 0;
    detail::append_factors(t, cfg, next_leaf, space.factors);
    return space;
}

// Dense complex tensor over a semantic space, amplitudes row-major.
struct WordTensor {
    SemanticSpace space;
    std::vector<cplx> amp;

    WordTensor() = default;
    WordTensor(SemanticSpace s, std::vector<cplx> a) : space(std::move(s)), amp(std::move(a)) {
        if (space.size() != amp.size())
            throw dimension_error("WordTensor: amplitude count does not match factor dims");
    }
};

inline WordTensor conjugate(const WordTensor& t) {
    WordTensor out = t;
    for (cplx& a : out.amp) a = std::conj(a);
    return out;
}

struct LexiconEntry {
    std::string word;
    TypePtr type;
    WordTensor tensor;
};

struct Lexicon {
    SpaceConfig config;
    std::vector<LexiconEntry> entries;

    const LexiconEntry& find(const std::string& word) const {
        for (const LexiconEntry& e : entries)
            if (e.word == word) return e;
        throw input_error("word not in lexicon: " + word);
    }
    bool contains(const std::string& word) const {
        for (const LexiconEntry& e : entries)
            if (e.word == word) return true;
        return false;
    }
};

namespace detail {

// Positions of the argument and result factor blocks of a functor type.
struct FunctorBlocks {
    std::size_t arg_begin, arg_end;    // positions pairing with the argument
    std::size_t res_begin, res_end;    // positions surviving into the result
};

inline FunctorBlocks functor_blocks(const TypePtr& functor, const SpaceConfig& cfg) {
    FunctorBlocks b{};
    if (functor->kind() == SynType::Kind::Over) {
        const std::size_t nres = factor_count(functor->result(), cfg);
        const std::size_t narg = factor_count(functor->argument(), cfg);
        b = {nres, nres + narg, 0, nres};
    } else if (functor->kind() == SynType::Kind::Under) {
        const std::size_t narg = factor_count(functor->argument(), cfg);
        const std::size_t nres = factor_count(functor->result(), cfg);
        b = {0, narg, narg, narg + nres};
    } else {
        throw dimension_error("functor_blocks: not a functor type");
    }
    return b;
}

// Plain tensor contraction: sum the functor's argument block against the
// whole argument tensor, component for component, no conjugation.
inline WordTensor apply_functor(const WordTensor& functor, const FunctorBlocks& blocks,
                                const WordTensor& argument) {
    const auto fdims = functor.space.dims();
    const std::size_t nf = fdims.size();
    const std::size_t na = blocks.arg_end - blocks.arg_begin;
    if (argument.space.factors.size() != na)
        throw dimension_error("apply_functor: argument factor count mismatch");
    for (std::size_t k = 0; k < na; ++k)
        if (argument.space.factors[k].dim != fdims[blocks.arg_begin + k])
            throw dimension_error("apply_functor: argument dimension mismatch");

    SemanticSpace out_space;
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < nf; ++i) {
        if (i >= blocks.arg_begin && i < blocks.arg_end) continue;
        out_space.factors.push_back(functor.space.factors[i]);
        keep.push_back(i);
    }
    const auto out_dims = out_space.dims();
    const auto fstr = row_major_strides(fdims);
    const auto adims = argument.space.dims();
    const auto astr = row_major_strides(adims);

    std::vector<cplx> out(total_dim(out_dims), cplx{});
    std::vector<std::size_t> odig(out_dims.size(), 0);
    if (out.empty()) return WordTensor(out_space, out);
    std::size_t oi = 0;
    do {
        std::size_t base = 0;
        for (std::size_t i = 0; i < keep.size(); ++i) base += odig[i] * fstr[keep[i]];
        cplx s{};
        std::vector<std::size_t> shared(na, 0);
        if (na == 0) {
            s = functor.amp[base] * argument.amp[0];
        } else {
            do {
                std::size_t fi = base, ai = 0;
                for (std::size_t k = 0; k < na; ++k) {
                    fi += shared[k] * fstr[blocks.arg_begin + k];
                    ai += shared[k] * astr[k];
                }
                s += functor.amp[fi] * argument.amp[ai];
            } while (advance(shared, adims));
        }
        out[oi++] = s;
    } while (advance(odig, out_dims));
    return WordTensor(out_space, out);
}

} // namespace detail

// Reference semantics of a derivation: recursive rule application with
// plain index sums. The quantum path is checked against this (with the
// conjugations the measurement algebra introduces) elsewhere.
inline WordTensor contract_classical(const DerivPtr& d, const Lexicon& lex,
                                     const std::vector<std::string>& words) {
    switch (d->op) {
        case Derivation::Op::Leaf: {
            const LexiconEntry& e = lex.find(words.at(d->word_index));
            if (!equal(e.type, d->type))
                throw input_error("derivation/lexicon type mismatch for word " + e.word);
            return e.tensor;
        }
        case Derivation::Op::ApplyRight: {
            WordTensor f = contract_classical(d->left, lex, words);
            WordTensor x = contract_classical(d->right, lex, words);
            return detail::apply_functor(f, detail::functor_blocks(d->left->type, lex.config), x);
        }
        case Derivation::Op::ApplyLeft: {
            WordTensor x = contract_classical(d->left, lex, words);
            WordTensor f = contract_classical(d->right, lex, words);
            return detail::apply_functor(f, detail::functor_blocks(d->right->type, lex.config), x);
        }
    }
    throw error("contract_classical: unreachable");
}

} // namespace qsem
