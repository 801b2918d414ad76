#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "qsem/syntax.hpp"

namespace qsem {

// Proof trees for the two application rules:
//   ApplyRight:  b/a , a   yields b     (functor on the left)
//   ApplyLeft:   a , a\b   yields b     (functor on the right)
// Products are parsed but never introduced by a derivation step.

struct Derivation;
using DerivPtr = std::shared_ptr<const Derivation>;

struct Derivation {
    enum class Op { Leaf, ApplyRight, ApplyLeft };

    Op op = Op::Leaf;
    std::size_t word_index = 0; // leaves only
    DerivPtr left, right;       // internal nodes only
    TypePtr type;               // type derived at this node
    std::size_t begin = 0, end = 0; // word span [begin, end)

    static DerivPtr leaf(std::size_t index, TypePtr t) {
        auto d = std::make_shared<Derivation>();
        d->op = Op::Leaf;
        d->word_index = index;
        d->type = std::move(t);
        d->begin = index;
        d->end = index + 1;
        return d;
    }
    static DerivPtr apply(Op op, DerivPtr l, DerivPtr r, TypePtr t) {
        auto d = std::make_shared<Derivation>();
        d->op = op;
        d->left = std::move(l);
        d->right = std::move(r);
        d->type = std::move(t);
        d->begin = d->left->begin;
        d->end = d->right->end;
        return d;
    }
};

// Bracketing of leaf indices: "(0 (1 (2 3)))"; a bare leaf is its index.
inline std::string derivation_signature(const DerivPtr& d) {
    if (d->op == Derivation::Op::Leaf) return std::to_string(d->word_index);
    return "(" + derivation_signature(d->left) + " " + derivation_signature(d->right) + ")";
}

namespace detail {

// At most one rule can combine a fixed (left, right) type pair: ApplyRight
// needs size(L) > size(R) and ApplyLeft the opposite, so both never match.
inline TypePtr combine(const TypePtr& l, const TypePtr& r, Derivation::Op& op) {
    if (l->kind() == SynType::Kind::Over && equal(l->argument(), r)) {
        op = Derivation::Op::ApplyRight;
        return l->result();
    }
    if (r->kind() == SynType::Kind::Under && equal(r->argument(), l)) {
        op = Derivation::Op::ApplyLeft;
        return r->result();
    }
    return nullptr;
}

class DerivationSearch {
public:
    explicit DerivationSearch(const std::vector<TypePtr>& types) : n_(types.size()) {
        // Per-span derivable type sets, keyed by canonical string so
        // enumeration order is deterministic.
        table_.resize(n_ * n_ + 1);
        for (std::size_t i = 0; i < n_; ++i) cell(i, i + 1)[to_string(types[i])] = types[i];
        for (std::size_t len = 2; len <= n_; ++len) {
            for (std::size_t i = 0; i + len <= n_; ++i) {
                std::size_t j = i + len;
                auto& out = cell(i, j);
                for (std::size_t k = i + 1; k < j; ++k) {
                    for (const auto& [ls, lt] : cell(i, k)) {
                        for (const auto& [rs, rt] : cell(k, j)) {
                            Derivation::Op op;
                            if (TypePtr t = combine(lt, rt, op)) out.emplace(to_string(t), t);
                        }
                    }
                }
            }
        }
        types_ = types;
    }

    // All derivations of `goal` over [i, j). Order: for each split point
    // left to right, left subderivations outer, right inner; splits closer
    // to the left edge come first, so outermost-leftmost bracketings lead.
    std::vector<DerivPtr> enumerate(std::size_t i, std::size_t j, const TypePtr& goal) {
        const std::string key = span_key(i, j, goal);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        std::vector<DerivPtr> out;
        if (j - i == 1) {
            if (equal(types_[i], goal)) out.push_back(Derivation::leaf(i, goal));
        } else {
            for (std::size_t k = i + 1; k < j; ++k) {
                for (const auto& [ls, lt] : cell(i, k)) {
                    for (const auto& [rs, rt] : cell(k, j)) {
                        Derivation::Op op;
                        TypePtr t = combine(lt, rt, op);
                        if (!t || !equal(t, goal)) continue;
                        for (const DerivPtr& dl : enumerate(i, k, lt))
                            for (const DerivPtr& dr : enumerate(k, j, rt))
                                out.push_back(Derivation::apply(op, dl, dr, goal));
                    }
                }
            }
        }
        memo_[key] = out;
        return out;
    }

private:
    std::map<std::string, TypePtr>& cell(std::size_t i, std::size_t j) {
        return table_[i * n_ + j];
    }
    static std::string span_key(std::size_t i, std::size_t j, const TypePtr& t) {
        return std::to_string(i) + ":" + std::to_string(j) + ":" + to_string(t);
    }

    std::size_t n_;
    std::vector<TypePtr> types_;
    std::vector<std::map<std::string, TypePtr>> table_;
    std::map<std::string, std::vector<DerivPtr>> memo_;
};

} // namespace detail

// All distinct derivations of `goal` from the type sequence, deduplicated
// by signature, in deterministic leftmost-outermost order.
inline std::vector<DerivPtr> derive(const std::vector<TypePtr>& types, const TypePtr& goal) {
    if (types.empty()) throw input_error("derive: empty type sequence");
    detail::DerivationSearch search(types);
    std::vector<DerivPtr> all = search.enumerate(0, types.size(), goal);
    std::vector<DerivPtr> out;
    std::set<std::string> seen;
    for (const DerivPtr& d : all)
        if (seen.insert(derivation_signature(d)).second) out.push_back(d);
    return out;
}

} // namespace qsem
