#pragma once

#include <cctype>
#include <cstddef>
#include <memory>
#include <string>

#include "qsem/errors.hpp"

namespace qsem {

// Syntactic types of the categorial grammar.
//
// Concrete syntax:   n | s | w, infix / \ *, parentheses.
//   /  and  \  share one precedence level and associate left;
//   *  (the product) binds looser and also associates left.
//
// Conventions: `b/a` expects its argument `a` on the right and yields `b`;
// `a\b` expects `a` on the left and yields `b`; `a*b` is the plain pair.

enum class Prim { N, S, W };

class SynType;
using TypePtr = std::shared_ptr<const SynType>;

class SynType {
public:
    enum class Kind { Primitive, Over, Under, Product };

    static TypePtr primitive(Prim p) {
        return TypePtr(new SynType(Kind::Primitive, p, nullptr, nullptr));
    }
    // result / argument
    static TypePtr over(TypePtr result, TypePtr argument) {
        return TypePtr(new SynType(Kind::Over, Prim::N, std::move(result), std::move(argument)));
    }
    // argument \ result
    static TypePtr under(TypePtr argument, TypePtr result) {
        return TypePtr(new SynType(Kind::Under, Prim::N, std::move(argument), std::move(result)));
    }
    static TypePtr product(TypePtr left, TypePtr right) {
        return TypePtr(new SynType(Kind::Product, Prim::N, std::move(left), std::move(right)));
    }

    Kind kind() const { return kind_; }
    Prim prim() const { return prim_; }

    // Child accessors named by role, valid for the matching kinds.
    const TypePtr& result() const { return kind_ == Kind::Under ? second_ : first_; }
    const TypePtr& argument() const { return kind_ == Kind::Under ? first_ : second_; }
    const TypePtr& left() const { return first_; }
    const TypePtr& right() const { return second_; }

    bool is_primitive() const { return kind_ == Kind::Primitive; }

private:
    SynType(Kind k, Prim p, TypePtr a, TypePtr b)
        : kind_(k), prim_(p), first_(std::move(a)), second_(std::move(b)) {}

    Kind kind_;
    Prim prim_;
    TypePtr first_, second_; // Over: result, argument; Under: argument, result
};

inline bool equal(const TypePtr& a, const TypePtr& b) {
    if (a.get() == b.get()) return true;
    if (!a || !b || a->kind() != b->kind()) return false;
    if (a->kind() == SynType::Kind::Primitive) return a->prim() == b->prim();
    return equal(a->left(), b->left()) && equal(a->right(), b->right());
}

// Minimal-parenthesis rendering; re-parsing the result reproduces the tree,
// so the string doubles as a structural key.
inline std::string to_string(const TypePtr& t) {
    switch (t->kind()) {
        case SynType::Kind::Primitive:
            switch (t->prim()) {
                case Prim::N: return "n";
                case Prim::S: return "s";
                case Prim::W: return "w";
            }
            return "?";
        case SynType::Kind::Over:
        case SynType::Kind::Under: {
            const bool under = t->kind() == SynType::Kind::Under;
            const TypePtr& l = t->left();
            const TypePtr& r = t->right();
            std::string ls = to_string(l);
            if (l->kind() == SynType::Kind::Product) ls = "(" + ls + ")";
            std::string rs = to_string(r);
            if (!r->is_primitive()) rs = "(" + rs + ")"; // left-assoc level, keep right atomic
            return ls + (under ? "\\" : "/") + rs;
        }
        case SynType::Kind::Product: {
            std::string ls = to_string(t->left());
            std::string rs = to_string(t->right());
            if (t->right()->kind() == SynType::Kind::Product) rs = "(" + rs + ")";
            return ls + "*" + rs;
        }
    }
    return "?";
}

namespace detail {

class TypeParser {
public:
    explicit TypeParser(const std::string& text) : text_(text) {}

    TypePtr parse() {
        TypePtr t = product();
        skip_space();
        if (pos_ != text_.size())
            throw input_error("unexpected character '" + std::string(1, text_[pos_]) +
                                  "' at offset " + std::to_string(pos_),
                              pos_);
        return t;
    }

private:
    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool peek_is(char c) {
        skip_space();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    TypePtr product() {
        TypePtr t = slashes();
        while (peek_is('*')) {
            ++pos_;
            t = SynType::product(t, slashes());
        }
        return t;
    }

    TypePtr slashes() {
        TypePtr t = atom();
        for (;;) {
            if (peek_is('/')) {
                ++pos_;
                t = SynType::over(t, atom());
            } else if (peek_is('\\')) {
                ++pos_;
                t = SynType::under(t, atom());
            } else {
                return t;
            }
        }
    }

    TypePtr atom() {
        skip_space();
        if (pos_ >= text_.size()) throw input_error("unexpected end of type expression", pos_);
        char c = text_[pos_];
        if (c == '(') {
            std::size_t open = pos_++;
            TypePtr t = product();
            skip_space();
            if (pos_ >= text_.size() || text_[pos_] != ')')
                throw input_error("unbalanced '(' at offset " + std::to_string(open), open);
            ++pos_;
            return t;
        }
        ++pos_;
        switch (c) {
            case 'n': return SynType::primitive(Prim::N);
            case 's': return SynType::primitive(Prim::S);
            case 'w': return SynType::primitive(Prim::W);
            default:
                throw input_error("unknown primitive '" + std::string(1, c) + "' at offset " +
                                      std::to_string(pos_ - 1),
                                  pos_ - 1);
        }
    }

    const std::string& text_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline TypePtr parse_type(const std::string& text) {
    return detail::TypeParser(text).parse();
}

} // namespace qsem
