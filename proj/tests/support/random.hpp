#pragma once

// Seeded random inputs for property tests. Everything funnels through
// SplitMix64 so failures reproduce from the literal seed in the test.

#include <qsem/numeric.hpp>
#include <qsem/semantics.hpp>
#include <qsem/state.hpp>

#include <vector>

namespace testrand {

using qsem::cplx;

inline std::vector<cplx> vec(qsem::SplitMix64& rng, std::size_t n) {
    std::vector<cplx> v(n);
    for (cplx& x : v) x = cplx(2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0);
    return v;
}

inline std::vector<cplx> unit_vec(qsem::SplitMix64& rng, std::size_t n) {
    std::vector<cplx> v = vec(rng, n);
    const double s = 1.0 / std::sqrt(qsem::norm_squared(v));
    for (cplx& x : v) x *= s;
    return v;
}

// Product of per-wire random vectors over the given dims, labels "1".."k".
inline qsem::PureState product_state(qsem::SplitMix64& rng,
                                     const std::vector<std::size_t>& dims, bool normalized) {
    std::vector<qsem::Wire> wires;
    std::vector<cplx> amp{cplx(1.0, 0.0)};
    for (std::size_t i = 0; i < dims.size(); ++i) {
        wires.push_back({std::to_string(i + 1), dims[i]});
        const std::vector<cplx> f = normalized ? unit_vec(rng, dims[i]) : vec(rng, dims[i]);
        std::vector<cplx> next(amp.size() * dims[i]);
        for (std::size_t a = 0; a < amp.size(); ++a)
            for (std::size_t b = 0; b < dims[i]; ++b) next[a * dims[i] + b] = amp[a] * f[b];
        amp = std::move(next);
    }
    return qsem::PureState(qsem::WireSystem(wires), std::move(amp));
}

// Random lexicon over the ambiguous four-word phrase, all noun dims 2.
inline qsem::Lexicon ambiguous_lexicon(qsem::SplitMix64& rng) {
    qsem::Lexicon lex;
    lex.config = {2, 2, 1};
    auto add = [&](const std::string& word, const std::string& type) {
        qsem::TypePtr t = qsem::parse_type(type);
        qsem::SemanticSpace space = qsem::interpret_type(t, lex.config);
        std::vector<cplx> amp = vec(rng, space.size());
        lex.entries.push_back({word, t, qsem::WordTensor(std::move(space), std::move(amp))});
    };
    add("rigorous", "n/n");
    add("mathematicians", "n");
    add("and", "(n\\n)/n");
    add("physicists", "n");
    return lex;
}

} // namespace testrand
