#pragma once

// Expected values for the test suite, recomputed from first principles
// with plain loops. Nothing here calls the library's planner, contraction
// engine, or search code; only shared data types are reused.

#include <qsem/qsem.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

namespace oracles {

using qsem::cplx;

// --- grammar ---------------------------------------------------------------
// Every full binary bracketing of the phrase, evaluated bottom-up with the
// two application rules; returns the set of bracketing signatures whose
// root type equals the goal.

struct Parse {
    std::string sig;
    qsem::TypePtr type;
};

inline std::vector<Parse> all_parses(const std::vector<qsem::TypePtr>& leaves, std::size_t lo,
                                     std::size_t hi) {
    std::vector<Parse> out;
    if (hi - lo == 1) {
        out.push_back({std::to_string(lo), leaves[lo]});
        return out;
    }
    for (std::size_t mid = lo + 1; mid < hi; ++mid) {
        for (const Parse& l : all_parses(leaves, lo, mid)) {
            for (const Parse& r : all_parses(leaves, mid, hi)) {
                const std::string sig = "(" + l.sig + " " + r.sig + ")";
                if (l.type->kind() == qsem::SynType::Kind::Over &&
                    qsem::to_string(l.type->argument()) == qsem::to_string(r.type))
                    out.push_back({sig, l.type->result()});
                if (r.type->kind() == qsem::SynType::Kind::Under &&
                    qsem::to_string(r.type->argument()) == qsem::to_string(l.type))
                    out.push_back({sig, r.type->result()});
            }
        }
    }
    return out;
}

inline std::set<std::string> derivable_signatures(const std::vector<qsem::TypePtr>& leaves,
                                                  const qsem::TypePtr& goal) {
    std::set<std::string> sigs;
    for (const Parse& p : all_parses(leaves, 0, leaves.size()))
        if (qsem::to_string(p.type) == qsem::to_string(goal)) sigs.insert(p.sig);
    return sigs;
}

// --- exchange measurement, dense -------------------------------------------
// rho'(R,R') = sum_c Psi(swap(R+c)) conj(Psi(R'+c)) over the contracted
// digits c, computed by brute-force digit manipulation on flat indices.

struct DenseContraction {
    std::vector<cplx> rho;                  // D x D row-major
    std::vector<std::string> residual;      // wire labels, state order
    std::vector<std::size_t> residual_dims;
    std::size_t dim = 0;

    double trace() const {
        double t = 0.0;
        for (std::size_t r = 0; r < dim; ++r) t += rho[r * dim + r].real();
        return t;
    }
    double trace_sq() const { // Tr rho'^2 for the purity probe
        cplx t{};
        for (std::size_t r = 0; r < dim; ++r)
            for (std::size_t c = 0; c < dim; ++c) t += rho[r * dim + c] * rho[c * dim + r];
        return t.real();
    }
};

inline DenseContraction dense_contract(
    const qsem::PureState& st,
    const std::vector<std::pair<std::string, std::string>>& pairs) {
    const auto& wires = st.system().wires();
    const std::size_t n = wires.size();
    std::vector<std::size_t> dims(n), strides(n);
    for (std::size_t i = 0; i < n; ++i) dims[i] = wires[i].dim;
    std::size_t acc = 1;
    for (std::size_t i = n; i-- > 0;) {
        strides[i] = acc;
        acc *= dims[i];
    }
    auto pos_of = [&](const std::string& label) {
        for (std::size_t i = 0; i < n; ++i)
            if (wires[i].label == label) return i;
        throw qsem::dimension_error("oracle: unknown wire " + label);
    };
    std::vector<std::pair<std::size_t, std::size_t>> ppos;
    std::vector<bool> contracted(n, false);
    for (const auto& [a, b] : pairs) {
        ppos.emplace_back(pos_of(a), pos_of(b));
        contracted[ppos.back().first] = contracted[ppos.back().second] = true;
    }

    DenseContraction out;
    std::vector<std::size_t> rpos;
    for (std::size_t i = 0; i < n; ++i)
        if (!contracted[i]) {
            rpos.push_back(i);
            out.residual.push_back(wires[i].label);
            out.residual_dims.push_back(dims[i]);
        }
    out.dim = 1;
    for (std::size_t d : out.residual_dims) out.dim *= d;
    out.rho.assign(out.dim * out.dim, cplx{});

    const auto& amp = st.amplitudes();
    const std::size_t N = amp.size();
    auto digits_of = [&](std::size_t idx) {
        std::vector<std::size_t> d(n);
        for (std::size_t i = 0; i < n; ++i) d[i] = (idx / strides[i]) % dims[i];
        return d;
    };
    auto residual_index = [&](const std::vector<std::size_t>& d) {
        std::size_t r = 0;
        for (std::size_t i : rpos) r = r * dims[i] + d[i];
        return r;
    };
    // swap(X) on the ket side, then match contracted digits against every Y
    for (std::size_t X = 0; X < N; ++X) {
        std::vector<std::size_t> dx = digits_of(X);
        std::vector<std::size_t> swapped = dx;
        for (const auto& [pa, pb] : ppos) std::swap(swapped[pa], swapped[pb]);
        std::size_t sx = 0;
        for (std::size_t i = 0; i < n; ++i) sx += swapped[i] * strides[i];
        const cplx lhs = amp[sx];
        if (lhs == cplx{}) continue;
        for (std::size_t Y = 0; Y < N; ++Y) {
            std::vector<std::size_t> dy = digits_of(Y);
            bool match = true;
            for (std::size_t i = 0; i < n && match; ++i)
                if (contracted[i] && dx[i] != dy[i]) match = false;
            if (!match) continue;
            out.rho[residual_index(dx) * out.dim + residual_index(dy)] +=
                lhs * std::conj(amp[Y]);
        }
    }
    return out;
}

// Exchange expectation on a (possibly unnormalized) state.
inline double expectation_oracle(const qsem::PureState& st, const std::string& a,
                                 const std::string& b) {
    DenseContraction d = dense_contract(st, {{a, b}});
    return d.trace() / qsem::norm_squared(st.amplitudes());
}

// --- sentence meanings ------------------------------------------------------
// Subject-verb readout: out[r] = sum_q conj(subject[q]) verb[q, r].
inline std::vector<cplx> subject_verb_oracle(const std::vector<cplx>& subject,
                                             const std::vector<cplx>& verb, std::size_t dim_s) {
    std::vector<cplx> out(dim_s, cplx{});
    for (std::size_t q = 0; q < subject.size(); ++q)
        for (std::size_t r = 0; r < dim_s; ++r)
            out[r] += std::conj(subject[q]) * verb[q * dim_s + r];
    return out;
}

// Cup effect on a qubit noun pair: no conjugation, 1/sqrt2 weight.
inline std::vector<cplx> cup_effect_oracle(const std::vector<cplx>& subject,
                                           const std::vector<cplx>& verb, std::size_t dim_s) {
    std::vector<cplx> out(dim_s, cplx{});
    const double w = 1.0 / std::sqrt(2.0);
    for (std::size_t q = 0; q < 2; ++q)
        for (std::size_t r = 0; r < dim_s; ++r) out[r] += w * subject[q] * verb[q * dim_s + r];
    return out;
}

// --- the two readings of "modifier noun conjunction noun" (all dims 2) -----
// Measurement-based contraction conjugates the tensor acting at odd
// nesting depth; these closed forms carry those adjustments explicitly.
// r: modifier (result i, argument j), m: first noun, a: conjunction
// (left l, result mm, right nn), p: second noun.

inline std::vector<cplx> reading_nested_oracle(const std::vector<cplx>& r,
                                               const std::vector<cplx>& m,
                                               const std::vector<cplx>& a,
                                               const std::vector<cplx>& p) {
    std::vector<cplx> out(2, cplx{});
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t l = 0; l < 2; ++l)
                for (std::size_t nn = 0; nn < 2; ++nn)
                    out[i] += r[i * 2 + j] * m[l] * std::conj(a[l * 4 + j * 2 + nn]) * p[nn];
    return out;
}

inline std::vector<cplx> reading_flat_oracle(const std::vector<cplx>& r,
                                             const std::vector<cplx>& m,
                                             const std::vector<cplx>& a,
                                             const std::vector<cplx>& p) {
    std::vector<cplx> out(2, cplx{});
    for (std::size_t mm = 0; mm < 2; ++mm)
        for (std::size_t l = 0; l < 2; ++l)
            for (std::size_t j = 0; j < 2; ++j)
                for (std::size_t nn = 0; nn < 2; ++nn)
                    out[mm] +=
                        std::conj(r[l * 2 + j]) * m[j] * a[l * 4 + mm * 2 + nn] * std::conj(p[nn]);
    return out;
}

// --- amplitude search -------------------------------------------------------

inline double search_theta(std::size_t P, std::size_t Q) {
    return 2.0 * std::acos(std::sqrt(double(Q) / double(P)));
}

inline double search_success(std::size_t P, std::size_t Q, std::size_t k) {
    const double t = search_theta(P, Q);
    const double c = std::cos((2.0 * double(k) + 1.0) * t / 2.0);
    return c * c;
}

// Success at the first peak of the rotation: walk k upward until the
// probability drops. Later k can come closer to a full revolution, but
// the optimal iteration count promises the first peak, not those.
inline double search_first_peak(std::size_t P, std::size_t Q) {
    double best = search_success(P, Q, 0);
    for (std::size_t k = 1; k <= P + 1; ++k) {
        const double s = search_success(P, Q, k);
        if (s < best - 1e-15) break;
        best = std::max(best, s);
    }
    return best;
}

// Uniform superposition of the P consistent index-truth assignments.
inline std::vector<cplx> initial_state_oracle(const std::vector<int>& truth) {
    const std::size_t P = truth.size();
    std::vector<cplx> amp(P * 2, cplx{});
    for (std::size_t a = 0; a < P; ++a) amp[a * 2 + (truth[a] ? 1 : 0)] = 1.0 / std::sqrt(double(P));
    return amp;
}

// State after one oracle+diffusion round, in the index-truth layout:
// sin(3t/2) on the uniform false part, cos(3t/2) on the uniform true part.
inline std::vector<cplx> first_iteration_oracle(const std::vector<int>& truth) {
    const std::size_t P = truth.size();
    std::size_t Q = 0;
    for (int t : truth) Q += t ? 1 : 0;
    const double t = search_theta(P, Q);
    std::vector<cplx> amp(P * 2, cplx{});
    for (std::size_t a = 0; a < P; ++a) {
        if (truth[a])
            amp[a * 2 + 1] = std::cos(1.5 * t) / std::sqrt(double(Q));
        else
            amp[a * 2 + 0] = std::sin(1.5 * t) / std::sqrt(double(P - Q));
    }
    return amp;
}

} // namespace oracles
