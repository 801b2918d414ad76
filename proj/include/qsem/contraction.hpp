#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "qsem/numeric.hpp"
#include "qsem/state.hpp"

namespace qsem {

// Wire contraction realized as measurement of the two-wire exchange
// (permutation) operator. Contracting wires i,j of a pure state gives the
// reduced operator
//
//   rho'(R,R') = sum_{a,b} c(b,a,R) * conj(c(a,b,R'))
//
// over the residual wires R, where c(x,y,R) is the amplitude with x on
// wire i and y on wire j. rho' equals the partial trace of (P rho) over
// i,j and is Hermitian by construction; for grammatical inputs it is a
// positive rank-1 operator chi chi^dagger whose chi is the contracted
// state. Several wire pairs belonging to one grammatical reduction must
// be contracted jointly (one composite exchange), not one after another:
// sequential single-pair contraction leaves a mixed intermediate.

namespace detail {

struct PairLayout {
    std::vector<std::size_t> rbase;   // flat offset of each residual index
    std::vector<std::size_t> off_l;   // offset of composite digit on the left wires
    std::vector<std::size_t> off_r;   // same for the right wires
    std::vector<Wire> residual;       // surviving wires in original order
    std::size_t d = 1;                // composite contracted dimension
};

inline PairLayout pair_layout(const PureState& state,
                              const std::vector<std::pair<std::string, std::string>>& pairs) {
    if (pairs.empty()) throw input_error("contraction: no wire pairs");
    const auto dims = state.system().dims();
    const auto strides = row_major_strides(dims);

    std::vector<std::size_t> lpos, rpos, pdims;
    std::vector<bool> used(dims.size(), false);
    for (const auto& [a, b] : pairs) {
        const std::size_t pa = state.system().position(a), pb = state.system().position(b);
        if (used[pa] || used[pb] || pa == pb)
            throw dimension_error("contraction: wire used twice");
        used[pa] = used[pb] = true;
        if (dims[pa] != dims[pb])
            throw dimension_error("contraction: pair dimensions differ on (" + a + "," + b + ")");
        lpos.push_back(pa);
        rpos.push_back(pb);
        pdims.push_back(dims[pa]);
    }

    PairLayout lay;
    lay.d = total_dim(pdims);
    lay.off_l.assign(lay.d, 0);
    lay.off_r.assign(lay.d, 0);
    std::vector<std::size_t> digit(pdims.size(), 0);
    std::size_t ci = 0;
    do {
        std::size_t ol = 0, orr = 0;
        for (std::size_t k = 0; k < pdims.size(); ++k) {
            ol += digit[k] * strides[lpos[k]];
            orr += digit[k] * strides[rpos[k]];
        }
        lay.off_l[ci] = ol;
        lay.off_r[ci] = orr;
        ++ci;
    } while (advance(digit, pdims));

    std::vector<std::size_t> rdims, rstrides;
    for (std::size_t i = 0; i < dims.size(); ++i) {
        if (used[i]) continue;
        lay.residual.push_back(state.system().wire(i));
        rdims.push_back(dims[i]);
        rstrides.push_back(strides[i]);
    }
    lay.rbase.assign(total_dim(rdims), 0);
    std::vector<std::size_t> rd(rdims.size(), 0);
    std::size_t ri = 0;
    do {
        std::size_t o = 0;
        for (std::size_t k = 0; k < rdims.size(); ++k) o += rd[k] * rstrides[k];
        lay.rbase[ri++] = o;
    } while (advance(rd, rdims));
    return lay;
}

} // namespace detail

// Normalized expectation of the exchange operator on wires a,b:
// <Psi|P|Psi> / <Psi|Psi>. Real for any state since P is Hermitian.
inline double permutation_expectation(const PureState& state, const std::string& a,
                                      const std::string& b) {
    const auto lay = detail::pair_layout(state, {{a, b}});
    const std::vector<cplx>& amp = state.amplitudes();
    cplx acc{};
    for (std::size_t base : lay.rbase)
        for (std::size_t x = 0; x < lay.d; ++x)
            for (std::size_t y = 0; y < lay.d; ++y)
                acc += std::conj(amp[base + lay.off_l[x] + lay.off_r[y]]) *
                       amp[base + lay.off_l[y] + lay.off_r[x]];
    const double total = norm_squared(amp);
    if (total == 0.0) throw numeric_error("permutation_expectation: zero state");
    if (std::abs(acc.imag()) > kAlgebraicTol * total)
        throw numeric_error("permutation expectation has imaginary part", std::abs(acc.imag()));
    return acc.real() / total;
}

struct ContractionResult {
    PureState state;      // extracted chi; squared norm carries the branch weight
    double weight = 0.0;  // Tr rho' (absolute, relative to the input scaling)
    double purity_defect = 0.0;
    bool zero = false;    // weight vanished; state is the zero vector
};

// Contract several wire pairs jointly as one composite exchange
// measurement. Verifies that the reduced operator is pure (rank 1) and
// throws numeric_error otherwise, carrying the measured defect.
inline ContractionResult contract_wire_pairs(
    const PureState& state, const std::vector<std::pair<std::string, std::string>>& pairs,
    double tol = kSolverTol) {
    const auto lay = detail::pair_layout(state, pairs);
    const std::vector<cplx>& amp = state.amplitudes();
    const std::size_t D = lay.rbase.size(), d = lay.d;

    auto c = [&](std::size_t x, std::size_t y, std::size_t base) {
        return amp[base + lay.off_l[x] + lay.off_r[y]];
    };
    auto rho = [&](std::size_t rr, std::size_t rc) {
        cplx s{};
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t b = 0; b < d; ++b)
                s += c(b, a, lay.rbase[rr]) * std::conj(c(a, b, lay.rbase[rc]));
        return s;
    };

    std::vector<double> diag(D);
    double weight = 0.0;
    std::size_t peak = 0;
    for (std::size_t r = 0; r < D; ++r) {
        const cplx v = rho(r, r);
        diag[r] = v.real();
        weight += v.real();
        if (std::abs(diag[r]) > std::abs(diag[peak])) peak = r;
    }

    ContractionResult res;
    const double in_scale = std::max(norm_squared(amp), 1e-300);
    if (std::abs(weight) <= kAlgebraicTol * in_scale && std::abs(diag[peak]) <= kAlgebraicTol * in_scale) {
        // Vanishing diagonal does not bound the off-diagonal part for a
        // non-positive operator, so confirm rho' u ~ 0 on one probe.
        SplitMix64 rng(0x243F6A8885A308D3ull);
        std::vector<cplx> u(D);
        for (cplx& e : u) e = rng.unit_complex();
        std::vector<cplx> s(d * d, cplx{});
        for (std::size_t rr = 0; rr < D; ++rr)
            for (std::size_t x = 0; x < d; ++x)
                for (std::size_t y = 0; y < d; ++y)
                    s[x * d + y] += std::conj(c(x, y, lay.rbase[rr])) * u[rr];
        double worst = 0.0;
        for (std::size_t rr = 0; rr < D; ++rr) {
            cplx v{};
            for (std::size_t x = 0; x < d; ++x)
                for (std::size_t y = 0; y < d; ++y)
                    v += c(y, x, lay.rbase[rr]) * s[x * d + y];
            worst = std::max(worst, std::abs(v));
        }
        if (worst > tol * in_scale * std::sqrt(static_cast<double>(D)))
            throw numeric_error("reduced operator is traceless but nonzero", worst / in_scale);
        res.zero = true;
        res.weight = 0.0;
        res.state = PureState(WireSystem(lay.residual), std::vector<cplx>(D, cplx{}));
        return res;
    }
    if (weight < 0.0 || diag[peak] <= 0.0)
        throw numeric_error("contraction weight is not positive: the reduced operator "
                            "cannot be a state",
                            weight);

    // chi = column `peak` of rho', scaled so chi(peak) = sqrt(diag(peak)) > 0.
    const double inv = 1.0 / std::sqrt(diag[peak]);
    std::vector<cplx> chi(D);
    for (std::size_t r = 0; r < D; ++r) chi[r] = rho(r, peak) * inv;

    const double chi_norm2 = norm_squared(chi);
    res.purity_defect = std::abs(chi_norm2 - weight) / std::max(weight, 1e-300);
    if (res.purity_defect > tol)
        throw numeric_error("contraction left a mixed state", res.purity_defect);

    if (D * D <= kDenseCap && D * D * d * d <= (std::size_t{1} << 26)) {
        // Affordable: materialize rho' and verify rank-1 plus purity exactly.
        double tr2 = 0.0, worst = 0.0, scale = 0.0;
        for (std::size_t r = 0; r < D; ++r) {
            for (std::size_t cc = 0; cc < D; ++cc) {
                const cplx v = rho(r, cc);
                tr2 += std::norm(v);
                scale = std::max(scale, std::abs(v));
                worst = std::max(worst, std::abs(v - chi[r] * std::conj(chi[cc])));
            }
        }
        const double purity = std::abs(tr2 - weight * weight) / std::max(weight * weight, 1e-300);
        res.purity_defect = std::max(res.purity_defect, purity);
        if (purity > tol)
            throw numeric_error("contraction left a mixed state", purity);
        if (worst > tol * std::max(scale, 1e-300))
            throw numeric_error("reduced operator is not rank-1", worst / std::max(scale, 1e-300));
    } else {
        // Large residual space: spot-check rho' u == chi (chi^dag u) on
        // deterministic random probes. For a trace-w positive operator
        // |rho' u| <= w ||u||, which bounds the comparison scale.
        SplitMix64 rng(0x9E3779B97F4A7C15ull);
        for (int probe = 0; probe < 4; ++probe) {
            std::vector<cplx> u(D);
            for (cplx& e : u) e = rng.unit_complex();
            const double unorm = std::sqrt(norm_squared(u));
            std::vector<cplx> s(d * d, cplx{});
            for (std::size_t rr = 0; rr < D; ++rr)
                for (std::size_t a = 0; a < d; ++a)
                    for (std::size_t b = 0; b < d; ++b)
                        s[a * d + b] += std::conj(c(a, b, lay.rbase[rr])) * u[rr];
            cplx overlap{};
            for (std::size_t rr = 0; rr < D; ++rr) overlap += std::conj(chi[rr]) * u[rr];
            double worst = 0.0;
            for (std::size_t rr = 0; rr < D; ++rr) {
                cplx v{};
                for (std::size_t a = 0; a < d; ++a)
                    for (std::size_t b = 0; b < d; ++b)
                        v += c(b, a, lay.rbase[rr]) * s[a * d + b];
                worst = std::max(worst, std::abs(v - chi[rr] * overlap));
            }
            if (worst > tol * weight * unorm)
                throw numeric_error("reduced operator is not rank-1",
                                    worst / (weight * unorm));
        }
    }

    res.state = PureState(WireSystem(lay.residual), std::move(chi));
    res.weight = weight;
    return res;
}

inline ContractionResult contract_wires(const PureState& state, const std::string& a,
                                        const std::string& b, double tol = kSolverTol) {
    return contract_wire_pairs(state, {{a, b}}, tol);
}

// ---------------------------------------------------------------------------
// Tomographic reconstruction of the reduced operator from expectation
// values only. Probes are the symmetrized matrix units on the residual
// space; each expectation <Psi| P_ab (x) O |Psi> is evaluated honestly
// (swap applied to a copy, O applied as a dense gate, inner product), the
// linear system is solved for the operator, and its dominant rank-1
// component is extracted. Demonstrates that contraction is accessible
// through measurement statistics alone.

struct ProbeReconstruction {
    PureState state;          // rank-1 vector extracted from the reconstruction
    std::vector<cplx> op;     // reconstructed residual-space operator, row-major
    double weight = 0.0;      // trace of the reconstructed operator
    double residual = 0.0;    // worst |op - chi chi^dag| entry, relative
    double condition = 0.0;   // pivot-ratio estimate from the linear solve
};

inline ProbeReconstruction operator_probe_reconstruct(const PureState& state,
                                                      const std::string& a,
                                                      const std::string& b,
                                                      double tol = kSolverTol) {
    const auto lay = detail::pair_layout(state, {{a, b}});
    const std::size_t D = lay.rbase.size();
    if (D == 0 || D > 32) throw config_error("probe reconstruction supports 1..32 residual dims");

    std::vector<std::string> rlabels;
    for (const Wire& w : lay.residual) rlabels.push_back(w.label);

    // Swap once; every probe expectation is <swapped| O |original>.
    const PureState swapped = apply_gate(state, GateOp::swap(a, b));

    auto expectation = [&](const std::vector<cplx>& op_matrix) {
        PureState acted = state;
        detail::apply_dense(acted, rlabels, op_matrix);
        cplx s{};
        for (std::size_t i = 0; i < acted.amplitudes().size(); ++i)
            s += std::conj(swapped.amplitudes()[i]) * acted.amplitudes()[i];
        return s;
    };

    // Hermitian probe basis: E_kk, X_kl = |k><l|+|l><k|, Y_kl = -i|k><l|+i|l><k|.
    std::vector<std::vector<cplx>> probes;
    for (std::size_t k = 0; k < D; ++k) {
        std::vector<cplx> m(D * D, cplx{});
        m[k * D + k] = 1.0;
        probes.push_back(std::move(m));
    }
    for (std::size_t k = 0; k < D; ++k) {
        for (std::size_t l = k + 1; l < D; ++l) {
            std::vector<cplx> x(D * D, cplx{}), y(D * D, cplx{});
            x[k * D + l] = 1.0;
            x[l * D + k] = 1.0;
            y[k * D + l] = cplx{0.0, -1.0};
            y[l * D + k] = cplx{0.0, 1.0};
            probes.push_back(std::move(x));
            probes.push_back(std::move(y));
        }
    }

    // e_P = Tr(O_P M)  =>  rows A[P][(r,c)] = O_P(c,r), unknowns x[(r,c)] = M(r,c).
    const std::size_t n = D * D;
    std::vector<cplx> sys(n * n), rhs(n);
    for (std::size_t p = 0; p < n; ++p) {
        rhs[p] = expectation(probes[p]);
        for (std::size_t r = 0; r < D; ++r)
            for (std::size_t cc = 0; cc < D; ++cc)
                sys[p * n + (r * D + cc)] = probes[p][cc * D + r];
    }
    ProbeReconstruction out;
    std::vector<cplx> m = solve_dense(sys, rhs, n, &out.condition);
    out.op = m;

    double weight = 0.0;
    std::size_t peak = 0;
    for (std::size_t r = 0; r < D; ++r) {
        weight += m[r * D + r].real();
        if (std::abs(m[r * D + r]) > std::abs(m[peak * D + peak])) peak = r;
    }
    out.weight = weight;
    if (m[peak * D + peak].real() <= 0.0)
        throw numeric_error("probe reconstruction: operator has no positive diagonal",
                            m[peak * D + peak].real());

    const double inv = 1.0 / std::sqrt(m[peak * D + peak].real());
    std::vector<cplx> chi(D);
    for (std::size_t r = 0; r < D; ++r) chi[r] = m[r * D + peak] * inv;

    double scale = 0.0, worst = 0.0;
    for (std::size_t r = 0; r < D; ++r)
        for (std::size_t cc = 0; cc < D; ++cc) {
            scale = std::max(scale, std::abs(m[r * D + cc]));
            worst = std::max(worst, std::abs(m[r * D + cc] - chi[r] * std::conj(chi[cc])));
        }
    out.residual = worst / std::max(scale, 1e-300);
    if (out.residual > tol)
        throw numeric_error("probe reconstruction is not rank-1", out.residual);
    out.state = PureState(WireSystem(lay.residual), std::move(chi));
    return out;
}

// ---------------------------------------------------------------------------
// Bell-basis view of the exchange measurement on a qubit wire pair.

namespace detail {
inline void require_qubit_pair(const PureState& st, const std::string& a, const std::string& b) {
    if (st.system().dim_of(a) != 2 || st.system().dim_of(b) != 2)
        throw dimension_error("Bell operations require qubit wires");
}
} // namespace detail

// Exchange expectation computed through Bell weights: the three triplet
// projectors carry +1 and the singlet -1, so <P> = 1 - 2 w_singlet.
inline double bell_expectation(const PureState& state, const std::string& a,
                               const std::string& b) {
    detail::require_qubit_pair(state, a, b);
    const auto lay = detail::pair_layout(state, {{a, b}});
    const std::vector<cplx>& amp = state.amplitudes();
    double singlet = 0.0;
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (std::size_t base : lay.rbase) {
        const cplx s = (amp[base + lay.off_l[0] + lay.off_r[1]] -
                        amp[base + lay.off_l[1] + lay.off_r[0]]) *
                       inv_sqrt2;
        singlet += std::norm(s);
    }
    const double total = norm_squared(amp);
    if (total == 0.0) throw numeric_error("bell_expectation: zero state");
    return 1.0 - 2.0 * singlet / total;
}

// Rotate wires a,b into the Bell basis: afterwards the computational
// readout (x,y) on (a,b) carries the weight of Bell state U|xy>, with
// U = CNOT(a->b) after H(a). (00) reads the |00>+|11> component and (11)
// the singlet.
inline PureState bell_basis_change(const PureState& state, const std::string& a,
                                   const std::string& b) {
    detail::require_qubit_pair(state, a, b);
    return apply_gate(apply_gate(state, GateOp::cnot(a, b)), GateOp::h(a));
}

// Project wires a,b onto (|00>+|11>)/sqrt(2) and drop them. This is the
// cup effect used by direct tensor contraction; it differs from the
// exchange measurement in general and is provided for comparison.
inline PureState bell_effect_contract(const PureState& state, const std::string& a,
                                      const std::string& b) {
    detail::require_qubit_pair(state, a, b);
    const auto lay = detail::pair_layout(state, {{a, b}});
    const std::vector<cplx>& amp = state.amplitudes();
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    std::vector<cplx> out(lay.rbase.size());
    for (std::size_t r = 0; r < lay.rbase.size(); ++r) {
        const std::size_t base = lay.rbase[r];
        out[r] = (amp[base + lay.off_l[0] + lay.off_r[0]] +
                  amp[base + lay.off_l[1] + lay.off_r[1]]) *
                 inv_sqrt2;
    }
    return PureState(WireSystem(lay.residual), std::move(out));
}

} // namespace qsem
