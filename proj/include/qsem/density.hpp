#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "qsem/state.hpp"

namespace qsem {

// Dense density operators over the same labeled wires as PureState.
// Deliberately unoptimized: this is the slow, obviously-correct path that
// the contraction engine is checked against.

class DensityMatrix {
public:
    DensityMatrix() = default;
    DensityMatrix(WireSystem system, std::vector<cplx> entries)
        : system_(std::move(system)), m_(std::move(entries)) {
        const std::size_t d = system_.total();
        if (m_.size() != d * d) throw dimension_error("DensityMatrix: entry count mismatch");
        if (m_.size() > kDenseCap) throw config_error("dense cap exceeded by density matrix");
    }

    static DensityMatrix from_pure(const PureState& psi) {
        const std::size_t d = psi.amplitudes().size();
        if (d > kDenseCap / std::max<std::size_t>(d, 1))
            throw config_error("dense cap exceeded by outer product");
        std::vector<cplx> m(d * d);
        for (std::size_t r = 0; r < d; ++r)
            for (std::size_t c = 0; c < d; ++c)
                m[r * d + c] = psi.amplitudes()[r] * std::conj(psi.amplitudes()[c]);
        return DensityMatrix(psi.system(), std::move(m));
    }

    const WireSystem& system() const { return system_; }
    const std::vector<cplx>& entries() const { return m_; }
    std::size_t dim() const { return system_.total(); }
    cplx at(std::size_t r, std::size_t c) const { return m_[r * dim() + c]; }

    cplx trace() const {
        cplx t{};
        const std::size_t d = dim();
        for (std::size_t i = 0; i < d; ++i) t += m_[i * d + i];
        return t;
    }

    // Hermiticity check; returns the worst entrywise defect.
    double hermiticity_defect() const {
        const std::size_t d = dim();
        double worst = 0.0;
        for (std::size_t r = 0; r < d; ++r)
            for (std::size_t c = r; c < d; ++c)
                worst = std::max(worst, std::abs(m_[r * d + c] - std::conj(m_[c * d + r])));
        return worst;
    }

    void validate(double tol = kAlgebraicTol) const {
        const double h = hermiticity_defect();
        if (h > tol) throw numeric_error("density matrix is not Hermitian", h);
        const cplx t = trace();
        if (std::abs(t.imag()) > tol || t.real() < -tol)
            throw numeric_error("density matrix trace is not real nonnegative",
                                std::abs(t.imag()));
    }

private:
    WireSystem system_;
    std::vector<cplx> m_;
};

// rho -> P rho where P exchanges the two (equal-dimension) wires.
// P permutes basis kets, so row r of the product is row swap(r) of rho.
inline DensityMatrix left_multiply_swap(const DensityMatrix& rho, const std::string& a,
                                        const std::string& b) {
    const auto dims = rho.system().dims();
    const auto strides = row_major_strides(dims);
    const std::size_t pa = rho.system().position(a), pb = rho.system().position(b);
    if (pa == pb) throw dimension_error("left_multiply_swap: identical wires");
    if (dims[pa] != dims[pb]) throw dimension_error("left_multiply_swap: dimensions differ");
    const std::size_t d = rho.dim();
    std::vector<cplx> out(d * d);
    std::vector<std::size_t> digits(dims.size(), 0);
    std::size_t r = 0;
    do {
        std::size_t sr = r - digits[pa] * strides[pa] - digits[pb] * strides[pb] +
                         digits[pb] * strides[pa] + digits[pa] * strides[pb];
        for (std::size_t c = 0; c < d; ++c) out[r * d + c] = rho.at(sr, c);
        ++r;
    } while (advance(digits, dims));
    return DensityMatrix(rho.system(), std::move(out));
}

// Trace out the listed wires; surviving wires keep their original order.
inline DensityMatrix partial_trace(const DensityMatrix& rho,
                                   const std::vector<std::string>& dropped) {
    const auto dims = rho.system().dims();
    const auto strides = row_major_strides(dims);
    std::vector<bool> drop(dims.size(), false);
    for (const std::string& w : dropped) {
        const std::size_t p = rho.system().position(w);
        if (drop[p]) throw dimension_error("partial_trace: wire listed twice: " + w);
        drop[p] = true;
    }
    std::vector<Wire> kept;
    std::vector<std::size_t> kpos, tpos;
    for (std::size_t i = 0; i < dims.size(); ++i) {
        if (drop[i]) {
            tpos.push_back(i);
        } else {
            kpos.push_back(i);
            kept.push_back(rho.system().wire(i));
        }
    }

    std::vector<std::size_t> kdims, tdims;
    for (std::size_t p : kpos) kdims.push_back(dims[p]);
    for (std::size_t p : tpos) tdims.push_back(dims[p]);
    const std::size_t dk = total_dim(kdims);
    std::vector<cplx> out(dk * dk, cplx{});

    std::vector<std::size_t> kr(kdims.size(), 0);
    std::size_t r = 0;
    do {
        std::vector<std::size_t> kc(kdims.size(), 0);
        std::size_t c = 0;
        do {
            cplx s{};
            std::vector<std::size_t> t(tdims.size(), 0);
            do {
                std::size_t fr = 0, fc = 0;
                for (std::size_t k = 0; k < kpos.size(); ++k) {
                    fr += kr[k] * strides[kpos[k]];
                    fc += kc[k] * strides[kpos[k]];
                }
                for (std::size_t k = 0; k < tpos.size(); ++k) {
                    fr += t[k] * strides[tpos[k]];
                    fc += t[k] * strides[tpos[k]];
                }
                s += rho.at(fr, fc);
            } while (advance(t, tdims));
            out[r * dk + c] = s;
            ++c;
        } while (advance(kc, kdims));
        ++r;
    } while (advance(kr, kdims));
    return DensityMatrix(WireSystem(std::move(kept)), std::move(out));
}

} // namespace qsem
