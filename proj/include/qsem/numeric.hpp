#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "qsem/errors.hpp"

namespace qsem {

using cplx = std::complex<double>;

// Default tolerances. Algebraic identities are checked tightly; anything
// that goes through a solve or a reconstruction gets more slack.
inline constexpr double kAlgebraicTol = 1e-10;
inline constexpr double kSolverTol = 1e-8;
inline constexpr double kNormTol = 1e-12;

// Dense simulation cap: states beyond this many amplitudes are refused.
inline constexpr std::size_t kDenseCap = std::size_t{1} << 20;

inline double norm_squared(const std::vector<cplx>& amp) {
    double s = 0.0;
    for (const cplx& a : amp) s += std::norm(a);
    return s;
}

inline double max_abs(const std::vector<cplx>& amp) {
    double m = 0.0;
    for (const cplx& a : amp) m = std::max(m, std::abs(a));
    return m;
}

// Phase-insensitive comparison: rotate `b` so its largest-magnitude entry
// is phase-aligned with the matching entry of `a`, then take max |diff|.
// Returns the residual; callers pick the tolerance.
inline double phase_aligned_distance(const std::vector<cplx>& a,
                                     const std::vector<cplx>& b) {
    if (a.size() != b.size()) throw dimension_error("phase_aligned_distance: size mismatch");
    std::size_t pivot = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
        double m = std::abs(b[i]);
        if (m > best) { best = m; pivot = i; }
    }
    cplx phase(1.0, 0.0);
    if (best > 0.0 && std::abs(a[pivot]) > 0.0)
        phase = (a[pivot] / b[pivot]) / std::abs(a[pivot] / b[pivot]);
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        d = std::max(d, std::abs(a[i] - phase * b[i]));
    return d;
}

// Scale- and phase-insensitive distance: both sides normalized first.
// Zero vectors compare equal to zero vectors only.
inline double ray_distance(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double na = std::sqrt(norm_squared(a)), nb = std::sqrt(norm_squared(b));
    if (na == 0.0 || nb == 0.0) return std::max(na, nb);
    std::vector<cplx> ua(a), ub(b);
    for (cplx& x : ua) x /= na;
    for (cplx& x : ub) x /= nb;
    return phase_aligned_distance(ua, ub);
}

// Deterministic 64-bit generator used for internal verification probes and
// seeded sampling. Hand-rolled uniform doubles keep behavior identical
// across standard libraries.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    cplx unit_complex() {
        double re = 2.0 * uniform() - 1.0, im = 2.0 * uniform() - 1.0;
        return {re, im};
    }

private:
    std::uint64_t state_;
};

// Solve A x = b for a small dense complex system by Gaussian elimination
// with partial pivoting. Returns the pivot condition estimate
// max|pivot| / min|pivot| through `condition` when non-null.
inline std::vector<cplx> solve_dense(std::vector<cplx> a, std::vector<cplx> b,
                                     std::size_t n, double* condition = nullptr) {
    if (a.size() != n * n || b.size() != n) throw dimension_error("solve_dense: bad shapes");
    double pmax = 0.0, pmin = 0.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
        if (piv != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(a[col * n + c], a[piv * n + c]);
            std::swap(b[col], b[piv]);
        }
        double p = std::abs(a[col * n + col]);
        if (p == 0.0) throw numeric_error("solve_dense: singular system");
        pmax = std::max(pmax, p);
        pmin = (col == 0) ? p : std::min(pmin, p);
        for (std::size_t r = col + 1; r < n; ++r) {
            cplx f = a[r * n + col] / a[col * n + col];
            if (f == cplx{}) continue;
            for (std::size_t c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
            b[r] -= f * b[col];
        }
    }
    std::vector<cplx> x(n);
    for (std::size_t ri = n; ri-- > 0;) {
        cplx s = b[ri];
        for (std::size_t c = ri + 1; c < n; ++c) s -= a[ri * n + c] * x[c];
        x[ri] = s / a[ri * n + ri];
    }
    if (condition) *condition = (pmin > 0.0) ? pmax / pmin : 0.0;
    return x;
}

// Complete a unit vector into a unitary whose first column is that vector
// (modified Gram-Schmidt over the standard basis).
inline std::vector<cplx> unitary_from_first_column(const std::vector<cplx>& target) {
    const std::size_t n = target.size();
    double nt = std::sqrt(norm_squared(target));
    if (nt == 0.0) throw numeric_error("unitary_from_first_column: zero target");
    std::vector<std::vector<cplx>> cols;
    cols.reserve(n);
    std::vector<cplx> first(target);
    for (cplx& x : first) x /= nt;
    cols.push_back(first);
    for (std::size_t k = 0; cols.size() < n && k < n; ++k) {
        std::vector<cplx> v(n, cplx{});
        v[k] = 1.0;
        for (const auto& c : cols) {
            cplx ov{};
            for (std::size_t i = 0; i < n; ++i) ov += std::conj(c[i]) * v[i];
            for (std::size_t i = 0; i < n; ++i) v[i] -= ov * c[i];
        }
        double nv = std::sqrt(norm_squared(v));
        if (nv < 1e-12) continue; // basis vector already spanned
        for (cplx& x : v) x /= nv;
        cols.push_back(v);
    }
    if (cols.size() != n) throw numeric_error("unitary_from_first_column: completion failed");
    std::vector<cplx> u(n * n);
    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t r = 0; r < n; ++r) u[r * n + c] = cols[c][r];
    return u;
}

} // namespace qsem
