#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qsem/layout.hpp"
#include "qsem/numeric.hpp"
#include "qsem/semantics.hpp"

namespace qsem {

// Labeled qudit wires and dense pure states over them.
//
// Wires are identified by string labels ("1", "2", ..., "c"); amplitudes
// are stored row-major in wire order. States may be unnormalized: the
// squared norm rides along in `norm_tracked` so contraction weights
// survive until someone explicitly normalizes.

struct Wire {
    std::string label;
    std::size_t dim;
};

class WireSystem {
public:
    WireSystem() = default;
    explicit WireSystem(std::vector<Wire> wires) : wires_(std::move(wires)) {
        for (std::size_t i = 0; i < wires_.size(); ++i) {
            if (wires_[i].dim == 0) throw dimension_error("wire with dimension 0");
            if (!index_.emplace(wires_[i].label, i).second)
                throw dimension_error("duplicate wire label " + wires_[i].label);
        }
    }

    std::size_t count() const { return wires_.size(); }
    const std::vector<Wire>& wires() const { return wires_; }
    const Wire& wire(std::size_t i) const { return wires_.at(i); }

    std::size_t position(const std::string& label) const {
        auto it = index_.find(label);
        if (it == index_.end()) throw dimension_error("unknown wire label " + label);
        return it->second;
    }
    bool has(const std::string& label) const { return index_.count(label) != 0; }
    std::size_t dim_of(const std::string& label) const { return wires_[position(label)].dim; }

    std::vector<std::size_t> dims() const {
        std::vector<std::size_t> d;
        d.reserve(wires_.size());
        for (const Wire& w : wires_) d.push_back(w.dim);
        return d;
    }
    std::size_t total() const { return total_dim(dims()); }

private:
    std::vector<Wire> wires_;
    std::map<std::string, std::size_t> index_;
};

class PureState {
public:
    PureState() = default;
    PureState(WireSystem system, std::vector<cplx> amp)
        : system_(std::move(system)), amp_(std::move(amp)) {
        if (system_.total() != amp_.size())
            throw dimension_error("PureState: amplitude count does not match wire dims");
        if (amp_.size() > kDenseCap)
            throw config_error("dense cap exceeded: " + std::to_string(amp_.size()) +
                               " amplitudes");
        norm_tracked_ = norm_squared(amp_);
    }

    const WireSystem& system() const { return system_; }
    const std::vector<cplx>& amplitudes() const { return amp_; }
    std::vector<cplx>& mutable_amplitudes() { return amp_; }
    double norm_tracked() const { return norm_tracked_; }
    void set_norm_tracked(double v) { norm_tracked_ = v; }
    void refresh_norm() { norm_tracked_ = norm_squared(amp_); }

    // Tracked norm must match the amplitudes it annotates.
    void check_norm(double tol = kNormTol) const {
        double actual = norm_squared(amp_);
        double scale = std::max(1.0, actual);
        if (std::abs(actual - norm_tracked_) > tol * scale)
            throw numeric_error("norm_tracked out of sync", std::abs(actual - norm_tracked_));
    }

    // Scales to unit norm; returns the squared norm that was removed.
    double normalize() {
        double w = norm_squared(amp_);
        if (w == 0.0) throw numeric_error("normalize: zero state");
        double inv = 1.0 / std::sqrt(w);
        for (cplx& a : amp_) a *= inv;
        norm_tracked_ = 1.0;
        return w;
    }

private:
    WireSystem system_;
    std::vector<cplx> amp_;
    double norm_tracked_ = 0.0;
};

// State of one word tensor on freshly labeled wires.
inline PureState state_from_tensor(const WordTensor& t, const std::vector<std::string>& labels) {
    if (labels.size() != t.space.factors.size())
        throw dimension_error("state_from_tensor: label count mismatch");
    std::vector<Wire> wires;
    for (std::size_t i = 0; i < labels.size(); ++i)
        wires.push_back({labels[i], t.space.factors[i].dim});
    return PureState(WireSystem(std::move(wires)), t.amp);
}

// Kronecker product keeping each part's wire labels (labels must not clash).
inline PureState tensor_product(const PureState& a, const PureState& b) {
    std::vector<Wire> wires = a.system().wires();
    for (const Wire& w : b.system().wires()) wires.push_back(w);
    const std::size_t nb = b.amplitudes().size();
    if (a.amplitudes().size() > kDenseCap / std::max<std::size_t>(nb, 1))
        throw config_error("dense cap exceeded by tensor product");
    std::vector<cplx> amp(a.amplitudes().size() * nb);
    for (std::size_t i = 0; i < a.amplitudes().size(); ++i)
        for (std::size_t j = 0; j < nb; ++j) amp[i * nb + j] = a.amplitudes()[i] * b.amplitudes()[j];
    PureState out(WireSystem(std::move(wires)), std::move(amp));
    out.set_norm_tracked(a.norm_tracked() * b.norm_tracked());
    return out;
}

// Product of word states on wires labeled "1", "2", ... in factor order.
inline PureState product_state(const std::vector<WordTensor>& parts) {
    if (parts.empty()) throw input_error("product_state: no parts");
    std::size_t next = 1;
    PureState acc;
    bool first = true;
    for (const WordTensor& t : parts) {
        std::vector<std::string> labels;
        for (std::size_t i = 0; i < t.space.factors.size(); ++i)
            labels.push_back(std::to_string(next++));
        PureState s = state_from_tensor(t, labels);
        acc = first ? std::move(s) : tensor_product(acc, s);
        first = false;
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Gates

struct GateOp {
    enum class Kind { H, X, Z, CNOT, SWAP, CSWAP, Unitary };

    Kind kind;
    std::vector<std::string> targets; // CNOT: {control, target}; CSWAP: {control, a, b}
    std::vector<cplx> matrix;         // Unitary only; row-major over target dims

    static GateOp h(std::string w) { return {Kind::H, {std::move(w)}, {}}; }
    static GateOp x(std::string w) { return {Kind::X, {std::move(w)}, {}}; }
    static GateOp z(std::string w) { return {Kind::Z, {std::move(w)}, {}}; }
    static GateOp cnot(std::string control, std::string target) {
        return {Kind::CNOT, {std::move(control), std::move(target)}, {}};
    }
    static GateOp swap(std::string a, std::string b) {
        return {Kind::SWAP, {std::move(a), std::move(b)}, {}};
    }
    static GateOp cswap(std::string control, std::string a, std::string b) {
        return {Kind::CSWAP, {std::move(control), std::move(a), std::move(b)}, {}};
    }
    static GateOp unitary(std::vector<std::string> wires, std::vector<cplx> m,
                          double tol = kAlgebraicTol) {
        std::size_t n = 0;
        while (n * n < m.size()) ++n;
        if (n * n != m.size()) throw dimension_error("unitary: matrix not square");
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                cplx s{};
                for (std::size_t k = 0; k < n; ++k) s += std::conj(m[k * n + i]) * m[k * n + j];
                if (std::abs(s - (i == j ? cplx{1.0} : cplx{})) > tol)
                    throw numeric_error("unitary: matrix is not unitary",
                                        std::abs(s - (i == j ? cplx{1.0} : cplx{})));
            }
        }
        return {Kind::Unitary, std::move(wires), std::move(m)};
    }
};

namespace detail {

// Apply a dense matrix over the listed wires (row-major over their dims,
// in listed order). Gather-multiply-scatter per residual index.
inline void apply_dense(PureState& st, const std::vector<std::string>& wires,
                        const std::vector<cplx>& m) {
    const auto dims = st.system().dims();
    const auto strides = row_major_strides(dims);
    std::vector<std::size_t> tpos, tdims;
    for (const std::string& w : wires) {
        tpos.push_back(st.system().position(w));
        tdims.push_back(dims[tpos.back()]);
    }
    const std::size_t block = total_dim(tdims);
    if (m.size() != block * block) throw dimension_error("gate matrix does not fit targets");

    // offsets of each target-block index combination
    std::vector<std::size_t> offs(block);
    std::vector<std::size_t> digit(tdims.size(), 0);
    std::size_t bi = 0;
    do {
        std::size_t o = 0;
        for (std::size_t k = 0; k < tpos.size(); ++k) o += digit[k] * strides[tpos[k]];
        offs[bi++] = o;
    } while (advance(digit, tdims));

    std::vector<std::size_t> rdims;
    std::vector<std::size_t> rstrides;
    for (std::size_t i = 0; i < dims.size(); ++i) {
        if (std::find(tpos.begin(), tpos.end(), i) != tpos.end()) continue;
        rdims.push_back(dims[i]);
        rstrides.push_back(strides[i]);
    }
    std::vector<cplx>& amp = st.mutable_amplitudes();
    std::vector<cplx> in(block), out(block);
    std::vector<std::size_t> rdig(rdims.size(), 0);
    do {
        std::size_t base = 0;
        for (std::size_t k = 0; k < rdims.size(); ++k) base += rdig[k] * rstrides[k];
        for (std::size_t i = 0; i < block; ++i) in[i] = amp[base + offs[i]];
        for (std::size_t i = 0; i < block; ++i) {
            cplx s{};
            for (std::size_t j = 0; j < block; ++j) s += m[i * block + j] * in[j];
            out[i] = s;
        }
        for (std::size_t i = 0; i < block; ++i) amp[base + offs[i]] = out[i];
    } while (advance(rdig, rdims));
}

// Exchange the contents of two equal-dimension wires, optionally only on
// the control wire's |1> slice.
inline void apply_swap(PureState& st, const std::string& a, const std::string& b,
                       const std::string* control) {
    const auto dims = st.system().dims();
    const auto strides = row_major_strides(dims);
    const std::size_t pa = st.system().position(a), pb = st.system().position(b);
    if (pa == pb) throw dimension_error("swap: identical wires");
    if (dims[pa] != dims[pb]) throw dimension_error("swap: wire dimensions differ");
    std::size_t pc = 0;
    if (control) {
        pc = st.system().position(*control);
        if (dims[pc] != 2) throw dimension_error("controlled swap: control must be a qubit");
        if (pc == pa || pc == pb) throw dimension_error("controlled swap: control overlaps target");
    }
    std::vector<cplx>& amp = st.mutable_amplitudes();
    std::vector<std::size_t> digits(dims.size(), 0);
    std::size_t idx = 0;
    do {
        // visit each unordered pair once, from the lexicographically lower side
        if (digits[pa] < digits[pb] && (!control || digits[pc] == 1)) {
            const std::size_t delta = digits[pb] - digits[pa];
            std::size_t other = idx + delta * strides[pa] - delta * strides[pb];
            std::swap(amp[idx], amp[other]);
        }
        ++idx;
    } while (advance(digits, dims));
}

} // namespace detail

inline PureState apply_gate(const PureState& state, const GateOp& g) {
    PureState st = state;
    auto qubit_only = [&](const std::string& w) {
        if (st.system().dim_of(w) != 2)
            throw dimension_error("gate requires a qubit wire, got dim " +
                                  std::to_string(st.system().dim_of(w)) + " on " + w);
    };
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    switch (g.kind) {
        case GateOp::Kind::H:
            qubit_only(g.targets.at(0));
            detail::apply_dense(st, g.targets,
                                {inv_sqrt2, inv_sqrt2, inv_sqrt2, -inv_sqrt2});
            break;
        case GateOp::Kind::X:
            qubit_only(g.targets.at(0));
            detail::apply_dense(st, g.targets, {0.0, 1.0, 1.0, 0.0});
            break;
        case GateOp::Kind::Z:
            qubit_only(g.targets.at(0));
            detail::apply_dense(st, g.targets, {1.0, 0.0, 0.0, -1.0});
            break;
        case GateOp::Kind::CNOT: {
            qubit_only(g.targets.at(0));
            qubit_only(g.targets.at(1));
            std::vector<cplx> m(16, cplx{});
            m[0 * 4 + 0] = m[1 * 4 + 1] = m[2 * 4 + 3] = m[3 * 4 + 2] = 1.0;
            detail::apply_dense(st, g.targets, m);
            break;
        }
        case GateOp::Kind::SWAP:
            detail::apply_swap(st, g.targets.at(0), g.targets.at(1), nullptr);
            break;
        case GateOp::Kind::CSWAP:
            detail::apply_swap(st, g.targets.at(1), g.targets.at(2), &g.targets.at(0));
            break;
        case GateOp::Kind::Unitary:
            detail::apply_dense(st, g.targets, g.matrix);
            break;
    }
    st.set_norm_tracked(state.norm_tracked()); // gates preserve the norm
    return st;
}

// ---------------------------------------------------------------------------
// Measurement

struct MeasureResult {
    std::vector<std::size_t> outcome; // one digit per measured wire
    double probability = 0.0;
    PureState collapsed;
};

// Born sampling on the listed wires followed by collapse and renormalize.
// Deterministic for a fixed seed.
inline MeasureResult measure_wires(const PureState& state, const std::vector<std::string>& wires,
                                   std::uint64_t seed) {
    if (wires.empty()) throw input_error("measure_wires: no wires given");
    const double total = norm_squared(state.amplitudes());
    if (total == 0.0) throw numeric_error("measure_wires: zero state");

    const auto dims = state.system().dims();
    const auto strides = row_major_strides(dims);
    std::vector<std::size_t> tpos, tdims;
    for (const std::string& w : wires) {
        tpos.push_back(state.system().position(w));
        tdims.push_back(dims[tpos.back()]);
    }
    const std::size_t blocks = total_dim(tdims);

    std::vector<double> mass(blocks, 0.0);
    for (std::size_t i = 0; i < state.amplitudes().size(); ++i) {
        std::size_t key = 0, rem = i;
        std::vector<std::size_t> digit(dims.size());
        for (std::size_t k = 0; k < dims.size(); ++k) {
            digit[k] = rem / strides[k];
            rem %= strides[k];
        }
        for (std::size_t k = 0; k < tpos.size(); ++k) key = key * tdims[k] + digit[tpos[k]];
        mass[key] += std::norm(state.amplitudes()[i]);
    }

    SplitMix64 rng(seed);
    double draw = rng.uniform() * total, acc = 0.0;
    std::size_t picked = blocks - 1;
    for (std::size_t b = 0; b < blocks; ++b) {
        acc += mass[b];
        if (draw < acc) { picked = b; break; }
    }

    MeasureResult res;
    res.outcome = unflatten(picked, tdims);
    res.probability = mass[picked] / total;
    if (mass[picked] == 0.0) throw numeric_error("measure_wires: sampled zero-mass outcome");

    std::vector<cplx> amp = state.amplitudes();
    const double inv = 1.0 / std::sqrt(mass[picked]);
    for (std::size_t i = 0; i < amp.size(); ++i) {
        std::size_t rem = i;
        bool match = true;
        std::vector<std::size_t> digit(dims.size());
        for (std::size_t k = 0; k < dims.size(); ++k) {
            digit[k] = rem / strides[k];
            rem %= strides[k];
        }
        for (std::size_t k = 0; k < tpos.size(); ++k)
            if (digit[tpos[k]] != res.outcome[k]) { match = false; break; }
        amp[i] = match ? amp[i] * inv : cplx{};
    }
    res.collapsed = PureState(state.system(), std::move(amp));
    return res;
}

// ---------------------------------------------------------------------------
// Dump format: header with wire labels and dims, then one line per
// amplitude above the printing threshold, flat row-major index first.

inline std::string dump_state(const PureState& state, double threshold = 1e-14) {
    std::string out = "wires:";
    bool first = true;
    for (const Wire& w : state.system().wires()) {
        out += first ? " " : ",";
        out += w.label + ":" + std::to_string(w.dim);
        first = false;
    }
    out += "\n";
    char buf[80];
    for (std::size_t i = 0; i < state.amplitudes().size(); ++i) {
        const cplx a = state.amplitudes()[i];
        if (std::abs(a) <= threshold) continue;
        std::snprintf(buf, sizeof buf, "%zu %.12g %.12g\n", i, a.real(), a.imag());
        out += buf;
    }
    return out;
}

} // namespace qsem
