#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qsem/contraction.hpp"
#include "qsem/numeric.hpp"
#include "qsem/semantics.hpp"
#include "qsem/state.hpp"

namespace qsem {

// Question answering on the simulator: the question meaning is prepared
// by contracting a copying interrogative with the verb and the answer
// superposition, leaving a state on an index wire (one qudit of
// dimension P = 2^p enumerating candidate answers) and a truth qubit.
// Amplitude amplification then rotates the index register toward the
// answers whose truth qubit is |1>.

inline constexpr const char* kIndexWire = "3";
inline constexpr const char* kTruthWire = "4";
inline constexpr const char* kAncillaWire = "11";

struct QAInstance {
    std::size_t index_qubits = 2;               // p; P = 2^p candidate answers
    std::size_t dim_n = 4;                      // noun space dimension
    std::vector<std::string> answers;           // P answer words
    std::vector<int> truth;                     // P flags: does this answer hold
    std::vector<std::vector<cplx>> nouns;       // P noun vectors, each dim_n long
    std::vector<cplx> verb;                     // dim_n x 2 row-major noun->truth map

    std::size_t total() const { return std::size_t{1} << index_qubits; }
    std::size_t solutions() const {
        std::size_t q = 0;
        for (int t : truth) q += t != 0;
        return q;
    }

    void validate() const {
        const std::size_t P = total();
        if (answers.size() != P) throw input_error("instance: need exactly 2^p answers");
        if (truth.size() != P) throw input_error("instance: need exactly 2^p truth flags");
        for (int t : truth)
            if (t != 0 && t != 1) throw input_error("instance: truth flags must be 0 or 1");
        if (nouns.size() != P) throw input_error("instance: need one noun vector per answer");
        for (const auto& v : nouns)
            if (v.size() != dim_n) throw input_error("instance: noun vector has wrong length");
        if (verb.size() != dim_n * 2) throw input_error("instance: verb must be dim_n x 2");
    }

    // Basis nouns, one per answer, and a verb that reads the truth table.
    // Requires dim_n == P.
    static QAInstance canonical(std::size_t p, std::vector<int> truth_flags,
                                std::vector<std::string> answer_words = {}) {
        QAInstance inst;
        inst.index_qubits = p;
        const std::size_t P = inst.total();
        inst.dim_n = P;
        inst.truth = std::move(truth_flags);
        inst.answers = std::move(answer_words);
        if (inst.answers.empty())
            for (std::size_t i = 0; i < P; ++i) inst.answers.push_back("a" + std::to_string(i));
        inst.nouns.assign(P, std::vector<cplx>(P, cplx{}));
        for (std::size_t i = 0; i < P; ++i) inst.nouns[i][i] = 1.0;
        inst.verb.assign(P * 2, cplx{});
        if (inst.truth.size() == P)
            for (std::size_t x = 0; x < P; ++x) inst.verb[x * 2 + (inst.truth[x] ? 1 : 0)] = 1.0;
        inst.validate();
        return inst;
    }
};

// Copying interrogative on factors [I,N,I,S,N,S]: both index wires agree,
// the noun and truth arguments are mirrored into the result slots.
inline WordTensor build_who_state(std::size_t index_qubits, std::size_t dim_n) {
    const std::size_t P = std::size_t{1} << index_qubits;
    SemanticSpace space;
    space.factors = {{Role::I, P, 0}, {Role::N, dim_n, 0}, {Role::I, P, 0},
                     {Role::S, 2, 0}, {Role::N, dim_n, 0}, {Role::S, 2, 0}};
    std::vector<cplx> amp(total_dim(space.dims()), cplx{});
    const auto strides = row_major_strides(space.dims());
    for (std::size_t a = 0; a < P; ++a)
        for (std::size_t x = 0; x < dim_n; ++x)
            for (std::size_t s = 0; s < 2; ++s)
                amp[a * strides[0] + x * strides[1] + a * strides[2] + s * strides[3] +
                    x * strides[4] + s * strides[5]] = 1.0;
    return WordTensor(std::move(space), std::move(amp));
}

inline WordTensor build_verb_tensor(const QAInstance& inst) {
    SemanticSpace space;
    space.factors = {{Role::N, inst.dim_n, 0}, {Role::S, 2, 0}};
    return WordTensor(std::move(space), inst.verb);
}

// Answer superposition on [N,I]: noun vector of answer j against index j.
inline WordTensor build_answers_state(const QAInstance& inst) {
    const std::size_t P = inst.total();
    SemanticSpace space;
    space.factors = {{Role::N, inst.dim_n, 0}, {Role::I, P, 0}};
    std::vector<cplx> amp(inst.dim_n * P, cplx{});
    for (std::size_t j = 0; j < P; ++j)
        for (std::size_t x = 0; x < inst.dim_n; ++x) amp[x * P + j] = inst.nouns[j][x];
    return WordTensor(std::move(space), std::move(amp));
}

struct PrepResult {
    PureState state;   // normalized, wires kIndexWire (dim P) and kTruthWire (dim 2)
    std::string mode;  // "circuit" when contracted end to end, "direct" when built algebraically
};

// Prepare the question state. The circuit route contracts
// who (x) verb, then (x) answers, and checks that the result pairs each
// index with exactly one truth value, uniformly, matching the declared
// truth table. Instances too large for the dense cap take the direct
// algebraic route instead.
inline PrepResult prepare_initial(const QAInstance& inst, double tol = kSolverTol) {
    inst.validate();
    const std::size_t P = inst.total();
    if (inst.solutions() == 0) throw input_error("instance has no true answer");

    const std::size_t stage1 = 8 * P * P * inst.dim_n * inst.dim_n * inst.dim_n;
    const std::size_t stage2 = 2 * P * P * P * inst.dim_n * inst.dim_n;
    if (stage1 > kDenseCap || stage2 > kDenseCap) {
        std::vector<cplx> amp(P * 2, cplx{});
        const double v = 1.0 / std::sqrt(static_cast<double>(P));
        for (std::size_t a = 0; a < P; ++a) amp[a * 2 + (inst.truth[a] ? 1 : 0)] = v;
        return {PureState(WireSystem({{kIndexWire, P}, {kTruthWire, 2}}), std::move(amp)),
                "direct"};
    }

    PureState who = state_from_tensor(build_who_state(inst.index_qubits, inst.dim_n),
                                      {"1", "2", "3", "4", "5", "6"});
    PureState verb = state_from_tensor(build_verb_tensor(inst), {"7", "8"});
    ContractionResult step1 =
        contract_wire_pairs(tensor_product(who, verb), {{"5", "7"}, {"6", "8"}}, tol);
    PureState answers = state_from_tensor(build_answers_state(inst), {"9", "10"});
    ContractionResult step2 = contract_wire_pairs(tensor_product(step1.state, answers),
                                                  {{"2", "9"}, {"1", "10"}}, tol);
    if (step1.zero || step2.zero)
        throw numeric_error("question contraction annihilated the state");

    PureState st = std::move(step2.state);
    const std::vector<cplx>& amp = st.amplitudes();
    double peak = max_abs(amp);
    if (peak == 0.0) throw numeric_error("question contraction produced a zero state");

    double worst = 0.0;
    std::string spectrum;
    char buf[48];
    bool good = true;
    for (std::size_t a = 0; a < P; ++a) {
        std::size_t hits = 0, l_of_a = 0;
        for (std::size_t l = 0; l < 2; ++l) {
            const double mag = std::abs(amp[a * 2 + l]);
            std::snprintf(buf, sizeof buf, "%s%.6g", (a || l) ? "," : "", mag);
            spectrum += buf;
            if (mag > tol * peak) {
                ++hits;
                l_of_a = l;
                worst = std::max(worst, std::abs(mag - peak) / peak);
            }
        }
        if (hits != 1 || l_of_a != static_cast<std::size_t>(inst.truth[a])) good = false;
    }
    if (!good || worst > tol)
        throw numeric_error("prepared question state does not pair each answer with its "
                            "declared truth value uniformly; magnitudes [" + spectrum + "]",
                            worst);
    st.normalize();
    return {std::move(st), "circuit"};
}

// ---------------------------------------------------------------------------
// Amplitude amplification pieces.

enum class OracleKind { Direct, Kickback };

// Flip the sign of every amplitude whose truth qubit is |1>.
inline PureState oracle(const PureState& state, OracleKind kind) {
    if (kind == OracleKind::Direct) return apply_gate(state, GateOp::z(kTruthWire));
    // Phase kickback: ancilla in (|0>-|1>)/sqrt(2), CNOT from the truth
    // qubit, then project the ancilla back out on the same vector.
    const double r = 1.0 / std::sqrt(2.0);
    PureState anc(WireSystem({{kAncillaWire, 2}}), {r, -r});
    PureState joint = apply_gate(tensor_product(state, anc),
                                 GateOp::cnot(kTruthWire, kAncillaWire));
    std::vector<cplx> amp(state.amplitudes().size());
    for (std::size_t i = 0; i < amp.size(); ++i)
        amp[i] = (joint.amplitudes()[2 * i] - joint.amplitudes()[2 * i + 1]) * r;
    return PureState(state.system(), std::move(amp));
}

// Unitary completing the (normalized) state as its first column.
inline std::vector<cplx> state_prep_unitary(const PureState& state) {
    std::vector<cplx> target = state.amplitudes();
    const double n2 = norm_squared(target);
    if (n2 == 0.0) throw numeric_error("state_prep_unitary: zero state");
    const double inv = 1.0 / std::sqrt(n2);
    for (cplx& a : target) a *= inv;
    return unitary_from_first_column(target);
}

// Reflection about the prepared state: U (2|0><0| - 1) U^dagger.
inline PureState diffusion(const PureState& state, const std::vector<cplx>& prep_unitary) {
    std::vector<std::string> labels;
    for (const Wire& w : state.system().wires()) labels.push_back(w.label);
    const std::size_t n = state.amplitudes().size();
    std::vector<cplx> u_dag(n * n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) u_dag[r * n + c] = std::conj(prep_unitary[c * n + r]);
    PureState st = apply_gate(state, GateOp::unitary(labels, u_dag));
    std::vector<cplx>& amp = st.mutable_amplitudes();
    for (std::size_t i = 1; i < amp.size(); ++i) amp[i] = -amp[i];
    return apply_gate(st, GateOp::unitary(labels, prep_unitary));
}

inline double success_probability(const PureState& state, const QAInstance& inst) {
    const std::size_t P = inst.total();
    if (state.amplitudes().size() != P * 2)
        throw dimension_error("success_probability: unexpected state size");
    double hit = 0.0;
    for (std::size_t a = 0; a < P; ++a)
        if (inst.truth[a])
            for (std::size_t l = 0; l < 2; ++l) hit += std::norm(state.amplitudes()[a * 2 + l]);
    return hit / norm_squared(state.amplitudes());
}

// Rotation angle of one amplification step, as reported: the probability
// of success after k iterations is cos^2((2k+1) theta / 2).
inline double grover_angle(std::size_t total, std::size_t solutions) {
    if (solutions == 0 || solutions > total)
        throw input_error("grover_angle: need 1 <= solutions <= total");
    return 2.0 * std::acos(std::sqrt(static_cast<double>(solutions) /
                                     static_cast<double>(total)));
}

inline std::size_t grover_optimal_iterations(std::size_t total, std::size_t solutions) {
    const double step = std::acos(-1.0) - grover_angle(total, solutions);
    const double k = std::floor((std::acos(-1.0) / 2.0 - step / 2.0) / step + 0.5);
    return k < 0.0 ? 0 : static_cast<std::size_t>(k);
}

struct GroverReport {
    std::size_t index_qubits = 0;
    std::size_t total = 0;
    std::size_t solutions = 0;
    double theta = 0.0;
    std::size_t iterations = 0;
    double success_probability = 0.0;
    std::size_t sampled_index = 0;
    std::string sampled_answer;
    std::size_t shots = 0;
    std::vector<std::pair<std::size_t, double>> curve; // (k, success probability)
    std::vector<std::size_t> frequencies;              // per answer, over all shots
    std::string prep_mode;
    PureState final_state;
};

inline PureState grover_iterate(const PureState& state, const std::vector<cplx>& prep_unitary,
                                OracleKind kind) {
    return diffusion(oracle(state, kind), prep_unitary);
}

// Success probabilities after 0..k_max iterations, from the circuit.
inline std::vector<double> success_curve(const QAInstance& inst, std::size_t k_max,
                                         OracleKind kind = OracleKind::Direct,
                                         double tol = kSolverTol) {
    PrepResult prep = prepare_initial(inst, tol);
    const std::vector<cplx> u = state_prep_unitary(prep.state);
    std::vector<double> out{success_probability(prep.state, inst)};
    PureState st = std::move(prep.state);
    for (std::size_t k = 1; k <= k_max; ++k) {
        st = grover_iterate(st, u, kind);
        out.push_back(success_probability(st, inst));
    }
    return out;
}

inline GroverReport grover_search(const QAInstance& inst, long iterations, std::size_t shots,
                                  std::uint64_t seed, OracleKind kind = OracleKind::Direct,
                                  double tol = kSolverTol) {
    inst.validate();
    const std::size_t P = inst.total(), Q = inst.solutions();
    if (Q == 0) throw input_error("no answer satisfies the question; nothing to amplify");
    if (shots == 0) throw input_error("grover_search: need at least one shot");

    GroverReport rep;
    rep.index_qubits = inst.index_qubits;
    rep.total = P;
    rep.solutions = Q;
    rep.theta = grover_angle(P, Q);
    rep.iterations = iterations < 0 ? grover_optimal_iterations(P, Q)
                                    : static_cast<std::size_t>(iterations);
    rep.shots = shots;

    PrepResult prep = prepare_initial(inst, tol);
    rep.prep_mode = prep.mode;
    const std::vector<cplx> u = state_prep_unitary(prep.state);

    const std::size_t k_max = std::max(rep.iterations, grover_optimal_iterations(P, Q)) + 1;
    PureState st = prep.state;
    rep.curve.emplace_back(0, success_probability(st, inst));
    PureState at_k = st;
    for (std::size_t k = 1; k <= k_max; ++k) {
        st = grover_iterate(st, u, kind);
        rep.curve.emplace_back(k, success_probability(st, inst));
        if (k == rep.iterations) at_k = st;
    }
    if (rep.iterations == 0) at_k = prep.state;
    rep.success_probability = success_probability(at_k, inst);
    rep.final_state = at_k;

    rep.frequencies.assign(P, 0);
    SplitMix64 shot_seeds(seed);
    for (std::size_t s = 0; s < shots; ++s) {
        MeasureResult m = measure_wires(at_k, {kIndexWire}, shot_seeds.next());
        if (s == 0) rep.sampled_index = m.outcome[0];
        ++rep.frequencies[m.outcome[0]];
    }
    rep.sampled_answer = inst.answers[rep.sampled_index];
    return rep;
}

} // namespace qsem
