#include <catch2/catch_amalgamated.hpp>

#include <qsem/grover.hpp>

#include "support/oracles.hpp"

namespace {

using qsem::cplx;
using qsem::PureState;
using qsem::QAInstance;

double max_entry_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    REQUIRE(a.size() == b.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

std::vector<double> index_probabilities(const PureState& st, std::size_t P) {
    std::vector<double> prob(P, 0.0);
    const double n2 = qsem::norm_squared(st.amplitudes());
    for (std::size_t a = 0; a < P; ++a)
        for (std::size_t l = 0; l < 2; ++l) prob[a] += std::norm(st.amplitudes()[a * 2 + l]) / n2;
    return prob;
}

} // namespace

TEST_CASE("the copying interrogative has one unit entry per index-noun-truth triple") {
    const qsem::WordTensor who = qsem::build_who_state(1, 2);
    REQUIRE(who.amp.size() == 64);
    std::size_t nonzero = 0;
    for (const cplx& a : who.amp)
        if (a != cplx{}) {
            ++nonzero;
            CHECK(a == cplx(1.0, 0.0));
        }
    CHECK(nonzero == 8);

    // entries sit exactly where both index slots and both copies agree
    const auto strides = qsem::row_major_strides(who.space.dims());
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t x = 0; x < 2; ++x)
            for (std::size_t s = 0; s < 2; ++s)
                CHECK(who.amp[a * strides[0] + x * strides[1] + a * strides[2] +
                              s * strides[3] + x * strides[4] + s * strides[5]] ==
                      cplx(1.0, 0.0));
}

TEST_CASE("question preparation contracts to the uniform index-truth pairing") {
    const QAInstance inst = QAInstance::canonical(2, {1, 0, 0, 0});
    const qsem::PrepResult prep = qsem::prepare_initial(inst);
    CHECK(prep.mode == "circuit");
    REQUIRE(prep.state.system().count() == 2);
    CHECK(prep.state.system().wires()[0].label == qsem::kIndexWire);
    CHECK(prep.state.system().wires()[0].dim == 4);
    CHECK(prep.state.system().wires()[1].label == qsem::kTruthWire);
    CHECK(prep.state.system().wires()[1].dim == 2);
    CHECK(max_entry_diff(prep.state.amplitudes(), oracles::initial_state_oracle(inst.truth)) <
          1e-12);
}

TEST_CASE("instances past the dense cap fall back to the algebraic preparation") {
    const QAInstance inst =
        QAInstance::canonical(4, {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0});
    const qsem::PrepResult prep = qsem::prepare_initial(inst);
    CHECK(prep.mode == "direct");
    CHECK(max_entry_diff(prep.state.amplitudes(), oracles::initial_state_oracle(inst.truth)) <
          1e-12);
}

TEST_CASE("preparation rejects instances that do not contract uniformly") {
    QAInstance inst = QAInstance::canonical(1, {1, 0});
    inst.verb = {0.0, 2.0, 1.0, 0.0}; // noun 0 twice the weight of noun 1
    REQUIRE_THROWS_AS(qsem::prepare_initial(inst), qsem::numeric_error);

    QAInstance lies = QAInstance::canonical(1, {1, 0});
    lies.truth = {1, 1}; // declared truth contradicts what the verb computes
    REQUIRE_THROWS_AS(qsem::prepare_initial(lies), qsem::numeric_error);

    QAInstance empty = QAInstance::canonical(1, {0, 0});
    REQUIRE_THROWS_AS(qsem::prepare_initial(empty), qsem::input_error);
}

TEST_CASE("the two oracle implementations are the same operator") {
    const QAInstance inst = QAInstance::canonical(3, {1, 0, 0, 1, 0, 0, 1, 0});
    const qsem::PrepResult prep = qsem::prepare_initial(inst);
    const std::vector<cplx> u = qsem::state_prep_unitary(prep.state);

    PureState direct = prep.state, kick = prep.state;
    for (int k = 0; k < 3; ++k) {
        direct = qsem::grover_iterate(direct, u, qsem::OracleKind::Direct);
        kick = qsem::grover_iterate(kick, u, qsem::OracleKind::Kickback);
        INFO("after iteration " << k + 1);
        CHECK(max_entry_diff(direct.amplitudes(), kick.amplitudes()) < 1e-12);
    }
}

TEST_CASE("the oracle flips exactly the solution signs") {
    const std::vector<int> truth = {1, 0, 1, 1, 0, 0, 0, 1};
    const QAInstance inst = QAInstance::canonical(3, truth);
    // distinct positive amplitude on each consistent slot
    std::vector<cplx> amp(16, cplx{});
    for (std::size_t a = 0; a < 8; ++a) amp[a * 2 + truth[a]] = 1.0 + double(a);
    const PureState st(qsem::WireSystem({{qsem::kIndexWire, 8}, {qsem::kTruthWire, 2}}),
                       std::move(amp));
    for (const auto kind : {qsem::OracleKind::Direct, qsem::OracleKind::Kickback}) {
        const PureState out = qsem::oracle(st, kind);
        std::size_t flipped = 0;
        for (std::size_t a = 0; a < 8; ++a) {
            const cplx before = st.amplitudes()[a * 2 + truth[a]];
            const cplx after = out.amplitudes()[a * 2 + truth[a]];
            if (std::abs(after + before) < 1e-12)
                ++flipped;
            else
                CHECK(std::abs(after - before) < 1e-12);
        }
        CHECK(flipped == inst.solutions());
    }
}

TEST_CASE("one amplification round lands on the closed-form state") {
    const std::vector<std::vector<int>> tables = {
        {1, 0, 0, 0},
        {0, 0, 0, 0, 1, 0, 0, 0},
        {0, 1, 0, 0, 0, 0, 1, 0},
    };
    for (const auto& truth : tables) {
        const QAInstance inst = QAInstance::canonical(
            truth.size() == 4 ? 2 : 3, truth);
        const qsem::PrepResult prep = qsem::prepare_initial(inst);
        const std::vector<cplx> u = qsem::state_prep_unitary(prep.state);
        const PureState once = qsem::grover_iterate(prep.state, u, qsem::OracleKind::Direct);
        INFO("P " << inst.total() << " Q " << inst.solutions());
        CHECK(qsem::ray_distance(once.amplitudes(), oracles::first_iteration_oracle(truth)) <
              1e-10);
    }
}

TEST_CASE("the success curve follows cos^2((2k+1) theta / 2)") {
    for (std::size_t p : {2u, 3u, 4u}) {
        const std::size_t P = std::size_t{1} << p;
        for (std::size_t Q : {1u, 2u}) {
            std::vector<int> truth(P, 0);
            for (std::size_t q = 0; q < Q; ++q) truth[(q * 5 + 1) % P] = 1;
            const QAInstance inst = QAInstance::canonical(p, truth);
            const std::vector<double> curve = qsem::success_curve(inst, 10);
            REQUIRE(curve.size() == 11);
            for (std::size_t k = 0; k <= 10; ++k) {
                INFO("P " << P << " Q " << Q << " k " << k);
                CHECK(std::abs(curve[k] - oracles::search_success(P, Q, k)) < 1e-9);
            }
        }
    }
}

TEST_CASE("iteration counts reach the best point of the rotation") {
    const std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> table = {
        {4, 1, 1}, {8, 1, 2}, {16, 1, 3}, {4, 2, 1}, {4, 4, 0}};
    for (const auto& [P, Q, expect] : table) {
        INFO("P " << P << " Q " << Q);
        const std::size_t k = qsem::grover_optimal_iterations(P, Q);
        CHECK(k == expect);
        CHECK(oracles::search_success(P, Q, k) >= oracles::search_first_peak(P, Q) - 1e-12);
    }
    CHECK(std::abs(oracles::search_success(4, 1, 1) - 1.0) < 1e-12);
    CHECK(std::abs(oracles::search_success(8, 1, 2) - 0.9453125) < 1e-7);
}

TEST_CASE("the planted answer is recovered at every position and size") {
    for (std::size_t p : {1u, 2u, 3u, 4u}) {
        const std::size_t P = std::size_t{1} << p;
        for (std::size_t planted = 0; planted < P; ++planted) {
            std::vector<int> truth(P, 0);
            truth[planted] = 1;
            const QAInstance inst = QAInstance::canonical(p, truth);
            const qsem::GroverReport rep = qsem::grover_search(inst, -1, 1, 7);
            const std::vector<double> prob = index_probabilities(rep.final_state, P);
            const double best = *std::max_element(prob.begin(), prob.end());
            INFO("P " << P << " planted " << planted);
            CHECK(prob[planted] >= best - 1e-9);
            CHECK(std::abs(rep.success_probability -
                           oracles::search_success(P, 1, rep.iterations)) < 1e-9);
        }
    }
}

TEST_CASE("search reports are complete and deterministic under a fixed seed") {
    const QAInstance inst = QAInstance::canonical(2, {0, 0, 1, 0});
    const qsem::GroverReport a = qsem::grover_search(inst, -1, 200, 42);
    const qsem::GroverReport b = qsem::grover_search(inst, -1, 200, 42);

    CHECK(a.total == 4);
    CHECK(a.solutions == 1);
    CHECK(a.iterations == 1);
    CHECK(std::abs(a.theta - oracles::search_theta(4, 1)) < 1e-12);
    CHECK(a.prep_mode == "circuit");
    REQUIRE(a.curve.size() >= a.iterations + 1);
    for (const auto& [k, s] : a.curve)
        CHECK(std::abs(s - oracles::search_success(4, 1, k)) < 1e-9);

    std::size_t total_shots = 0;
    for (std::size_t f : a.frequencies) total_shots += f;
    CHECK(total_shots == 200);
    CHECK(a.frequencies[2] == 200); // success probability is exactly 1 here
    CHECK(a.sampled_index == 2);
    CHECK(a.sampled_answer == "a2");

    CHECK(a.frequencies == b.frequencies);
    CHECK(a.sampled_index == b.sampled_index);

    // a different iteration budget is honored as given
    const qsem::GroverReport forced = qsem::grover_search(inst, 0, 10, 42);
    CHECK(forced.iterations == 0);
    CHECK(std::abs(forced.success_probability - 0.25) < 1e-12);
    REQUIRE_THROWS_AS(qsem::grover_search(inst, -1, 0, 42), qsem::input_error);
}
