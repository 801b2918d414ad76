#include <catch2/catch_amalgamated.hpp>

#include <qsem/state.hpp>

#include "support/random.hpp"

namespace {

using qsem::cplx;
using qsem::GateOp;
using qsem::PureState;
using qsem::Wire;
using qsem::WireSystem;

PureState two_qubits(std::vector<cplx> amp) {
    return PureState(WireSystem({{"a", 2}, {"b", 2}}), std::move(amp));
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

} // namespace

TEST_CASE("single-qubit gates act as their matrices") {
    const double s = 1.0 / std::sqrt(2.0);
    const PureState zero(WireSystem({{"a", 2}}), {1.0, 0.0});

    const PureState h = qsem::apply_gate(zero, GateOp::h("a"));
    CHECK(std::abs(h.amplitudes()[0] - s) < 1e-15);
    CHECK(std::abs(h.amplitudes()[1] - s) < 1e-15);

    const PureState x = qsem::apply_gate(zero, GateOp::x("a"));
    CHECK(std::abs(x.amplitudes()[1] - 1.0) < 1e-15);

    const PureState hz = qsem::apply_gate(h, GateOp::z("a"));
    CHECK(std::abs(hz.amplitudes()[1] + s) < 1e-15);
}

TEST_CASE("controlled gates fire on the control's 1 slice only") {
    const PureState s10 = two_qubits({0.0, 0.0, 1.0, 0.0});
    const PureState flipped = qsem::apply_gate(s10, GateOp::cnot("a", "b"));
    CHECK(std::abs(flipped.amplitudes()[3] - 1.0) < 1e-15);

    const PureState s01 = two_qubits({0.0, 1.0, 0.0, 0.0});
    const PureState kept = qsem::apply_gate(s01, GateOp::cnot("a", "b"));
    CHECK(std::abs(kept.amplitudes()[1] - 1.0) < 1e-15);

    // CSWAP with qudit targets under a qubit control
    PureState trip(WireSystem({{"c", 2}, {"x", 3}, {"y", 3}}),
                   std::vector<cplx>(18, cplx{}));
    trip.mutable_amplitudes()[0 * 9 + 1 * 3 + 2] = 1.0; // control 0: untouched
    trip.mutable_amplitudes()[1 * 9 + 1 * 3 + 2] = 2.0; // control 1: swapped
    trip.refresh_norm();
    const PureState sw = qsem::apply_gate(trip, GateOp::cswap("c", "x", "y"));
    CHECK(std::abs(sw.amplitudes()[0 * 9 + 1 * 3 + 2] - 1.0) < 1e-15);
    CHECK(std::abs(sw.amplitudes()[1 * 9 + 2 * 3 + 1] - 2.0) < 1e-15);
}

TEST_CASE("swapping twice is the identity") {
    qsem::SplitMix64 rng(11);
    const PureState st = testrand::product_state(rng, {2, 3, 3, 2}, false);
    PureState other = qsem::apply_gate(st, GateOp::swap("2", "3"));
    other = qsem::apply_gate(other, GateOp::swap("2", "3"));
    CHECK(max_diff(st.amplitudes(), other.amplitudes()) < 1e-12);
}

TEST_CASE("gates preserve the tracked norm") {
    qsem::SplitMix64 rng(12);
    for (int trial = 0; trial < 20; ++trial) {
        PureState st = testrand::product_state(rng, {2, 2, 2}, false);
        const double before = qsem::norm_squared(st.amplitudes());
        st = qsem::apply_gate(st, GateOp::h("1"));
        st = qsem::apply_gate(st, GateOp::cnot("1", "3"));
        st = qsem::apply_gate(st, GateOp::cswap("1", "2", "3"));
        st = qsem::apply_gate(st, GateOp::z("2"));
        CHECK(std::abs(qsem::norm_squared(st.amplitudes()) - before) < 1e-12 * before);
        CHECK(std::abs(st.norm_tracked() - before) < 1e-12 * before);
    }
}

TEST_CASE("constructing a non-unitary gate fails") {
    REQUIRE_THROWS_AS(GateOp::unitary({"a"}, {1.0, 0.0, 0.0, 2.0}), qsem::numeric_error);
    REQUIRE_THROWS_AS(GateOp::unitary({"a"}, {1.0, 0.0, 0.0}), qsem::dimension_error);
    REQUIRE_NOTHROW(GateOp::unitary({"a"}, {0.0, 1.0, 1.0, 0.0}));
}

TEST_CASE("mismatched swap dimensions are rejected") {
    qsem::SplitMix64 rng(13);
    const PureState st = testrand::product_state(rng, {2, 3}, false);
    REQUIRE_THROWS_AS(qsem::apply_gate(st, GateOp::swap("1", "2")), qsem::dimension_error);
}

TEST_CASE("measurement frequencies follow the Born rule") {
    const double s = 1.0 / std::sqrt(2.0);
    const PureState plus(WireSystem({{"a", 2}}), {s, s});
    std::size_t zeros = 0;
    qsem::SplitMix64 seeds(20240817);
    const std::size_t shots = 10000;
    for (std::size_t i = 0; i < shots; ++i) {
        const auto m = qsem::measure_wires(plus, {"a"}, seeds.next());
        REQUIRE(m.outcome.size() == 1);
        if (m.outcome[0] == 0) ++zeros;
    }
    const double freq = double(zeros) / double(shots);
    CHECK(std::abs(freq - 0.5) < 0.015);
}

TEST_CASE("measurement collapses and renormalizes") {
    const double s = 1.0 / std::sqrt(2.0);
    PureState bell(WireSystem({{"a", 2}, {"b", 2}}), {s, 0.0, 0.0, s});
    const auto m = qsem::measure_wires(bell, {"a"}, 99);
    REQUIRE(m.outcome.size() == 1);
    const std::size_t k = m.outcome[0];
    CHECK(std::abs(m.probability - 0.5) < 1e-12);
    CHECK(std::abs(m.collapsed.amplitudes()[k * 2 + k] - 1.0) < 1e-12);
    CHECK(std::abs(qsem::norm_squared(m.collapsed.amplitudes()) - 1.0) < 1e-12);

    // deterministic under a fixed seed
    const auto again = qsem::measure_wires(bell, {"a"}, 99);
    CHECK(again.outcome == m.outcome);

    const PureState dead(WireSystem({{"a", 2}}), {0.0, 0.0});
    REQUIRE_THROWS_AS(qsem::measure_wires(dead, {"a"}, 1), qsem::numeric_error);
}

TEST_CASE("state dumps list nonzero amplitudes row-major") {
    PureState st(WireSystem({{"5", 2}, {"c", 2}}),
                 {cplx(0.5, 0.0), cplx{}, cplx(0.0, -0.25), cplx(1.0, 0.0)});
    CHECK(qsem::dump_state(st) ==
          "wires: 5:2,c:2\n"
          "0 0.5 0\n"
          "2 0 -0.25\n"
          "3 1 0\n");
}

TEST_CASE("duplicate or zero-dimension wires are rejected") {
    REQUIRE_THROWS_AS(WireSystem({{"a", 2}, {"a", 2}}), qsem::dimension_error);
    REQUIRE_THROWS_AS(WireSystem({{"a", 0}}), qsem::dimension_error);
    REQUIRE_THROWS_AS(PureState(WireSystem({{"a", 2}}), {1.0}), qsem::dimension_error);
}
