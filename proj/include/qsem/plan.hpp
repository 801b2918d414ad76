#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qsem/contraction.hpp"
#include "qsem/derivation.hpp"
#include "qsem/semantics.hpp"
#include "qsem/state.hpp"

namespace qsem {

// Turns lexicon-resolved word sequences and derivations into wire
// allocations, contraction plans, and ambiguity-superposition circuits.
// One derivation step = one joint measurement contracting every wire
// pair that connects the functor's argument block to the argument,
// each pair ordered (left word side, right word side).

struct ContractionStep {
    std::vector<std::pair<std::string, std::string>> pairs;
};

struct ContractionPlan {
    std::vector<std::vector<std::string>> word_wires; // per word, sentence order
    std::vector<ContractionStep> steps;               // derivation post-order
    std::vector<std::string> result_wires;
    std::map<std::string, std::size_t> wire_dims;
    std::string signature; // bracketing of the derivation this plan realizes
};

struct WireAllocation {
    std::vector<TypePtr> word_types;
    std::vector<std::vector<std::string>> word_wires;
    SpaceConfig config;
    PureState state; // product of the word tensors on the allocated wires
};

// Wires are numbered "1", "2", ... left to right across the sentence,
// one per tensor factor of each word's type.
inline WireAllocation allocate_wires(const Lexicon& lex, const std::vector<std::string>& words) {
    if (words.empty()) throw input_error("allocate_wires: empty sentence");
    WireAllocation alloc;
    alloc.config = lex.config;
    std::size_t next = 1;
    PureState st;
    bool first = true;
    for (const std::string& w : words) {
        const LexiconEntry& entry = lex.find(w);
        alloc.word_types.push_back(entry.type);
        std::vector<std::string> labels;
        for (std::size_t k = 0; k < entry.tensor.space.factors.size(); ++k)
            labels.push_back(std::to_string(next++));
        PureState s = state_from_tensor(entry.tensor, labels);
        alloc.word_wires.push_back(std::move(labels));
        st = first ? std::move(s) : tensor_product(st, s);
        first = false;
    }
    alloc.state = std::move(st);
    return alloc;
}

namespace detail {

inline std::vector<std::string> plan_node(const DerivPtr& d, const WireAllocation& alloc,
                                          ContractionPlan& plan) {
    if (d->op == Derivation::Op::Leaf) {
        if (d->word_index >= alloc.word_wires.size())
            throw input_error("plan: derivation leaf outside the allocation");
        return alloc.word_wires[d->word_index];
    }
    std::vector<std::string> lw = plan_node(d->left, alloc, plan);
    std::vector<std::string> rw = plan_node(d->right, alloc, plan);

    const bool functor_left = d->op == Derivation::Op::ApplyRight;
    const TypePtr& ftype = functor_left ? d->left->type : d->right->type;
    const std::vector<std::string>& fw = functor_left ? lw : rw;
    const std::vector<std::string>& aw = functor_left ? rw : lw;

    const FunctorBlocks blocks = functor_blocks(ftype, alloc.config);
    const std::size_t narg = blocks.arg_end - blocks.arg_begin;
    if (aw.size() != narg) throw dimension_error("plan: argument wire count mismatch");

    ContractionStep step;
    for (std::size_t k = 0; k < narg; ++k) {
        const std::string& f = fw[blocks.arg_begin + k];
        const std::string& a = aw[k];
        if (plan.wire_dims.at(f) != plan.wire_dims.at(a))
            throw dimension_error("plan: functor argument factor dim differs from argument "
                                  "wire dim on (" + f + "," + a + ")");
        step.pairs.push_back(functor_left ? std::make_pair(f, a) : std::make_pair(a, f));
    }
    plan.steps.push_back(std::move(step));

    return {fw.begin() + blocks.res_begin, fw.begin() + blocks.res_end};
}

} // namespace detail

inline ContractionPlan plan_contractions(const DerivPtr& d, const WireAllocation& alloc) {
    ContractionPlan plan;
    plan.word_wires = alloc.word_wires;
    for (std::size_t w = 0; w < alloc.word_types.size(); ++w) {
        const SemanticSpace sp = interpret_type(alloc.word_types[w], alloc.config);
        if (sp.factors.size() != alloc.word_wires[w].size())
            throw dimension_error("plan: allocation does not match word types");
        for (std::size_t k = 0; k < sp.factors.size(); ++k)
            plan.wire_dims[alloc.word_wires[w][k]] = sp.factors[k].dim;
    }
    plan.result_wires = detail::plan_node(d, alloc, plan);
    plan.signature = derivation_signature(d);
    return plan;
}

inline std::string plan_to_string(const ContractionPlan& plan) {
    std::string out;
    for (const ContractionStep& step : plan.steps) {
        bool first = true;
        for (const auto& [a, b] : step.pairs) {
            if (!first) out += " ";
            out += "P(" + a + "," + b + ")";
            first = false;
        }
        out += "\n";
    }
    return out;
}

// ---------------------------------------------------------------------------
// Plan execution on the statevector simulator. The output stays
// unnormalized: its squared norm is the accumulated contraction weight.
//
// Steps are contracted one at a time; in derivation order every
// intermediate stays pure. A permuted step order (as in the swapped
// branch of an ambiguity circuit) can pass through a mixed intermediate,
// but the measured pairs all commute (disjoint wires), so the final
// operator is order-independent: on a mixed intermediate we fall back to
// contracting every remaining pair jointly, which checks purity only
// where it is guaranteed, at the end.

inline PureState execute_plan(const PureState& state, const ContractionPlan& plan,
                              double tol = kSolverTol) {
    PureState st = state;
    for (std::size_t k = 0; k < plan.steps.size(); ++k) {
        try {
            st = contract_wire_pairs(st, plan.steps[k].pairs, tol).state;
        } catch (const numeric_error&) {
            if (k + 1 == plan.steps.size()) throw;
            std::vector<std::pair<std::string, std::string>> rest;
            for (std::size_t j = k; j < plan.steps.size(); ++j)
                rest.insert(rest.end(), plan.steps[j].pairs.begin(),
                            plan.steps[j].pairs.end());
            st = contract_wire_pairs(st, rest, tol).state;
            break;
        }
    }
    if (st.system().count() != plan.result_wires.size())
        throw dimension_error("execute_plan: leftover wires do not match the plan");
    for (const std::string& w : plan.result_wires) st.system().position(w);
    return st;
}

// ---------------------------------------------------------------------------
// Independent reference path: direct tensor algebra, no statevectors.
// Each step joins the block X holding the pair-left wires (entering
// conjugated) with block Y via M(RX,RY) = sum_t conj(X(t,RX)) Y(t,RY);
// a valid reduction leaves M rank-1 = alpha (x) beta, and the joined
// block is conj(alpha) (x) beta. Matches the exchange measurement up to
// one global phase per step.

namespace detail {

struct RefBlock {
    std::vector<std::string> labels;
    std::vector<std::size_t> dims;
    std::vector<cplx> amp;
};

inline std::size_t ref_find(const std::vector<RefBlock>& blocks, const std::string& label) {
    for (std::size_t i = 0; i < blocks.size(); ++i)
        for (const std::string& l : blocks[i].labels)
            if (l == label) return i;
    throw dimension_error("reference execution: unknown wire " + label);
}

} // namespace detail

inline PureState reference_execute(const ContractionPlan& plan,
                                   const std::vector<WordTensor>& words,
                                   double tol = kSolverTol) {
    if (words.size() != plan.word_wires.size())
        throw input_error("reference_execute: word count does not match the plan");
    std::vector<detail::RefBlock> blocks;
    for (std::size_t w = 0; w < words.size(); ++w) {
        detail::RefBlock b;
        b.labels = plan.word_wires[w];
        b.dims = words[w].space.dims();
        b.amp = words[w].amp;
        if (b.labels.size() != b.dims.size())
            throw dimension_error("reference_execute: wire/factor mismatch");
        blocks.push_back(std::move(b));
    }

    for (const ContractionStep& step : plan.steps) {
        const std::size_t ix = detail::ref_find(blocks, step.pairs[0].first);
        const std::size_t iy = detail::ref_find(blocks, step.pairs[0].second);
        if (ix == iy) throw dimension_error("reference_execute: pair within one block");
        detail::RefBlock& X = blocks[ix];
        detail::RefBlock& Y = blocks[iy];

        std::vector<std::size_t> px, py, pdims;
        for (const auto& [a, b] : step.pairs) {
            if (detail::ref_find(blocks, a) != ix || detail::ref_find(blocks, b) != iy)
                throw dimension_error("reference_execute: step straddles three blocks");
            px.push_back(std::find(X.labels.begin(), X.labels.end(), a) - X.labels.begin());
            py.push_back(std::find(Y.labels.begin(), Y.labels.end(), b) - Y.labels.begin());
            if (X.dims[px.back()] != Y.dims[py.back()])
                throw dimension_error("reference_execute: pair dimensions differ");
            pdims.push_back(X.dims[px.back()]);
        }

        auto residual = [](const detail::RefBlock& blk, const std::vector<std::size_t>& taken) {
            std::vector<std::size_t> pos;
            for (std::size_t i = 0; i < blk.labels.size(); ++i)
                if (std::find(taken.begin(), taken.end(), i) == taken.end()) pos.push_back(i);
            return pos;
        };
        const std::vector<std::size_t> rx = residual(X, px), ry = residual(Y, py);

        auto offsets = [](const detail::RefBlock& blk, const std::vector<std::size_t>& pos) {
            const auto strides = row_major_strides(blk.dims);
            std::vector<std::size_t> ds;
            for (std::size_t p : pos) ds.push_back(blk.dims[p]);
            std::vector<std::size_t> off(total_dim(ds), 0);
            std::vector<std::size_t> digit(ds.size(), 0);
            std::size_t i = 0;
            do {
                std::size_t o = 0;
                for (std::size_t k = 0; k < pos.size(); ++k) o += digit[k] * strides[pos[k]];
                off[i++] = o;
            } while (advance(digit, ds));
            return off;
        };
        const auto xt = offsets(X, px), xr = offsets(X, rx);
        const auto yt = offsets(Y, py), yr = offsets(Y, ry);
        const std::size_t dt = total_dim(pdims);

        std::vector<cplx> m(xr.size() * yr.size(), cplx{});
        for (std::size_t a = 0; a < xr.size(); ++a)
            for (std::size_t b = 0; b < yr.size(); ++b) {
                cplx s{};
                for (std::size_t t = 0; t < dt; ++t)
                    s += std::conj(X.amp[xr[a] + xt[t]]) * Y.amp[yr[b] + yt[t]];
                m[a * yr.size() + b] = s;
            }

        std::size_t pr = 0, pc = 0;
        double best = 0.0;
        for (std::size_t a = 0; a < xr.size(); ++a)
            for (std::size_t b = 0; b < yr.size(); ++b)
                if (std::abs(m[a * yr.size() + b]) > best) {
                    best = std::abs(m[a * yr.size() + b]);
                    pr = a;
                    pc = b;
                }

        detail::RefBlock joined;
        for (std::size_t p : rx) {
            joined.labels.push_back(X.labels[p]);
            joined.dims.push_back(X.dims[p]);
        }
        for (std::size_t p : ry) {
            joined.labels.push_back(Y.labels[p]);
            joined.dims.push_back(Y.dims[p]);
        }

        if (best == 0.0) {
            joined.amp.assign(xr.size() * yr.size(), cplx{});
        } else {
            const cplx pivot = m[pr * yr.size() + pc];
            std::vector<cplx> alpha(xr.size()), beta(yr.size());
            for (std::size_t a = 0; a < xr.size(); ++a) alpha[a] = m[a * yr.size() + pc];
            for (std::size_t b = 0; b < yr.size(); ++b) beta[b] = m[pr * yr.size() + b] / pivot;
            double worst = 0.0;
            for (std::size_t a = 0; a < xr.size(); ++a)
                for (std::size_t b = 0; b < yr.size(); ++b)
                    worst = std::max(worst, std::abs(m[a * yr.size() + b] - alpha[a] * beta[b]));
            if (worst > tol * best)
                throw numeric_error("reference_execute: reduction is not rank-1", worst / best);
            joined.amp.resize(xr.size() * yr.size());
            for (std::size_t a = 0; a < xr.size(); ++a)
                for (std::size_t b = 0; b < yr.size(); ++b)
                    joined.amp[a * yr.size() + b] = std::conj(alpha[a]) * beta[b];
        }

        std::vector<detail::RefBlock> next;
        for (std::size_t i = 0; i < blocks.size(); ++i)
            if (i != ix && i != iy) next.push_back(std::move(blocks[i]));
        next.push_back(std::move(joined));
        blocks = std::move(next);
    }

    if (blocks.size() != 1 || blocks[0].labels != plan.result_wires)
        throw dimension_error("reference_execute: leftover wires do not match the plan");
    std::vector<Wire> wires;
    for (std::size_t i = 0; i < blocks[0].labels.size(); ++i)
        wires.push_back({blocks[0].labels[i], blocks[0].dims[i]});
    return PureState(WireSystem(std::move(wires)), std::move(blocks[0].amp));
}

// ---------------------------------------------------------------------------
// Swap schedules between two readings of the same sentence.
//
// Searches for a wire permutation pi that maps `from`'s contraction
// steps onto `to`'s (steps as a multiset, pairs unordered) and `from`'s
// k-th result wire onto `to`'s k-th, then decomposes pi into the fewest
// transpositions. Applying the SWAP gates in order makes wire w hold the
// content of wire pi(w), so running `from` on the swapped state
// contracts exactly the pairs `to` would contract on the original.

struct SwapSchedule {
    std::vector<std::pair<std::string, std::string>> swaps; // applied in order
    std::string control;                                    // empty = uncontrolled
    cplx c1{1.0, 0.0};                                      // control |1> amplitude
    cplx c2{0.0, 0.0};                                      // control |0> amplitude
};

namespace detail {

inline bool label_less(const std::string& a, const std::string& b) {
    const bool na = !a.empty() && a.find_first_not_of("0123456789") == std::string::npos;
    const bool nb = !b.empty() && b.find_first_not_of("0123456789") == std::string::npos;
    if (na && nb) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    }
    if (na != nb) return na; // numeric labels order before symbolic ones
    return a < b;
}

struct PermBuilder {
    std::map<std::string, std::string> fwd, rev;

    bool bind(const std::string& from, const std::string& to) {
        auto f = fwd.find(from);
        if (f != fwd.end()) return f->second == to;
        if (rev.count(to)) return false;
        fwd[from] = to;
        rev[to] = from;
        return true;
    }
};

// Gates realizing pi: each cycle (a1 a2 ... ak), started at its smallest
// label, becomes (a2,a3)(a3,a4)...(ak,a1), applied in that order.
inline std::vector<std::pair<std::string, std::string>> cycle_gates(
    const std::map<std::string, std::string>& fwd) {
    std::vector<std::string> labels;
    for (const auto& [k, v] : fwd) labels.push_back(k);
    std::sort(labels.begin(), labels.end(), label_less);
    std::vector<std::pair<std::string, std::string>> gates;
    std::set<std::string> done;
    for (const std::string& start : labels) {
        if (done.count(start)) continue;
        done.insert(start);
        if (fwd.at(start) == start) continue;
        std::vector<std::string> cycle{start};
        std::string cur = fwd.at(start);
        while (cur != start) {
            done.insert(cur);
            cycle.push_back(cur);
            cur = fwd.at(cur);
        }
        for (std::size_t i = 1; i + 1 < cycle.size(); ++i)
            gates.emplace_back(cycle[i], cycle[i + 1]);
        gates.emplace_back(cycle.back(), cycle.front());
    }
    return gates;
}

struct ScheduleSearch {
    const ContractionPlan* from = nullptr;
    const ContractionPlan* to = nullptr;
    std::vector<std::pair<std::string, std::string>> best;
    bool found = false;

    std::size_t dim(const std::string& w) const { return from->wire_dims.at(w); }

    void finish(const PermBuilder& pb) {
        std::vector<std::pair<std::string, std::string>> gates = cycle_gates(pb.fwd);
        for (const auto& [a, b] : gates)
            if (dim(a) != dim(b)) return; // permutation moves across unequal wires
        auto gate_list_less = [](const auto& x, const auto& y) {
            if (x.size() != y.size()) return x.size() < y.size();
            for (std::size_t i = 0; i < x.size(); ++i) {
                if (x[i].first != y[i].first) return label_less(x[i].first, y[i].first);
                if (x[i].second != y[i].second) return label_less(x[i].second, y[i].second);
            }
            return false;
        };
        if (!found || gate_list_less(gates, best)) {
            best = std::move(gates);
            found = true;
        }
    }

    void match_pairs(std::size_t si, std::size_t ti, std::size_t k, std::vector<bool>& pu,
                     PermBuilder& pb, std::vector<bool>& su);

    void match_steps(std::size_t si, std::vector<bool>& su, PermBuilder& pb) {
        if (si == from->steps.size()) {
            finish(pb);
            return;
        }
        for (std::size_t ti = 0; ti < to->steps.size(); ++ti) {
            if (su[ti] || to->steps[ti].pairs.size() != from->steps[si].pairs.size()) continue;
            su[ti] = true;
            std::vector<bool> pu(to->steps[ti].pairs.size(), false);
            match_pairs(si, ti, 0, pu, pb, su);
            su[ti] = false;
        }
    }
};

inline void ScheduleSearch::match_pairs(std::size_t si, std::size_t ti, std::size_t k,
                                        std::vector<bool>& pu, PermBuilder& pb,
                                        std::vector<bool>& su) {
    const auto& fp = from->steps[si].pairs;
    const auto& tp = to->steps[ti].pairs;
    if (k == fp.size()) {
        match_steps(si + 1, su, pb);
        return;
    }
    for (std::size_t j = 0; j < tp.size(); ++j) {
        if (pu[j]) continue;
        for (int orient = 0; orient < 2; ++orient) {
            const std::string& c = orient ? tp[j].second : tp[j].first;
            const std::string& d = orient ? tp[j].first : tp[j].second;
            if (from->wire_dims.at(fp[k].first) != to->wire_dims.at(c) ||
                from->wire_dims.at(fp[k].second) != to->wire_dims.at(d))
                continue;
            PermBuilder saved = pb;
            if (pb.bind(fp[k].first, c) && pb.bind(fp[k].second, d)) {
                pu[j] = true;
                match_pairs(si, ti, k + 1, pu, pb, su);
                pu[j] = false;
            }
            pb = saved;
        }
    }
}

} // namespace detail

inline SwapSchedule reading_swap_schedule(const ContractionPlan& from,
                                          const ContractionPlan& to) {
    if (from.word_wires != to.word_wires || from.wire_dims != to.wire_dims)
        throw input_error("swap schedule: readings use different wire allocations");
    if (from.steps.size() != to.steps.size() ||
        from.result_wires.size() != to.result_wires.size())
        throw input_error("swap schedule: readings have different shapes");

    detail::ScheduleSearch search;
    search.from = &from;
    search.to = &to;
    detail::PermBuilder pb;
    for (std::size_t i = 0; i < from.result_wires.size(); ++i) {
        if (from.wire_dims.at(from.result_wires[i]) != to.wire_dims.at(to.result_wires[i]) ||
            !pb.bind(from.result_wires[i], to.result_wires[i]))
            throw input_error("swap schedule: result wires are not permutable");
    }
    std::vector<bool> su(to.steps.size(), false);
    search.match_steps(0, su, pb);
    if (!search.found)
        throw input_error("swap schedule: readings are not related by a wire permutation");

    SwapSchedule sched;
    sched.swaps = std::move(search.best);
    sched.control = "c";
    sched.c1 = cplx{1.0 / std::sqrt(2.0), 0.0};
    sched.c2 = cplx{1.0 / std::sqrt(2.0), 0.0};
    return sched;
}

inline std::string schedule_to_string(const SwapSchedule& sched) {
    std::string out;
    for (const auto& [a, b] : sched.swaps) {
        if (sched.control.empty())
            out += "SWAP(" + a + "," + b + ")\n";
        else
            out += "CSWAP(" + sched.control + ";" + a + "," + b + ")\n";
    }
    return out;
}

// ---------------------------------------------------------------------------
// Superposed readings: one circuit holding both parses at once, steered
// by a fresh control qubit |c> = c1|1> + c2|0>. The controlled swaps are
// genuine gates on the joint state; the contraction steps then run on
// each control branch separately (each branch is pure; the measurements
// decohere the branches, so only per-branch content and weights carry
// meaning). Output wires: base plan's result wires plus the control.

inline PureState superpose_readings(const PureState& data, const ContractionPlan& base,
                                    const SwapSchedule& schedule, double tol = kSolverTol) {
    if (schedule.control.empty())
        throw input_error("superpose_readings: schedule has no control wire");
    if (data.system().has(schedule.control))
        throw input_error("superpose_readings: control label already in use");
    const double cn = std::norm(schedule.c1) + std::norm(schedule.c2);
    if (std::abs(cn - 1.0) > kNormTol)
        throw input_error("superpose_readings: control amplitudes must be normalized");

    PureState control(WireSystem({{schedule.control, 2}}), {schedule.c2, schedule.c1});
    PureState joint = tensor_product(data, control);
    for (const auto& [a, b] : schedule.swaps)
        joint = apply_gate(joint, GateOp::cswap(schedule.control, a, b));

    // split on the control (last wire, so amplitudes interleave)
    const std::size_t half = joint.amplitudes().size() / 2;
    std::vector<cplx> b0(half), b1(half);
    for (std::size_t i = 0; i < half; ++i) {
        b0[i] = joint.amplitudes()[2 * i];
        b1[i] = joint.amplitudes()[2 * i + 1];
    }
    std::vector<Wire> data_wires = joint.system().wires();
    data_wires.pop_back();

    auto run_branch = [&](std::vector<cplx> amp) {
        PureState st(WireSystem(data_wires), std::move(amp));
        if (norm_squared(st.amplitudes()) == 0.0) {
            std::vector<Wire> rw;
            for (const std::string& l : base.result_wires)
                rw.push_back({l, st.system().dim_of(l)});
            WireSystem sys(rw);
            const std::size_t n = sys.total();
            return PureState(std::move(sys), std::vector<cplx>(n, cplx{}));
        }
        return execute_plan(st, base, tol);
    };
    PureState r0 = run_branch(std::move(b0));
    PureState r1 = run_branch(std::move(b1));

    std::vector<Wire> out_wires = r0.system().wires();
    out_wires.push_back({schedule.control, 2});
    std::vector<cplx> amp(r0.amplitudes().size() * 2);
    for (std::size_t i = 0; i < r0.amplitudes().size(); ++i) {
        amp[2 * i] = r0.amplitudes()[i];
        amp[2 * i + 1] = r1.amplitudes()[i];
    }
    return PureState(WireSystem(std::move(out_wires)), std::move(amp));
}

} // namespace qsem
