// Batch front end: parse / contract / ambiguity / grover subcommands over
// JSON lexicon and instance files. Exit codes: 0 success, 1 negative
// result (no derivation, wrong sample), 2 usage or input error, 3 numeric
// invariant violation.

#include <qsem/qsem.hpp>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using json = nlohmann::json;
using qsem::cplx;

struct Options {
    std::string lexicon;
    double tolerance = 1e-10;
    std::uint64_t seed = 1;
    std::string dump_state_path;
    std::string dump_plan_path;
    bool as_json = false;
};

// Re-split on whitespace so `parse Alice talks` and `parse "Alice talks"`
// name the same phrase.
std::vector<std::string> tokenize(const std::vector<std::string>& args) {
    std::vector<std::string> words;
    for (const std::string& a : args) {
        std::istringstream in(a);
        std::string w;
        while (in >> w) words.push_back(w);
    }
    if (words.empty()) throw qsem::input_error("empty phrase");
    return words;
}

std::string join(const std::vector<std::string>& words) {
    std::string s;
    for (const std::string& w : words) {
        if (!s.empty()) s += ' ';
        s += w;
    }
    return s;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw qsem::input_error("cannot write " + path);
    out << text;
}

qsem::Lexicon load_lexicon(const Options& opt) {
    if (opt.lexicon.empty()) throw qsem::input_error("--lexicon is required");
    return qsem::load_lexicon_file(opt.lexicon);
}

std::vector<qsem::WordTensor> word_tensors(const qsem::Lexicon& lex,
                                           const std::vector<std::string>& words) {
    std::vector<qsem::WordTensor> out;
    out.reserve(words.size());
    for (const std::string& w : words) out.push_back(lex.find(w).tensor);
    return out;
}

// Reading selector: a decimal index or an exact derivation signature.
std::size_t pick_reading(const std::vector<qsem::DerivPtr>& ders, const std::string& sel) {
    if (!sel.empty() && sel.find_first_not_of("0123456789") == std::string::npos) {
        const std::size_t idx = std::stoul(sel);
        if (idx >= ders.size())
            throw qsem::input_error("reading index " + sel + " out of range, have " +
                                    std::to_string(ders.size()) + " derivations");
        return idx;
    }
    std::size_t found = ders.size();
    for (std::size_t i = 0; i < ders.size(); ++i) {
        if (qsem::derivation_signature(ders[i]) == sel) {
            if (found != ders.size())
                throw qsem::input_error("reading selector matches several derivations");
            found = i;
        }
    }
    if (found == ders.size())
        throw qsem::input_error("no derivation with signature " + sel);
    return found;
}

// Control amplitudes "c1,c2": direction only, normalized before use.
std::pair<cplx, cplx> parse_control(const std::string& text) {
    double a = 0.0, b = 0.0;
    char tail = 0;
    if (std::sscanf(text.c_str(), "%lf,%lf%c", &a, &b, &tail) != 2)
        throw qsem::input_error("--control expects two comma-separated reals, got \"" +
                                text + "\"");
    const double n = std::sqrt(a * a + b * b);
    if (n == 0.0) throw qsem::input_error("--control must be a nonzero vector");
    return {cplx(a / n, 0.0), cplx(b / n, 0.0)};
}

int cmd_parse(const Options& opt, const std::vector<std::string>& words,
              const std::string& goal) {
    const qsem::Lexicon lex = load_lexicon(opt);
    std::vector<qsem::TypePtr> types;
    for (const std::string& w : words) types.push_back(lex.find(w).type);
    const auto ders = qsem::derive(types, qsem::parse_type(goal));

    if (opt.as_json) {
        json sigs = json::array();
        for (const auto& d : ders) sigs.push_back(qsem::derivation_signature(d));
        const json rep = {{"phrase", join(words)},
                          {"goal", goal},
                          {"count", ders.size()},
                          {"derivations", sigs}};
        std::printf("%s\n", rep.dump(2).c_str());
    } else {
        std::printf("derivations: %zu\n", ders.size());
        for (std::size_t i = 0; i < ders.size(); ++i)
            std::printf("  [%zu] %s\n", i, qsem::derivation_signature(ders[i]).c_str());
    }
    return ders.empty() ? 1 : 0;
}

int cmd_contract(const Options& opt, const std::vector<std::string>& words,
                 const std::string& goal, const std::string& sel, const std::string& mode) {
    const qsem::Lexicon lex = load_lexicon(opt);
    const qsem::WireAllocation alloc = qsem::allocate_wires(lex, words);
    const auto ders = qsem::derive(alloc.word_types, qsem::parse_type(goal));
    if (ders.empty()) throw qsem::input_error("phrase does not derive type " + goal);
    const std::size_t idx = pick_reading(ders, sel);
    const qsem::ContractionPlan plan = qsem::plan_contractions(ders[idx], alloc);
    const auto tensors = word_tensors(lex, words);

    qsem::PureState out(qsem::WireSystem({{"0", 1}}), {cplx(1.0, 0.0)});
    double residual = -1.0;
    if (mode == "quantum") {
        out = qsem::execute_plan(alloc.state, plan, opt.tolerance);
        const qsem::PureState ref = qsem::reference_execute(plan, tensors, opt.tolerance);
        residual = qsem::ray_distance(out.amplitudes(), ref.amplitudes());
    } else if (mode == "classical") {
        out = qsem::reference_execute(plan, tensors, opt.tolerance);
    } else { // bell-effect
        out = alloc.state;
        for (const auto& step : plan.steps)
            for (const auto& [a, b] : step.pairs) out = qsem::bell_effect_contract(out, a, b);
        for (const std::string& w : plan.result_wires) out.system().position(w);
    }
    const double norm = qsem::norm_squared(out.amplitudes());

    if (!opt.dump_state_path.empty()) write_text(opt.dump_state_path, qsem::dump_state(out));
    if (!opt.dump_plan_path.empty()) write_text(opt.dump_plan_path, qsem::plan_to_string(plan));

    if (opt.as_json) {
        json rep = qsem::state_to_json(out);
        rep["phrase"] = join(words);
        rep["goal"] = goal;
        rep["reading"] = qsem::derivation_signature(ders[idx]);
        rep["mode"] = mode;
        rep["norm_tracked"] = norm;
        if (residual >= 0.0) rep["residual"] = residual;
        std::printf("%s\n", rep.dump(2).c_str());
    } else {
        std::printf("reading: %s\nmode: %s\n%s", qsem::derivation_signature(ders[idx]).c_str(),
                    mode.c_str(), qsem::dump_state(out).c_str());
        std::printf("norm_tracked: %.12g\n", norm);
        if (residual >= 0.0) std::printf("residual: %.3g\n", residual);
    }
    return 0;
}

int cmd_ambiguity(const Options& opt, const std::vector<std::string>& words,
                  const std::string& goal, const std::string& control) {
    const qsem::Lexicon lex = load_lexicon(opt);
    const qsem::WireAllocation alloc = qsem::allocate_wires(lex, words);
    const auto ders = qsem::derive(alloc.word_types, qsem::parse_type(goal));
    if (ders.size() != 2)
        throw qsem::input_error("ambiguity needs exactly 2 derivations, phrase has " +
                                std::to_string(ders.size()));
    const qsem::ContractionPlan to = qsem::plan_contractions(ders[0], alloc);
    const qsem::ContractionPlan base = qsem::plan_contractions(ders[1], alloc);
    qsem::SwapSchedule sched = qsem::reading_swap_schedule(base, to);
    std::tie(sched.c1, sched.c2) = parse_control(control);

    const qsem::PureState out = qsem::superpose_readings(alloc.state, base, sched, opt.tolerance);
    const auto tensors = word_tensors(lex, words);
    const qsem::PureState ref0 = qsem::reference_execute(to, tensors, opt.tolerance);
    const qsem::PureState ref1 = qsem::reference_execute(base, tensors, opt.tolerance);

    // control is the last wire: odd offsets hold the swapped branch
    const std::size_t half = out.amplitudes().size() / 2;
    std::vector<cplx> swapped(half), direct(half);
    for (std::size_t i = 0; i < half; ++i) {
        direct[i] = out.amplitudes()[2 * i];
        swapped[i] = out.amplitudes()[2 * i + 1];
    }
    const double n_swapped = qsem::norm_squared(swapped);
    const double n_direct = qsem::norm_squared(direct);
    const double total = n_swapped + n_direct;
    const double post1 = total > 0.0 ? n_swapped / total : 0.0;
    const double post0 = total > 0.0 ? n_direct / total : 0.0;
    const double res1 = n_swapped > 1e-28 ? qsem::ray_distance(swapped, ref0.amplitudes()) : 0.0;
    const double res0 = n_direct > 1e-28 ? qsem::ray_distance(direct, ref1.amplitudes()) : 0.0;
    const double pre1 = std::norm(sched.c1), pre0 = std::norm(sched.c2);

    if (!opt.dump_state_path.empty()) write_text(opt.dump_state_path, qsem::dump_state(out));
    if (!opt.dump_plan_path.empty())
        write_text(opt.dump_plan_path,
                   qsem::schedule_to_string(sched) + qsem::plan_to_string(base));

    if (opt.as_json) {
        json swaps = json::array();
        for (const auto& [a, b] : sched.swaps) swaps.push_back(json::array({a, b}));
        auto branch = [](const std::string& sig, int cv, double pre, double post, double res,
                         const std::vector<cplx>& amp) {
            json amps = json::array();
            for (const cplx& v : amp) amps.push_back(qsem::complex_to_json(v));
            return json{{"reading", sig},        {"control_value", cv}, {"pre_weight", pre},
                        {"post_weight", post},   {"residual", res},     {"amplitudes", amps}};
        };
        json rep = qsem::state_to_json(out);
        rep["phrase"] = join(words);
        rep["goal"] = goal;
        rep["control"] = json::array(
            {qsem::complex_to_json(sched.c1), qsem::complex_to_json(sched.c2)});
        rep["schedule"] = swaps;
        rep["branches"] = json::array(
            {branch(qsem::derivation_signature(ders[0]), 1, pre1, post1, res1, swapped),
             branch(qsem::derivation_signature(ders[1]), 0, pre0, post0, res0, direct)});
        rep["norm_tracked"] = total;
        std::printf("%s\n", rep.dump(2).c_str());
    } else {
        std::printf("derivations: 2\n  [0] %s\n  [1] %s\nschedule:\n%s",
                    qsem::derivation_signature(ders[0]).c_str(),
                    qsem::derivation_signature(ders[1]).c_str(),
                    qsem::schedule_to_string(sched).c_str());
        std::printf("branch control=1 reading[0]: pre_weight %.12g post_weight %.12g residual %.3g\n",
                    pre1, post1, res1);
        std::printf("branch control=0 reading[1]: pre_weight %.12g post_weight %.12g residual %.3g\n",
                    pre0, post0, res0);
        std::printf("%snorm_tracked: %.12g\n", qsem::dump_state(out).c_str(), total);
    }
    return 0;
}

int cmd_grover(const Options& opt, const std::string& instance_path, long iterations,
               std::size_t shots, const std::string& oracle) {
    const qsem::QAInstance inst = qsem::load_instance_file(instance_path);
    const qsem::OracleKind kind =
        oracle == "kickback" ? qsem::OracleKind::Kickback : qsem::OracleKind::Direct;
    const qsem::GroverReport rep =
        qsem::grover_search(inst, iterations, shots, opt.seed, kind, opt.tolerance);

    if (!opt.dump_state_path.empty())
        write_text(opt.dump_state_path, qsem::dump_state(rep.final_state));

    if (opt.as_json) {
        std::printf("%s\n", qsem::grover_report_json(rep).dump(2).c_str());
    } else {
        std::printf("p: %zu  P: %zu  Q: %zu\n", rep.index_qubits, rep.total, rep.solutions);
        std::printf("theta: %.12g\niterations: %zu\nsuccess_probability: %.12g\n", rep.theta,
                    rep.iterations, rep.success_probability);
        std::printf("sampled: %zu (%s)\nshots: %zu\nprep: %s\n", rep.sampled_index,
                    rep.sampled_answer.c_str(), rep.shots, rep.prep_mode.c_str());
        std::printf("frequencies:");
        for (std::size_t a = 0; a < rep.frequencies.size(); ++a)
            std::printf(" %s:%zu", inst.answers[a].c_str(), rep.frequencies[a]);
        std::printf("\ncurve:");
        for (const auto& [k, prob] : rep.curve) std::printf(" %zu:%.12g", k, prob);
        std::printf("\n");
    }
    return inst.truth[rep.sampled_index] ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"categorial-grammar tensor semantics on a statevector simulator"};
    app.require_subcommand(1);

    Options opt;
    app.add_option("--lexicon", opt.lexicon, "lexicon JSON file");
    app.add_option("--tolerance", opt.tolerance, "numeric tolerance")
        ->check(CLI::PositiveNumber);
    app.add_option("--seed", opt.seed, "RNG seed for sampling");
    app.add_option("--dump-state", opt.dump_state_path, "write result state dump to file");
    app.add_option("--dump-plan", opt.dump_plan_path, "write contraction plan dump to file");
    app.add_flag("--json", opt.as_json, "machine-readable report on stdout");

    std::vector<std::string> words;
    std::string goal = "s";
    std::string reading = "0";
    std::string mode = "quantum";
    std::string control = "0.7071067811865476,0.7071067811865476";
    std::string instance_path;
    long iterations = -1;
    std::size_t shots = 1024;
    std::string oracle = "direct";

    CLI::App* c_parse = app.add_subcommand("parse", "enumerate derivations of a phrase");
    c_parse->fallthrough();
    c_parse->add_option("words", words, "phrase words")->required()->expected(-1);
    c_parse->add_option("--goal", goal, "goal type (default s)");

    CLI::App* c_contract = app.add_subcommand("contract", "contract one reading to its meaning");
    c_contract->fallthrough();
    c_contract->add_option("words", words, "phrase words")->required()->expected(-1);
    c_contract->add_option("--goal", goal, "goal type (default s)");
    c_contract->add_option("--reading", reading, "derivation index or signature");
    c_contract->add_option("--mode", mode, "quantum | classical | bell-effect")
        ->check(CLI::IsMember({"quantum", "classical", "bell-effect"}));

    CLI::App* c_ambiguity =
        app.add_subcommand("ambiguity", "superpose the two readings of an ambiguous phrase");
    c_ambiguity->fallthrough();
    c_ambiguity->add_option("words", words, "phrase words")->required()->expected(-1);
    c_ambiguity->add_option("--goal", goal, "goal type (default s)");
    c_ambiguity->add_option("--control", control, "control amplitudes c1,c2");

    CLI::App* c_grover = app.add_subcommand("grover", "question answering by amplitude search");
    c_grover->fallthrough();
    c_grover->add_option("instance", instance_path, "instance JSON file")->required();
    c_grover->add_option("--iterations", iterations, "iteration count (-1 = optimal)");
    c_grover->add_option("--shots", shots, "measurement shots")->check(CLI::PositiveNumber);
    c_grover->add_option("--oracle", oracle, "direct | kickback")
        ->check(CLI::IsMember({"direct", "kickback"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (c_parse->parsed()) return cmd_parse(opt, tokenize(words), goal);
        if (c_contract->parsed()) return cmd_contract(opt, tokenize(words), goal, reading, mode);
        if (c_ambiguity->parsed()) return cmd_ambiguity(opt, tokenize(words), goal, control);
        return cmd_grover(opt, instance_path, iterations, shots, oracle);
    } catch (const qsem::numeric_error& e) {
        std::fprintf(stderr, "numeric error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
