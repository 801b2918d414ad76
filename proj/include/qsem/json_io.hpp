#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qsem/grover.hpp"
#include "qsem/semantics.hpp"
#include "qsem/state.hpp"
#include "qsem/syntax.hpp"

namespace qsem {

using nlohmann::json;

inline json complex_to_json(cplx v) { return json::array({v.real(), v.imag()}); }

inline cplx complex_from_json(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw input_error(where + ": complex values are [re, im] number pairs");
    return {j[0].get<double>(), j[1].get<double>()};
}

namespace detail {

inline const json& field(const json& j, const char* key, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) throw input_error(where + ": missing field \"" + key + "\"");
    return *it;
}

inline std::size_t size_field(const json& j, const char* key, const std::string& where) {
    const json& f = field(j, key, where);
    if (!f.is_number_unsigned()) throw input_error(where + ": \"" + key + "\" must be a nonnegative integer");
    return f.get<std::size_t>();
}

inline json load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw input_error(std::string("malformed JSON in ") + path + ": " + e.what(),
                          e.byte);
    }
    return j;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Lexicon files: {"config": {"dim_N", "dim_S", "p"}, "entries": [{"word",
// "type", "dims", "amplitudes"}]}. The dims field restates the factor
// dimensions the type implies and is checked against them.

inline Lexicon load_lexicon(const json& j) {
    Lexicon lex;
    const json& cfg = detail::field(j, "config", "lexicon");
    lex.config.dim_n = detail::size_field(cfg, "dim_N", "lexicon config");
    lex.config.dim_s = cfg.contains("dim_S") ? detail::size_field(cfg, "dim_S", "lexicon config") : 2;
    lex.config.index_qubits = cfg.contains("p") ? detail::size_field(cfg, "p", "lexicon config") : 1;
    if (lex.config.dim_n == 0 || lex.config.dim_s == 0)
        throw input_error("lexicon config: dimensions must be positive");

    const json& entries = detail::field(j, "entries", "lexicon");
    if (!entries.is_array()) throw input_error("lexicon: \"entries\" must be an array");
    for (const json& e : entries) {
        const std::string where = "lexicon entry " + std::to_string(lex.entries.size());
        const json& jw = detail::field(e, "word", where);
        if (!jw.is_string()) throw input_error(where + ": \"word\" must be a string");
        const std::string word = jw.get<std::string>();
        const json& jt = detail::field(e, "type", where);
        if (!jt.is_string()) throw input_error(where + ": \"type\" must be a string");
        TypePtr type;
        try {
            type = parse_type(jt.get<std::string>());
        } catch (const input_error& err) {
            throw input_error(where + " (" + word + "): bad type: " + err.what());
        }
        SemanticSpace space = interpret_type(type, lex.config);

        const json& jd = detail::field(e, "dims", where);
        if (!jd.is_array() || jd.size() != space.factors.size())
            throw input_error(where + " (" + word + "): \"dims\" must list " +
                              std::to_string(space.factors.size()) + " factor dimensions");
        for (std::size_t k = 0; k < space.factors.size(); ++k)
            if (!jd[k].is_number_unsigned() || jd[k].get<std::size_t>() != space.factors[k].dim)
                throw input_error(where + " (" + word + "): dims[" + std::to_string(k) +
                                  "] contradicts the type, expected " +
                                  std::to_string(space.factors[k].dim));

        const json& ja = detail::field(e, "amplitudes", where);
        if (!ja.is_array() || ja.size() != space.size())
            throw input_error(where + " (" + word + "): \"amplitudes\" must list " +
                              std::to_string(space.size()) + " complex values");
        std::vector<cplx> amp;
        amp.reserve(ja.size());
        for (const json& v : ja) amp.push_back(complex_from_json(v, where + " (" + word + ")"));

        if (lex.contains(word)) throw input_error("lexicon: duplicate word \"" + word + "\"");
        lex.entries.push_back({word, type, WordTensor(std::move(space), std::move(amp))});
    }
    return lex;
}

inline Lexicon load_lexicon_file(const std::string& path) {
    return load_lexicon(detail::load_file(path));
}

// Inverse of load_lexicon; load(serialize(load(f))) == load(f).
inline json lexicon_to_json(const Lexicon& lex) {
    json entries = json::array();
    for (const LexiconEntry& e : lex.entries) {
        json dims = json::array();
        for (std::size_t d : e.tensor.space.dims()) dims.push_back(d);
        json amps = json::array();
        for (const cplx& a : e.tensor.amp) amps.push_back(complex_to_json(a));
        entries.push_back({{"word", e.word},
                           {"type", to_string(e.type)},
                           {"dims", dims},
                           {"amplitudes", amps}});
    }
    return {{"config",
             {{"dim_N", lex.config.dim_n},
              {"dim_S", lex.config.dim_s},
              {"p", lex.config.index_qubits}}},
            {"entries", entries}};
}

// ---------------------------------------------------------------------------
// Question instances: {"p", "answers", "truth"} plus optional "dim_N",
// "W" (one noun vector per answer) and "verb" (dim_N x 2). Omitted
// tensors default to the basis construction read off the truth table.

inline QAInstance load_instance(const json& j) {
    QAInstance inst;
    inst.index_qubits = detail::size_field(j, "p", "instance");
    if (inst.index_qubits > 10) throw input_error("instance: p out of range (max 10)");
    const std::size_t P = inst.total();

    const json& ja = detail::field(j, "answers", "instance");
    if (!ja.is_array()) throw input_error("instance: \"answers\" must be an array");
    for (const json& a : ja) {
        if (!a.is_string()) throw input_error("instance: answers must be strings");
        inst.answers.push_back(a.get<std::string>());
    }
    const json& jt = detail::field(j, "truth", "instance");
    if (!jt.is_array()) throw input_error("instance: \"truth\" must be an array");
    for (const json& t : jt) {
        if (!t.is_number_integer()) throw input_error("instance: truth flags must be integers");
        inst.truth.push_back(t.get<int>());
    }

    inst.dim_n = j.contains("dim_N") ? detail::size_field(j, "dim_N", "instance") : P;

    if (j.contains("W")) {
        const json& w = j.at("W");
        if (!w.is_array() || w.size() != P)
            throw input_error("instance: \"W\" must list one noun vector per answer");
        for (const json& row : w) {
            if (!row.is_array() || row.size() != inst.dim_n)
                throw input_error("instance: noun vectors must have dim_N entries");
            std::vector<cplx> v;
            for (const json& e : row) v.push_back(complex_from_json(e, "instance W"));
            inst.nouns.push_back(std::move(v));
        }
    } else {
        if (inst.dim_n != P)
            throw input_error("instance: default basis nouns require dim_N == 2^p");
        inst.nouns.assign(P, std::vector<cplx>(P, cplx{}));
        for (std::size_t i = 0; i < P && i < inst.truth.size(); ++i) inst.nouns[i][i] = 1.0;
    }

    if (j.contains("verb")) {
        const json& v = j.at("verb");
        if (!v.is_array() || v.size() != inst.dim_n)
            throw input_error("instance: \"verb\" must have dim_N rows");
        for (const json& row : v) {
            if (!row.is_array() || row.size() != 2)
                throw input_error("instance: verb rows are [false, true] amplitude pairs");
            inst.verb.push_back(complex_from_json(row[0], "instance verb"));
            inst.verb.push_back(complex_from_json(row[1], "instance verb"));
        }
    } else {
        if (inst.dim_n != P)
            throw input_error("instance: default verb requires dim_N == 2^p");
        inst.verb.assign(P * 2, cplx{});
        for (std::size_t x = 0; x < P && x < inst.truth.size(); ++x)
            inst.verb[x * 2 + (inst.truth[x] ? 1 : 0)] = 1.0;
    }
    inst.validate();
    return inst;
}

inline QAInstance load_instance_file(const std::string& path) {
    return load_instance(detail::load_file(path));
}

// ---------------------------------------------------------------------------
// Report serialization.

inline json state_to_json(const PureState& st) {
    json wires = json::array();
    for (const Wire& w : st.system().wires())
        wires.push_back({{"label", w.label}, {"dim", w.dim}});
    json amps = json::array();
    for (const cplx& a : st.amplitudes()) amps.push_back(complex_to_json(a));
    return {{"wires", wires}, {"amplitudes", amps}};
}

inline json grover_report_json(const GroverReport& rep) {
    json curve = json::array();
    for (const auto& [k, prob] : rep.curve) curve.push_back(json::array({k, prob}));
    return {{"p", rep.index_qubits},
            {"P", rep.total},
            {"Q", rep.solutions},
            {"theta", rep.theta},
            {"iterations", rep.iterations},
            {"success_probability", rep.success_probability},
            {"sampled_index", rep.sampled_index},
            {"sampled_answer", rep.sampled_answer},
            {"shots", rep.shots},
            {"curve", curve}};
}

} // namespace qsem
