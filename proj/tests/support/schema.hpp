#pragma once

// Small JSON-schema checker covering the subset the shipped schemas use:
// type, enum, minimum/maximum, required, properties, additionalProperties
// (boolean form), items (single schema or tuple), minItems/maxItems.

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace testschema {

using json = nlohmann::json;

inline bool type_matches(const json& v, const std::string& t) {
    if (t == "integer") return v.is_number_integer() || v.is_number_unsigned();
    if (t == "number") return v.is_number();
    if (t == "string") return v.is_string();
    if (t == "array") return v.is_array();
    if (t == "object") return v.is_object();
    if (t == "boolean") return v.is_boolean();
    if (t == "null") return v.is_null();
    return false;
}

inline void check(const json& v, const json& sch, const std::string& path,
                  std::vector<std::string>& errs) {
    if (sch.contains("type") && !type_matches(v, sch.at("type").get<std::string>())) {
        errs.push_back(path + ": expected type " + sch.at("type").get<std::string>());
        return;
    }
    if (sch.contains("enum")) {
        bool hit = false;
        for (const json& e : sch.at("enum"))
            if (e == v) hit = true;
        if (!hit) errs.push_back(path + ": value not in enum");
    }
    if (v.is_number()) {
        if (sch.contains("minimum") && v.get<double>() < sch.at("minimum").get<double>())
            errs.push_back(path + ": below minimum");
        if (sch.contains("maximum") && v.get<double>() > sch.at("maximum").get<double>())
            errs.push_back(path + ": above maximum");
    }
    if (v.is_object()) {
        if (sch.contains("required"))
            for (const json& k : sch.at("required"))
                if (!v.contains(k.get<std::string>()))
                    errs.push_back(path + ": missing required key " + k.get<std::string>());
        const json props = sch.contains("properties") ? sch.at("properties") : json::object();
        for (const auto& [key, val] : v.items()) {
            if (props.contains(key)) {
                check(val, props.at(key), path + "." + key, errs);
            } else if (sch.contains("additionalProperties") &&
                       sch.at("additionalProperties").is_boolean() &&
                       !sch.at("additionalProperties").get<bool>()) {
                errs.push_back(path + ": unexpected key " + key);
            }
        }
    }
    if (v.is_array()) {
        if (sch.contains("minItems") && v.size() < sch.at("minItems").get<std::size_t>())
            errs.push_back(path + ": too few items");
        if (sch.contains("maxItems") && v.size() > sch.at("maxItems").get<std::size_t>())
            errs.push_back(path + ": too many items");
        if (sch.contains("items")) {
            const json& items = sch.at("items");
            for (std::size_t i = 0; i < v.size(); ++i) {
                const std::string p = path + "[" + std::to_string(i) + "]";
                if (items.is_array()) {
                    if (i < items.size()) check(v[i], items[i], p, errs);
                } else {
                    check(v[i], items, p, errs);
                }
            }
        }
    }
}

inline std::vector<std::string> errors(const json& value, const json& schema) {
    std::vector<std::string> errs;
    check(value, schema, "$", errs);
    return errs;
}

} // namespace testschema
