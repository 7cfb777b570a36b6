#pragma once

// JSON scenario files:
//
//   {
//     "roads": [ {"v_max": 1, "rho_max": 1, "initial": 0.15}, ...x3 ],
//     "cells": 1000, "cfl": 0.9, "lambda": 1.0, "final_time": 0.75,
//     "solver": "relaxation" | "classical" | "both",
//     "snapshots": [0.25, 0.5], "output_dir": "out"
//   }
//
// "initial" is a number or a list of {"from", "to", "value"} segments.
// Unknown keys are rejected with their path.

#include "lwrnet/errors.hpp"
#include "lwrnet/simulation.hpp"

#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>

namespace lwrnet {

struct RunConfig {
    Scenario scenario;
    std::string output_dir = "out";
};

namespace detail {

using nlohmann::json;

inline void reject_unknown(const json& obj, const std::string& path,
                           std::initializer_list<std::string_view> allowed) {
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (auto a : allowed) {
            known = known || key == a;
        }
        if (!known) {
            throw ConfigError(path + (path.empty() ? "" : ".") + key + ": unknown key");
        }
    }
}

inline const json& require(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.contains(key)) {
        throw ConfigError(path + (path.empty() ? "" : ".") + key + ": missing required key");
    }
    return obj.at(key);
}

inline double as_number(const json& value, const std::string& path) {
    if (!value.is_number()) {
        throw ConfigError(path + ": expected a number");
    }
    return value.get<double>();
}

inline InitialProfile parse_profile(const json& value, const std::string& path) {
    if (value.is_number()) {
        return value.get<double>();
    }
    if (!value.is_array() || value.empty()) {
        throw ConfigError(path + ": expected a number or a non-empty list of segments");
    }
    std::vector<Segment> segments;
    for (std::size_t i = 0; i < value.size(); ++i) {
        const std::string p = path + "[" + std::to_string(i) + "]";
        const json& seg = value[i];
        if (!seg.is_object()) {
            throw ConfigError(p + ": expected an object {from, to, value}");
        }
        reject_unknown(seg, p, {"from", "to", "value"});
        Segment s;
        s.from = as_number(require(seg, "from", p), p + ".from");
        s.to = as_number(require(seg, "to", p), p + ".to");
        s.value = as_number(require(seg, "value", p), p + ".value");
        if (!(s.from < s.to)) {
            throw ConfigError(p + ": segment needs from < to");
        }
        segments.push_back(s);
    }
    return segments;
}

inline json profile_to_json(const InitialProfile& profile) {
    if (const double* value = std::get_if<double>(&profile)) {
        return *value;
    }
    json list = json::array();
    for (const auto& s : std::get<std::vector<Segment>>(profile)) {
        list.push_back({{"from", s.from}, {"to", s.to}, {"value", s.value}});
    }
    return list;
}

} // namespace detail

inline SolverChoice parse_solver(std::string_view name) {
    if (name == "relaxation") return SolverChoice::relaxation;
    if (name == "classical") return SolverChoice::classical;
    if (name == "both") return SolverChoice::both;
    throw ConfigError("solver: expected \"relaxation\", \"classical\" or \"both\", got \""
                      + std::string(name) + "\"");
}

/// Schema check and conversion; the scenario itself is validated as well.
inline RunConfig parse_config(const nlohmann::json& doc) {
    using detail::as_number;
    using detail::require;
    if (!doc.is_object()) {
        throw ConfigError("config: expected a JSON object");
    }
    detail::reject_unknown(doc, "", {"roads", "cells", "cfl", "lambda", "final_time", "solver",
                                     "snapshots", "output_dir"});
    RunConfig cfg;
    Scenario& s = cfg.scenario;

    const auto& roads = require(doc, "roads", "");
    if (!roads.is_array() || roads.size() != 3) {
        throw ConfigError("roads: expected an array of exactly 3 road objects");
    }
    for (std::size_t k = 0; k < 3; ++k) {
        const std::string p = "roads[" + std::to_string(k) + "]";
        const auto& road = roads[k];
        if (!road.is_object()) {
            throw ConfigError(p + ": expected an object");
        }
        detail::reject_unknown(road, p, {"v_max", "rho_max", "initial"});
        const double v_max = as_number(require(road, "v_max", p), p + ".v_max");
        const double rho_max = as_number(require(road, "rho_max", p), p + ".rho_max");
        try {
            s.roads[k].diagram = FundamentalDiagram(v_max, rho_max);
        } catch (const ConfigError& e) {
            throw ConfigError(p + ": " + e.what());
        }
        s.roads[k].initial = detail::parse_profile(require(road, "initial", p), p + ".initial");
    }

    if (doc.contains("cells")) {
        const auto& cells = doc.at("cells");
        if (!cells.is_number_integer() || cells.get<long long>() < 2) {
            throw ConfigError("cells: expected an integer >= 2");
        }
        s.cells = cells.get<std::size_t>();
    }
    if (doc.contains("cfl")) {
        s.cfl = as_number(doc.at("cfl"), "cfl");
    }
    if (doc.contains("lambda") && !doc.at("lambda").is_null()) {
        s.lambda = as_number(doc.at("lambda"), "lambda");
    }
    s.final_time = as_number(require(doc, "final_time", ""), "final_time");
    if (doc.contains("solver")) {
        if (!doc.at("solver").is_string()) {
            throw ConfigError("solver: expected a string");
        }
        s.solver = parse_solver(doc.at("solver").get<std::string>());
    }
    if (doc.contains("snapshots")) {
        const auto& snaps = doc.at("snapshots");
        if (!snaps.is_array()) {
            throw ConfigError("snapshots: expected an array of times");
        }
        for (std::size_t i = 0; i < snaps.size(); ++i) {
            s.snapshot_times.push_back(as_number(snaps[i], "snapshots[" + std::to_string(i) + "]"));
        }
    }
    if (doc.contains("output_dir")) {
        if (!doc.at("output_dir").is_string()) {
            throw ConfigError("output_dir: expected a string");
        }
        cfg.output_dir = doc.at("output_dir").get<std::string>();
    }

    s.validate();
    return cfg;
}

inline RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(path.string() + ": cannot open config file");
    }
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return parse_config(doc);
}

inline nlohmann::json to_json(const RunConfig& cfg) {
    const Scenario& s = cfg.scenario;
    nlohmann::json roads = nlohmann::json::array();
    for (const auto& r : s.roads) {
        roads.push_back({{"v_max", r.diagram.v_max},
                         {"rho_max", r.diagram.rho_max},
                         {"initial", detail::profile_to_json(r.initial)}});
    }
    nlohmann::json doc = {
        {"roads", roads},
        {"cells", s.cells},
        {"cfl", s.cfl},
        {"final_time", s.final_time},
        {"solver", std::string(to_string(s.solver))},
        {"snapshots", s.snapshot_times},
        {"output_dir", cfg.output_dir},
    };
    doc["lambda"] = s.lambda ? nlohmann::json(*s.lambda) : nlohmann::json(nullptr);
    return doc;
}

} // namespace lwrnet
