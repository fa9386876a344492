// SPDX-License-Identifier: Apache-2.0
//
// skynoma: Monte Carlo simulator for power-domain NOMA downlink coverage
// from an aerial base station with limited-feedback user ordering
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
//
// JSON scenario files. Keys mirror the ScenarioConfig field names; unknown
// keys are a hard error. Angles are accepted either in degrees (the
// *_deg spelling, the human-facing form) or in radians (the *_rad spelling
// matching the stored field, which serialization emits so that
// parse(serialize(c)) reproduces c exactly); giving both is an error.
//
// A sweep file is the same document with lists on the sweep axes
// (plan.ordered_user_indices as a list of lists, region horizontal angle,
// ordering, scheme, radio.tx_power_dbm, radio.altitude_m). Expansion is
// the Cartesian product with rank sets outermost and altitude innermost.

#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "skynoma/config.hpp"

namespace skynoma {

namespace detail {

using json = nlohmann::json;

inline void require_keys(const json& obj, const std::string& where,
                         const std::vector<std::string>& known) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool found = false;
        for (const auto& k : known)
            if (it.key() == k) { found = true; break; }
        if (!found)
            throw std::invalid_argument("config: unknown key '" + where + it.key() + "'");
    }
}

inline const json& require(const json& obj, const std::string& where, const std::string& key) {
    auto it = obj.find(key);
    if (it == obj.end())
        throw std::invalid_argument("config: missing key '" + where + key + "'");
    return *it;
}

inline double number(const json& value, const std::string& where) {
    if (!value.is_number())
        throw std::invalid_argument("config: '" + where + "' must be a number");
    return value.get<double>();
}

/// Reads an angle given as exactly one of <name>_deg or <name>_rad.
inline double angle_rad(const json& obj, const std::string& where, const std::string& name) {
    const bool has_deg = obj.contains(name + "_deg");
    const bool has_rad = obj.contains(name + "_rad");
    if (has_deg && has_rad)
        throw std::invalid_argument("config: give only one of '" + where + name + "_deg' and '" +
                                    where + name + "_rad'");
    if (!has_deg && !has_rad)
        throw std::invalid_argument("config: missing key '" + where + name + "_deg'");
    if (has_deg) return deg_to_rad(number(obj.at(name + "_deg"), where + name + "_deg"));
    return number(obj.at(name + "_rad"), where + name + "_rad");
}

inline std::uint64_t unsigned_integer(const json& value, const std::string& where) {
    if (!value.is_number_integer() || (value.is_number_integer() && value.get<std::int64_t>() < 0 &&
                                       !value.is_number_unsigned()))
        throw std::invalid_argument("config: '" + where + "' must be a nonnegative integer");
    return value.get<std::uint64_t>();
}

inline bool boolean(const json& value, const std::string& where) {
    if (!value.is_boolean())
        throw std::invalid_argument("config: '" + where + "' must be a boolean");
    return value.get<bool>();
}

} // namespace detail

/// Parses one scenario (no sweep lists) and validates it.
inline ScenarioConfig parse_scenario(const nlohmann::json& j) {
    using detail::require;
    if (!j.is_object()) throw std::invalid_argument("config: document must be an object");
    detail::require_keys(j, "",
                         {"region", "radio", "plan", "user_density_per_m2", "ordering", "scheme",
                          "trials", "master_seed", "use_exact_gain", "unconditional_estimates",
                          "oma_prelog_total_users"});

    ScenarioConfig cfg;

    const auto& region = require(j, "", "region");
    detail::require_keys(region, "region.",
                         {"inner_radius_m", "outer_radius_m", "horizontal_angle_deg",
                          "horizontal_angle_rad", "beam_azimuth_deg", "beam_azimuth_rad"});
    cfg.region.inner_radius_m = detail::number(require(region, "region.", "inner_radius_m"),
                                               "region.inner_radius_m");
    cfg.region.outer_radius_m = detail::number(require(region, "region.", "outer_radius_m"),
                                               "region.outer_radius_m");
    cfg.region.horizontal_angle_rad = detail::angle_rad(region, "region.", "horizontal_angle");
    cfg.region.beam_azimuth_rad = detail::angle_rad(region, "region.", "beam_azimuth");

    const auto& radio = require(j, "", "radio");
    detail::require_keys(radio, "radio.",
                         {"antenna_count", "tx_power_dbm", "noise_dbm", "pathloss_exponent",
                          "altitude_m", "antenna_spacing_wavelengths"});
    cfg.radio.antenna_count = static_cast<int>(
        detail::unsigned_integer(require(radio, "radio.", "antenna_count"), "radio.antenna_count"));
    cfg.radio.tx_power_dbm = detail::number(require(radio, "radio.", "tx_power_dbm"),
                                            "radio.tx_power_dbm");
    cfg.radio.noise_dbm = detail::number(require(radio, "radio.", "noise_dbm"), "radio.noise_dbm");
    cfg.radio.pathloss_exponent = detail::number(require(radio, "radio.", "pathloss_exponent"),
                                                 "radio.pathloss_exponent");
    cfg.radio.altitude_m = detail::number(require(radio, "radio.", "altitude_m"),
                                          "radio.altitude_m");
    if (radio.contains("antenna_spacing_wavelengths"))
        cfg.radio.antenna_spacing_wavelengths = detail::number(
            radio.at("antenna_spacing_wavelengths"), "radio.antenna_spacing_wavelengths");

    const auto& plan = require(j, "", "plan");
    detail::require_keys(plan, "plan.",
                         {"ordered_user_indices", "power_coefficients_sq", "target_rates_bpcu",
                          "k_policy"});
    const auto& ranks = require(plan, "plan.", "ordered_user_indices");
    if (!ranks.is_array() || ranks.empty() || !ranks.front().is_number_integer())
        throw std::invalid_argument(
            "config: 'plan.ordered_user_indices' must be a nonempty array of integers");
    for (const auto& r : ranks)
        cfg.plan.ordered_user_indices.push_back(r.get<int>());
    for (const auto& b : require(plan, "plan.", "power_coefficients_sq"))
        cfg.plan.power_coefficients_sq.push_back(
            detail::number(b, "plan.power_coefficients_sq[]"));
    for (const auto& r : require(plan, "plan.", "target_rates_bpcu"))
        cfg.plan.target_rates_bpcu.push_back(detail::number(r, "plan.target_rates_bpcu[]"));
    if (plan.contains("k_policy"))
        cfg.plan.k_policy = k_policy_from_string(plan.at("k_policy").get<std::string>());

    cfg.user_density_per_m2 = detail::number(require(j, "", "user_density_per_m2"),
                                             "user_density_per_m2");
    cfg.ordering = ordering_from_string(require(j, "", "ordering").get<std::string>());
    cfg.scheme = scheme_from_string(require(j, "", "scheme").get<std::string>());
    cfg.trials = detail::unsigned_integer(require(j, "", "trials"), "trials");
    cfg.master_seed = detail::unsigned_integer(require(j, "", "master_seed"), "master_seed");
    if (j.contains("use_exact_gain"))
        cfg.use_exact_gain = detail::boolean(j.at("use_exact_gain"), "use_exact_gain");
    if (j.contains("unconditional_estimates"))
        cfg.unconditional_estimates =
            detail::boolean(j.at("unconditional_estimates"), "unconditional_estimates");
    if (j.contains("oma_prelog_total_users"))
        cfg.oma_prelog_total_users =
            detail::boolean(j.at("oma_prelog_total_users"), "oma_prelog_total_users");

    validate(cfg);
    return cfg;
}

/// Serializes a scenario to the canonical document form (angles in the
/// *_rad spelling, every optional key explicit). parse_scenario of the
/// result reproduces the input field for field.
inline nlohmann::json serialize_scenario(const ScenarioConfig& cfg) {
    nlohmann::json j;
    j["region"] = {{"inner_radius_m", cfg.region.inner_radius_m},
                   {"outer_radius_m", cfg.region.outer_radius_m},
                   {"horizontal_angle_rad", cfg.region.horizontal_angle_rad},
                   {"beam_azimuth_rad", cfg.region.beam_azimuth_rad}};
    j["radio"] = {{"antenna_count", cfg.radio.antenna_count},
                  {"tx_power_dbm", cfg.radio.tx_power_dbm},
                  {"noise_dbm", cfg.radio.noise_dbm},
                  {"pathloss_exponent", cfg.radio.pathloss_exponent},
                  {"altitude_m", cfg.radio.altitude_m},
                  {"antenna_spacing_wavelengths", cfg.radio.antenna_spacing_wavelengths}};
    j["plan"] = {{"ordered_user_indices", cfg.plan.ordered_user_indices},
                 {"power_coefficients_sq", cfg.plan.power_coefficients_sq},
                 {"target_rates_bpcu", cfg.plan.target_rates_bpcu},
                 {"k_policy", to_string(cfg.plan.k_policy)}};
    j["user_density_per_m2"] = cfg.user_density_per_m2;
    j["ordering"] = to_string(cfg.ordering);
    j["scheme"] = to_string(cfg.scheme);
    j["trials"] = cfg.trials;
    j["master_seed"] = cfg.master_seed;
    j["use_exact_gain"] = cfg.use_exact_gain;
    j["unconditional_estimates"] = cfg.unconditional_estimates;
    j["oma_prelog_total_users"] = cfg.oma_prelog_total_users;
    return j;
}

/// Expands a sweep document into scenarios, Cartesian product over the
/// sweep axes. Grid order (outermost to innermost loop): rank sets,
/// horizontal angle, ordering, scheme, transmit power, altitude.
inline std::vector<ScenarioConfig> expand_sweep(const nlohmann::json& doc) {
    using detail::json;
    if (!doc.is_object()) throw std::invalid_argument("config: document must be an object");

    auto as_list = [](const json& parent, const std::string& key) -> std::vector<json> {
        if (!parent.contains(key)) return {};
        const json& v = parent.at(key);
        if (v.is_array()) return std::vector<json>(v.begin(), v.end());
        return {v};
    };

    // plan.ordered_user_indices sweeps when given as a list of lists.
    std::vector<json> rank_sets;
    if (doc.contains("plan") && doc.at("plan").contains("ordered_user_indices")) {
        const json& ranks = doc.at("plan").at("ordered_user_indices");
        if (ranks.is_array() && !ranks.empty() && ranks.front().is_array())
            rank_sets.assign(ranks.begin(), ranks.end());
        else
            rank_sets = {ranks};
    } else {
        rank_sets = {json()};
    }

    const json& region = doc.contains("region") ? doc.at("region") : json::object();
    const json& radio = doc.contains("radio") ? doc.at("radio") : json::object();
    const bool angle_in_deg = region.contains("horizontal_angle_deg");
    const std::string angle_key = angle_in_deg ? "horizontal_angle_deg" : "horizontal_angle_rad";
    std::vector<json> angles = as_list(region, angle_key);
    if (angles.empty()) angles = {json()};
    std::vector<json> orderings = as_list(doc, "ordering");
    if (orderings.empty()) orderings = {json()};
    std::vector<json> schemes = as_list(doc, "scheme");
    if (schemes.empty()) schemes = {json()};
    std::vector<json> powers = as_list(radio, "tx_power_dbm");
    if (powers.empty()) powers = {json()};
    std::vector<json> altitudes = as_list(radio, "altitude_m");
    if (altitudes.empty()) altitudes = {json()};

    std::vector<ScenarioConfig> points;
    points.reserve(rank_sets.size() * angles.size() * orderings.size() * schemes.size() *
                   powers.size() * altitudes.size());
    for (const json& rank_set : rank_sets)
        for (const json& angle : angles)
            for (const json& ordering : orderings)
                for (const json& scheme : schemes)
                    for (const json& power : powers)
                        for (const json& altitude : altitudes) {
                            json point = doc;
                            if (!rank_set.is_null())
                                point["plan"]["ordered_user_indices"] = rank_set;
                            if (!angle.is_null()) point["region"][angle_key] = angle;
                            if (!ordering.is_null()) point["ordering"] = ordering;
                            if (!scheme.is_null()) point["scheme"] = scheme;
                            if (!power.is_null()) point["radio"]["tx_power_dbm"] = power;
                            if (!altitude.is_null()) point["radio"]["altitude_m"] = altitude;
                            points.push_back(parse_scenario(point));
                        }
    return points;
}

inline nlohmann::json load_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("cannot parse config file " + path.string() + ": " + e.what());
    }
    return j;
}

inline ScenarioConfig load_scenario_file(const std::filesystem::path& path) {
    return parse_scenario(load_json_file(path));
}

inline std::vector<ScenarioConfig> load_sweep_file(const std::filesystem::path& path) {
    return expand_sweep(load_json_file(path));
}

} // namespace skynoma
