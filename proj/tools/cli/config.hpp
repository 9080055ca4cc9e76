// Copyright 2026 The edgeburst Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file config.hpp
 * @brief Run configuration, experiment presets and their JSON form.
 *
 * Precedence, lowest first: built-in defaults, preset, config file, flags.
 */

#pragma once

#include "edgeburst/lattice.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace edgeburst::cli {

enum class Command { DecayProfile, Evolve, Perturb, Modes, TransformCheck, Verify };

[[nodiscard]] std::string to_string(Command c);
[[nodiscard]] Command command_from_string(const std::string& name);

/// Every field optional so that layers can be merged; resolve() fills the gaps.
struct ConfigLayer {
    std::optional<std::string> preset;
    std::optional<double> t1, t2, gamma;
    std::optional<int> length, x0;
    std::optional<double> tmax, dt, eps_norm;
    std::optional<int> order, top_k, stride;
    std::optional<std::string> model;
    std::optional<std::vector<std::string>> sites;

    /// Fields set in `over` replace ours.
    void merge(const ConfigLayer& over);
};

struct RunConfig {
    Command command = Command::Evolve;
    std::optional<std::string> preset;
    LatticeParams params;
    double tmax = 0.0;
    double dt = 0.0;
    double eps_norm = 0.0;
    int order = 0;
    int top_k = 0;
    int stride = 1;
    Model model = Model::Walk;
    std::vector<SiteIndex> sites;
};

/// Preset table; empty optional for unknown names.
[[nodiscard]] std::optional<ConfigLayer> find_preset(const std::string& name);
[[nodiscard]] std::vector<std::string> preset_names();

/// Applies defaults < preset < `layer` (which already holds file and flag values).
/// Throws DomainError on unknown presets, bad sites or invalid parameters.
[[nodiscard]] RunConfig resolve(Command command, const ConfigLayer& layer);

[[nodiscard]] nlohmann::ordered_json to_json(const RunConfig& cfg);
[[nodiscard]] ConfigLayer layer_from_json(const nlohmann::json& j);

/**
 * Reads a config file: either a JSON object, or an output file of this tool
 * whose first line is the echoed "# config: {...}" header.
 */
[[nodiscard]] ConfigLayer load_config_file(const std::string& path);

/// "# config: {...}" as written at the top of every output.
[[nodiscard]] std::string config_echo(const RunConfig& cfg);

}  // namespace edgeburst::cli
