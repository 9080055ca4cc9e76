// Copyright 2026 The edgeburst Authors
// SPDX-License-Identifier: Apache-2.0

#include "config.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace edgeburst::cli {

namespace {

constexpr const char* kEchoPrefix = "# config: ";

ConfigLayer fig2(double t1) {
    ConfigLayer l;
    l.t1 = t1;
    l.t2 = 0.5;
    l.gamma = 0.8;
    l.length = 40;
    l.x0 = 30;
    return l;
}

ConfigLayer fig3(double t1) {
    ConfigLayer l;
    l.t1 = t1;
    l.t2 = 0.5;
    l.gamma = 0.8;
    l.length = 8;
    l.x0 = 6;
    l.order = 40;
    return l;
}

ConfigLayer fig4(double t1, int top_k) {
    ConfigLayer l;
    l.t1 = t1;
    l.t2 = 0.3;
    l.gamma = 1.0;
    l.length = 8;
    l.x0 = 6;
    l.top_k = top_k;
    l.tmax = 30.0;
    l.sites = std::vector<std::string>{"1B"};
    return l;
}

const std::map<std::string, ConfigLayer>& presets() {
    static const std::map<std::string, ConfigLayer> table = [] {
        std::map<std::string, ConfigLayer> t;
        t["fig2a"] = fig2(0.4);
        t["fig2b"] = fig2(0.8);
        for (auto [name, t1] : {std::pair{"fig2c", 0.4}, std::pair{"fig2d", 0.8}}) {
            ConfigLayer l = fig2(t1);
            // The edge peak of the t1 = 0.4 walk arrives near t = 68.
            l.tmax = 150.0;
            l.sites = std::vector<std::string>{"1B", "5B", "10B", "15B"};
            t[name] = l;
        }
        for (auto [name, t1] : {std::pair{"fig3a", 0.4}, std::pair{"fig3b", 0.8}}) {
            ConfigLayer l = fig3(t1);
            l.tmax = 20.0;
            l.sites = std::vector<std::string>{"1A", "2A", "3A", "4A", "5A", "6A", "7A", "8A"};
            t[name] = l;
        }
        t["fig3c"] = fig3(0.4);
        t["fig3d"] = fig3(0.8);
        for (auto [name, t1] : {std::pair{"fig3e", 0.4}, std::pair{"fig3f", 0.8}}) {
            ConfigLayer l = fig3(t1);
            l.tmax = 20.0;
            t[name] = l;
        }
        t["fig4b"] = fig4(0.1, 8);
        t["fig4c"] = fig4(0.4, 8);
        t["fig4d"] = fig4(0.6, 16);
        ConfigLayer herm = fig3(0.4);
        herm.gamma = 0.0;
        t["hermitian"] = herm;
        return t;
    }();
    return table;
}

template <typename T>
void take(std::optional<T>& dst, const std::optional<T>& src) {
    if (src) dst = src;
}

template <typename T>
void read(const nlohmann::json& j, const char* key, std::optional<T>& dst) {
    if (j.contains(key) && !j.at(key).is_null()) dst = j.at(key).get<T>();
}

}  // namespace

std::string to_string(Command c) {
    switch (c) {
        case Command::DecayProfile: return "decay-profile";
        case Command::Evolve: return "evolve";
        case Command::Perturb: return "perturb";
        case Command::Modes: return "modes";
        case Command::TransformCheck: return "transform-check";
        case Command::Verify: return "verify";
    }
    return "?";
}

Command command_from_string(const std::string& name) {
    for (Command c : {Command::DecayProfile, Command::Evolve, Command::Perturb, Command::Modes,
                      Command::TransformCheck, Command::Verify}) {
        if (to_string(c) == name) return c;
    }
    throw DomainError("unknown command '" + name + "'");
}

void ConfigLayer::merge(const ConfigLayer& over) {
    take(preset, over.preset);
    take(t1, over.t1);
    take(t2, over.t2);
    take(gamma, over.gamma);
    take(length, over.length);
    take(x0, over.x0);
    take(tmax, over.tmax);
    take(dt, over.dt);
    take(eps_norm, over.eps_norm);
    take(order, over.order);
    take(top_k, over.top_k);
    take(stride, over.stride);
    take(model, over.model);
    take(sites, over.sites);
}

std::optional<ConfigLayer> find_preset(const std::string& name) {
    const auto it = presets().find(name);
    if (it == presets().end()) return std::nullopt;
    ConfigLayer l = it->second;
    l.preset = name;
    return l;
}

std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (const auto& [name, layer] : presets()) names.push_back(name);
    return names;
}

RunConfig resolve(Command command, const ConfigLayer& layer) {
    ConfigLayer eff;
    eff.t1 = 0.4;
    eff.t2 = 0.5;
    eff.gamma = 0.8;
    eff.length = 8;
    eff.x0 = 6;
    eff.tmax = 20.0;
    eff.dt = command == Command::DecayProfile ? 0.002 : 0.01;
    eff.eps_norm = 1e-8;
    eff.order = 40;
    eff.top_k = 8;
    eff.stride = command == Command::DecayProfile ? 1 : 10;
    eff.model = "walk";
    eff.sites = std::vector<std::string>{"1B"};
    if (layer.preset) {
        const auto p = find_preset(*layer.preset);
        if (!p) throw DomainError("unknown preset '" + *layer.preset + "'");
        eff.merge(*p);
    }
    eff.merge(layer);

    RunConfig cfg;
    cfg.command = command;
    cfg.preset = eff.preset;
    cfg.params = {*eff.t1, *eff.t2, *eff.gamma, *eff.length, *eff.x0};
    cfg.params.validate();
    cfg.tmax = *eff.tmax;
    cfg.dt = *eff.dt;
    cfg.eps_norm = *eff.eps_norm;
    cfg.order = *eff.order;
    cfg.top_k = *eff.top_k;
    cfg.stride = *eff.stride;
    cfg.model = model_from_string(*eff.model);
    if (!(cfg.tmax >= 0.0)) throw DomainError("tmax must be >= 0");
    if (!(cfg.dt > 0.0)) throw DomainError("dt must be > 0");
    if (!(cfg.eps_norm > 0.0 && cfg.eps_norm < 1.0)) throw DomainError("eps_norm must lie in (0, 1)");
    if (cfg.order < 0) throw DomainError("order must be >= 0");
    if (cfg.stride < 1) throw DomainError("stride must be >= 1");
    if (cfg.top_k < 0 || cfg.top_k > cfg.params.dim()) {
        throw DomainError("top_k must lie in [0, 2L]");
    }
    for (const auto& s : *eff.sites) {
        const SiteIndex site = parse_site(s);
        if (site.cell > cfg.params.length) {
            throw DomainError("site " + s + " outside the chain (L = " +
                              std::to_string(cfg.params.length) + ")");
        }
        cfg.sites.push_back(site);
    }
    if (cfg.sites.empty()) throw DomainError("site list is empty");
    return cfg;
}

nlohmann::ordered_json to_json(const RunConfig& cfg) {
    nlohmann::ordered_json j;
    j["command"] = to_string(cfg.command);
    if (cfg.preset) j["preset"] = *cfg.preset;
    j["t1"] = cfg.params.t1;
    j["t2"] = cfg.params.t2;
    j["gamma"] = cfg.params.gamma;
    j["length"] = cfg.params.length;
    j["x0"] = cfg.params.x0;
    j["tmax"] = cfg.tmax;
    j["dt"] = cfg.dt;
    j["eps_norm"] = cfg.eps_norm;
    j["order"] = cfg.order;
    j["top_k"] = cfg.top_k;
    j["stride"] = cfg.stride;
    j["model"] = edgeburst::to_string(cfg.model);
    std::vector<std::string> sites;
    for (const auto& s : cfg.sites) sites.push_back(format_site(s));
    j["sites"] = sites;
    return j;
}

ConfigLayer layer_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw DomainError("config must be a JSON object");
    static const char* known[] = {"command", "preset", "t1", "t2", "gamma", "length", "x0",
                                  "tmax", "dt", "eps_norm", "order", "top_k", "stride",
                                  "model", "sites"};
    for (const auto& [key, value] : j.items()) {
        if (std::find(std::begin(known), std::end(known), key) == std::end(known)) {
            throw DomainError("unknown config key '" + key + "'");
        }
    }
    ConfigLayer l;
    try {
        read(j, "preset", l.preset);
        read(j, "t1", l.t1);
        read(j, "t2", l.t2);
        read(j, "gamma", l.gamma);
        read(j, "length", l.length);
        read(j, "x0", l.x0);
        read(j, "tmax", l.tmax);
        read(j, "dt", l.dt);
        read(j, "eps_norm", l.eps_norm);
        read(j, "order", l.order);
        read(j, "top_k", l.top_k);
        read(j, "stride", l.stride);
        read(j, "model", l.model);
        read(j, "sites", l.sites);
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("bad config value: ") + e.what());
    }
    return l;
}

ConfigLayer load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot read config file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    const std::string prefix = kEchoPrefix;
    if (text.rfind(prefix, 0) == 0) {
        text = text.substr(prefix.size(), text.find('\n') - prefix.size());
    }
    try {
        return layer_from_json(nlohmann::json::parse(text));
    } catch (const nlohmann::json::parse_error& e) {
        throw DomainError("config file " + path + " is not valid JSON: " + e.what());
    }
}

std::string config_echo(const RunConfig& cfg) { return kEchoPrefix + to_json(cfg).dump(); }

}  // namespace edgeburst::cli
