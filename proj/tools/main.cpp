// Copyright 2026 The edgeburst Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli/commands.hpp"
#include "cli/config.hpp"

#include "edgeburst/dynamics.hpp"
#include "edgeburst/spectral.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

using namespace edgeburst;
using namespace edgeburst::cli;

namespace {

struct Flags {
    std::string preset, config, out, norm_out, amplitudes_out, spectrum_out, model;
    double t1 = 0, t2 = 0, gamma = 0, tmax = 0, dt = 0, eps_norm = 0;
    int length = 0, x0 = 0, order = 0, top_k = 0, stride = 0;
    std::vector<std::string> sites;
    bool inject_sign_flip = false;
};

struct Bound {
    CLI::App* app = nullptr;
    std::map<std::string, CLI::Option*> opts;
    [[nodiscard]] bool given(const std::string& name) const {
        const auto it = opts.find(name);
        return it != opts.end() && it->second->count() > 0;
    }
};

Bound add_command(CLI::App& app, Command cmd, const std::string& description, Flags& f,
                  const std::vector<std::string>& extra) {
    Bound b;
    b.app = app.add_subcommand(to_string(cmd), description);
    auto* s = b.app;
    b.opts["preset"] = s->add_option("--preset", f.preset, "Experiment preset (" + [] {
        std::string names;
        for (const auto& n : preset_names()) names += (names.empty() ? "" : ", ") + n;
        return names;
    }() + ")");
    b.opts["config"] = s->add_option("--config", f.config, "JSON config, or an earlier output file");
    b.opts["out"] = s->add_option("--out", f.out, "Output path (default: stdout)");
    b.opts["t1"] = s->add_option("--t1", f.t1, "Intra-cell hopping");
    b.opts["t2"] = s->add_option("--t2", f.t2, "Inter-cell hopping");
    b.opts["gamma"] = s->add_option("--gamma", f.gamma, "Loss rate on B sites");
    b.opts["length"] = s->add_option("--length", f.length, "Number of unit cells L");
    b.opts["x0"] = s->add_option("--x0", f.x0, "Initial cell (1-based, A sublattice)");
    for (const auto& name : extra) {
        if (name == "tmax") b.opts[name] = s->add_option("--tmax", f.tmax, "Final time");
        if (name == "dt") b.opts[name] = s->add_option("--dt", f.dt, "RK4 step");
        if (name == "eps-norm") b.opts[name] = s->add_option("--eps-norm", f.eps_norm, "Stop once |psi|^2 falls below this");
        if (name == "order") b.opts[name] = s->add_option("--order", f.order, "Perturbation order");
        if (name == "top-k") b.opts[name] = s->add_option("--top-k", f.top_k, "Modes kept by largest Im(E)");
        if (name == "model") b.opts[name] = s->add_option("--model", f.model, "walk, H1, H2, H3 or H4");
        if (name == "sites") b.opts[name] = s->add_option("--sites", f.sites, "Sites such as 1B 5B")->delimiter(',');
        if (name == "stride") b.opts[name] = s->add_option("--stride", f.stride, "Write every n-th step");
        if (name == "norm-out") b.opts[name] = s->add_option("--norm-out", f.norm_out, "Also write t,norm here");
        if (name == "amplitudes-out") {
            b.opts[name] = s->add_option("--amplitudes-out", f.amplitudes_out,
                                         "Also write per-order partial sums for --sites here");
        }
        if (name == "spectrum-out") {
            b.opts[name] = s->add_option("--spectrum-out", f.spectrum_out,
                                         "Spectrum CSV path (default: <out>.spectrum.csv)");
        }
        if (name == "inject-sign-flip") {
            b.opts[name] = s->add_flag("--inject-sign-flip", f.inject_sign_flip,
                                       "Corrupt the operator to check that the suite catches it");
        }
    }
    return b;
}

ConfigLayer flag_layer(const Bound& b, const Flags& f) {
    ConfigLayer l;
    if (b.given("preset")) l.preset = f.preset;
    if (b.given("t1")) l.t1 = f.t1;
    if (b.given("t2")) l.t2 = f.t2;
    if (b.given("gamma")) l.gamma = f.gamma;
    if (b.given("length")) l.length = f.length;
    if (b.given("x0")) l.x0 = f.x0;
    if (b.given("tmax")) l.tmax = f.tmax;
    if (b.given("dt")) l.dt = f.dt;
    if (b.given("eps-norm")) l.eps_norm = f.eps_norm;
    if (b.given("order")) l.order = f.order;
    if (b.given("top-k")) l.top_k = f.top_k;
    if (b.given("stride")) l.stride = f.stride;
    if (b.given("model")) l.model = f.model;
    if (b.given("sites")) l.sites = f.sites;
    return l;
}

// Output goes to a buffer first so a failing command leaves no partial file.
class Sink {
public:
    explicit Sink(std::string path) : path_(std::move(path)) {}
    std::ostream* stream() { return &buf_; }
    void commit(std::ostream& fallback) const {
        if (path_.empty()) {
            fallback << buf_.str();
            fallback.flush();
            return;
        }
        std::ofstream f(path_, std::ios::binary);
        if (!f) throw DomainError("cannot write " + path_);
        f << buf_.str();
    }

private:
    std::string path_;
    std::ostringstream buf_;
};

std::string spectrum_path(const Flags& f) {
    if (!f.spectrum_out.empty() || f.out.empty()) return f.spectrum_out;
    const auto dot = f.out.rfind('.');
    const auto slash = f.out.rfind('/');
    const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
    return (has_ext ? f.out.substr(0, dot) : f.out) + ".spectrum.csv";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Edge-burst dynamics of a lossy quantum walk: simulation, perturbation and spectral tools"};
    app.require_subcommand(1);
    Flags f;
    std::vector<std::pair<Command, Bound>> commands;
    commands.emplace_back(Command::DecayProfile,
                          add_command(app, Command::DecayProfile, "Site-resolved loss probability P_x",
                                      f, {"dt", "eps-norm", "model"}));
    commands.emplace_back(Command::Evolve,
                          add_command(app, Command::Evolve, "Direct RK4 evolution of selected sites", f,
                                      {"tmax", "dt", "model", "sites", "stride", "norm-out"}));
    commands.emplace_back(Command::Perturb,
                          add_command(app, Command::Perturb,
                                      "Perturbative and main-path edge amplitude vs direct integration", f,
                                      {"tmax", "dt", "order", "stride", "sites", "amplitudes-out"}));
    commands.emplace_back(Command::Modes,
                          add_command(app, Command::Modes, "Spectrum and top-k mode-filtered evolution", f,
                                      {"tmax", "dt", "top-k", "model", "sites", "stride", "spectrum-out"}));
    commands.emplace_back(Command::TransformCheck,
                          add_command(app, Command::TransformCheck,
                                      "Chiral, rotation and similarity relations between the models", f, {}));
    commands.emplace_back(Command::Verify,
                          add_command(app, Command::Verify, "Invariant suite over the presets (JSON report)",
                                      f, {"order", "inject-sign-flip"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    const auto& [cmd, bound] = *std::find_if(commands.begin(), commands.end(),
                                             [](const auto& c) { return c.second.app->parsed(); });
    try {
        ConfigLayer layer;
        if (bound.given("config")) layer = load_config_file(f.config);
        layer.merge(flag_layer(bound, f));
        const RunConfig cfg = resolve(cmd, layer);

        Sink main_out(f.out);
        Sink norm_out(f.norm_out);
        Sink amp_out(f.amplitudes_out);
        const std::string spec_path = spectrum_path(f);
        Sink spec_out(spec_path);
        Sinks sinks;
        sinks.main = main_out.stream();
        if (!f.norm_out.empty()) sinks.norm = norm_out.stream();
        if (!f.amplitudes_out.empty()) sinks.amplitudes = amp_out.stream();
        if (!spec_path.empty()) sinks.spectrum = spec_out.stream();

        int code = kOk;
        switch (cmd) {
            case Command::DecayProfile: code = run_decay_profile(cfg, sinks); break;
            case Command::Evolve: code = run_evolve(cfg, sinks); break;
            case Command::Perturb: code = run_perturb(cfg, sinks); break;
            case Command::Modes: code = run_modes(cfg, sinks); break;
            case Command::TransformCheck: code = run_transform_check(cfg, sinks); break;
            case Command::Verify: {
                VerifyOptions vo;
                vo.inject_sign_flip = f.inject_sign_flip;
                vo.all_presets = !layer.preset && !layer.t1 && !layer.t2 && !layer.gamma &&
                                 !layer.length && !layer.x0;
                code = run_verify(cfg, vo, sinks);
                break;
            }
        }
        if (sinks.spectrum) spec_out.commit(std::cout);
        main_out.commit(std::cout);
        if (sinks.norm) norm_out.commit(std::cout);
        if (sinks.amplitudes) amp_out.commit(std::cout);
        if (code == kCheckFailed) std::cerr << "edgeburst: one or more checks failed\n";
        return code;
    } catch (const std::invalid_argument& e) {
        std::cerr << "edgeburst: " << e.what() << '\n';
        return kUsage;
    } catch (const NumericalError& e) {
        std::cerr << "edgeburst: numerical failure: " << e.what() << '\n';
        return kNumerical;
    } catch (const DefectiveSpectrum& e) {
        std::cerr << "edgeburst: numerical failure: " << e.what() << '\n';
        return kNumerical;
    } catch (const std::exception& e) {
        std::cerr << "edgeburst: " << e.what() << '\n';
        return kNumerical;
    }
}
