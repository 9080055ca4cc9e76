// Copyright 2026 The edgeburst Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "cli/commands.hpp"
#include "cli/config.hpp"

#include "edgeburst/dynamics.hpp"
#include "edgeburst/perturbation.hpp"
#include "edgeburst/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

using namespace edgeburst;
using namespace edgeburst::cli;

namespace {

// Pinned tolerances.
constexpr double kEdgeRatio = 10.0;             // P_1 >= 10 x median(P_2..P_20)
constexpr double kRuntimeDecay = 10.0;          // seconds
constexpr double kSumLo = 0.999, kSumHi = 1.001;
constexpr double kRealness = 1e-8;
constexpr double kPertAbs = 1e-2;               // order-40 vs direct on [0, 10]
constexpr double kClosure = 1e-12;
constexpr double kMainPathRel = 0.3;            // max|main - full| / max|full| on [0, t0]
constexpr double kRuntimePert = 60.0;
constexpr double kBasis = 1e-8;
constexpr double kSpectrumMatch = 1e-8;
constexpr double kFilterAbs = 1e-2;             // |filtered - full| for the onset time
constexpr double kFig4bOnsetMax = 5.0;
constexpr double kFig4cOnsetMin = 10.0, kFig4cOnsetMax = 15.0;
constexpr double kFullFilter = 1e-6;
constexpr double kStepRatioLo = 8.0, kStepRatioHi = 32.0;

LatticeParams preset_params(const std::string& name) {
    ConfigLayer l;
    l.preset = name;
    return resolve(Command::Evolve, l).params;
}

RunConfig preset_config(Command cmd, const std::string& name) {
    ConfigLayer l;
    l.preset = name;
    return resolve(cmd, l);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

DecayProfile walk_profile(const LatticeParams& p) {
    return decay_profile(build_walk_hamiltonian(p), p, initial_state(p), {.eps_norm = 1e-8});
}

Outcome edge_burst_present() {
    const auto t0 = std::chrono::steady_clock::now();
    const DecayProfile prof = walk_profile(preset_params("fig2a"));
    const double runtime = seconds_since(t0);
    const Eigen::VectorXd& p = prof.probabilities;
    Eigen::Index argmax = 0;
    const double pmax = p.maxCoeff(&argmax);
    std::vector<double> bulk(p.data() + 1, p.data() + 20);
    std::nth_element(bulk.begin(), bulk.begin() + 9, bulk.end());
    const double median = bulk[9];
    const bool is_max = argmax == 0;
    const bool ratio = p(0) >= kEdgeRatio * median;
    return {is_max && ratio && runtime < kRuntimeDecay,
            "P_1=" + num(p(0)) + " max_x P_x=" + num(pmax) + " at x=" + std::to_string(argmax + 1) +
                " (edge is max: " + (is_max ? "yes" : "no") + "), P_1/median(P_2..P_20)=" +
                num(p(0) / median) + ", runtime " + num(runtime) + " s"};
}

Outcome edge_burst_absent() {
    const DecayProfile a = walk_profile(preset_params("fig2a"));
    const DecayProfile b = walk_profile(preset_params("fig2b"));
    Eigen::Index argmax = 0;
    b.probabilities.maxCoeff(&argmax);
    const bool ok = argmax != 0 && b.probabilities(0) < a.probabilities(0);
    return {ok, "fig2b P_1=" + num(b.probabilities(0)) + " max at x=" + std::to_string(argmax + 1) +
                    ", fig2a P_1=" + num(a.probabilities(0))};
}

Outcome conservation() {
    bool ok = true;
    std::string detail;
    for (const char* name : {"fig2a", "fig2b"}) {
        const double total = walk_profile(preset_params(name)).total();
        ok = ok && total >= kSumLo && total <= kSumHi;
        detail += std::string(detail.empty() ? "" : ", ") + name + " sum P=" + num(total);
    }
    return {ok, detail};
}

Outcome realness() {
    double worst = 0.0;
    for (const auto& name : preset_names()) {
        const RunConfig cfg = preset_config(Command::Evolve, name);
        const LatticeParams& p = cfg.params;
        const Trajectory tr = evolve(build_walk_hamiltonian(p), initial_state(p), cfg.tmax, cfg.dt);
        for (const auto& s : tr.states) {
            for (int i = 0; i < p.dim(); i += 2) {
                worst = std::max({worst, std::abs(s(i).imag()), std::abs(s(i + 1).real())});
            }
        }
    }
    return {worst <= kRealness, "max |Im psi^A|, |Re psi^B| over all presets = " + num(worst)};
}

Outcome perturbation_fidelity() {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    for (const char* name : {"fig3e", "fig3f"}) {
        const LatticeParams p = preset_params(name);
        const OrderedAmplitudes oa = solve_perturbation(p, 40);
        const Trajectory ref = evolve(build_walk_hamiltonian(p), initial_state(p), 20.0, 0.01,
                                      {.stride = 10});

        double err10 = 0.0;
        for (std::size_t k = 0; k < ref.size() && ref.times[k] <= 10.0 + 1e-9; ++k) {
            err10 = std::max(err10, (amplitude_state(oa, ref.times[k]) - ref.states[k]).cwiseAbs().maxCoeff());
        }

        double closure = 0.0;
        for (int i = 0; i < p.dim(); ++i) {
            const SiteIndex target = SiteIndex::from_flat(i);
            if (target == SiteIndex{p.x0, Sublattice::A}) continue;
            for (double t : {0.5, 2.0, 5.0, 10.0}) {
                cplx sum = 0.0;
                for (const auto& nb : in_neighbors(target, p)) sum += final_step_amplitude(oa, target, nb.site, t);
                closure = std::max(closure, std::abs(sum - amplitude(oa, target, t)));
            }
        }

        const double window = convergence_window(oa, ref, kPertAbs);
        const ExpPoly full = amplitude_function(oa, {1, Sublattice::B});
        const ExpPoly main_path = main_path_function(oa);
        double peak = 0.0;
        double dev = 0.0;
        for (double t : ref.times) {
            if (t > window) break;
            peak = std::max(peak, std::abs(full(t)));
            dev = std::max(dev, std::abs(main_path(t) - full(t)));
        }
        const double rel = dev / peak;
        ok = ok && err10 <= kPertAbs && closure <= kClosure && rel <= kMainPathRel;
        detail += std::string(detail.empty() ? "" : "; ") + name + ": err[0,10]=" + num(err10) +
                  " closure=" + num(closure) + " main-path dev/peak on [0," + num(window) +
                  "]=" + num(rel);
    }
    const double runtime = seconds_since(t0);
    ok = ok && runtime < kRuntimePert;
    return {ok, detail + "; runtime " + num(runtime) + " s"};
}

Eigen::VectorXcd eigenvalues(const OperatorMatrix& m) {
    return Eigen::ComplexEigenSolver<OperatorMatrix>(m, false).eigenvalues();
}

Outcome spectral_suite() {
    bool ok = true;
    std::string detail;
    double basis = 0.0;
    double mirror = 0.0;
    double max_im = -1.0;
    bool even = true;
    for (const char* name : {"fig3f", "fig4b", "fig4c", "fig4d"}) {
        const LatticeParams p = preset_params(name);
        const ModeSet modes = eig(build_walk_hamiltonian(p));
        basis = std::max({basis, modes.biorthogonality_residual, modes.completeness_residual});
        const SpectrumDiagnostics d = spectrum_diagnostics(modes, p.gamma);
        mirror = std::max(mirror, d.mirror_residual);
        max_im = std::max(max_im, d.max_im);
        even = even && d.even_multiplicity;
    }
    ok = basis <= kBasis && mirror <= kSpectrumMatch && max_im <= 1e-10 && even;
    detail = "basis residual " + num(basis) + ", mirror " + num(mirror) + ", max Im " + num(max_im) +
             ", even multiplicity " + (even ? "yes" : "no");

    double match = 0.0;
    for (const char* name : {"fig2b", "fig3f", "fig4d"}) {
        const LatticeParams p = preset_params(name);
        const Eigen::VectorXcd e1 = eigenvalues(build_model(p, Model::H1));
        match = std::max({match, matching_distance(e1, eigenvalues(build_model(p, Model::H2))),
                          matching_distance(e1, eigenvalues(build_model(p, Model::H3)))});
    }
    ok = ok && match <= kSpectrumMatch;
    const SpectrumDiagnostics u = spectrum_diagnostics(eig(build_walk_hamiltonian(preset_params("fig4d"))), 1.0);
    ok = ok && u.uniform_im_deviation <= kSpectrumMatch;
    return {ok, detail + ", spectrum H1/H2/H3 match " + num(match) + ", fig4d max|Im+0.5| " +
                    num(u.uniform_im_deviation)};
}

// Earliest sample time after which |filtered - full| at 1B stays within tol.
double agreement_onset(const std::string& name, double* full_vs_direct = nullptr) {
    const RunConfig cfg = preset_config(Command::Modes, name);
    const LatticeParams& p = cfg.params;
    const OperatorMatrix h = build_walk_hamiltonian(p);
    const ModeSet modes = eig(h);
    const ModeExpansion ex = expand(modes, initial_state(p));
    const auto top = select_by_im(modes, cfg.top_k, &ex);
    const Trajectory direct = evolve(h, initial_state(p), cfg.tmax, cfg.dt, {.stride = cfg.stride});
    const int site = SiteIndex{1, Sublattice::B}.flat();
    double onset = 0.0;
    double worst = 0.0;
    for (std::size_t k = 0; k < direct.size(); ++k) {
        const double t = direct.times[k];
        const StateVector full = propagate(modes, ex, t, all_modes(modes));
        worst = std::max(worst, (full - direct.states[k]).cwiseAbs().maxCoeff());
        const double diff = std::abs(std::abs(propagate(modes, ex, t, top)(site)) - std::abs(full(site)));
        if (diff > kFilterAbs) onset = k + 1 < direct.size() ? direct.times[k + 1] : t;
    }
    if (full_vs_direct) *full_vs_direct = worst;
    return onset;
}

Outcome mode_filtering() {
    const double b = agreement_onset("fig4b");
    const double c = agreement_onset("fig4c");
    double full = 0.0;
    (void)agreement_onset("fig4d", &full);
    const bool ok = b <= kFig4bOnsetMax && c > kFig4cOnsetMin && c <= kFig4cOnsetMax &&
                    full <= kFullFilter;
    return {ok, "agreement onset (tol " + num(kFilterAbs) + "): fig4b t=" + num(b) + ", fig4c t=" +
                    num(c) + "; fig4d full filter vs direct " + num(full)};
}

// t1 = 0.6 is avoided: there t1' < t2, the Hermitian chain is topological and its
// A-only edge mode is nearly dark, so the walker never fully decays.
Outcome h4_counterexample() {
    bool ok = true;
    std::string detail;
    for (double t1 : {0.8, 1.0}) {
        LatticeParams p = preset_params("fig2a");
        p.t1 = t1;
        const DecayProfile prof =
            decay_profile(build_model(p, Model::H4), p, initial_state(p), {.eps_norm = 1e-8});
        Eigen::Index argmax = 0;
        prof.probabilities.maxCoeff(&argmax);
        ok = ok && argmax != 0;
        detail += std::string(detail.empty() ? "" : ", ") + "t1=" + num(t1) + ": max at x=" +
                  std::to_string(argmax + 1) + ", P_1=" + num(prof.probabilities(0));
    }
    return {ok, detail};
}

Outcome step_halving() {
    const LatticeParams p = preset_params("fig2a");
    const OperatorMatrix h = build_walk_hamiltonian(p);
    const double dt = 0.1;
    const double tmax = 20.0;
    const StateVector ref = evolve(h, initial_state(p), tmax, dt / 8).states.back();
    const double e1 = (evolve(h, initial_state(p), tmax, dt).states.back() - ref).norm();
    const double e2 = (evolve(h, initial_state(p), tmax, dt / 2).states.back() - ref).norm();
    const double ratio = e1 / e2;
    return {ratio >= kStepRatioLo && ratio <= kStepRatioHi,
            "error(dt=0.1)/error(dt=0.05) = " + num(ratio)};
}

std::string capture(const std::function<int(const Sinks&)>& run) {
    std::ostringstream main;
    std::ostringstream extra;
    std::ostringstream spectrum;
    Sinks s;
    s.main = &main;
    s.norm = &extra;
    s.amplitudes = &extra;
    s.spectrum = &spectrum;
    run(s);
    return main.str() + extra.str() + spectrum.str();
}

Outcome determinism() {
    std::vector<std::pair<std::string, std::function<int(const Sinks&)>>> jobs;
    auto add = [&](Command cmd, const std::string& preset, auto fn) {
        const RunConfig cfg = preset_config(cmd, preset);
        jobs.emplace_back(to_string(cmd) + " " + preset, [cfg, fn](const Sinks& s) { return fn(cfg, s); });
    };
    add(Command::DecayProfile, "fig2a", run_decay_profile);
    add(Command::DecayProfile, "fig3d", run_decay_profile);
    add(Command::Evolve, "fig2d", run_evolve);
    add(Command::Evolve, "fig3a", run_evolve);
    add(Command::Perturb, "fig3f", run_perturb);
    add(Command::Modes, "fig4c", run_modes);
    add(Command::TransformCheck, "fig2b", run_transform_check);
    std::size_t bytes = 0;
    for (const auto& [label, job] : jobs) {
        const std::string first = capture(job);
        const std::string second = capture(job);
        if (first != second) return {false, label + " differs between runs"};
        bytes += first.size();
    }
    return {true, std::to_string(jobs.size()) + " preset runs byte-identical (" + std::to_string(bytes) +
                      " bytes each pass)"};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"edge burst present (fig2a)", edge_burst_present},
        {"edge burst absent (fig2b)", edge_burst_absent},
        {"probability conservation", conservation},
        {"realness of amplitudes", realness},
        {"perturbation fidelity (fig3e, fig3f)", perturbation_fidelity},
        {"spectral suite", spectral_suite},
        {"mode filtering (fig4b-d)", mode_filtering},
        {"H4 counterexample", h4_counterexample},
        {"integrator order", step_halving},
        {"determinism", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::cout << "criterion " << i + 1 << ' ' << (o.pass ? "PASS" : "FAIL") << "  "
                  << criteria[i].first << ": " << o.detail << std::endl;
    }
    std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << '/' << criteria.size()
              << " criteria passed" << std::endl;
    return failed == 0 ? 0 : 1;
}
