// Copyright 2026 The edgeburst Authors
// SPDX-License-Identifier: Apache-2.0

#include "commands.hpp"

#include "edgeburst/dynamics.hpp"
#include "edgeburst/perturbation.hpp"
#include "edgeburst/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>

namespace edgeburst::cli {

namespace {

constexpr double kNone = std::numeric_limits<double>::quiet_NaN();

struct Check {
    std::string preset;
    std::string module;
    std::string name;
    std::string status;  // pass, fail, skip
    double residual = kNone;
    double tolerance = kNone;
    std::string detail;
};

class Suite {
public:
    Suite(std::string preset, std::vector<Check>& sink) : preset_(std::move(preset)), sink_(sink) {}

    void bound(const char* module, const char* name, double residual, double tol) {
        sink_.push_back({preset_, module, name, residual <= tol ? "pass" : "fail", residual, tol, ""});
    }
    void flag(const char* module, const char* name, bool ok, std::string detail = {}) {
        sink_.push_back({preset_, module, name, ok ? "pass" : "fail", kNone, kNone, std::move(detail)});
    }
    void skip(const char* module, const char* name, std::string why) {
        sink_.push_back({preset_, module, name, "skip", kNone, kNone, std::move(why)});
    }
    // A check that threw is recorded as a failure; the suite keeps going.
    void error(const char* module, const char* name, const std::exception& e) {
        sink_.push_back({preset_, module, name, "fail", kNone, kNone, e.what()});
    }

private:
    std::string preset_;
    std::vector<Check>& sink_;
};

OperatorMatrix walk_operator(const LatticeParams& p, bool flip) {
    OperatorMatrix h = build_walk_hamiltonian(p);
    if (flip) h(0, 1) = -h(0, 1);
    return h;
}

double max_diff(const Trajectory& a, const Trajectory& b) {
    double err = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        err = std::max(err, (a.states[k] - b.states[k]).cwiseAbs().maxCoeff());
    }
    return err;
}

void lattice_checks(const LatticeParams& p, const OperatorMatrix& h, Suite& s) {
    s.bound("lattice", "h0_plus_hprime", max_norm(build_h0(p) + build_hprime(p) - h), 0.0);
    const OperatorMatrix id = OperatorMatrix::Identity(p.dim(), p.dim());
    const OperatorMatrix h1 = h + (0.5 * p.gamma * kI) * id;
    const auto chiral = check_symmetry(h1, build_transform(p, Transform::Gamma), SymmetryKind::Chiral, 1e-12);
    s.bound("lattice", "chiral_h1", chiral.residual, 1e-12);
    const OperatorMatrix r = build_transform(p, Transform::R);
    const OperatorMatrix h2 = build_model(p, Model::H2);
    s.bound("lattice", "rotation_h2", max_norm(r.inverse() * h1 * r - h2), 1e-12);
    if (p.t1 > 0.5 * p.gamma) {
        const OperatorMatrix sm = build_transform(p, Transform::S);
        const OperatorMatrix h3 = build_model(p, Model::H3);
        s.bound("lattice", "similarity_h3", max_norm(sm.inverse() * h2 * sm - h3),
                1e-10 * std::max(1.0, max_norm(h2)));
        s.bound("lattice", "spectrum_h2_h3",
                check_symmetry(h2, h3, SymmetryKind::SpectrumEquality, 1e-8).residual, 1e-8);
    } else {
        s.skip("lattice", "similarity_h3", "t1 <= gamma/2: no real similarity S onto H3");
        s.skip("lattice", "spectrum_h2_h3", "t1 <= gamma/2: no real similarity S onto H3");
    }
}

void dynamics_checks(const LatticeParams& p, const OperatorMatrix& h, Suite& s) {
    const StateVector psi0 = initial_state(p);
    const Trajectory tr = evolve(h, psi0, 20.0, 0.01);
    double real = 0.0;
    double rise = 0.0;
    double drift = 0.0;
    for (std::size_t k = 0; k < tr.size(); ++k) {
        for (int i = 0; i < p.dim(); i += 2) {
            real = std::max({real, std::abs(tr.states[k](i).imag()), std::abs(tr.states[k](i + 1).real())});
        }
        const double n = norm_squared(tr.states[k]);
        drift = std::max(drift, std::abs(n - 1.0));
        if (k > 0) rise = std::max(rise, n - norm_squared(tr.states[k - 1]));
    }
    s.bound("dynamics", "realness", real, 1e-8);
    if (p.gamma > 0.0) {
        s.bound("dynamics", "norm_nonincreasing", std::max(rise, 0.0), 1e-12);
    } else {
        s.bound("dynamics", "norm_conserved", drift, 1e-8);
    }

    const double dt = 0.001;
    const Trajectory fine = evolve(h, psi0, 5.0, dt);
    double balance = 0.0;
    for (std::size_t k = 1; k + 1 < fine.size(); ++k) {
        const double dn = (norm_squared(fine.states[k + 1]) - norm_squared(fine.states[k - 1])) / (2 * dt);
        balance = std::max(balance, std::abs(dn + loss_rate(fine.states[k], p.gamma)));
    }
    s.bound("dynamics", "loss_balance", balance, 1e-6);

    if (p.gamma > 0.0) {
        const DecayProfile prof = decay_profile(h, p, psi0);
        s.bound("dynamics", "decay_total", std::abs(prof.total() - 1.0), 1e-3);
        s.flag("dynamics", "decay_nonnegative", prof.probabilities.minCoeff() >= 0.0);
    } else {
        s.skip("dynamics", "decay_total", "undefined observable: no loss at gamma = 0");
        s.skip("dynamics", "decay_nonnegative", "undefined observable: no loss at gamma = 0");
    }
}

void perturbation_checks(const LatticeParams& p, const OperatorMatrix& h, int order, Suite& s) {
    if (!(p.gamma > 0.0)) {
        for (const char* name : {"coefficient_realness", "final_step_closure", "agreement_t5"}) {
            s.skip("perturbation", name, "perturbation engine needs gamma > 0");
        }
        return;
    }
    const OrderedAmplitudes oa = solve_perturbation(p, order);
    bool real = true;
    for (const auto& level : oa.orders) {
        for (int i = 0; i < p.dim(); ++i) {
            for (const auto& [km, c] : level[static_cast<std::size_t>(i)].terms()) {
                real = real && (i % 2 == 0 ? c.im == 0 : c.re == 0);
            }
        }
    }
    s.flag("perturbation", "coefficient_realness", real);

    double closure = 0.0;
    for (const SiteIndex target : {SiteIndex{1, Sublattice::B}, SiteIndex{p.x0, Sublattice::B}}) {
        for (double t : {1.0, 3.0}) {
            cplx sum = 0.0;
            for (const auto& nb : in_neighbors(target, p)) sum += final_step_amplitude(oa, target, nb.site, t);
            closure = std::max(closure, std::abs(sum - amplitude(oa, target, t)));
        }
    }
    s.bound("perturbation", "final_step_closure", closure, 1e-12);

    const Trajectory ref = evolve(h, initial_state(p), 5.0, 0.01, {.stride = 10});
    double err = 0.0;
    for (std::size_t k = 0; k < ref.size(); ++k) {
        err = std::max(err, (amplitude_state(oa, ref.times[k]) - ref.states[k]).cwiseAbs().maxCoeff());
    }
    s.bound("perturbation", "agreement_t5", err, 1e-2);
}

void spectral_checks(const LatticeParams& p, const OperatorMatrix& h, Suite& s) {
    static const char* names[] = {"biorthogonality", "completeness", "eigen_residual",
                                  "propagation_vs_direct", "spectrum_shift", "chiral_pairing",
                                  "im_nonpositive", "im_mirror", "even_multiplicity", "uniform_im"};
    ModeSet modes;
    try {
        modes = eig(h);
    } catch (const DefectiveSpectrum& e) {
        for (const char* name : names) {
            s.skip("spectral", name, std::string("no usable eigenbasis, direct integration only: ") + e.what());
        }
        return;
    }
    s.bound("spectral", "biorthogonality", modes.biorthogonality_residual, 1e-8);
    s.bound("spectral", "completeness", modes.completeness_residual, 1e-8);
    s.bound("spectral", "eigen_residual", modes.eigen_residual, 1e-8 * max_norm(h));

    const StateVector psi0 = initial_state(p);
    const Trajectory direct = evolve(h, psi0, 20.0, 0.01, {.stride = 10});
    s.bound("spectral", "propagation_vs_direct",
            max_diff(direct, evolve_spectral(modes, psi0, direct.times)), 1e-6);

    const OperatorMatrix id = OperatorMatrix::Identity(p.dim(), p.dim());
    const Eigen::VectorXcd h1 =
        Eigen::ComplexEigenSolver<OperatorMatrix>(h + (0.5 * p.gamma * kI) * id, false).eigenvalues();
    s.bound("spectral", "spectrum_shift",
            matching_distance(modes.values, h1.array() - 0.5 * p.gamma * kI), 1e-10);
    s.bound("spectral", "chiral_pairing", matching_distance(h1, -h1), 1e-8);

    const SpectrumDiagnostics d = spectrum_diagnostics(modes, p.gamma);
    s.bound("spectral", "im_nonpositive", std::max(d.max_im, 0.0), 1e-10);
    s.bound("spectral", "im_mirror", d.mirror_residual, 1e-8);
    s.flag("spectral", "even_multiplicity", d.even_multiplicity);
    if (p.t1 > 0.5 * p.gamma) {
        s.bound("spectral", "uniform_im", d.uniform_im_deviation, 1e-8);
    } else {
        s.skip("spectral", "uniform_im", "t1 <= gamma/2: Im parts need not coincide");
    }
}

void run_suite(const std::string& label, const RunConfig& cfg, bool flip, std::vector<Check>& out) {
    Suite s(label, out);
    const LatticeParams& p = cfg.params;
    const OperatorMatrix h = walk_operator(p, flip);
    auto guarded = [&](const char* module, auto&& fn) {
        try {
            fn();
        } catch (const std::exception& e) {
            s.error(module, "suite", e);
        }
    };
    guarded("lattice", [&] { lattice_checks(p, h, s); });
    guarded("dynamics", [&] { dynamics_checks(p, h, s); });
    guarded("perturbation", [&] { perturbation_checks(p, h, cfg.order, s); });
    guarded("spectral", [&] { spectral_checks(p, h, s); });
}

nlohmann::ordered_json number(double v) {
    return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
}

}  // namespace

int run_verify(const RunConfig& cfg, const VerifyOptions& options, const Sinks& out) {
    std::vector<Check> checks;
    if (options.all_presets) {
        for (const auto& name : preset_names()) {
            ConfigLayer layer;
            layer.preset = name;
            layer.order = cfg.order;
            run_suite(name, resolve(Command::Verify, layer), options.inject_sign_flip, checks);
        }
    } else {
        run_suite(cfg.preset.value_or("custom"), cfg, options.inject_sign_flip, checks);
    }

    nlohmann::ordered_json report;
    report["config"] = to_json(cfg);
    report["config"]["all_presets"] = options.all_presets;
    report["config"]["inject_sign_flip"] = options.inject_sign_flip;
    int pass = 0;
    int fail = 0;
    int skip = 0;
    auto& list = report["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : checks) {
        (c.status == "pass" ? pass : c.status == "fail" ? fail : skip)++;
        nlohmann::ordered_json j;
        j["preset"] = c.preset;
        j["module"] = c.module;
        j["check"] = c.name;
        j["status"] = c.status;
        j["residual"] = number(c.residual);
        j["tolerance"] = number(c.tolerance);
        if (!c.detail.empty()) j["detail"] = c.detail;
        list.push_back(std::move(j));
    }
    report["summary"] = {{"pass", pass}, {"fail", fail}, {"skip", skip}};
    *out.main << report.dump(2) << '\n';
    return fail == 0 ? kOk : kCheckFailed;
}

}  // namespace edgeburst::cli
