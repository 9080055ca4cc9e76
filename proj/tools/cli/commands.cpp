// Copyright 2026 The edgeburst Authors
// SPDX-License-Identifier: Apache-2.0

#include "commands.hpp"

#include "edgeburst/dynamics.hpp"
#include "edgeburst/perturbation.hpp"
#include "edgeburst/spectral.hpp"

#include <cstdio>

namespace edgeburst::cli {

namespace {

std::ostream& header(std::ostream& os, const RunConfig& cfg) {
    return os << config_echo(cfg) << '\n';
}

OperatorMatrix operator_for(const RunConfig& cfg) {
    return cfg.model == Model::Walk ? build_walk_hamiltonian(cfg.params)
                                    : build_model(cfg.params, cfg.model);
}

void check_residual(const char* what, const OperatorMatrix& a, const OperatorMatrix& b, double tol,
                    std::ostream& os, bool& ok) {
    const double r = max_norm(a - b);
    const bool pass = r <= tol;
    ok = ok && pass;
    os << what << ',' << fmt(r) << ',' << fmt(tol) << ',' << (pass ? "pass" : "fail") << '\n';
}

}  // namespace

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

int run_decay_profile(const RunConfig& cfg, const Sinks& out) {
    if (cfg.model != Model::Walk && cfg.model != Model::H4) {
        throw DomainError("decay-profile needs a lossy model (walk or H4), got " +
                          edgeburst::to_string(cfg.model));
    }
    const DecayProfile prof = decay_profile(operator_for(cfg), cfg.params,
                                            initial_state(cfg.params),
                                            {.eps_norm = cfg.eps_norm, .dt = cfg.dt});
    std::ostream& os = *out.main;
    header(os, cfg) << "x,P\n";
    for (Eigen::Index x = 0; x < prof.probabilities.size(); ++x) {
        os << x + 1 << ',' << fmt(prof.probabilities(x)) << '\n';
    }
    os << "# sum_P=" << fmt(prof.total()) << '\n'
       << "# truncation_error=" << fmt(prof.truncation_error) << '\n'
       << "# horizon=" << fmt(prof.horizon) << '\n';
    return kOk;
}

int run_evolve(const RunConfig& cfg, const Sinks& out) {
    const Trajectory tr = evolve(operator_for(cfg), initial_state(cfg.params), cfg.tmax, cfg.dt,
                                 {.stride = cfg.stride});
    std::ostream& os = *out.main;
    header(os, cfg) << "t,cell,sublattice,re,im\n";
    for (std::size_t k = 0; k < tr.size(); ++k) {
        const std::string t = fmt(tr.times[k]);
        for (const auto& s : cfg.sites) {
            const cplx v = tr.states[k](s.flat());
            os << t << ',' << s.cell << ',' << to_char(s.sub) << ',' << fmt(v.real()) << ','
               << fmt(v.imag()) << '\n';
        }
    }
    if (out.norm) {
        header(*out.norm, cfg) << "t,norm\n";
        for (std::size_t k = 0; k < tr.size(); ++k) {
            *out.norm << fmt(tr.times[k]) << ',' << fmt(norm_squared(tr.states[k])) << '\n';
        }
    }
    return kOk;
}

int run_perturb(const RunConfig& cfg, const Sinks& out) {
    if (cfg.order < 1) throw DomainError("perturb needs order >= 1");
    if (cfg.params.length < 2) throw DomainError("perturb needs L >= 2 for the main path");
    const OrderedAmplitudes oa = solve_perturbation(cfg.params, cfg.order);
    const Trajectory ref = evolve(build_walk_hamiltonian(cfg.params), initial_state(cfg.params),
                                  cfg.tmax, cfg.dt, {.stride = cfg.stride});
    const SiteIndex edge{1, Sublattice::B};
    const ExpPoly full = amplitude_function(oa, edge);
    const ExpPoly main_path = main_path_function(oa);

    std::ostream& os = *out.main;
    header(os, cfg) << "t,full_im,mainpath_im,direct_im\n";
    for (std::size_t k = 0; k < ref.size(); ++k) {
        const double t = ref.times[k];
        os << fmt(t) << ',' << fmt(full(t).imag()) << ',' << fmt(main_path(t).imag()) << ','
           << fmt(ref.states[k](edge.flat()).imag()) << '\n';
    }
    os << "# convergence_window=" << fmt(convergence_window(oa, ref, kPerturbWindowTol))
       << " tol=" << fmt(kPerturbWindowTol) << '\n';

    if (out.amplitudes) {
        std::ostream& as = *out.amplitudes;
        header(as, cfg) << "t,cell,sublattice,order,re,im\n";
        std::vector<std::vector<ExpPoly>> partial(cfg.sites.size());
        for (std::size_t s = 0; s < cfg.sites.size(); ++s) {
            for (int l = 0; l <= cfg.order; ++l) partial[s].push_back(amplitude_function(oa, cfg.sites[s], l));
        }
        for (double t : ref.times) {
            const std::string ts = fmt(t);
            for (std::size_t s = 0; s < cfg.sites.size(); ++s) {
                for (int l = 0; l <= cfg.order; ++l) {
                    const cplx v = partial[s][static_cast<std::size_t>(l)](t);
                    as << ts << ',' << cfg.sites[s].cell << ',' << to_char(cfg.sites[s].sub) << ','
                       << l << ',' << fmt(v.real()) << ',' << fmt(v.imag()) << '\n';
                }
            }
        }
    }
    return kOk;
}

int run_modes(const RunConfig& cfg, const Sinks& out) {
    const OperatorMatrix m = operator_for(cfg);
    const ModeSet modes = eig(m);
    const ModeExpansion ex = expand(modes, initial_state(cfg.params));
    const auto top = select_by_im(modes, cfg.top_k, &ex);
    const auto all = all_modes(modes);

    std::ostream& ss = out.spectrum ? *out.spectrum : *out.main;
    header(ss, cfg) << "n,re,im\n";
    for (Eigen::Index n = 0; n < modes.size(); ++n) {
        ss << n << ',' << fmt(modes.values(n).real()) << ',' << fmt(modes.values(n).imag()) << '\n';
    }
    ss << "# condition=" << fmt(modes.condition) << '\n';
    ss << "# selected=";
    for (std::size_t i = 0; i < top.size(); ++i) ss << (i ? " " : "") << top[i];
    ss << '\n';

    const int site = cfg.sites.front().flat();
    const Trajectory direct = evolve(m, initial_state(cfg.params), cfg.tmax, cfg.dt,
                                     {.stride = cfg.stride});
    std::ostream& os = *out.main;
    header(os, cfg) << "t,abs_psi_" << format_site(cfg.sites.front()) << "_filtered,abs_psi_"
                    << format_site(cfg.sites.front()) << "_full\n";
    double full_vs_direct = 0.0;
    for (std::size_t k = 0; k < direct.size(); ++k) {
        const double t = direct.times[k];
        const StateVector full = propagate(modes, ex, t, all);
        const StateVector filtered = propagate(modes, ex, t, top);
        full_vs_direct = std::max(full_vs_direct, (full - direct.states[k]).cwiseAbs().maxCoeff());
        os << fmt(t) << ',' << fmt(std::abs(filtered(site))) << ',' << fmt(std::abs(full(site)))
           << '\n';
    }
    os << "# full_vs_direct_max_abs_diff=" << fmt(full_vs_direct) << '\n';
    return kOk;
}

int run_transform_check(const RunConfig& cfg, const Sinks& out) {
    const LatticeParams& p = cfg.params;
    std::ostream& os = *out.main;
    header(os, cfg) << "check,residual,tolerance,status\n";
    bool ok = true;
    const OperatorMatrix h = build_walk_hamiltonian(p);
    const OperatorMatrix h1 = build_model(p, Model::H1);
    const OperatorMatrix h2 = build_model(p, Model::H2);
    const OperatorMatrix id = OperatorMatrix::Identity(p.dim(), p.dim());
    check_residual("h1_shift", h1, h + (0.5 * p.gamma * kI) * id, 1e-15, os, ok);

    const auto chiral = check_symmetry(h1, build_transform(p, Transform::Gamma),
                                       SymmetryKind::Chiral, 1e-12);
    ok = ok && chiral.passed;
    os << "chiral_h1," << fmt(chiral.residual) << ',' << fmt(1e-12) << ','
       << (chiral.passed ? "pass" : "fail") << '\n';

    const OperatorMatrix r = build_transform(p, Transform::R);
    check_residual("rotation_h2", r.inverse() * h1 * r, h2, 1e-12, os, ok);

    if (p.t1 > 0.5 * p.gamma) {
        const OperatorMatrix s = build_transform(p, Transform::S);
        const OperatorMatrix h3 = build_model(p, Model::H3);
        const double tol = 1e-10 * std::max(1.0, max_norm(h2));
        check_residual("similarity_h3", s.inverse() * h2 * s, h3, tol, os, ok);
        const auto spec = check_symmetry(h2, h3, SymmetryKind::SpectrumEquality, 1e-8);
        ok = ok && spec.passed;
        os << "spectrum_h2_h3," << fmt(spec.residual) << ',' << fmt(1e-8) << ','
           << (spec.passed ? "pass" : "fail") << '\n';
    } else {
        os << "similarity_h3,nan,nan,skip\n";
        os << "spectrum_h2_h3,nan,nan,skip\n";
    }
    return ok ? kOk : kCheckFailed;
}

}  // namespace edgeburst::cli
