// Copyright 2026 The edgeburst Authors
// SPDX-License-Identifier: Apache-2.0

#include "edgeburst/perturbation.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace edgeburst {

namespace {

// exp(i (E_target - E_source) t) as an integer multiple of gamma t.
int phase_shift(Sublattice target, Sublattice source) {
    if (target == Sublattice::A && source == Sublattice::B) return -1;
    if (target == Sublattice::B && source == Sublattice::A) return +1;
    return 0;
}

// psi = exp(-i E t) c: identity on A, exp(-gamma t) on B.
int frame_shift(Sublattice s) { return s == Sublattice::B ? -1 : 0; }

int resolve_upto(const OrderedAmplitudes& oa, int upto) {
    if (upto < 0) return oa.max_order();
    if (upto > oa.max_order()) {
        throw DomainError("requested order " + std::to_string(upto) + " exceeds computed order " +
                          std::to_string(oa.max_order()));
    }
    return upto;
}

void check_site(const OrderedAmplitudes& oa, const SiteIndex& site) {
    if (site.cell < 1 || site.cell > oa.params.length) {
        throw DomainError("site " + format_site(site) + " outside the chain");
    }
}

// Integrand -i H'[tgt, src] c_src exp(i (E_tgt - E_src) t), integrated from 0.
ExpPoly transfer(const ExpPoly& source_c, cplx coupling, Sublattice target, Sublattice source) {
    ExpPoly integrand = source_c.shifted(phase_shift(target, source));
    integrand *= -kI * coupling;
    return integrand.integrate0();
}

}  // namespace

SiteAmplitudes seed_order(const LatticeParams& params) {
    params.validate();
    SiteAmplitudes seed(static_cast<std::size_t>(params.dim()), ExpPoly(params.gamma));
    seed[static_cast<std::size_t>(SiteIndex{params.x0, Sublattice::A}.flat())] =
        ExpPoly::constant(params.gamma, 1.0);
    return seed;
}

SiteAmplitudes iterate_order(const SiteAmplitudes& prev, const LatticeParams& params,
                             const PerturbationOptions& options) {
    params.validate();
    if (!(params.gamma > 0.0)) throw DomainError("perturbation engine requires gamma > 0");
    const int n = params.dim();
    if (static_cast<int>(prev.size()) != n) throw DomainError("iterate_order: size mismatch");
    const OperatorMatrix hp = build_hprime(params);

    SiteAmplitudes next(static_cast<std::size_t>(n), ExpPoly(params.gamma));
    for (int row = 0; row < n; ++row) {
        const Sublattice target = SiteIndex::from_flat(row).sub;
        ExpPoly integrand(params.gamma);
        for (int col = 0; col < n; ++col) {
            const cplx h = hp(row, col);
            const ExpPoly& src = prev[static_cast<std::size_t>(col)];
            if (h == cplx{0.0, 0.0} || src.is_zero()) continue;
            ExpPoly term = src.shifted(phase_shift(target, SiteIndex::from_flat(col).sub));
            term *= -kI * h;
            integrand += term;
        }
        ExpPoly c = integrand.integrate0();
        c.prune(options.prune_rel);
        next[static_cast<std::size_t>(row)] = std::move(c);
    }
    return next;
}

OrderedAmplitudes solve_perturbation(const LatticeParams& params, int max_order,
                                     const PerturbationOptions& options) {
    params.validate();
    if (!(params.gamma > 0.0)) throw DomainError("perturbation engine requires gamma > 0");
    if (max_order < 0) throw DomainError("max order must be >= 0");
    OrderedAmplitudes oa{params, {seed_order(params)}};
    oa.orders.reserve(static_cast<std::size_t>(max_order) + 1);
    for (int l = 1; l <= max_order; ++l) {
        SiteAmplitudes next = iterate_order(oa.orders.back(), params, options);
        for (const auto& p : next) {
            if (!p.all_finite()) {
                std::ostringstream msg;
                msg << "perturbation coefficients overflow at order " << l
                    << "; largest safe order is " << (l - 1);
                throw NumericalError(msg.str());
            }
        }
        oa.orders.push_back(std::move(next));
    }
    return oa;
}

ExpPoly coefficient_sum(const OrderedAmplitudes& oa, const SiteIndex& site, int upto) {
    check_site(oa, site);
    upto = resolve_upto(oa, upto);
    ExpPoly sum(oa.params.gamma);
    const auto flat = static_cast<std::size_t>(site.flat());
    for (int l = 0; l <= upto; ++l) sum += oa.orders[static_cast<std::size_t>(l)][flat];
    return sum;
}

ExpPoly amplitude_function(const OrderedAmplitudes& oa, const SiteIndex& site, int upto) {
    return coefficient_sum(oa, site, upto).shifted(frame_shift(site.sub));
}

cplx amplitude(const OrderedAmplitudes& oa, const SiteIndex& site, double t, int upto) {
    return amplitude_function(oa, site, upto)(t);
}

StateVector amplitude_state(const OrderedAmplitudes& oa, double t, int upto) {
    upto = resolve_upto(oa, upto);
    StateVector psi(oa.params.dim());
    for (int i = 0; i < oa.params.dim(); ++i) {
        psi(i) = amplitude(oa, SiteIndex::from_flat(i), t, upto);
    }
    return psi;
}

ExpPoly final_step_function(const OrderedAmplitudes& oa, const SiteIndex& target,
                            const SiteIndex& source, int upto) {
    check_site(oa, target);
    check_site(oa, source);
    upto = resolve_upto(oa, upto);
    const cplx h = build_hprime(oa.params)(target.flat(), source.flat());
    if (h == cplx{0.0, 0.0}) {
        throw DomainError(format_site(source) + " is not an in-neighbor of " + format_site(target));
    }
    if (upto < 1) return ExpPoly(oa.params.gamma);
    const ExpPoly c = transfer(coefficient_sum(oa, source, upto - 1), h, target.sub, source.sub);
    return c.shifted(frame_shift(target.sub));
}

cplx final_step_amplitude(const OrderedAmplitudes& oa, const SiteIndex& target,
                          const SiteIndex& source, double t, int upto) {
    return final_step_function(oa, target, source, upto)(t);
}

ExpPoly main_path_function(const OrderedAmplitudes& oa, int upto) {
    if (oa.params.length < 2) throw DomainError("main path needs at least two cells");
    const SiteIndex edge{1, Sublattice::B};
    ExpPoly sum = final_step_function(oa, edge, {1, Sublattice::A}, upto);
    if (oa.params.t2 != 0.0) sum += final_step_function(oa, edge, {2, Sublattice::A}, upto);
    return sum;
}

cplx main_path_edge(const OrderedAmplitudes& oa, double t, int upto) {
    return main_path_function(oa, upto)(t);
}

double cancellation_ratio(const OrderedAmplitudes& oa, const SiteIndex& site, double t, int upto) {
    const ExpPoly f = amplitude_function(oa, site, upto);
    const double value = std::abs(f(t));
    const double mag = f.magnitude_sum(t);
    if (mag == 0.0) return 1.0;
    return value == 0.0 ? std::numeric_limits<double>::infinity() : mag / value;
}

double convergence_window(const OrderedAmplitudes& oa, const Trajectory& reference, double tol,
                          int upto) {
    upto = resolve_upto(oa, upto);
    std::vector<ExpPoly> funcs;
    funcs.reserve(static_cast<std::size_t>(oa.params.dim()));
    for (int i = 0; i < oa.params.dim(); ++i) {
        funcs.push_back(amplitude_function(oa, SiteIndex::from_flat(i), upto));
    }
    double last_good = 0.0;
    for (std::size_t k = 0; k < reference.size(); ++k) {
        const double t = reference.times[k];
        const StateVector& ref = reference.states[k];
        if (ref.size() != oa.params.dim()) throw DomainError("convergence_window: dimension mismatch");
        double err = 0.0;
        for (int i = 0; i < oa.params.dim(); ++i) {
            err = std::max(err, std::abs(funcs[static_cast<std::size_t>(i)](t) - ref(i)));
        }
        if (!(err <= tol)) return last_good;
        last_good = t;
    }
    return last_good;
}

}  // namespace edgeburst
