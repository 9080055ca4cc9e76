// Copyright 2026 The edgeburst Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file perturbation.hpp
 * @brief Order-by-order time-dependent perturbation theory for the walk.
 *
 * Unperturbed part: the onsite loss (E^A = 0, E^B = -i gamma). Perturbation:
 * all hoppings. Order-l coefficients obey
 *
 *     d/dt c_m^(l) = -i sum_n H'_mn c_n^(l-1) exp(i (E_m - E_n) t),
 *
 * and with E in {0, -i gamma} the phase factor is exp(-gamma t) for an A site
 * fed by a B site, exp(+gamma t) for B fed by A, and 1 otherwise. Every
 * c^(l) is therefore an ExpPoly with exponents m in {-1, 0, 1}, and the
 * amplitudes are psi^A = c^A, psi^B = exp(-gamma t) c^B.
 */

#pragma once

#include "edgeburst/dynamics.hpp"
#include "edgeburst/exppoly.hpp"
#include "edgeburst/lattice.hpp"

#include <vector>

namespace edgeburst {

/// One ExpPoly per flat site index.
using SiteAmplitudes = std::vector<ExpPoly>;

struct PerturbationOptions {
    /// Drop terms below this fraction of the largest coefficient of the same
    /// site and order. Off by default: the term count is already bounded by
    /// 3(l+2) per site, and dropping small high-power coefficients visibly
    /// shortens the convergence window at order 40.
    double prune_rel = 0.0;
};

struct OrderedAmplitudes {
    LatticeParams params;
    std::vector<SiteAmplitudes> orders;  ///< orders[l][flat] = c^(l)

    [[nodiscard]] int max_order() const { return static_cast<int>(orders.size()) - 1; }
};

/// Order-0 seed: c^A_x = delta(x, x0), c^B = 0.
SiteAmplitudes seed_order(const LatticeParams& params);

/// Next order from the previous one: sum over in-neighbors, then integrate from 0.
SiteAmplitudes iterate_order(const SiteAmplitudes& prev, const LatticeParams& params,
                             const PerturbationOptions& options = {});

/**
 * Runs iterate_order max_order times. Throws NumericalError naming the
 * largest safe order if any coefficient overflows.
 */
OrderedAmplitudes solve_perturbation(const LatticeParams& params, int max_order,
                                     const PerturbationOptions& options = {});

/// sum_{l <= upto} c^(l) for one site, as an ExpPoly in the c-frame.
ExpPoly coefficient_sum(const OrderedAmplitudes& oa, const SiteIndex& site, int upto);

/// psi_x^s(t) through order `upto` (default: all stored orders).
cplx amplitude(const OrderedAmplitudes& oa, const SiteIndex& site, double t, int upto = -1);

/// psi_x^s through order `upto` as a closed-form function of t.
ExpPoly amplitude_function(const OrderedAmplitudes& oa, const SiteIndex& site, int upto = -1);

/// Full state through order `upto` at time t.
StateVector amplitude_state(const OrderedAmplitudes& oa, double t, int upto = -1);

/**
 * Final-step transition amplitude source -> target:
 *     -i exp(-i E_tgt t) int_0^t exp(i E_tgt s) H'[tgt, src] psi_src(s) ds,
 * with psi_src summed through order upto-1, so that the sum over all
 * in-neighbors reproduces amplitude(target, upto) for target != (x0, A).
 * Throws DomainError if source is not an in-neighbor of target.
 */
cplx final_step_amplitude(const OrderedAmplitudes& oa, const SiteIndex& target,
                          const SiteIndex& source, double t, int upto = -1);
ExpPoly final_step_function(const OrderedAmplitudes& oa, const SiteIndex& target,
                            const SiteIndex& source, int upto = -1);

/// Main-path edge estimate: the final-step amplitudes A1 -> B1 plus A2 -> B1.
cplx main_path_edge(const OrderedAmplitudes& oa, double t, int upto = -1);
ExpPoly main_path_function(const OrderedAmplitudes& oa, int upto = -1);

/// Sum |term| / |sum| for one site at time t (1 means no cancellation).
double cancellation_ratio(const OrderedAmplitudes& oa, const SiteIndex& site, double t,
                          int upto = -1);

/**
 * Largest sample time t such that max over sites |psi_pert - psi_ref| <= tol
 * on every reference sample in [0, t]; 0 when the first sample already fails.
 */
double convergence_window(const OrderedAmplitudes& oa, const Trajectory& reference, double tol,
                          int upto = -1);

}  // namespace edgeburst
