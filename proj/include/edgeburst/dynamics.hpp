// Copyright 2026 The edgeburst Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file dynamics.hpp
 * @brief Direct time evolution, norm/loss bookkeeping and the site-resolved
 *        decay probability P_x = int_0^inf 2 gamma |psi_x^B(t)|^2 dt.
 */

#pragma once

#include "edgeburst/lattice.hpp"
#include "edgeburst/spectral.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace edgeburst {

/// Instability, non-convergence or coefficient overflow.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<StateVector> states;
    std::optional<LatticeParams> params;

    [[nodiscard]] std::size_t size() const { return times.size(); }
};

struct DecayProfile {
    Eigen::VectorXd probabilities;  ///< P_x, index x-1
    double truncation_error = 0.0;  ///< surviving norm^2 at the horizon
    double horizon = 0.0;
    std::size_t steps = 0;

    [[nodiscard]] double total() const { return probabilities.sum(); }
};

/// Unit amplitude on (x0, A).
StateVector initial_state(const LatticeParams& params);

struct EvolveOptions {
    int stride = 1;  ///< keep every stride-th step (the final time is always kept)
};

/**
 * Classical RK4 for d psi/dt = -i M psi with fixed step dt; a shorter final
 * step lands exactly on tmax. Throws NumericalError on non-finite states.
 */
Trajectory evolve(const OperatorMatrix& m, const StateVector& psi0, double tmax, double dt,
                  const EvolveOptions& options = {});

/// Exact-in-time propagation through a biorthogonal eigenbasis.
Trajectory evolve_spectral(const ModeSet& modes, const StateVector& psi0,
                           const std::vector<double>& times, double expansion_tol = 1e-8);

/// 2 gamma sum_x |psi_x^B|^2
double loss_rate(const StateVector& psi, double gamma);

double norm_squared(const StateVector& psi);

struct DecayOptions {
    double eps_norm = 1e-8;
    double dt = 0.002;
    double max_horizon = 5000.0;
};

/**
 * Evolves until <psi|psi> <= eps_norm and integrates 2 gamma |psi_x^B|^2 per
 * cell with composite Simpson (trapezoid on a leftover odd interval).
 * Throws DomainError for gamma <= 0 and NumericalError when max_horizon is
 * reached first.
 */
DecayProfile decay_profile(const OperatorMatrix& m, const LatticeParams& params,
                           const StateVector& psi0, const DecayOptions& options = {});

}  // namespace edgeburst
