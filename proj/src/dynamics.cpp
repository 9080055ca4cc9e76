// Copyright 2026 The edgeburst Authors
// SPDX-License-Identifier: Apache-2.0

#include "edgeburst/dynamics.hpp"

#include <Eigen/SparseCore>

#include <cmath>
#include <sstream>

namespace edgeburst {

namespace {

using SparseOp = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

// The walk operators have at most six entries per row.
SparseOp compress(const OperatorMatrix& m) {
    return m.sparseView(cplx{0.0, 0.0}, 0.0);
}

class Rk4Stepper {
public:
    explicit Rk4Stepper(const OperatorMatrix& m)
        : op_(compress(m)), k1_(m.rows()), k2_(m.rows()), k3_(m.rows()), k4_(m.rows()),
          tmp_(m.rows()) {}

    void step(StateVector& psi, double dt) {
        k1_.noalias() = -kI * (op_ * psi);
        tmp_ = psi + (0.5 * dt) * k1_;
        k2_.noalias() = -kI * (op_ * tmp_);
        tmp_ = psi + (0.5 * dt) * k2_;
        k3_.noalias() = -kI * (op_ * tmp_);
        tmp_ = psi + dt * k3_;
        k4_.noalias() = -kI * (op_ * tmp_);
        psi += (dt / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
    }

private:
    SparseOp op_;
    StateVector k1_, k2_, k3_, k4_, tmp_;
};

void require_finite(const StateVector& psi, double t) {
    if (!psi.allFinite()) {
        std::ostringstream msg;
        msg << "evolve: non-finite amplitudes at t = " << t
            << " (dt too large for the spectral radius?)";
        throw NumericalError(msg.str());
    }
}

}  // namespace

StateVector initial_state(const LatticeParams& params) {
    params.validate();
    StateVector psi = StateVector::Zero(params.dim());
    psi(SiteIndex{params.x0, Sublattice::A}.flat()) = 1.0;
    return psi;
}

Trajectory evolve(const OperatorMatrix& m, const StateVector& psi0, double tmax, double dt,
                  const EvolveOptions& options) {
    if (!(dt > 0.0)) throw DomainError("evolve: dt must be > 0");
    if (!(tmax >= 0.0)) throw DomainError("evolve: tmax must be >= 0");
    if (options.stride < 1) throw DomainError("evolve: stride must be >= 1");
    if (m.rows() != m.cols() || m.rows() != psi0.size()) {
        throw DomainError("evolve: dimension mismatch");
    }
    if (!m.allFinite()) throw DomainError("evolve: operator has non-finite entries");

    Rk4Stepper stepper(m);
    Trajectory traj;
    StateVector psi = psi0;
    traj.times.push_back(0.0);
    traj.states.push_back(psi);

    // Step count from the ratio so that t_k = k*dt exactly, not by accumulation.
    const double ratio = tmax / dt;
    auto full_steps = static_cast<long long>(std::floor(ratio + 1e-9));
    const double tail = tmax - static_cast<double>(full_steps) * dt;
    const bool has_tail = tail > 1e-12 * dt;
    for (long long k = 1; k <= full_steps; ++k) {
        stepper.step(psi, dt);
        const double t = static_cast<double>(k) * dt;
        require_finite(psi, t);
        if (k % options.stride == 0 || (k == full_steps && !has_tail)) {
            traj.times.push_back(k == full_steps && !has_tail ? tmax : t);
            traj.states.push_back(psi);
        }
    }
    if (has_tail) {
        stepper.step(psi, tail);
        require_finite(psi, tmax);
        traj.times.push_back(tmax);
        traj.states.push_back(psi);
    }
    return traj;
}

Trajectory evolve_spectral(const ModeSet& modes, const StateVector& psi0,
                           const std::vector<double>& times, double expansion_tol) {
    const ModeExpansion ex = expand(modes, psi0, expansion_tol);
    const auto filter = all_modes(modes);
    Trajectory traj;
    traj.times = times;
    traj.states.reserve(times.size());
    for (double t : times) traj.states.push_back(propagate(modes, ex, t, filter));
    return traj;
}

double loss_rate(const StateVector& psi, double gamma) {
    double sum = 0.0;
    for (Eigen::Index i = 1; i < psi.size(); i += 2) sum += std::norm(psi(i));
    return 2.0 * gamma * sum;
}

double norm_squared(const StateVector& psi) { return psi.squaredNorm(); }

DecayProfile decay_profile(const OperatorMatrix& m, const LatticeParams& params,
                           const StateVector& psi0, const DecayOptions& options) {
    params.validate();
    if (!(params.gamma > 0.0)) {
        throw DomainError("decay_profile: gamma must be > 0 (P_x is undefined without loss)");
    }
    if (!(options.eps_norm > 0.0 && options.eps_norm < 1.0)) {
        throw DomainError("decay_profile: eps_norm must lie in (0, 1)");
    }
    if (!(options.dt > 0.0)) throw DomainError("decay_profile: dt must be > 0");
    if (m.rows() != params.dim() || psi0.size() != params.dim()) {
        throw DomainError("decay_profile: dimension mismatch");
    }

    const int cells = params.length;
    auto density = [&](const StateVector& psi) {
        Eigen::VectorXd f(cells);
        for (int x = 0; x < cells; ++x) f(x) = 2.0 * params.gamma * std::norm(psi(2 * x + 1));
        return f;
    };

    Rk4Stepper stepper(m);
    StateVector psi = psi0;
    Eigen::VectorXd f_prev2 = density(psi);  // f_{k-2} after a completed pair
    Eigen::VectorXd f_prev1;                 // f_{k-1}
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(cells);
    const double dt = options.dt;
    const auto max_steps = static_cast<long long>(std::ceil(options.max_horizon / dt));

    long long k = 0;
    double survival = norm_squared(psi);
    while (survival > options.eps_norm) {
        if (k >= max_steps) {
            std::ostringstream msg;
            msg << "decay_profile: norm^2 = " << survival << " still above eps_norm = "
                << options.eps_norm << " at horizon " << options.max_horizon
                << " (dark state or no loss reachable)";
            throw NumericalError(msg.str());
        }
        stepper.step(psi, dt);
        ++k;
        require_finite(psi, static_cast<double>(k) * dt);
        Eigen::VectorXd f = density(psi);
        if (k % 2 == 1) {
            f_prev1 = std::move(f);
        } else {
            acc += (dt / 3.0) * (f_prev2 + 4.0 * f_prev1 + f);
            f_prev2 = std::move(f);
        }
        survival = norm_squared(psi);
    }
    if (k % 2 == 1) acc += (dt / 2.0) * (f_prev2 + f_prev1);

    DecayProfile profile;
    profile.probabilities = acc;
    profile.truncation_error = survival;
    profile.horizon = static_cast<double>(k) * dt;
    profile.steps = static_cast<std::size_t>(k);
    return profile;
}

}  // namespace edgeburst
