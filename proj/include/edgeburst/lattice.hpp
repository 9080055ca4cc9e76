// Copyright 2026 The edgeburst Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file lattice.hpp
 * @brief Lossy two-sublattice quantum-walk chain and its related models.
 *
 * Basis ordering: flat index 2*(cell-1) + (0 for A, 1 for B). Cells are
 * 1-based at the API boundary; SiteIndex is the only conversion point.
 *
 * Models:
 * - walk: the lossy walk Hamiltonian (loss -i*gamma on B sites only).
 * - H1:   walk + (i*gamma/2) I, chiral under Gamma = (+) sigma_y.
 * - H2:   R^-1 H1 R, the nonreciprocal SSH chain.
 * - H3:   S^-1 H2 S, the Hermitian SSH chain (t1' = sqrt(t1^2 - gamma^2/4)).
 * - H4:   H3 + (i*gamma/2)(+)sigma_z - (i*gamma/2) I, loss on B without skin effect.
 */

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace edgeburst {

using cplx = std::complex<double>;
using OperatorMatrix = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;

inline constexpr cplx kI{0.0, 1.0};

/// Parameter or domain violation (bad L, x0 out of range, beta = 0 ...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct LatticeParams {
    double t1 = 0.0;
    double t2 = 0.0;
    double gamma = 0.0;
    int length = 1;  ///< number of unit cells L
    int x0 = 1;      ///< initial cell, 1-based

    /// Throws DomainError unless the invariants hold.
    void validate() const;
    [[nodiscard]] int dim() const { return 2 * length; }
};

enum class Sublattice { A = 0, B = 1 };

[[nodiscard]] char to_char(Sublattice s);
[[nodiscard]] Sublattice sublattice_from_char(char c);

struct SiteIndex {
    int cell = 1;  ///< 1-based
    Sublattice sub = Sublattice::A;

    [[nodiscard]] int flat() const { return 2 * (cell - 1) + static_cast<int>(sub); }
    [[nodiscard]] static SiteIndex from_flat(int i) {
        return {i / 2 + 1, (i % 2 == 0) ? Sublattice::A : Sublattice::B};
    }
    friend bool operator==(const SiteIndex&, const SiteIndex&) = default;
};

/// Parses "1B", "12A" ... into a site. Throws DomainError on bad syntax.
[[nodiscard]] SiteIndex parse_site(const std::string& text);
[[nodiscard]] std::string format_site(const SiteIndex& site);

enum class Model { Walk, H1, H2, H3, H4 };

[[nodiscard]] Model model_from_string(const std::string& name);
[[nodiscard]] std::string to_string(Model model);

enum class Transform { R, S, Gamma };

OperatorMatrix build_walk_hamiltonian(const LatticeParams& params);

/// Onsite part: 0 on A sites, -i*gamma on B sites.
OperatorMatrix build_h0(const LatticeParams& params);
/// Hopping part, H - H0.
OperatorMatrix build_hprime(const LatticeParams& params);

/// sqrt(t1^2 - gamma^2/4); throws DomainError when t1 < gamma/2.
double ssh_intra_hopping(const LatticeParams& params);

OperatorMatrix build_model(const LatticeParams& params, Model model);
OperatorMatrix build_transform(const LatticeParams& params, Transform which);

struct BlochFactor {
    cplx beta;         ///< principal sqrt((t1 - g/2)/(t1 + g/2))
    double magnitude;  ///< sqrt(|(t1 - g/2)/(t1 + g/2)|)
};

BlochFactor bloch_factor(const LatticeParams& params);

struct Coupling {
    SiteIndex site;
    cplx value;
};

/// Every site' with H'[site, site'] != 0, in ascending flat order.
std::vector<Coupling> in_neighbors(const SiteIndex& site, const LatticeParams& params);

enum class SymmetryKind { Chiral, SpectrumEquality, CustomConjugation };

struct SymmetryReport {
    SymmetryKind kind;
    double residual = 0.0;
    bool passed = false;
};

/**
 * Checks a defining relation of M against a candidate operator.
 *
 * - Chiral:            max|C M C + M|
 * - SpectrumEquality:  bottleneck matching distance between spec(M), spec(C)
 * - CustomConjugation: max|C conj(M) C^-1 - M|
 */
SymmetryReport check_symmetry(const OperatorMatrix& m, const OperatorMatrix& candidate,
                              SymmetryKind kind, double tol);

/// Minimum over bijections of the largest |a_i - b_pi(i)|.
double matching_distance(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b);

/// max_ij |m_ij|
double max_norm(const OperatorMatrix& m);

}  // namespace edgeburst
