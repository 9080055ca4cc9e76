// Copyright 2026 The edgeburst Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file spectral.hpp
 * @brief Biorthogonal eigendecomposition of dense non-Hermitian operators.
 *
 * Right eigenvectors come from a balanced Schur-based solve; left eigenvectors
 * are the rows of the inverse of the right-vector matrix, so <m_L|n_R> = delta
 * holds by construction. Every decomposition checks its own residuals before
 * it is returned.
 */

#pragma once

#include "edgeburst/lattice.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace edgeburst {

/// Defective (exceptional point) or ill-conditioned eigenbasis.
class DefectiveSpectrum : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct EigOptions {
    /// Upper bound on cond_2 of the balanced right-vector matrix.
    double max_condition = 1e6;
    /// Tolerance for biorthogonality and completeness (max-norm).
    double basis_tol = 1e-8;
    /// Eigen-residual tolerance, relative to max|M|.
    double residual_tol = 1e-8;
};

struct ModeSet {
    Eigen::VectorXcd values;  ///< E_n, descending Im then ascending Re
    Eigen::MatrixXcd right;   ///< columns |n_R>, unit 2-norm
    Eigen::MatrixXcd left;    ///< rows <n_L|, <m_L|n_R> = delta_mn
    double condition = 1.0;   ///< cond_2 of the balanced right-vector matrix

    // Measured at construction.
    double biorthogonality_residual = 0.0;  ///< max|L R - I|
    double completeness_residual = 0.0;     ///< max|R L - I|
    double eigen_residual = 0.0;            ///< max over n of |M r_n - E_n r_n|, |l_n M - E_n l_n|

    [[nodiscard]] Eigen::Index size() const { return values.size(); }
};

struct ModeExpansion {
    Eigen::VectorXcd coefficients;  ///< a_n = <n_L|psi0>
    double residual = 0.0;          ///< |psi0 - sum a_n |n_R>|_2
};

ModeSet eig(const OperatorMatrix& m, const EigOptions& options = {});

/// Throws DefectiveSpectrum when the reconstruction residual exceeds `tol`.
ModeExpansion expand(const ModeSet& modes, const StateVector& psi0, double tol = 1e-8);

/// Sum over `filter` of exp(-i E_n t) a_n |n_R>.
StateVector propagate(const ModeSet& modes, const ModeExpansion& expansion, double t,
                      const std::vector<Eigen::Index>& filter);

std::vector<Eigen::Index> all_modes(const ModeSet& modes);

/**
 * Indices of the k eigenvalues with the largest Im(E). Values whose Im parts
 * agree within `tie_tol` are tied; ties go to larger |a_n| when an expansion
 * is given, then to the lower index. Result is sorted ascending.
 */
std::vector<Eigen::Index> select_by_im(const ModeSet& modes, Eigen::Index k,
                                       const ModeExpansion* expansion = nullptr,
                                       double tie_tol = 1e-9);

struct SpectrumDiagnostics {
    double max_im = 0.0;              ///< max Im(E_n); expected <= 0
    bool im_nonpositive = false;      ///< max_im <= 1e-10
    double mirror_residual = 0.0;     ///< matching distance of {Im+g/2} vs {-(Im+g/2)}
    bool mirror_symmetric = false;    ///< mirror_residual <= 1e-8
    bool even_multiplicity = false;   ///< every Im cluster has even size
    std::vector<int> im_cluster_sizes;
    double uniform_im_deviation = 0.0;  ///< max|Im(E_n) + g/2|
};

/// `cluster_tol` groups Im values for the multiplicity count.
SpectrumDiagnostics spectrum_diagnostics(const ModeSet& modes, double gamma,
                                         double cluster_tol = 1e-7);

}  // namespace edgeburst
