// Copyright 2026 The edgeburst Authors
// SPDX-License-Identifier: Apache-2.0

#include "edgeburst/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace edgeburst {

namespace {

// Diagonal similarity b = D^-1 a D with D a power-of-two scaling that
// equalizes off-diagonal row and column 1-norms (Parlett-Reinsch).
Eigen::VectorXd balance(OperatorMatrix& a) {
    const Eigen::Index n = a.rows();
    Eigen::VectorXd scale = Eigen::VectorXd::Ones(n);
    constexpr double radix = 2.0;
    constexpr double sqrdx = radix * radix;
    constexpr double max_scale = 0x1p100;
    bool done = false;
    for (int sweep = 0; sweep < 200 && !done; ++sweep) {
        done = true;
        for (Eigen::Index i = 0; i < n; ++i) {
            double c = 0.0;
            double r = 0.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (j == i) continue;
                c += std::abs(a(j, i));
                r += std::abs(a(i, j));
            }
            if (c == 0.0 || r == 0.0) continue;
            const double s = c + r;
            double f = 1.0;
            double g = r / radix;
            while (c < g) {
                f *= radix;
                c *= sqrdx;
            }
            g = r * radix;
            while (c > g) {
                f /= radix;
                c /= sqrdx;
            }
            const double next = scale(i) * f;
            if ((c + r) / f < 0.95 * s && next <= max_scale && next >= 1.0 / max_scale) {
                done = false;
                scale(i) *= f;
                a.row(i) /= f;
                a.col(i) *= f;
            }
        }
    }
    return scale;
}

// Descending Im, then ascending Re among values whose Im agree within tol.
std::vector<Eigen::Index> mode_order(const Eigen::VectorXcd& values, double tol) {
    std::vector<Eigen::Index> order(static_cast<std::size_t>(values.size()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return values(a).imag() > values(b).imag();
    });
    std::size_t start = 0;
    while (start < order.size()) {
        std::size_t end = start + 1;
        const double head = values(order[start]).imag();
        while (end < order.size() && head - values(order[end]).imag() <= tol) ++end;
        std::stable_sort(order.begin() + static_cast<std::ptrdiff_t>(start),
                         order.begin() + static_cast<std::ptrdiff_t>(end),
                         [&](Eigen::Index a, Eigen::Index b) {
                             return values(a).real() < values(b).real();
                         });
        start = end;
    }
    return order;
}

}  // namespace

ModeSet eig(const OperatorMatrix& m, const EigOptions& options) {
    if (m.rows() != m.cols()) throw DomainError("eig: matrix must be square");
    if (!m.allFinite()) throw DomainError("eig: matrix has non-finite entries");
    const Eigen::Index n = m.rows();
    const double mnorm = max_norm(m);

    OperatorMatrix balanced = m;
    const Eigen::VectorXd scale = balance(balanced);

    Eigen::ComplexEigenSolver<OperatorMatrix> solver(balanced, true);
    if (solver.info() != Eigen::Success) {
        throw DefectiveSpectrum("eig: QR iteration did not converge");
    }
    const OperatorMatrix& v = solver.eigenvectors();

    Eigen::JacobiSVD<OperatorMatrix> svd(v);
    const auto& sv = svd.singularValues();
    const double smin = n > 0 ? sv(n - 1) : 1.0;
    const double cond = n > 0 ? (smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity())
                              : 1.0;
    if (!(cond <= options.max_condition)) {
        std::ostringstream msg;
        msg << "eig: eigenvector matrix condition " << cond << " exceeds " << options.max_condition
            << " (defective or near-exceptional spectrum)";
        throw DefectiveSpectrum(msg.str());
    }
    const OperatorMatrix vinv = v.fullPivLu().inverse();
    if (!vinv.allFinite()) throw DefectiveSpectrum("eig: eigenvector matrix is singular");

    // right = D V N^-1, left = N V^-1 D^-1 with N the column norms of D V.
    OperatorMatrix right = scale.asDiagonal() * v;
    Eigen::VectorXd norms = right.colwise().norm().transpose();
    right = right * norms.cwiseInverse().asDiagonal();
    OperatorMatrix left = norms.asDiagonal() * vinv * scale.cwiseInverse().asDiagonal();

    const double cluster_tol = 1e-8 * std::max(mnorm, 1.0);
    const auto order = mode_order(solver.eigenvalues(), cluster_tol);
    ModeSet modes;
    modes.values.resize(n);
    modes.right.resize(n, n);
    modes.left.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const Eigen::Index src = order[static_cast<std::size_t>(k)];
        modes.values(k) = solver.eigenvalues()(src);
        modes.right.col(k) = right.col(src);
        modes.left.row(k) = left.row(src);
    }
    modes.condition = cond;

    const OperatorMatrix id = OperatorMatrix::Identity(n, n);
    modes.biorthogonality_residual = max_norm(modes.left * modes.right - id);
    modes.completeness_residual = max_norm(modes.right * modes.left - id);
    double res = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
        const cplx e = modes.values(k);
        res = std::max(res, (m * modes.right.col(k) - e * modes.right.col(k)).norm());
        const double lnorm = modes.left.row(k).norm();
        res = std::max(res, (modes.left.row(k) * m - e * modes.left.row(k)).norm() / lnorm);
    }
    modes.eigen_residual = res;

    if (!(modes.biorthogonality_residual <= options.basis_tol) ||
        !(modes.completeness_residual <= options.basis_tol) ||
        !(modes.eigen_residual <= options.residual_tol * mnorm)) {
        std::ostringstream msg;
        msg << "eig: self-check failed (biorthogonality " << modes.biorthogonality_residual
            << ", completeness " << modes.completeness_residual << ", eigen residual "
            << modes.eigen_residual << ", condition " << cond << ")";
        throw DefectiveSpectrum(msg.str());
    }
    return modes;
}

ModeExpansion expand(const ModeSet& modes, const StateVector& psi0, double tol) {
    if (psi0.size() != modes.size()) throw DomainError("expand: dimension mismatch");
    ModeExpansion ex;
    ex.coefficients = modes.left * psi0;
    ex.residual = (psi0 - modes.right * ex.coefficients).norm();
    if (ex.residual > tol) {
        std::ostringstream msg;
        msg << "expand: reconstruction residual " << ex.residual << " exceeds " << tol;
        throw DefectiveSpectrum(msg.str());
    }
    return ex;
}

StateVector propagate(const ModeSet& modes, const ModeExpansion& expansion, double t,
                      const std::vector<Eigen::Index>& filter) {
    StateVector psi = StateVector::Zero(modes.size());
    for (Eigen::Index k : filter) {
        if (k < 0 || k >= modes.size()) throw DomainError("propagate: mode index out of range");
        psi += (std::exp(-kI * modes.values(k) * t) * expansion.coefficients(k)) *
               modes.right.col(k);
    }
    return psi;
}

std::vector<Eigen::Index> all_modes(const ModeSet& modes) {
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(modes.size()));
    std::iota(idx.begin(), idx.end(), 0);
    return idx;
}

std::vector<Eigen::Index> select_by_im(const ModeSet& modes, Eigen::Index k,
                                       const ModeExpansion* expansion, double tie_tol) {
    const Eigen::Index n = modes.size();
    if (k < 0 || k > n) throw DomainError("select_by_im: k outside [0, 2L]");
    std::vector<Eigen::Index> idx = all_modes(modes);
    auto weight = [&](Eigen::Index i) {
        return expansion ? std::abs(expansion->coefficients(i)) : 0.0;
    };
    // modes.values is already sorted by descending Im; group ties then rank
    // each group by |a_n| and index.
    std::size_t start = 0;
    while (start < idx.size()) {
        std::size_t end = start + 1;
        const double head = modes.values(idx[start]).imag();
        while (end < idx.size() && head - modes.values(idx[end]).imag() <= tie_tol) ++end;
        std::stable_sort(idx.begin() + static_cast<std::ptrdiff_t>(start),
                         idx.begin() + static_cast<std::ptrdiff_t>(end),
                         [&](Eigen::Index a, Eigen::Index b) {
                             if (weight(a) != weight(b)) return weight(a) > weight(b);
                             return a < b;
                         });
        start = end;
    }
    idx.resize(static_cast<std::size_t>(k));
    std::sort(idx.begin(), idx.end());
    return idx;
}

SpectrumDiagnostics spectrum_diagnostics(const ModeSet& modes, double gamma, double cluster_tol) {
    SpectrumDiagnostics d;
    const Eigen::Index n = modes.size();
    if (n == 0) return d;
    Eigen::VectorXcd shifted(n);
    Eigen::VectorXcd mirrored(n);
    std::vector<double> ims;
    ims.reserve(static_cast<std::size_t>(n));
    d.max_im = -std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < n; ++k) {
        const double im = modes.values(k).imag();
        d.max_im = std::max(d.max_im, im);
        shifted(k) = im + 0.5 * gamma;
        mirrored(k) = -(im + 0.5 * gamma);
        d.uniform_im_deviation = std::max(d.uniform_im_deviation, std::abs(im + 0.5 * gamma));
        ims.push_back(im);
    }
    d.im_nonpositive = d.max_im <= 1e-10;
    d.mirror_residual = matching_distance(shifted, mirrored);
    d.mirror_symmetric = d.mirror_residual <= 1e-8;

    std::sort(ims.begin(), ims.end());
    std::size_t start = 0;
    d.even_multiplicity = true;
    while (start < ims.size()) {
        std::size_t end = start + 1;
        while (end < ims.size() && ims[end] - ims[end - 1] <= cluster_tol) ++end;
        const int size = static_cast<int>(end - start);
        d.im_cluster_sizes.push_back(size);
        if (size % 2 != 0) d.even_multiplicity = false;
        start = end;
    }
    return d;
}

}  // namespace edgeburst
