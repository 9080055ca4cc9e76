// Copyright 2026 The edgeburst Authors
// SPDX-License-Identifier: Apache-2.0

#include "edgeburst/lattice.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

namespace edgeburst {

void LatticeParams::validate() const {
    if (length < 1) {
        throw DomainError("chain length must be >= 1, got " + std::to_string(length));
    }
    if (!std::isfinite(t1) || !std::isfinite(t2) || !std::isfinite(gamma)) {
        throw DomainError("t1, t2 and gamma must be finite");
    }
    if (gamma < 0.0) {
        throw DomainError("gamma must be >= 0");
    }
    if (x0 < 1 || x0 > length) {
        throw DomainError("x0 = " + std::to_string(x0) + " outside [1, " +
                          std::to_string(length) + "]");
    }
}

char to_char(Sublattice s) { return s == Sublattice::A ? 'A' : 'B'; }

Sublattice sublattice_from_char(char c) {
    switch (std::toupper(static_cast<unsigned char>(c))) {
        case 'A': return Sublattice::A;
        case 'B': return Sublattice::B;
        default: throw DomainError(std::string("unknown sublattice '") + c + "'");
    }
}

SiteIndex parse_site(const std::string& text) {
    if (text.size() < 2) throw DomainError("bad site '" + text + "' (expected e.g. 1B)");
    const std::string digits = text.substr(0, text.size() - 1);
    if (!std::all_of(digits.begin(), digits.end(),
                     [](unsigned char c) { return std::isdigit(c) != 0; })) {
        throw DomainError("bad site '" + text + "' (expected e.g. 1B)");
    }
    const int cell = digits.size() > 9 ? 0 : std::stoi(digits);
    if (cell < 1) throw DomainError("bad site '" + text + "' (cells start at 1)");
    return {cell, sublattice_from_char(text.back())};
}

std::string format_site(const SiteIndex& site) {
    return std::to_string(site.cell) + to_char(site.sub);
}

Model model_from_string(const std::string& name) {
    if (name == "walk") return Model::Walk;
    if (name == "H1") return Model::H1;
    if (name == "H2") return Model::H2;
    if (name == "H3") return Model::H3;
    if (name == "H4") return Model::H4;
    throw DomainError("unknown model '" + name + "' (walk, H1, H2, H3, H4)");
}

std::string to_string(Model model) {
    switch (model) {
        case Model::Walk: return "walk";
        case Model::H1: return "H1";
        case Model::H2: return "H2";
        case Model::H3: return "H3";
        case Model::H4: return "H4";
    }
    return "walk";
}

namespace {

int idx(int cell, Sublattice s) { return SiteIndex{cell, s}.flat(); }

// All hopping terms of the walk; the loss is added separately.
OperatorMatrix hopping(const LatticeParams& p) {
    const int n = p.length;
    OperatorMatrix h = OperatorMatrix::Zero(p.dim(), p.dim());
    const double half = 0.5 * p.t2;
    for (int x = 1; x <= n; ++x) {
        const int a = idx(x, Sublattice::A);
        const int b = idx(x, Sublattice::B);
        h(a, b) = p.t1;
        h(b, a) = p.t1;
        for (int dx : {-1, +1}) {
            const int y = x + dx;
            if (y < 1 || y > n) continue;
            const int ya = idx(y, Sublattice::A);
            const int yb = idx(y, Sublattice::B);
            // i dA_x/dt = i t2/2 (A_{x-1} - A_{x+1}) + t2/2 (B_{x-1} + B_{x+1})
            h(a, ya) = cplx{0.0, dx < 0 ? half : -half};
            h(a, yb) = half;
            // i dB_x/dt = -i t2/2 (B_{x-1} - B_{x+1}) + t2/2 (A_{x-1} + A_{x+1})
            h(b, yb) = cplx{0.0, dx < 0 ? -half : half};
            h(b, ya) = half;
        }
    }
    return h;
}

// Tridiagonal SSH-type chain: intra-cell (A->B entry `ab`, B->A entry `ba`),
// inter-cell coupling `inter` between (x,B) and (x+1,A).
OperatorMatrix ssh_chain(int length, cplx ab, cplx ba, cplx inter) {
    OperatorMatrix h = OperatorMatrix::Zero(2 * length, 2 * length);
    for (int x = 1; x <= length; ++x) {
        const int a = idx(x, Sublattice::A);
        const int b = idx(x, Sublattice::B);
        h(a, b) = ab;
        h(b, a) = ba;
        if (x < length) {
            h(b, b + 1) = inter;
            h(b + 1, b) = inter;
        }
    }
    return h;
}

OperatorMatrix block_diagonal(int length, const Eigen::Matrix2cd& block) {
    OperatorMatrix m = OperatorMatrix::Zero(2 * length, 2 * length);
    for (int x = 0; x < length; ++x) m.block<2, 2>(2 * x, 2 * x) = block;
    return m;
}

OperatorMatrix b_projector(int length) {
    OperatorMatrix p = OperatorMatrix::Zero(2 * length, 2 * length);
    for (int x = 1; x <= length; ++x) p(idx(x, Sublattice::B), idx(x, Sublattice::B)) = 1.0;
    return p;
}

}  // namespace

OperatorMatrix build_walk_hamiltonian(const LatticeParams& params) {
    params.validate();
    return build_h0(params) + build_hprime(params);
}

OperatorMatrix build_h0(const LatticeParams& params) {
    params.validate();
    return cplx{0.0, -params.gamma} * b_projector(params.length);
}

OperatorMatrix build_hprime(const LatticeParams& params) {
    params.validate();
    return hopping(params);
}

double ssh_intra_hopping(const LatticeParams& params) {
    const double disc = params.t1 * params.t1 - 0.25 * params.gamma * params.gamma;
    const double half_gamma = 0.5 * params.gamma;
    if (params.t1 < half_gamma) {
        throw DomainError("H3/H4 need t1 >= gamma/2 (t1 = " + std::to_string(params.t1) +
                          ", gamma/2 = " + std::to_string(half_gamma) + ")");
    }
    return std::sqrt(std::max(disc, 0.0));
}

OperatorMatrix build_model(const LatticeParams& params, Model model) {
    params.validate();
    const int n = params.length;
    const double g2 = 0.5 * params.gamma;
    switch (model) {
        case Model::Walk:
            return build_walk_hamiltonian(params);
        case Model::H1:
            return build_walk_hamiltonian(params) +
                   cplx{0.0, g2} * OperatorMatrix::Identity(params.dim(), params.dim());
        case Model::H2:
            return ssh_chain(n, params.t1 + g2, params.t1 - g2, params.t2);
        case Model::H3: {
            const double t1p = ssh_intra_hopping(params);
            return ssh_chain(n, t1p, t1p, params.t2);
        }
        case Model::H4: {
            const double t1p = ssh_intra_hopping(params);
            OperatorMatrix h = ssh_chain(n, t1p, t1p, params.t2);
            Eigen::Matrix2cd sz;
            sz << 1.0, 0.0, 0.0, -1.0;
            h += cplx{0.0, g2} * block_diagonal(n, sz);
            h -= cplx{0.0, g2} * OperatorMatrix::Identity(params.dim(), params.dim());
            return h;
        }
    }
    throw DomainError("unknown model");
}

OperatorMatrix build_transform(const LatticeParams& params, Transform which) {
    params.validate();
    const int n = params.length;
    switch (which) {
        case Transform::R: {
            // exp(-i pi/4 sigma_x)
            const double r = 1.0 / std::sqrt(2.0);
            Eigen::Matrix2cd block;
            block << r, cplx{0.0, -r}, cplx{0.0, -r}, r;
            return block_diagonal(n, block);
        }
        case Transform::Gamma: {
            Eigen::Matrix2cd sy;
            sy << 0.0, cplx{0.0, -1.0}, cplx{0.0, 1.0}, 0.0;
            return block_diagonal(n, sy);
        }
        case Transform::S: {
            const cplx beta = bloch_factor(params).beta;
            if (std::abs(beta) == 0.0) {
                throw DomainError("S is singular at beta = 0 (t1 = gamma/2)");
            }
            OperatorMatrix s = OperatorMatrix::Zero(params.dim(), params.dim());
            cplx scale{1.0, 0.0};  // beta^(x-1)
            for (int x = 1; x <= n; ++x) {
                s(idx(x, Sublattice::A), idx(x, Sublattice::A)) = scale;
                s(idx(x, Sublattice::B), idx(x, Sublattice::B)) = scale * beta;
                scale *= beta;
            }
            return s;
        }
    }
    throw DomainError("unknown transform");
}

BlochFactor bloch_factor(const LatticeParams& params) {
    const double g2 = 0.5 * params.gamma;
    const double den = params.t1 + g2;
    if (den == 0.0) throw DomainError("Bloch factor undefined at t1 = -gamma/2");
    const double ratio = (params.t1 - g2) / den;
    return {std::sqrt(cplx{ratio, 0.0}), std::sqrt(std::abs(ratio))};
}

std::vector<Coupling> in_neighbors(const SiteIndex& site, const LatticeParams& params) {
    params.validate();
    if (site.cell < 1 || site.cell > params.length) {
        throw DomainError("site " + format_site(site) + " outside the chain");
    }
    const OperatorMatrix hp = build_hprime(params);
    std::vector<Coupling> out;
    const int row = site.flat();
    for (int col = 0; col < params.dim(); ++col) {
        if (hp(row, col) != cplx{0.0, 0.0}) out.push_back({SiteIndex::from_flat(col), hp(row, col)});
    }
    return out;
}

double max_norm(const OperatorMatrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

namespace {

// Kuhn augmenting-path matching restricted to edges with dist <= limit.
bool perfect_matching(const Eigen::MatrixXd& dist, double limit) {
    const auto n = dist.rows();
    std::vector<Eigen::Index> owner(n, -1);
    std::vector<char> seen(n);
    auto augment = [&](auto&& self, Eigen::Index u) -> bool {
        for (Eigen::Index v = 0; v < n; ++v) {
            if (dist(u, v) > limit || seen[v]) continue;
            seen[v] = 1;
            if (owner[v] < 0 || self(self, owner[v])) {
                owner[v] = u;
                return true;
            }
        }
        return false;
    };
    for (Eigen::Index u = 0; u < n; ++u) {
        std::fill(seen.begin(), seen.end(), 0);
        if (!augment(augment, u)) return false;
    }
    return true;
}

}  // namespace

double matching_distance(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    if (a.size() != b.size()) throw DomainError("spectra have different sizes");
    const auto n = a.size();
    if (n == 0) return 0.0;
    Eigen::MatrixXd dist(n, n);
    std::vector<double> candidates;
    candidates.reserve(static_cast<std::size_t>(n * n));
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            dist(i, j) = std::abs(a(i) - b(j));
            candidates.push_back(dist(i, j));
        }
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    std::size_t lo = 0;
    std::size_t hi = candidates.size() - 1;
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (perfect_matching(dist, candidates[mid])) hi = mid;
        else lo = mid + 1;
    }
    return candidates[lo];
}

SymmetryReport check_symmetry(const OperatorMatrix& m, const OperatorMatrix& candidate,
                              SymmetryKind kind, double tol) {
    if (m.rows() != m.cols() || candidate.rows() != candidate.cols() ||
        m.rows() != candidate.rows()) {
        throw DomainError("check_symmetry: dimension mismatch");
    }
    if (!(tol > 0.0)) throw DomainError("check_symmetry: tolerance must be > 0");

    SymmetryReport report{kind};
    switch (kind) {
        case SymmetryKind::Chiral:
            report.residual = max_norm(candidate * m * candidate + m);
            break;
        case SymmetryKind::SpectrumEquality: {
            Eigen::ComplexEigenSolver<OperatorMatrix> es_m(m, false);
            Eigen::ComplexEigenSolver<OperatorMatrix> es_c(candidate, false);
            if (es_m.info() != Eigen::Success || es_c.info() != Eigen::Success) {
                throw std::runtime_error("check_symmetry: eigenvalue iteration failed");
            }
            report.residual = matching_distance(es_m.eigenvalues(), es_c.eigenvalues());
            break;
        }
        case SymmetryKind::CustomConjugation: {
            Eigen::FullPivLU<OperatorMatrix> lu(candidate);
            if (!lu.isInvertible()) throw DomainError("check_symmetry: singular candidate");
            report.residual = max_norm(candidate * m.conjugate() * lu.inverse() - m);
            break;
        }
    }
    report.passed = report.residual <= tol;
    return report;
}

}  // namespace edgeburst
