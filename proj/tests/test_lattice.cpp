// Copyright 2026 The edgeburst Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "edgeburst/lattice.hpp"

#include <cmath>
#include <random>

using namespace edgeburst;

namespace {

LatticeParams make(double t1, double t2, double gamma, int length, int x0 = 1) {
    return {t1, t2, gamma, length, x0};
}

// Random parameters, seeded so failures reproduce.
struct ParamGen {
    std::mt19937_64 rng{20260415};
    LatticeParams operator()(bool skin_regime = false) {
        std::uniform_real_distribution<double> u(0.05, 1.5);
        std::uniform_int_distribution<int> len(1, 9);
        LatticeParams p;
        p.gamma = u(rng);
        p.t1 = skin_regime ? 0.5 * p.gamma + u(rng) : u(rng);
        p.t2 = u(rng);
        p.length = len(rng);
        p.x0 = std::uniform_int_distribution<int>(1, p.length)(rng);
        return p;
    }
};

}  // namespace

TEST_CASE("params validation") {
    CHECK_NOTHROW(make(0.4, 0.5, 0.8, 40, 30).validate());
    CHECK_THROWS_AS(make(0.4, 0.5, 0.8, 0).validate(), DomainError);
    CHECK_THROWS_AS(make(0.4, 0.5, -0.1, 4).validate(), DomainError);
    CHECK_THROWS_AS(make(0.4, 0.5, 0.8, 4, 5).validate(), DomainError);
    CHECK_THROWS_AS(make(0.4, 0.5, 0.8, 4, 0).validate(), DomainError);
    CHECK_THROWS_AS(make(NAN, 0.5, 0.8, 4).validate(), DomainError);
    CHECK_THROWS_AS(make(0.4, INFINITY, 0.8, 4).validate(), DomainError);
}

TEST_CASE("site indexing round trip") {
    for (int i = 0; i < 20; ++i) CHECK(SiteIndex::from_flat(i).flat() == i);
    CHECK(SiteIndex{6, Sublattice::A}.flat() == 10);
    CHECK(parse_site("1B") == SiteIndex{1, Sublattice::B});
    CHECK(parse_site("12a") == SiteIndex{12, Sublattice::A});
    CHECK(format_site({15, Sublattice::B}) == "15B");
    CHECK_THROWS_AS((void)parse_site("B1"), DomainError);
    CHECK_THROWS_AS((void)parse_site("0A"), DomainError);
    CHECK_THROWS_AS((void)parse_site("3C"), DomainError);
    CHECK_THROWS_AS((void)parse_site(""), DomainError);
}

TEST_CASE("walk hamiltonian entries, L=2") {
    const OperatorMatrix h = build_walk_hamiltonian(make(1.0, 2.0, 2.0, 2));
    OperatorMatrix expected(4, 4);
    expected << 0.0, 1.0, -kI, 1.0,
                1.0, -2.0 * kI, 1.0, kI,
                kI, 1.0, 0.0, 1.0,
                1.0, -kI, 1.0, -2.0 * kI;
    CHECK(max_norm(h - expected) == 0.0);
}

TEST_CASE("walk hamiltonian trivial cases") {
    CHECK(max_norm(build_walk_hamiltonian(make(0, 0, 0, 5))) == 0.0);
    const OperatorMatrix h = build_walk_hamiltonian(make(0.4, 0.5, 0.8, 1));
    OperatorMatrix expected(2, 2);
    expected << 0.0, 0.4, 0.4, cplx(0, -0.8);
    CHECK(max_norm(h - expected) == 0.0);
}

TEST_CASE("H0 + H' reproduces H exactly") {
    ParamGen gen;
    for (int trial = 0; trial < 50; ++trial) {
        const LatticeParams p = gen();
        const OperatorMatrix h = build_walk_hamiltonian(p);
        CHECK(max_norm(build_h0(p) + build_hprime(p) - h) == 0.0);
        CHECK(h.rows() == p.dim());
    }
    const OperatorMatrix h0 = build_h0(make(0.4, 0.5, 0.8, 1));
    CHECK(h0(0, 0) == cplx(0, 0));
    CHECK(h0(1, 1) == cplx(0, -0.8));
    CHECK(h0(0, 1) == cplx(0, 0));
    const LatticeParams herm = make(0.4, 0.5, 0.0, 3);
    CHECK(max_norm(build_h0(herm)) == 0.0);
    CHECK(max_norm(build_hprime(herm) - build_walk_hamiltonian(herm)) == 0.0);
}

TEST_CASE("related models") {
    const LatticeParams p = make(0.8, 0.5, 0.8, 2);
    const OperatorMatrix h2 = build_model(p, Model::H2);
    CHECK(std::abs(h2(0, 1) - 1.2) < 1e-15);
    CHECK(std::abs(h2(1, 0) - 0.4) < 1e-15);
    CHECK(std::abs(h2(1, 2) - 0.5) < 1e-15);
    CHECK(std::abs(h2(0, 0)) < 1e-15);
    CHECK(std::abs(h2(0, 2)) < 1e-15);
    CHECK(std::abs(h2(0, 3)) < 1e-15);

    const LatticeParams q = make(0.6, 0.3, 1.0, 3);
    CHECK(ssh_intra_hopping(q) == doctest::Approx(std::sqrt(0.11)).epsilon(1e-15));
    const OperatorMatrix h3 = build_model(q, Model::H3);
    CHECK(max_norm(h3 - h3.adjoint()) == 0.0);
    CHECK(std::abs(h3(0, 1) - std::sqrt(0.11)) < 1e-15);
    CHECK(std::abs(h3(1, 2) - 0.3) < 1e-15);

    const OperatorMatrix h4 = build_model(q, Model::H4);
    CHECK(std::abs(h4(0, 0)) < 1e-15);
    CHECK(std::abs(h4(1, 1) - cplx(0, -1.0)) < 1e-15);

    CHECK_THROWS_AS(build_model(make(0.3, 0.5, 0.8, 2), Model::H3), DomainError);
    CHECK_THROWS_AS(build_model(make(-0.4, 0.5, 0.0, 2), Model::H3), DomainError);
    // t1 = gamma/2: t1' = 0, the chain splits into dimers.
    CHECK(max_norm(build_model(make(0.4, 0.5, 0.8, 2), Model::H4).block(0, 0, 2, 2) -
                   OperatorMatrix(Eigen::Matrix2cd{{0.0, 0.0}, {0.0, cplx(0, -0.8)}})) == 0.0);
    CHECK_NOTHROW(build_model(make(0.3, 0.5, 0.8, 2), Model::H2));
}

TEST_CASE("hermitian limit collapses the models") {
    const LatticeParams p = make(0.7, 0.4, 0.0, 4);
    const OperatorMatrix h = build_walk_hamiltonian(p);
    CHECK(max_norm(build_model(p, Model::H1) - h) == 0.0);
    CHECK(ssh_intra_hopping(p) == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(max_norm(build_model(p, Model::H3) - build_model(p, Model::H2)) < 1e-15);
    CHECK(max_norm(build_transform(p, Transform::S) - OperatorMatrix::Identity(8, 8)) == 0.0);
}

TEST_CASE("model names") {
    for (Model m : {Model::Walk, Model::H1, Model::H2, Model::H3, Model::H4}) {
        CHECK(model_from_string(to_string(m)) == m);
    }
    CHECK_THROWS_AS((void)model_from_string("H5"), DomainError);
}

TEST_CASE("transforms") {
    const LatticeParams p = make(0.8, 0.5, 0.8, 2);
    const OperatorMatrix r = build_transform(p, Transform::R);
    // e^{-i pi/4 sigma_x} squared is e^{-i pi/2 sigma_x} = -i sigma_x.
    OperatorMatrix rot2 = OperatorMatrix::Zero(4, 4);
    rot2(0, 1) = rot2(1, 0) = rot2(2, 3) = rot2(3, 2) = -kI;
    CHECK(max_norm(r * r - rot2) < 1e-15);

    const OperatorMatrix s = build_transform(p, Transform::S);
    const double b = std::sqrt(0.4 / 1.2);
    CHECK(std::abs(s(0, 0) - 1.0) < 1e-15);
    CHECK(std::abs(s(1, 1) - b) < 1e-15);
    CHECK(std::abs(s(2, 2) - b) < 1e-15);
    CHECK(std::abs(s(3, 3) - b * b) < 1e-15);
    CHECK(std::abs(s(3, 3) - 1.0 / 3.0) < 1e-15);

    const OperatorMatrix g = build_transform(p, Transform::Gamma);
    CHECK(max_norm(g * g - OperatorMatrix::Identity(4, 4)) == 0.0);

    CHECK_THROWS_AS(build_transform(make(0.4, 0.5, 0.8, 2), Transform::S), DomainError);
    const OperatorMatrix sc = build_transform(make(0.2, 0.5, 0.8, 2), Transform::S);
    CHECK(std::abs(sc(1, 1).imag()) > 0.1);
}

TEST_CASE("bloch factor") {
    CHECK(bloch_factor(make(0.4, 0.5, 0.8, 2)).magnitude == 0.0);
    CHECK(bloch_factor(make(0.8, 0.5, 0.8, 2)).magnitude == doctest::Approx(0.577350).epsilon(1e-6));
    CHECK(bloch_factor(make(0.8, 0.5, 0.0, 2)).beta == cplx(1.0, 0.0));
    const BlochFactor c = bloch_factor(make(0.2, 0.5, 0.8, 2));
    CHECK(c.beta.real() == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(c.magnitude == doctest::Approx(std::sqrt(0.2 / 0.6)));
    CHECK_THROWS_AS(bloch_factor(make(-0.4, 0.5, 0.8, 2)), DomainError);
}

TEST_CASE("in-neighbors") {
    const LatticeParams p = make(0.4, 0.5, 0.8, 5);
    const auto bulk = in_neighbors({3, Sublattice::B}, p);
    REQUIRE(bulk.size() == 5);
    // ascending flat order: 2A, 2B, 3A, 4A, 4B
    CHECK(bulk[0].site == SiteIndex{2, Sublattice::A});
    CHECK(bulk[0].value == cplx(0.25, 0));
    CHECK(bulk[1].site == SiteIndex{2, Sublattice::B});
    CHECK(bulk[1].value == cplx(0, -0.25));
    CHECK(bulk[2].site == SiteIndex{3, Sublattice::A});
    CHECK(bulk[2].value == cplx(0.4, 0));
    CHECK(bulk[3].site == SiteIndex{4, Sublattice::A});
    CHECK(bulk[3].value == cplx(0.25, 0));
    CHECK(bulk[4].site == SiteIndex{4, Sublattice::B});
    CHECK(bulk[4].value == cplx(0, 0.25));

    const auto edge = in_neighbors({1, Sublattice::B}, p);
    REQUIRE(edge.size() == 3);
    CHECK(edge[0].site == SiteIndex{1, Sublattice::A});
    CHECK(edge[1].site == SiteIndex{2, Sublattice::A});
    CHECK(edge[2].site == SiteIndex{2, Sublattice::B});
    CHECK(edge[2].value == cplx(0, 0.25));

    const LatticeParams flat = make(0.4, 0.0, 0.8, 5);
    for (int x = 1; x <= 5; ++x) CHECK(in_neighbors({x, Sublattice::B}, flat).size() == 1);
}

TEST_CASE("matching distance") {
    Eigen::VectorXcd a(3), b(3);
    a << 1.0, cplx(0, 2), -1.0;
    b << -1.0, 1.0, cplx(0, 2);
    CHECK(matching_distance(a, b) == 0.0);
    b(2) = cplx(0, 2.5);
    CHECK(matching_distance(a, b) == doctest::Approx(0.5));
    // Greedy would pair 0 with 0.1 and leave 1 with 2; optimal bottleneck is 0.9.
    Eigen::VectorXcd c(2), d(2);
    c << 0.0, 1.0;
    d << 0.1, 0.9 + 1.0;
    CHECK(matching_distance(c, d) == doctest::Approx(0.9));
    CHECK_THROWS_AS(matching_distance(c, a), DomainError);
}

TEST_CASE("symmetry checks hold on random parameters") {
    ParamGen gen;
    for (int trial = 0; trial < 40; ++trial) {
        const LatticeParams p = gen();
        CAPTURE(p.t1);
        CAPTURE(p.t2);
        CAPTURE(p.gamma);
        CAPTURE(p.length);
        const OperatorMatrix h1 = build_model(p, Model::H1);
        const OperatorMatrix g = build_transform(p, Transform::Gamma);
        const auto chiral = check_symmetry(h1, g, SymmetryKind::Chiral, 1e-12);
        CHECK(chiral.passed);
        CHECK(chiral.residual <= 1e-12);

        const OperatorMatrix r = build_transform(p, Transform::R);
        const OperatorMatrix h2 = build_model(p, Model::H2);
        CHECK(max_norm(r.inverse() * h1 * r - h2) < 1e-12);
        CHECK(check_symmetry(h1, h2, SymmetryKind::SpectrumEquality, 1e-8).passed);

        // walk = H1 - i gamma/2
        const OperatorMatrix h = build_walk_hamiltonian(p);
        const OperatorMatrix shift = (0.5 * p.gamma * kI) * OperatorMatrix::Identity(p.dim(), p.dim());
        CHECK(max_norm(h1 - (h + shift)) < 1e-15);
    }
}

TEST_CASE("S maps the nonreciprocal chain onto the Hermitian one") {
    ParamGen gen;
    for (int trial = 0; trial < 40; ++trial) {
        const LatticeParams p = gen(true);
        CAPTURE(p.t1);
        CAPTURE(p.gamma);
        const OperatorMatrix s = build_transform(p, Transform::S);
        const OperatorMatrix h3 = build_model(p, Model::H3);
        const OperatorMatrix h2 = build_model(p, Model::H2);
        CHECK(max_norm(s.inverse() * h2 * s - h3) < 1e-10 * std::max(1.0, max_norm(h2)));
    }
    const LatticeParams fig = make(0.8, 0.5, 0.8, 8);
    const auto rep = check_symmetry(build_model(fig, Model::H2), build_model(fig, Model::H3),
                                    SymmetryKind::SpectrumEquality, 1e-8);
    CHECK(rep.passed);
}

TEST_CASE("symmetry check errors and mutation") {
    const LatticeParams p = make(0.4, 0.5, 0.8, 3);
    const OperatorMatrix g = build_transform(p, Transform::Gamma);
    OperatorMatrix h1 = build_model(p, Model::H1);
    h1(0, 1) = -h1(0, 1);
    CHECK_FALSE(check_symmetry(h1, g, SymmetryKind::Chiral, 1e-12).passed);
    CHECK_THROWS_AS(check_symmetry(h1, OperatorMatrix::Identity(2, 2), SymmetryKind::Chiral, 1e-12),
                    DomainError);
    CHECK_THROWS_AS(check_symmetry(h1, OperatorMatrix::Zero(6, 6),
                                   SymmetryKind::CustomConjugation, 1e-12),
                    DomainError);
    // A real symmetric matrix is invariant under plain complex conjugation.
    const OperatorMatrix herm = build_model(make(0.6, 0.3, 1.0, 3), Model::H3);
    CHECK(check_symmetry(herm, OperatorMatrix::Identity(6, 6), SymmetryKind::CustomConjugation,
                         1e-14).passed);
}
