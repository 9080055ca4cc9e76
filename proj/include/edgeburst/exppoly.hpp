// Copyright 2026 The edgeburst Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file exppoly.hpp
 * @brief Closed-form functions f(t) = sum coeff * t^k * exp(m * gamma * t).
 *
 * Closed under addition, scaling, multiplication by exp(+-gamma t) and
 * definite integration from 0, which is all the perturbation recursion needs.
 *
 * Coefficients are held in binary128. Integrating t^k exp(m gamma t) produces
 * constants of size k!/gamma^(k+1) that cancel against the exponential part
 * at small t; at order 40 the sum of |terms| reaches 1e17 while the value is
 * O(1), which leaves nothing in double precision.
 */

#pragma once

#include <boost/multiprecision/float128.hpp>

#include <complex>
#include <map>
#include <utility>

namespace edgeburst {

using Real128 = boost::multiprecision::float128;

/// Minimal complex arithmetic over Real128.
struct Complex128 {
    Real128 re = 0;
    Real128 im = 0;

    Complex128() = default;
    Complex128(Real128 r, Real128 i) : re(std::move(r)), im(std::move(i)) {}
    Complex128(std::complex<double> z) : re(z.real()), im(z.imag()) {}  // NOLINT

    [[nodiscard]] bool is_zero() const { return re == 0 && im == 0; }
    [[nodiscard]] std::complex<double> to_double() const {
        return {static_cast<double>(re), static_cast<double>(im)};
    }
    [[nodiscard]] Real128 abs() const { return boost::multiprecision::hypot(re, im); }

    Complex128& operator+=(const Complex128& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    Complex128& operator*=(const Complex128& o) {
        Real128 r = re * o.re - im * o.im;
        im = re * o.im + im * o.re;
        re = std::move(r);
        return *this;
    }
    Complex128& operator*=(const Real128& s) {
        re *= s;
        im *= s;
        return *this;
    }
    friend Complex128 operator+(Complex128 a, const Complex128& b) { return a += b; }
    friend Complex128 operator*(Complex128 a, const Complex128& b) { return a *= b; }
    friend Complex128 operator*(Complex128 a, const Real128& s) { return a *= s; }
    friend Complex128 operator-(const Complex128& a) { return {-a.re, -a.im}; }
};

class ExpPoly {
public:
    using cplx = std::complex<double>;
    /// (k, m) -> coeff; at most one term per pair.
    using TermMap = std::map<std::pair<int, int>, Complex128>;

    explicit ExpPoly(double gamma = 1.0) : gamma_(gamma) {}

    static ExpPoly constant(double gamma, cplx value);
    static ExpPoly monomial(double gamma, cplx coeff, int k, int m);

    [[nodiscard]] double gamma() const { return gamma_; }
    [[nodiscard]] const TermMap& terms() const { return terms_; }
    [[nodiscard]] bool is_zero() const { return terms_.empty(); }
    [[nodiscard]] std::size_t size() const { return terms_.size(); }
    /// Coefficient of t^k exp(m gamma t), rounded to double (0 if absent).
    [[nodiscard]] cplx coeff(int k, int m) const;

    void add_term(const Complex128& coeff, int k, int m);

    ExpPoly& operator+=(const ExpPoly& other);
    ExpPoly& operator*=(const Complex128& scale);
    friend ExpPoly operator+(ExpPoly a, const ExpPoly& b) { return a += b; }
    friend ExpPoly operator*(const Complex128& s, ExpPoly a) { return a *= s; }

    /// Multiplies by exp(shift * gamma * t).
    [[nodiscard]] ExpPoly shifted(int shift) const;

    /// F with F(0) = 0 and F' = *this, in closed form.
    [[nodiscard]] ExpPoly integrate0() const;
    [[nodiscard]] ExpPoly derivative() const;

    [[nodiscard]] cplx operator()(double t) const;
    /// sum |term(t)|; compare with |f(t)| to gauge cancellation.
    [[nodiscard]] double magnitude_sum(double t) const;
    [[nodiscard]] double max_abs_coeff() const;

    /// Drops terms with |coeff| < rel * max|coeff|.
    void prune(double rel);

    [[nodiscard]] bool all_finite() const;

private:
    double gamma_;
    TermMap terms_;
};

}  // namespace edgeburst
