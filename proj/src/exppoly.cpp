// Copyright 2026 The edgeburst Authors
// SPDX-License-Identifier: Apache-2.0

#include "edgeburst/exppoly.hpp"

#include <stdexcept>

namespace edgeburst {

namespace mp = boost::multiprecision;

ExpPoly ExpPoly::constant(double gamma, cplx value) {
    ExpPoly p(gamma);
    p.add_term(value, 0, 0);
    return p;
}

ExpPoly ExpPoly::monomial(double gamma, cplx coeff, int k, int m) {
    ExpPoly p(gamma);
    p.add_term(coeff, k, m);
    return p;
}

ExpPoly::cplx ExpPoly::coeff(int k, int m) const {
    const auto it = terms_.find({k, m});
    return it == terms_.end() ? cplx{0.0, 0.0} : it->second.to_double();
}

void ExpPoly::add_term(const Complex128& coeff, int k, int m) {
    if (k < 0) throw std::invalid_argument("ExpPoly: negative power");
    if (coeff.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace({k, m}, coeff);
    if (!inserted) {
        it->second += coeff;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

ExpPoly& ExpPoly::operator+=(const ExpPoly& other) {
    for (const auto& [km, c] : other.terms_) add_term(c, km.first, km.second);
    return *this;
}

ExpPoly& ExpPoly::operator*=(const Complex128& scale) {
    if (scale.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto& [km, c] : terms_) c *= scale;
    return *this;
}

ExpPoly ExpPoly::shifted(int shift) const {
    ExpPoly out(gamma_);
    for (const auto& [km, c] : terms_) out.terms_.emplace(std::pair{km.first, km.second + shift}, c);
    return out;
}

ExpPoly ExpPoly::integrate0() const {
    ExpPoly out(gamma_);
    for (const auto& [km, c] : terms_) {
        const auto [k, m] = km;
        if (m == 0) {
            out.add_term(c * (Real128(1) / Real128(k + 1)), k + 1, 0);
            continue;
        }
        // int_0^t s^k e^{l s} ds
        //   = e^{l t} sum_{j=0}^{k} (-1)^{k-j} k!/(j! l^{k-j+1}) t^j - (-1)^k k!/l^{k+1}
        // built downward from j = k: a_{j-1} = a_j * (-j/l).
        const Real128 lambda = Real128(m) * Real128(gamma_);
        Real128 a = Real128(1) / lambda;
        for (int j = k; j >= 0; --j) {
            out.add_term(c * a, j, m);
            if (j > 0) a *= -Real128(j) / lambda;
        }
        out.add_term(-(c * a), 0, 0);
    }
    return out;
}

ExpPoly ExpPoly::derivative() const {
    ExpPoly out(gamma_);
    for (const auto& [km, c] : terms_) {
        const auto [k, m] = km;
        if (m != 0) out.add_term(c * (Real128(m) * Real128(gamma_)), k, m);
        if (k > 0) out.add_term(c * Real128(k), k - 1, m);
    }
    return out;
}

ExpPoly::cplx ExpPoly::operator()(double t) const {
    // terms_ is ordered by k first, so t^k can be built incrementally.
    const Real128 tq(t);
    std::map<int, Real128> exps;
    Real128 tpow = 1;
    int kpow = 0;
    Complex128 total;
    for (const auto& [km, c] : terms_) {
        const auto [k, m] = km;
        while (kpow < k) {
            tpow *= tq;
            ++kpow;
        }
        auto it = exps.find(m);
        if (it == exps.end()) it = exps.emplace(m, mp::exp(Real128(m) * Real128(gamma_) * tq)).first;
        total += c * (tpow * it->second);
    }
    return total.to_double();
}

double ExpPoly::magnitude_sum(double t) const {
    const Real128 tq = mp::fabs(Real128(t));
    Real128 sum = 0;
    for (const auto& [km, c] : terms_) {
        sum += c.abs() * mp::pow(tq, km.first) * mp::exp(Real128(km.second) * Real128(gamma_) * Real128(t));
    }
    return static_cast<double>(sum);
}

double ExpPoly::max_abs_coeff() const {
    Real128 best = 0;
    for (const auto& [km, c] : terms_) if (c.abs() > best) best = c.abs();
    return static_cast<double>(best);
}

void ExpPoly::prune(double rel) {
    if (rel <= 0.0) return;
    Real128 best = 0;
    for (const auto& [km, c] : terms_) if (c.abs() > best) best = c.abs();
    const Real128 cut = Real128(rel) * best;
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (it->second.abs() < cut) it = terms_.erase(it);
        else ++it;
    }
}

bool ExpPoly::all_finite() const {
    for (const auto& [km, c] : terms_) {
        if (!mp::isfinite(c.re) || !mp::isfinite(c.im)) return false;
    }
    return true;
}

}  // namespace edgeburst
