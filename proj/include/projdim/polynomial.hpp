#pragma once

// Dense univariate polynomials over the rationals.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "projdim/mp.hpp"

namespace projdim {

class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }
    Polynomial(std::initializer_list<long> coeffs) {
        for (long v : coeffs) c_.emplace_back(v);
        trim();
    }

    static Polynomial constant(const Rational& v) { return Polynomial(std::vector<Rational>{v}); }
    static Polynomial monomial(std::size_t degree, const Rational& v = 1) {
        std::vector<Rational> c(degree + 1);
        c[degree] = v;
        return Polynomial(std::move(c));
    }
    static Polynomial from_integers(const std::vector<Integer>& coeffs) {
        std::vector<Rational> c(coeffs.begin(), coeffs.end());
        return Polynomial(std::move(c));
    }

    bool is_zero() const { return c_.empty(); }
    /// Degree of the zero polynomial is -1.
    long degree() const { return static_cast<long>(c_.size()) - 1; }
    const std::vector<Rational>& coeffs() const { return c_; }
    Rational coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Rational(0); }
    const Rational& leading() const { return c_.back(); }

    Polynomial operator-() const {
        Polynomial r = *this;
        for (auto& v : r.c_) v = -v;
        return r;
    }
    Polynomial& operator+=(const Polynomial& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
        trim();
        return *this;
    }
    Polynomial& operator-=(const Polynomial& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
        trim();
        return *this;
    }
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<Rational> r(a.c_.size() + b.c_.size() - 1);
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i] == 0) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
        }
        return Polynomial(std::move(r));
    }
    friend Polynomial operator*(const Rational& k, Polynomial p) {
        for (auto& v : p.c_) v *= k;
        p.trim();
        return p;
    }
    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }

    /// Quotient and remainder; divisor must be nonzero.
    std::pair<Polynomial, Polynomial> divmod(const Polynomial& d) const {
        if (d.is_zero()) fail(ErrorCode::DivisionByZero, "polynomial division by zero");
        std::vector<Rational> rem = c_;
        if (degree() < d.degree()) return {Polynomial{}, *this};
        std::vector<Rational> q(c_.size() - d.c_.size() + 1);
        const Rational& lead = d.leading();
        for (long i = degree(); i >= d.degree(); --i) {
            const auto ui = static_cast<std::size_t>(i);
            if (rem[ui] == 0) continue;
            Rational f = rem[ui] / lead;
            const auto shift = ui - d.c_.size() + 1;
            q[shift] = f;
            for (std::size_t j = 0; j < d.c_.size(); ++j) rem[shift + j] -= f * d.c_[j];
        }
        return {Polynomial(std::move(q)), Polynomial(std::move(rem))};
    }
    Polynomial operator%(const Polynomial& d) const { return divmod(d).second; }

    Polynomial exact_div(const Polynomial& d) const {
        auto [q, r] = divmod(d);
        if (!r.is_zero()) fail(ErrorCode::DivisionByZero, "inexact polynomial division");
        return q;
    }

    Polynomial monic() const {
        if (is_zero()) return {};
        return Rational(1) / leading() * (*this);
    }

    Polynomial derivative() const {
        if (c_.size() <= 1) return {};
        std::vector<Rational> r(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * static_cast<long>(i);
        return Polynomial(std::move(r));
    }

    Rational eval(const Rational& x) const {
        Rational acc = 0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }
    long double eval(long double x) const {
        long double acc = 0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + it->convert_to<long double>();
        return acc;
    }

    /// p(x^k).
    Polynomial substitute_power(std::size_t k) const {
        if (is_zero() || k == 1) return *this;
        std::vector<Rational> r((c_.size() - 1) * k + 1);
        for (std::size_t i = 0; i < c_.size(); ++i) r[i * k] = c_[i];
        return Polynomial(std::move(r));
    }

    /// x^deg p(1/x).
    Polynomial reversed() const {
        std::vector<Rational> r(c_.rbegin(), c_.rend());
        return Polynomial(std::move(r));
    }

    /// Power series coefficients of this/den up to x^n (den(0) != 0).
    std::vector<Rational> series_div(const Polynomial& den, std::size_t n) const {
        if (den.is_zero() || den.c_[0] == 0) fail(ErrorCode::DivisionByZero, "series denominator vanishes at 0");
        std::vector<Rational> out(n + 1);
        for (std::size_t k = 0; k <= n; ++k) {
            Rational acc = coeff(k);
            for (std::size_t j = 1; j <= k && j < den.c_.size(); ++j) acc -= den.c_[j] * out[k - j];
            out[k] = acc / den.c_[0];
        }
        return out;
    }

    /// Integer coefficients with content 1 and positive leading coefficient.
    std::vector<Integer> primitive() const {
        if (is_zero()) return {};
        Integer l = 1;
        for (const auto& v : c_) l = boost::multiprecision::lcm(l, boost::multiprecision::denominator(v));
        std::vector<Integer> z;
        z.reserve(c_.size());
        for (const auto& v : c_) z.push_back(boost::multiprecision::numerator(v) * (l / boost::multiprecision::denominator(v)));
        Integer g = 0;
        for (const auto& v : z) g = boost::multiprecision::gcd(g, v);
        if (g < 0) g = -g;
        const bool flip = z.back() < 0;
        for (auto& v : z) {
            v /= g;
            if (flip) v = -v;
        }
        return z;
    }

    std::string to_string(const std::string& var = "x") const {
        if (is_zero()) return "0";
        std::ostringstream os;
        bool first = true;
        for (long i = degree(); i >= 0; --i) {
            const Rational& v = c_[static_cast<std::size_t>(i)];
            if (v == 0) continue;
            Rational a = projdim::abs(v);
            if (first) {
                if (v < 0) os << "-";
            } else {
                os << (v < 0 ? " - " : " + ");
            }
            first = false;
            const bool unit = (a == 1);
            if (!unit || i == 0) os << projdim::to_string(a);
            if (i > 0) {
                if (!unit) os << "*";
                os << var;
                if (i > 1) os << "^" << i;
            }
        }
        return os.str();
    }

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }

    std::vector<Rational> c_;
};

inline Polynomial gcd(Polynomial a, Polynomial b) {
    while (!b.is_zero()) {
        Polynomial r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

/// Sturm chain p, p', -rem(...), ...
inline std::vector<Polynomial> sturm_chain(const Polynomial& p) {
    std::vector<Polynomial> chain{p, p.derivative()};
    while (!chain.back().is_zero()) {
        Polynomial r = chain[chain.size() - 2] % chain.back();
        if (r.is_zero()) break;
        chain.push_back(-r);
    }
    if (chain.back().is_zero()) chain.pop_back();
    return chain;
}

inline int sign_changes(const std::vector<Polynomial>& chain, const Rational& x) {
    int changes = 0;
    int last = 0;
    for (const auto& q : chain) {
        int s = q.eval(x).sign();
        if (s == 0) continue;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    return changes;
}

/// Number of distinct real roots in (a, b].
inline int count_roots(const std::vector<Polynomial>& chain, const Rational& a, const Rational& b) {
    return sign_changes(chain, a) - sign_changes(chain, b);
}

/// Cauchy bound: every root has modulus below the returned value.
inline Rational root_bound(const Polynomial& p) {
    Rational m = 0;
    for (long i = 0; i < p.degree(); ++i) m = std::max(m, projdim::abs(p.coeff(static_cast<std::size_t>(i)) / p.leading()));
    return m + 1;
}

/// Bracket (lo, hi] around the smallest positive real root, refined to width <= tol.
/// Returns nullopt when there is no positive root.
inline std::optional<std::pair<Rational, Rational>> smallest_positive_root(const Polynomial& p, const Rational& tol) {
    if (p.degree() < 1) return std::nullopt;
    auto chain = sturm_chain(p);
    Rational lo = 0;
    Rational hi = root_bound(p);
    if (count_roots(chain, lo, hi) == 0) return std::nullopt;
    while (hi - lo > tol) {
        Rational mid = (lo + hi) / 2;
        if (count_roots(chain, lo, mid) > 0)
            hi = mid;
        else
            lo = mid;
    }
    return std::make_pair(lo, hi);
}

/// Bracket (lo, hi] around the largest real root; nullopt when p has no real root.
inline std::optional<std::pair<Rational, Rational>> largest_real_root(const Polynomial& p, const Rational& tol) {
    if (p.degree() < 1) return std::nullopt;
    auto chain = sturm_chain(p);
    Rational hi = root_bound(p);
    Rational lo = -hi;
    if (count_roots(chain, lo, hi) == 0) return std::nullopt;
    while (hi - lo > tol) {
        Rational mid = (lo + hi) / 2;
        if (count_roots(chain, mid, hi) > 0)
            lo = mid;
        else
            hi = mid;
    }
    return std::make_pair(lo, hi);
}

using PolynomialMatrix = std::vector<std::vector<Polynomial>>;

/// Fraction-free (Bareiss) determinant.
inline Polynomial determinant(PolynomialMatrix m) {
    const std::size_t n = m.size();
    if (n == 0) return Polynomial::constant(1);
    Polynomial prev = Polynomial::constant(1);
    bool negate = false;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k].is_zero()) {
            std::size_t pivot = k + 1;
            while (pivot < n && m[pivot][k].is_zero()) ++pivot;
            if (pivot == n) return {};
            std::swap(m[k], m[pivot]);
            negate = !negate;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j)
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]).exact_div(prev);
            m[i][k] = {};
        }
        prev = m[k][k];
    }
    return negate ? -m[n - 1][n - 1] : m[n - 1][n - 1];
}

}  // namespace projdim
