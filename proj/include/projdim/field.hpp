#pragma once

/**
 * @file field.hpp
 * @brief Exact arithmetic in the number field Q(beta).
 *
 * beta is a real algebraic number > 1 given by its minimal polynomial and an
 * isolating interval, or an exact rational (degree-1 context). Elements are
 * stored as coefficient vectors of polynomials in beta reduced modulo the
 * minimal polynomial, so equality is structural and exact. Order comparisons
 * evaluate the difference over a rational enclosure of beta that is refined
 * by bisection until the sign is decided.
 */

#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "projdim/mp.hpp"
#include "projdim/polynomial.hpp"

namespace projdim {

/// Bisection budget per comparison before the context is declared inconsistent.
inline constexpr long kMaxBisections = 1'000'000;

class FieldContext {
public:
    /// min_poly lists coefficients from the constant term upward.
    FieldContext(std::vector<Integer> min_poly, Rational low, Rational high)
        : min_poly_(std::move(min_poly)), low_(std::move(low)), high_(std::move(high)) {
        while (!min_poly_.empty() && min_poly_.back() == 0) min_poly_.pop_back();
        if (min_poly_.size() < 2) fail(ErrorCode::InvalidField, "minimal polynomial must have degree >= 1");
        modulus_ = Polynomial::from_integers(min_poly_).monic();
        if (degree() == 1) {
            low_ = high_ = -modulus_.coeff(0);
            if (low_ <= 1) fail(ErrorCode::InvalidField, "beta must exceed 1");
        } else {
            validate_isolation();
        }
        lo_ = low_;
        hi_ = high_;
        build_reduction_table();
    }

    /// Degree-1 context for a rational beta = p/q.
    static std::shared_ptr<const FieldContext> rational(const Rational& beta) {
        std::vector<Integer> poly{-boost::multiprecision::numerator(beta), boost::multiprecision::denominator(beta)};
        return std::make_shared<const FieldContext>(std::move(poly), beta, beta);
    }
    static std::shared_ptr<const FieldContext> algebraic(std::vector<Integer> min_poly, Rational low, Rational high) {
        return std::make_shared<const FieldContext>(std::move(min_poly), std::move(low), std::move(high));
    }

    std::size_t degree() const { return static_cast<std::size_t>(modulus_.degree()); }
    bool is_rational() const { return degree() == 1; }
    const std::vector<Integer>& min_poly() const { return min_poly_; }
    const Rational& low() const { return low_; }
    const Rational& high() const { return high_; }
    const Polynomial& modulus() const { return modulus_; }
    /// Only meaningful for degree-1 contexts.
    const Rational& rational_beta() const { return low_; }

    /// Current enclosure of beta, refined until its width is at most `width`.
    std::pair<Rational, Rational> enclosure(const Rational& width, long& budget) const {
        std::lock_guard<std::mutex> lock(mutex_);
        while (hi_ - lo_ > width) {
            if (--budget < 0) fail(ErrorCode::NonTerminatingComparison, "bisection cap reached; is the minimal polynomial reducible?");
            Rational mid = (lo_ + hi_) / 2;
            int s_mid = modulus_.eval(mid).sign();
            if (s_mid == 0) {
                lo_ = hi_ = mid;
                break;
            }
            if (s_mid == modulus_.eval(lo_).sign())
                lo_ = mid;
            else
                hi_ = mid;
        }
        return {lo_, hi_};
    }

    /// x^k mod min_poly for k in [degree, 2*degree-2].
    const std::vector<std::vector<Rational>>& reduction_table() const { return reduce_; }

    bool same_field(const FieldContext& other) const {
        return this == &other || (min_poly_ == other.min_poly_ && low_ <= other.high_ && other.low_ <= high_);
    }

private:
    void validate_isolation() {
        if (low_ >= high_) fail(ErrorCode::InvalidField, "isolating interval must satisfy low < high");
        const Polynomial p = Polynomial::from_integers(min_poly_);
        if (gcd(p, p.derivative()).degree() > 0) fail(ErrorCode::InvalidField, "minimal polynomial is not squarefree");
        if (p.eval(high_) == 0 || p.eval(low_) == 0) fail(ErrorCode::InvalidField, "isolating interval endpoint is a root");
        auto chain = sturm_chain(p);
        if (count_roots(chain, low_, high_) != 1) fail(ErrorCode::InvalidField, "interval does not isolate exactly one real root");
        if (low_ < 1) {
            if (p.eval(Rational(1)) == 0 || count_roots(chain, Rational(1), high_) != 1)
                fail(ErrorCode::InvalidField, "beta must exceed 1");
            low_ = 1;
        }
    }

    void build_reduction_table() {
        const std::size_t d = degree();
        if (d < 2) return;
        // x^d = -(m_0 + ... + m_{d-1} x^{d-1}) for the monic modulus.
        std::vector<Rational> cur(d);
        for (std::size_t i = 0; i < d; ++i) cur[i] = -modulus_.coeff(i);
        reduce_.push_back(cur);
        for (std::size_t k = d + 1; k <= 2 * d - 2; ++k) {
            std::vector<Rational> next(d);
            const Rational top = cur[d - 1];
            for (std::size_t i = d - 1; i > 0; --i) next[i] = cur[i - 1];
            next[0] = 0;
            for (std::size_t i = 0; i < d; ++i) next[i] += top * reduce_[0][i];
            reduce_.push_back(next);
            cur = std::move(next);
        }
    }

    std::vector<Integer> min_poly_;
    Rational low_;
    Rational high_;
    Polynomial modulus_;
    std::vector<std::vector<Rational>> reduce_;
    mutable std::mutex mutex_;
    mutable Rational lo_;
    mutable Rational hi_;
};

using ContextPtr = std::shared_ptr<const FieldContext>;

/// An element of Q(beta) in canonical reduced form.
class FieldElement {
public:
    /// The unbound zero; it adopts the context of whatever it is combined with.
    FieldElement() = default;
    FieldElement(ContextPtr ctx, std::vector<Rational> coeffs) : ctx_(std::move(ctx)), c_(std::move(coeffs)) {
        c_.resize(ctx_->degree());
    }
    FieldElement(ContextPtr ctx, const Rational& value) : ctx_(std::move(ctx)), c_(ctx_->degree()) { c_[0] = value; }

    const ContextPtr& context() const { return ctx_; }
    const std::vector<Rational>& coeffs() const { return c_; }
    bool is_zero() const {
        for (const auto& v : c_)
            if (v != 0) return false;
        return true;
    }

    FieldElement operator-() const {
        FieldElement r = *this;
        for (auto& v : r.c_) v = -v;
        return r;
    }
    FieldElement& operator+=(const FieldElement& o) {
        adopt(o);
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
        return *this;
    }
    FieldElement& operator-=(const FieldElement& o) {
        adopt(o);
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
        return *this;
    }
    FieldElement& operator*=(const FieldElement& o) {
        adopt(o);
        if (o.ctx_ == nullptr) {
            for (auto& v : c_) v = 0;
            return *this;
        }
        const std::size_t d = ctx_->degree();
        if (d == 1) {
            c_[0] *= o.c_[0];
            return *this;
        }
        std::vector<Rational> prod(2 * d - 1);
        for (std::size_t i = 0; i < d; ++i) {
            if (c_[i] == 0) continue;
            for (std::size_t j = 0; j < d; ++j) prod[i + j] += c_[i] * o.c_[j];
        }
        const auto& table = ctx_->reduction_table();
        for (std::size_t k = d; k < prod.size(); ++k) {
            if (prod[k] == 0) continue;
            for (std::size_t i = 0; i < d; ++i) prod[i] += prod[k] * table[k - d][i];
        }
        prod.resize(d);
        c_ = std::move(prod);
        return *this;
    }
    FieldElement& operator/=(const FieldElement& o) { return *this *= o.inverse(); }

    friend FieldElement operator+(FieldElement a, const FieldElement& b) { return a += b; }
    friend FieldElement operator-(FieldElement a, const FieldElement& b) { return a -= b; }
    friend FieldElement operator*(FieldElement a, const FieldElement& b) { return a *= b; }
    friend FieldElement operator/(FieldElement a, const FieldElement& b) { return a /= b; }
    friend bool operator==(const FieldElement& a, const FieldElement& b) {
        if (a.ctx_ && b.ctx_) check_same(a, b);
        const std::size_t n = std::max(a.c_.size(), b.c_.size());
        for (std::size_t i = 0; i < n; ++i) {
            Rational x = i < a.c_.size() ? a.c_[i] : Rational(0);
            Rational y = i < b.c_.size() ? b.c_[i] : Rational(0);
            if (x != y) return false;
        }
        return true;
    }

    FieldElement inverse() const {
        if (is_zero()) fail(ErrorCode::DivisionByZero, "inverse of zero");
        const std::size_t d = ctx_->degree();
        if (d == 1) return FieldElement(ctx_, Rational(1) / c_[0]);
        // Extended Euclid: s*a + t*m = g with g a nonzero constant.
        Polynomial r0 = ctx_->modulus(), r1(c_);
        Polynomial s0, s1 = Polynomial::constant(1);
        while (r1.degree() > 0) {
            auto [q, r] = r0.divmod(r1);
            Polynomial s2 = s0 - q * s1;
            r0 = std::move(r1);
            r1 = std::move(r);
            s0 = std::move(s1);
            s1 = std::move(s2);
        }
        if (r1.is_zero()) fail(ErrorCode::DivisionByZero, "element is a zero divisor; minimal polynomial reducible");
        Polynomial inv = (Rational(1) / r1.coeff(0)) * s1;
        std::vector<Rational> coeffs(inv.coeffs());
        return FieldElement(ctx_, std::move(coeffs));
    }

    /// Rational enclosure [lo, hi] of the value at beta for the given enclosure of beta (beta > 0).
    std::pair<Rational, Rational> evaluate(const Rational& beta_lo, const Rational& beta_hi) const {
        Rational lo = 0, hi = 0;
        Rational plo = 1, phi = 1;
        for (std::size_t k = 0; k < c_.size(); ++k) {
            if (c_[k] > 0) {
                lo += c_[k] * plo;
                hi += c_[k] * phi;
            } else if (c_[k] < 0) {
                lo += c_[k] * phi;
                hi += c_[k] * plo;
            }
            plo *= beta_lo;
            phi *= beta_hi;
        }
        return {lo, hi};
    }

    /// Sign of the value at beta, decided exactly.
    int sign() const {
        if (is_zero()) return 0;
        if (ctx_->is_rational()) return c_[0].sign();
        long budget = kMaxBisections;
        Rational width = pow2(-40);
        for (;;) {
            auto [blo, bhi] = ctx_->enclosure(width, budget);
            auto [lo, hi] = evaluate(blo, bhi);
            if (lo > 0) return 1;
            if (hi < 0) return -1;
            width /= Rational(1 << 16);
        }
    }

    /// Rational approximation with |returned - value| <= error <= precision.
    std::pair<Rational, Rational> approximate(const Rational& precision) const {
        if (is_zero()) return {Rational(0), Rational(0)};
        if (ctx_->is_rational()) return {c_[0] * 1, Rational(0)};
        long budget = kMaxBisections;
        Rational width = pow2(-40);
        for (;;) {
            auto [blo, bhi] = ctx_->enclosure(width, budget);
            auto [lo, hi] = evaluate(blo, bhi);
            if (hi - lo <= 2 * precision) return {(lo + hi) / 2, (hi - lo) / 2};
            width /= Rational(1 << 16);
        }
    }

    double to_double() const {
        if (is_zero()) return 0.0;
        if (ctx_->is_rational()) return projdim::to_double(c_[0]);
        auto [lo, hi] = approximate(pow2(-64));
        (void)hi;
        return projdim::to_double(lo);
    }

private:
    static void check_same(const FieldElement& a, const FieldElement& b) {
        if (a.ctx_ != b.ctx_ && !a.ctx_->same_field(*b.ctx_)) fail(ErrorCode::MixedContexts, "elements belong to different fields");
    }
    void adopt(const FieldElement& o) {
        if (o.ctx_ == nullptr) return;
        if (ctx_ == nullptr) {
            ctx_ = o.ctx_;
            c_.assign(ctx_->degree(), Rational(0));
            return;
        }
        check_same(*this, o);
    }

    ContextPtr ctx_;
    std::vector<Rational> c_;
};

}  // namespace projdim
