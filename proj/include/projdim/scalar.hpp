#pragma once

/**
 * @file scalar.hpp
 * @brief The two scalar backends shared by every algorithm.
 *
 * ExactField wraps Q(beta) with decidable comparison; FloatField uses doubles
 * with a global relative tolerance. Algorithms are templated on a type
 * satisfying ScalarField.
 */

#include <algorithm>
#include <cmath>
#include <concepts>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "projdim/field.hpp"

namespace projdim {

template <class F>
concept ScalarField = requires(const F& f, const typename F::value_type& a, long n, const Rational& q) {
    { f.zero() } -> std::convertible_to<typename F::value_type>;
    { f.one() } -> std::convertible_to<typename F::value_type>;
    { f.beta() } -> std::convertible_to<typename F::value_type>;
    { f.beta_pow(n) } -> std::convertible_to<typename F::value_type>;
    { f.from_rational(q) } -> std::convertible_to<typename F::value_type>;
    { f.compare(a, a) } -> std::same_as<int>;
    { f.to_double(a) } -> std::same_as<double>;
    { F::exact } -> std::convertible_to<bool>;
    { a + a } -> std::convertible_to<typename F::value_type>;
    { a - a } -> std::convertible_to<typename F::value_type>;
    { a * a } -> std::convertible_to<typename F::value_type>;
    { a / a } -> std::convertible_to<typename F::value_type>;
    { -a } -> std::convertible_to<typename F::value_type>;
};

class ExactField {
public:
    using value_type = FieldElement;
    static constexpr bool exact = true;

    explicit ExactField(ContextPtr ctx) : ctx_(std::move(ctx)), cache_(std::make_shared<PowerCache>()) {
        cache_->pos.push_back(one());
        cache_->pos.push_back(FieldElement(ctx_, beta_coeffs()));
    }

    const ContextPtr& context() const { return ctx_; }

    FieldElement zero() const { return FieldElement(ctx_, Rational(0)); }
    FieldElement one() const { return FieldElement(ctx_, Rational(1)); }
    FieldElement from_rational(const Rational& q) const { return FieldElement(ctx_, q); }
    FieldElement from_int(long v) const { return FieldElement(ctx_, Rational(v)); }
    FieldElement beta() const { return beta_pow(1); }

    /// beta^n for any integer n, cached.
    FieldElement beta_pow(long n) const {
        std::lock_guard<std::mutex> lock(cache_->mutex);
        if (n >= 0) {
            auto& pos = cache_->pos;
            while (pos.size() <= static_cast<std::size_t>(n)) pos.push_back(pos.back() * pos[1]);
            return pos[static_cast<std::size_t>(n)];
        }
        auto& neg = cache_->neg;
        if (neg.empty()) neg.push_back(cache_->pos[1].inverse());
        while (neg.size() < static_cast<std::size_t>(-n)) neg.push_back(neg.back() * neg[0]);
        return neg[static_cast<std::size_t>(-n - 1)];
    }

    int compare(const FieldElement& a, const FieldElement& b) const { return (a - b).sign(); }
    int sign(const FieldElement& a) const { return a.sign(); }
    double to_double(const FieldElement& a) const { return a.to_double(); }

private:
    struct PowerCache {
        std::mutex mutex;
        std::vector<FieldElement> pos;
        std::vector<FieldElement> neg;
    };

    std::vector<Rational> beta_coeffs() const {
        std::vector<Rational> c(ctx_->degree());
        if (ctx_->is_rational())
            c[0] = ctx_->rational_beta();
        else
            c[1] = 1;
        return c;
    }

    ContextPtr ctx_;
    std::shared_ptr<PowerCache> cache_;
};

inline constexpr double kDefaultFloatTolerance = 1e-12;

class FloatField {
public:
    using value_type = double;
    static constexpr bool exact = false;

    explicit FloatField(double beta, double tolerance = kDefaultFloatTolerance) : beta_(beta), tol_(tolerance) {
        if (!(beta > 1.0) || !std::isfinite(beta)) fail(ErrorCode::InvalidField, "beta must be a finite real > 1");
    }

    double zero() const { return 0.0; }
    double one() const { return 1.0; }
    double from_rational(const Rational& q) const { return projdim::to_double(q); }
    double from_int(long v) const { return static_cast<double>(v); }
    double beta() const { return beta_; }
    double beta_pow(long n) const { return std::pow(beta_, static_cast<double>(n)); }
    double tolerance() const { return tol_; }

    /// Values closer than tol * max(1, |a|, |b|) compare equal.
    int compare(double a, double b) const {
        const double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
        if (std::fabs(a - b) <= tol_ * scale) return 0;
        return a < b ? -1 : 1;
    }
    int sign(double a) const { return compare(a, 0.0); }
    double to_double(double a) const { return a; }

private:
    double beta_;
    double tol_;
};

static_assert(ScalarField<ExactField>);
static_assert(ScalarField<FloatField>);

/// Exact comparison, skipped when the cached approximations da, db already separate a and b.
template <ScalarField F>
int compare_with_hint(const F& f, const typename F::value_type& a, double da, const typename F::value_type& b, double db) {
    if constexpr (F::exact) {
        const double gap = 1e-9 * std::max({1.0, std::fabs(da), std::fabs(db)});
        if (da < db - gap) return -1;
        if (da > db + gap) return 1;
    }
    return f.compare(a, b);
}

template <ScalarField F>
bool less(const F& f, const typename F::value_type& a, const typename F::value_type& b) {
    return f.compare(a, b) < 0;
}

template <ScalarField F>
typename F::value_type min_of(const F& f, const typename F::value_type& a, const typename F::value_type& b) {
    return f.compare(b, a) < 0 ? b : a;
}

template <ScalarField F>
typename F::value_type max_of(const F& f, const typename F::value_type& a, const typename F::value_type& b) {
    return f.compare(b, a) > 0 ? b : a;
}

}  // namespace projdim
