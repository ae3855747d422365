#pragma once

/**
 * @file systems.hpp
 * @brief Maps x -> beta^-n x + a, their block coding, similitude algebra,
 * projection reduction and attractor hulls.
 */

#include <cmath>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include "projdim/scalar.hpp"

namespace projdim {

template <class V>
struct MapSpec {
    long n = 1;  ///< ratio is beta^-n
    V a{};
};

template <class V>
struct IfsSpec {
    std::vector<MapSpec<V>> maps;
};

/// A digit word of the given length; omitted positions hold 0.
template <class V>
struct Block {
    long length = 0;
    std::vector<std::pair<long, V>> digits;  ///< (position in 1..length, value), increasing positions
};

/// x -> beta^-length x + t
template <class V>
struct Similitude {
    long length = 0;
    V t{};
};

template <class V>
struct Interval {
    V lo{};
    V hi{};
};

/// Slope(s) for theta != pi/2, VerticalAxis for theta = pi/2.
template <class V>
struct ProjectionForm {
    bool vertical = false;
    V slope{};
};

template <ScalarField F, class V = typename F::value_type>
void validate(const F&, const IfsSpec<V>& ifs) {
    if (ifs.maps.empty()) fail(ErrorCode::Config, "an IFS needs at least one map");
    for (const auto& m : ifs.maps)
        if (m.n < 1) fail(ErrorCode::Config, "map exponents must be positive integers");
}

template <ScalarField F, class V = typename F::value_type>
Block<V> block_of_map(const F& f, const MapSpec<V>& m) {
    Block<V> b{m.n, {}};
    V digit = f.beta_pow(m.n) * m.a;
    if (f.sign(digit) != 0) b.digits.emplace_back(m.n, digit);
    return b;
}

/// Sum of d_i beta^-i.
template <ScalarField F, class V = typename F::value_type>
V block_value(const F& f, const Block<V>& b) {
    V v = f.zero();
    for (const auto& [pos, d] : b.digits) v = v + d * f.beta_pow(-pos);
    return v;
}

template <ScalarField F, class V = typename F::value_type>
Similitude<V> similitude_of_block(const F& f, const Block<V>& b) {
    return {b.length, block_value(f, b)};
}

template <ScalarField F, class V = typename F::value_type>
Similitude<V> similitude_of_map(const F&, const MapSpec<V>& m) {
    return {m.n, m.a};
}

template <ScalarField F, class V = typename F::value_type>
std::vector<Block<V>> scale_blocks(const F& f, const std::vector<Block<V>>& blocks, const V& s) {
    std::vector<Block<V>> out;
    out.reserve(blocks.size());
    for (const auto& b : blocks) {
        Block<V> c{b.length, {}};
        for (const auto& [pos, d] : b.digits) {
            V v = d * s;
            if (f.sign(v) != 0) c.digits.emplace_back(pos, v);
        }
        out.push_back(std::move(c));
    }
    return out;
}

/// Block concatenation A*B.
template <class V>
Block<V> concat(const Block<V>& a, const Block<V>& b) {
    Block<V> r = a;
    r.length += b.length;
    for (const auto& [pos, d] : b.digits) r.digits.emplace_back(pos + a.length, d);
    return r;
}

/// Digitwise sum of two blocks of equal length.
template <ScalarField F, class V = typename F::value_type>
Block<V> digit_sum(const F& f, const Block<V>& a, const Block<V>& b) {
    Block<V> r{std::max(a.length, b.length), {}};
    std::size_t i = 0, j = 0;
    while (i < a.digits.size() || j < b.digits.size()) {
        if (j == b.digits.size() || (i < a.digits.size() && a.digits[i].first < b.digits[j].first)) {
            r.digits.push_back(a.digits[i++]);
        } else if (i == a.digits.size() || b.digits[j].first < a.digits[i].first) {
            r.digits.push_back(b.digits[j++]);
        } else {
            V v = a.digits[i].second + b.digits[j].second;
            if (f.sign(v) != 0) r.digits.emplace_back(a.digits[i].first, v);
            ++i;
            ++j;
        }
    }
    return r;
}

/// f o g
template <ScalarField F, class V = typename F::value_type>
Similitude<V> compose(const F& field, const Similitude<V>& f, const Similitude<V>& g) {
    return {f.length + g.length, f.t + field.beta_pow(-f.length) * g.t};
}

template <ScalarField F, class V = typename F::value_type>
V apply(const F& field, const Similitude<V>& f, const V& x) {
    return field.beta_pow(-f.length) * x + f.t;
}

template <ScalarField F, class V = typename F::value_type>
Interval<V> image(const F& field, const Similitude<V>& f, const Interval<V>& iv) {
    return {apply(field, f, iv.lo), apply(field, f, iv.hi)};
}

template <ScalarField F, class V = typename F::value_type>
bool equal(const F& field, const Similitude<V>& a, const Similitude<V>& b) {
    return a.length == b.length && field.compare(a.t, b.t) == 0;
}

/// Convex hull of the attractor, from the extreme fixed points.
template <ScalarField F, class V = typename F::value_type>
Interval<V> attractor_hull(const F& f, const IfsSpec<V>& ifs) {
    validate(f, ifs);
    std::optional<V> lo, hi;
    for (const auto& m : ifs.maps) {
        V fixed = m.a / (f.one() - f.beta_pow(-m.n));
        if (!lo || f.compare(fixed, *lo) < 0) lo = fixed;
        if (!hi || f.compare(fixed, *hi) > 0) hi = fixed;
    }
    return {*lo, *hi};
}

/// Hull of K1 + s K2 given the factor hulls.
template <ScalarField F, class V = typename F::value_type>
Interval<V> sumset_hull(const F& f, const Interval<V>& h1, const Interval<V>& h2, const V& s) {
    if (f.sign(s) >= 0) return {h1.lo + s * h2.lo, h1.hi + s * h2.hi};
    return {h1.lo + s * h2.hi, h1.hi + s * h2.lo};
}

template <class V>
ProjectionForm<V> reduce_projection_slope(const V& s) {
    return {false, s};
}

/// Angle in radians, theta in [0, pi). Within `tol` of pi/2 counts as vertical.
inline ProjectionForm<double> reduce_projection_angle(double theta, double tol = kDefaultFloatTolerance) {
    if (!std::isfinite(theta) || theta < 0.0 || theta >= std::numbers::pi)
        fail(ErrorCode::AngleOutOfRange, "theta must lie in [0, pi)");
    if (std::fabs(theta - std::numbers::pi / 2) <= tol) return {true, 0.0};
    return {false, std::tan(theta)};
}

}  // namespace projdim
