#pragma once

/**
 * @file example8.hpp
 * @brief The two-map fixture K = attractor of {x/b^4, (x + b^8 - 1)/b^8},
 * used with K1 = K2 = K, and the separation thresholds for its Matching system.
 *
 * With A = b^8 - 1 and B = sA the first Matchings are f = (0000),
 * h1 = (0000000A), h2 = (0000000B), g = (0000000C), phi1 = (0000000B000A)
 * and phi2 = (0000000A000B).
 */

#include <string>
#include <vector>

#include "projdim/matcher.hpp"

namespace projdim::example8 {

template <ScalarField F, class V = typename F::value_type>
IfsSpec<V> ifs(const F& f) {
    V A = f.beta_pow(8) - f.one();
    return {{{4, f.zero()}, {8, A * f.beta_pow(-8)}}};
}

template <ScalarField F, class V = typename F::value_type>
bool matches(const F& f, const IfsSpec<V>& s) {
    IfsSpec<V> e = ifs(f);
    if (s.maps.size() != 2) return false;
    for (std::size_t i = 0; i < 2; ++i)
        if (s.maps[i].n != e.maps[i].n || f.compare(s.maps[i].a, e.maps[i].a) != 0) return false;
    return true;
}

/// The six thresholds in the order the separation argument chains them:
/// b^4/(b^8-b^4-1), b^8/(b^8-2), (b^12-b^8+1)/(b^12-b^8-b^4),
/// (b^12-2b^4)/(b^12-b^8+1), b^4-b^-4-1, b^8-b^4-1.
template <ScalarField F, class V = typename F::value_type>
std::vector<V> thresholds(const F& f) {
    const V one = f.one(), b4 = f.beta_pow(4), b8 = f.beta_pow(8), b12 = f.beta_pow(12);
    return {
        b4 / (b8 - b4 - one),
        b8 / (b8 - f.from_int(2)),
        (b12 - b8 + one) / (b12 - b8 - b4),
        (b12 - f.from_int(2) * b4) / (b12 - b8 + one),
        b4 - f.beta_pow(-4) - one,
        b8 - b4 - one,
    };
}

inline const std::vector<std::string>& threshold_names() {
    static const std::vector<std::string> names{
        "b^4/(b^8-b^4-1)", "b^8/(b^8-2)", "(b^12-b^8+1)/(b^12-b^8-b^4)", "(b^12-2*b^4)/(b^12-b^8+1)", "b^4-b^-4-1", "b^8-b^4-1",
    };
    return names;
}

/// The alternative upper endpoint (b^8-2b^4)/(b^12-b^8+1) that appears in one restatement.
template <ScalarField F, class V = typename F::value_type>
V alternative_upper_endpoint(const F& f) {
    return (f.beta_pow(8) - f.from_int(2) * f.beta_pow(4)) / (f.beta_pow(12) - f.beta_pow(8) + f.one());
}

/// Slope at which h2 o g = phi2 o f.
template <ScalarField F, class V = typename F::value_type>
V special_slope(const F& f) {
    return (f.beta_pow(8) - f.one()) / (f.beta_pow(8) - f.beta_pow(4) + f.one());
}

/// Interval between the third and fourth thresholds, the one quoted for the OSC regime.
template <ScalarField F, class V = typename F::value_type>
Interval<V> stated_interval(const F& f) {
    auto t = thresholds(f);
    return {t[2], t[3]};
}

/// Slopes where all six pairwise separation statements hold simultaneously.
template <ScalarField F, class V = typename F::value_type>
Interval<V> separation_window(const F& f) {
    auto t = thresholds(f);
    return {max_of(f, max_of(f, t[0], t[1]), t[2]), min_of(f, min_of(f, t[3], t[4]), t[5])};
}

template <ScalarField F, class V = typename F::value_type>
V midpoint_slope(const F& f) {
    auto iv = stated_interval(f);
    return (iv.lo + iv.hi) / f.from_int(2);
}

struct ChainLink {
    std::size_t left = 0;
    std::size_t right = 0;
    bool holds = false;
    double left_value = 0.0;
    double right_value = 0.0;
};

/// Exact check of t_i < t_{i+1} for consecutive thresholds.
template <ScalarField F>
std::vector<ChainLink> inequality_chain(const F& f) {
    auto t = thresholds(f);
    std::vector<ChainLink> links;
    for (std::size_t i = 0; i + 1 < t.size(); ++i)
        links.push_back({i, i + 1, f.compare(t[i], t[i + 1]) < 0, f.to_double(t[i]), f.to_double(t[i + 1])});
    return links;
}

/// The ordering b^8/(b^8-2) < special slope < third threshold < fourth threshold.
template <ScalarField F, class V = typename F::value_type>
std::vector<ChainLink> special_chain(const F& f) {
    auto t = thresholds(f);
    std::vector<V> v{t[1], special_slope(f), t[2], t[3]};
    std::vector<ChainLink> links;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) links.push_back({i, i + 1, f.compare(v[i], v[i + 1]) < 0, f.to_double(v[i]), f.to_double(v[i + 1])});
    return links;
}

/// Named first Matchings as blocks, for locating them in a MatchingSet.
template <ScalarField F, class V = typename F::value_type>
struct NamedMaps {
    Similitude<V> f_map, h1, h2, g, phi1, phi2;
};

template <ScalarField F, class V = typename F::value_type>
NamedMaps<F> named_maps(const F& f, const V& s) {
    const V A = f.beta_pow(8) - f.one();
    const V B = s * A;
    NamedMaps<F> m;
    m.f_map = {4, f.zero()};
    m.h1 = {8, A * f.beta_pow(-8)};
    m.h2 = {8, B * f.beta_pow(-8)};
    m.g = {8, (A + B) * f.beta_pow(-8)};
    m.phi1 = {12, B * f.beta_pow(-8) + A * f.beta_pow(-12)};
    m.phi2 = {12, A * f.beta_pow(-8) + B * f.beta_pow(-12)};
    return m;
}

}  // namespace projdim::example8
