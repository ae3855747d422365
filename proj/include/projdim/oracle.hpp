#pragma once

/**
 * @file oracle.hpp
 * @brief Brute-force attractor sampling and box counting in double precision.
 *
 * Independent of the exact pipeline: the sumset is sampled from the two
 * factor IFSs directly, never from the Matching system.
 */

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "projdim/errors.hpp"

namespace projdim {

struct RealMap {
    double ratio = 0.5;
    double shift = 0.0;
};

struct SampleSet {
    std::vector<double> points;  ///< sorted
    double eps = 0.0;            ///< two-sided net resolution
    double hull_lo = 0.0;
    double hull_hi = 0.0;
    std::string source;
};

struct OracleOptions {
    std::size_t budget = 50'000'000;
};

/// Maps x -> beta^-n x + a given as (n, a) in doubles.
inline std::vector<RealMap> real_maps(const std::vector<std::pair<long, double>>& maps, double beta) {
    std::vector<RealMap> r;
    for (auto [n, a] : maps) r.push_back({std::pow(beta, -static_cast<double>(n)), a});
    return r;
}

/// eps-net of the attractor of x -> beta^-n_i x + a_i.
inline SampleSet sample_attractor(const std::vector<std::pair<long, double>>& maps, double beta, double eps, const OracleOptions& opt = {}) {
    if (maps.empty()) fail(ErrorCode::Config, "no maps to sample");
    if (!(eps > 0)) fail(ErrorCode::Config, "eps must be positive");
    double lo = 0, hi = 0;
    bool first = true;
    for (auto [n, a] : maps) {
        double fixed = a / (1 - std::pow(beta, -static_cast<double>(n)));
        if (first || fixed < lo) lo = fixed;
        if (first || fixed > hi) hi = fixed;
        first = false;
    }
    const double width = hi - lo, mid = 0.5 * (lo + hi);
    SampleSet out;
    out.eps = eps;
    out.hull_lo = lo;
    out.hull_hi = hi;
    out.source = "attractor";
    // Leaf exponent: first n with beta^-n * width <= eps.
    long leaf = 0;
    while (std::pow(beta, -static_cast<double>(leaf)) * width > eps * (1 + 1e-12)) ++leaf;

    std::map<long, std::vector<double>> buckets;  // exponent -> cylinder translations
    buckets[0].push_back(0.0);
    std::size_t work = 0;
    std::vector<double> pts;
    while (!buckets.empty()) {
        auto node = buckets.begin();
        const long n = node->first;
        std::vector<double> ts = std::move(node->second);
        buckets.erase(node);
        const double scale = std::pow(beta, -static_cast<double>(n));
        if (n >= leaf) {
            for (double t : ts) pts.push_back(t + scale * mid);
            continue;
        }
        std::sort(ts.begin(), ts.end());
        const double merge = 0.25 * eps * (1 - 1 / beta) * std::pow(beta, static_cast<double>(n - leaf));
        std::vector<double> kept;
        for (double t : ts)
            if (kept.empty() || t - kept.back() > merge) kept.push_back(t);
        for (double t : kept)
            for (auto [m, a] : maps) {
                buckets[n + m].push_back(t + scale * a);
                if (++work > opt.budget) fail(ErrorCode::BudgetExceeded, "attractor sampling exceeded its budget");
            }
    }
    std::sort(pts.begin(), pts.end());
    for (double p : pts)
        if (out.points.empty() || p - out.points.back() > 0.25 * eps) out.points.push_back(p);
    return out;
}

/// eps-net of P + s Q.
inline SampleSet sum_samples(const SampleSet& p, const SampleSet& q, double s, const OracleOptions& opt = {}) {
    const double combined = p.eps + std::fabs(s) * q.eps;
    SampleSet out;
    out.source = "sumset";
    out.hull_lo = p.hull_lo + (s >= 0 ? s * q.hull_lo : s * q.hull_hi);
    out.hull_hi = p.hull_hi + (s >= 0 ? s * q.hull_hi : s * q.hull_lo);
    if (s == 0.0 || q.points.size() == 1) {
        out.eps = p.eps + std::fabs(s) * q.eps;
        for (double x : p.points) out.points.push_back(x + s * q.points.front());
        return out;
    }
    if (p.points.size() * q.points.size() > opt.budget) fail(ErrorCode::BudgetExceeded, "sumset sampling exceeded its budget");
    const double cell = 0.5 * combined;
    const double base = out.hull_lo - combined;
    const double span = out.hull_hi - out.hull_lo + 2 * combined;
    const std::size_t cells = static_cast<std::size_t>(std::ceil(span / cell)) + 1;
    if (cells > 4 * opt.budget) fail(ErrorCode::BudgetExceeded, "sumset grid exceeded its budget");
    std::vector<char> hit(cells, 0);
    for (double x : p.points)
        for (double y : q.points) {
            double v = x + s * y;
            auto c = static_cast<std::size_t>(std::max(0.0, std::floor((v - base) / cell)));
            if (c < cells) hit[c] = 1;
        }
    for (std::size_t c = 0; c < cells; ++c)
        if (hit[c]) out.points.push_back(base + (static_cast<double>(c) + 0.5) * cell);
    out.eps = combined * 1.25;
    return out;
}

/// eps-net of K1 + s K2 from pairs of factor cylinders, refining the wider one.
/// Unlike sum_samples it never forms the product of two nets.
inline SampleSet sample_sumset(const std::vector<std::pair<long, double>>& maps1, const std::vector<std::pair<long, double>>& maps2, double beta, double s,
                               double eps, const OracleOptions& opt = {}) {
    if (maps1.empty() || maps2.empty()) fail(ErrorCode::Config, "no maps to sample");
    if (!(eps > 0)) fail(ErrorCode::Config, "eps must be positive");
    auto hull = [&](const std::vector<std::pair<long, double>>& maps) {
        double lo = 0, hi = 0;
        bool first = true;
        for (auto [n, a] : maps) {
            double fixed = a / (1 - std::pow(beta, -static_cast<double>(n)));
            if (first || fixed < lo) lo = fixed;
            if (first || fixed > hi) hi = fixed;
            first = false;
        }
        return std::pair<double, double>{lo, hi};
    };
    const auto [lo1, hi1] = hull(maps1);
    const auto [lo2, hi2] = hull(maps2);
    const double w1 = hi1 - lo1, w2 = std::fabs(s) * (hi2 - lo2);
    const double mid1 = 0.5 * (lo1 + hi1), mid2 = 0.5 * (lo2 + hi2);
    SampleSet out;
    out.eps = eps;
    out.source = "sumset";
    out.hull_lo = lo1 + (s >= 0 ? s * lo2 : s * hi2);
    out.hull_hi = hi1 + (s >= 0 ? s * hi2 : s * lo2);

    // Each refinement shrinks w1 + w2 by at least (1 + 1/beta) / 2, which bounds the path depth.
    const double q = 0.5 * (1 + 1 / beta);
    const double steps = std::max(1.0, std::ceil(std::log(std::max(w1 + w2, eps) / eps) / std::log(1 / q)) + 1);
    const double merge = 0.25 * eps / steps;

    std::map<std::pair<long, long>, std::vector<double>> buckets;
    buckets[{0, 0}].push_back(0.0);
    std::size_t work = 0;
    std::vector<double> pts;
    while (!buckets.empty()) {
        auto node = buckets.begin();
        const auto [n1, n2] = node->first;
        std::vector<double> ts = std::move(node->second);
        buckets.erase(node);
        const double r1 = std::pow(beta, -static_cast<double>(n1)), r2 = std::pow(beta, -static_cast<double>(n2));
        if (r1 * w1 + r2 * w2 <= eps) {
            for (double t : ts) pts.push_back(t + r1 * mid1 + s * r2 * mid2);
            continue;
        }
        std::sort(ts.begin(), ts.end());
        std::vector<double> kept;
        for (double t : ts)
            if (kept.empty() || t - kept.back() > merge) kept.push_back(t);
        const bool first = r1 * w1 >= r2 * w2;
        for (double t : kept)
            for (auto [m, a] : first ? maps1 : maps2) {
                if (first)
                    buckets[{n1 + m, n2}].push_back(t + r1 * a);
                else
                    buckets[{n1, n2 + m}].push_back(t + s * r2 * a);
                if (++work > opt.budget) fail(ErrorCode::BudgetExceeded, "sumset sampling exceeded its budget");
            }
    }
    std::sort(pts.begin(), pts.end());
    for (double p : pts)
        if (out.points.empty() || p - out.points.back() > 0.25 * eps) out.points.push_back(p);
    return out;
}

struct BoxCountFit {
    std::vector<double> scales;  ///< decreasing box sizes
    std::vector<double> counts;  ///< occupied boxes per scale
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    int j_min = 0;
    int j_max = 0;

    std::string csv() const {
        std::string s = "scale,count\n";
        char buf[64];
        for (std::size_t i = 0; i < scales.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g,%.0f\n", scales[i], counts[i]);
            s += buf;
        }
        return s;
    }
};

struct BoxWindow {
    int j_min = 4;
    int j_max = 14;
    int min_scales = 6;
};

/// Least-squares slope of log N(e) against log(1/e), boxes anchored at the hull's left end.
inline BoxCountFit box_dimension_estimate(const SampleSet& p, const BoxWindow& window = {}) {
    const double width = p.hull_hi - p.hull_lo;
    if (!(width > 0)) fail(ErrorCode::WindowTooFine, "degenerate hull");
    int j_max = window.j_max;
    while (j_max >= window.j_min && width / std::ldexp(1.0, j_max) < 4 * p.eps) --j_max;
    if (j_max - window.j_min + 1 < window.min_scales) fail(ErrorCode::WindowTooFine, "fewer than " + std::to_string(window.min_scales) + " usable scales");
    BoxCountFit fit;
    fit.j_min = window.j_min;
    fit.j_max = j_max;
    std::vector<double> xs, ys;
    for (int j = window.j_min; j <= j_max; ++j) {
        const double e = width / std::ldexp(1.0, j);
        long long last = -1, count = 0;
        for (double x : p.points) {
            long long box = static_cast<long long>(std::floor((x - p.hull_lo) / e));
            if (box != last) {
                ++count;
                last = box;
            }
        }
        fit.scales.push_back(e);
        fit.counts.push_back(static_cast<double>(count));
        xs.push_back(std::log(1 / e));
        ys.push_back(std::log(static_cast<double>(count)));
    }
    const double n = static_cast<double>(xs.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r2 = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return fit;
}

}  // namespace projdim
