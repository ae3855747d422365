#pragma once

/**
 * @file dimension.hpp
 * @brief Similarity-dimension solvers and the dimension bracket type.
 */

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "projdim/count_series.hpp"

namespace projdim {

enum class LowerMethod { OscExact, VitaliSubsystem, Truncation, FiniteType, None };
enum class UpperMethod { SimilarityDimension, GfExact, TailBounded, FiniteType, Trivial };

inline const char* to_string(LowerMethod m) {
    switch (m) {
    case LowerMethod::OscExact: return "OscExact";
    case LowerMethod::VitaliSubsystem: return "VitaliSubsystem";
    case LowerMethod::Truncation: return "Truncation";
    case LowerMethod::FiniteType: return "FiniteType";
    case LowerMethod::None: return "None";
    }
    return "?";
}
inline const char* to_string(UpperMethod m) {
    switch (m) {
    case UpperMethod::SimilarityDimension: return "SimilarityDimension";
    case UpperMethod::GfExact: return "GfExact";
    case UpperMethod::TailBounded: return "TailBounded";
    case UpperMethod::FiniteType: return "FiniteType";
    case UpperMethod::Trivial: return "Trivial";
    }
    return "?";
}

struct DimensionBracket {
    double lower = 0.0;
    double lower_error = 0.0;
    double upper = 1.0;
    double upper_error = 0.0;
    LowerMethod lower_method = LowerMethod::None;
    UpperMethod upper_method = UpperMethod::Trivial;
    bool collapsed() const { return lower_method != LowerMethod::None && upper - lower <= lower_error + upper_error + 1e-12; }
};

inline constexpr double kDimensionTolerance = 1e-9;
inline constexpr double kFactorTolerance = 1e-12;

/// Root of a strictly decreasing function F with F(lo) >= 1 >= F(hi), to width tol.
inline std::pair<double, double> bisect_decreasing(const std::function<long double(double)>& F, double lo, double hi, double tol) {
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (F(mid) >= 1.0L)
            lo = mid;
        else
            hi = mid;
    }
    return {lo, hi};
}

/// Root s of sum_i count_i * beta^(-len_i s) = 1 for finitely many terms.
inline std::pair<double, double> solve_length_equation(const std::map<long, long double>& counts, double beta, double tol) {
    long double total = 0;
    for (auto [l, c] : counts) total += c;
    if (total <= 0) fail(ErrorCode::EmptyCounts, "no terms in the similarity equation");
    const long double lb = std::log(static_cast<long double>(beta));
    auto F = [&](double s) {
        long double acc = 0;
        for (auto [l, c] : counts) acc += c * std::exp(-static_cast<long double>(l) * s * lb);
        return acc;
    };
    if (total <= 1.0L) return {0.0, 0.0};
    double hi = 1.0;
    while (F(hi) > 1.0L) hi *= 2;
    return bisect_decreasing(F, 0.0, hi, tol);
}

/// Dimension of a finite self-similar set with ratios beta^-n_i.
inline double self_similar_dimension(const std::vector<long>& exponents, double beta, double tol = kFactorTolerance) {
    std::map<long, long double> counts;
    for (long n : exponents) counts[n] += 1;
    auto [lo, hi] = solve_length_equation(counts, beta, tol);
    return 0.5 * (lo + hi);
}

template <class V>
double self_similar_dimension(const IfsSpec<V>& ifs, double beta, double tol = kFactorTolerance) {
    std::vector<long> e;
    for (const auto& m : ifs.maps) e.push_back(m.n);
    return self_similar_dimension(e, beta, tol);
}

enum class SimilarityMode { Truncated, TailBounded };

struct SimilarityResult {
    double lower = 0.0;  ///< root of the partial sum (an under-estimate of s0)
    double upper = 0.0;  ///< root with the tail majorant (TailBounded only; else equals lower)
    bool underestimate = true;
    SimilarityMode mode = SimilarityMode::Truncated;
};

inline SimilarityResult similarity_dimension(const CountSeries& cs, double beta, SimilarityMode mode, double tol = kDimensionTolerance) {
    std::map<long, long double> partial;
    for (long l = 1; l <= cs.lmax; ++l) {
        const auto& c = cs.counts[static_cast<std::size_t>(l)];
        if (c != 0) partial[l] = c.convert_to<long double>();
    }
    if (partial.empty()) fail(ErrorCode::EmptyCounts, "no Matchings up to the length cap");
    SimilarityResult r;
    r.mode = mode;
    auto [plo, phi] = solve_length_equation(partial, beta, tol);
    r.lower = plo;
    r.upper = phi;
    if (mode == SimilarityMode::Truncated) return r;

    if (cs.lambda_lo >= beta) fail(ErrorCode::DivergentTail, "count growth rate is not below beta");
    if (!cs.majorant) fail(ErrorCode::CertificateUnavailable, "no certified tail majorant: " + cs.majorant_note);
    const long double K = to_double(cs.majorant->K) * (1 + 1e-15L);
    const long double mu = to_double(cs.majorant->mu) * (1 + 1e-15L);
    const long n = cs.lmax / cs.unit;
    const long double lb = std::log(static_cast<long double>(beta));
    auto Fup = [&](double s) -> long double {
        long double acc = 0;
        for (auto [l, c] : partial) acc += c * std::exp(-static_cast<long double>(l) * s * lb);
        if (K == 0) return acc;
        const long double z = std::exp(-static_cast<long double>(cs.unit) * s * lb);
        if (mu * z >= 1) return std::numeric_limits<long double>::infinity();
        return acc + K * z * std::pow(mu * z, static_cast<long double>(n)) / (1 - mu * z);
    };
    double hi = std::max(1.0, phi);
    int guard = 0;
    while (Fup(hi) > 1.0L) {
        hi *= 2;
        if (++guard > 10) fail(ErrorCode::DivergentTail, "tail majorant does not fall below 1");
    }
    auto [ulo, uhi] = bisect_decreasing(Fup, plo, hi, tol);
    (void)ulo;
    r.upper = uhi;
    r.underestimate = false;
    return r;
}

struct GfRoot {
    Rational y_lo;  ///< bracket on y* = beta^(-unit s)
    Rational y_hi;
    double s = 0.0;
    double s_lo = 0.0;
    double s_hi = 0.0;
    long unit = 1;
    std::vector<Integer> poly_y;  ///< primitive integer polynomial Q - P, root y*
    std::vector<Integer> poly_z;  ///< reversed, root 1/y*
    std::vector<Integer> poly_x;  ///< root beta^s
};

/// Root of C(y) = 1 on (0, min(1, radius)) from the exact generating function.
inline GfRoot solve_gf_dimension(const CountSeries& cs, double beta) {
    Polynomial D = cs.denominator - cs.numerator;
    if (D.degree() < 1) fail(ErrorCode::NoRootInDomain, "generating function is constant");
    auto root = smallest_positive_root(D, pow2(-64));
    if (!root) fail(ErrorCode::NoRootInDomain, "C(y) never reaches 1");
    if (root->first >= 1) fail(ErrorCode::NoRootInDomain, "C(y) reaches 1 only beyond y = 1");
    if (cs.radius) {
        // The root must lie strictly inside the disc of convergence.
        if (root->second > cs.radius->first) {
            auto tighter = smallest_positive_root(D, pow2(-120));
            auto rad = smallest_positive_root(cs.denominator, pow2(-120));
            if (!tighter || !rad || tighter->second > rad->first) fail(ErrorCode::NoRootInDomain, "C(y) reaches its pole before 1");
            root = tighter;
        }
    }
    GfRoot g;
    g.unit = cs.unit;
    g.y_lo = root->first;
    g.y_hi = std::min(root->second, Rational(1));
    const double lb = std::log(beta) * static_cast<double>(cs.unit);
    const double ylo = to_double(g.y_lo), yhi = to_double(g.y_hi);
    g.s_lo = ylo > 0 ? -std::log(yhi) / lb : 0.0;
    g.s_hi = -std::log(ylo) / lb;
    g.s = -std::log(0.5 * (ylo + yhi)) / lb;
    g.poly_y = D.primitive();
    Polynomial z = D.reversed();
    g.poly_z = z.primitive();
    g.poly_x = z.substitute_power(static_cast<std::size_t>(cs.unit)).primitive();
    return g;
}

/// Integer polynomial to text in the given variable.
inline std::string polynomial_text(const std::vector<Integer>& c, const std::string& var) {
    std::vector<Rational> q(c.begin(), c.end());
    return Polynomial(q).to_string(var);
}

}  // namespace projdim
