#pragma once

/**
 * @file count_series.hpp
 * @brief Per-length Matching counts, their rational generating function, the
 * dominant growth rate, and a certified geometric majorant for the tail.
 *
 * All polynomials are in y = x^unit where unit is the gcd of the block lengths.
 */

#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "projdim/matcher.hpp"
#include "projdim/polynomial.hpp"

namespace projdim {

/// c_{k*unit} <= K * mu^(k-1) for every k beyond the computed counts (k counts units of length).
/// K = 0 means the series is a polynomial already covered by the counts.
struct TailMajorant {
    Rational K = 0;
    Rational mu = 0;
};

struct CountSeries {
    long unit = 1;
    long lmax = 0;
    std::vector<Integer> counts;  ///< counts[l] for l = 0..lmax, original length units
    Polynomial numerator;         ///< reduced P(y)
    Polynomial denominator;       ///< reduced Q(y), Q(0) = 1
    /// Bracket on the radius of convergence in y; absent when C is a polynomial.
    std::optional<std::pair<Rational, Rational>> radius;
    double lambda = 0.0;  ///< growth rate per unit of x-length
    double lambda_lo = 0.0;
    double lambda_hi = 0.0;
    std::optional<TailMajorant> majorant;
    std::string majorant_note;

    /// Count coefficients in units of y.
    std::vector<Integer> unit_counts() const {
        std::vector<Integer> r;
        for (long l = 0; l <= lmax; l += unit) r.push_back(counts[static_cast<std::size_t>(l)]);
        return r;
    }
};

namespace detail {

/// Live nonzero states (can reach 0), as gap values in normalized units.
inline std::vector<long> live_nonzero(const GapAutomaton& a) {
    std::vector<bool> live = coreachable(a);
    std::vector<long> r;
    for (std::size_t i = 0; i < a.states.size(); ++i)
        if (a.states[i] != 0 && live[i]) r.push_back(a.states[i] / a.unit);
    return r;
}

inline Rational round_up(double v) {
    return Rational(std::nextafter(v, std::numeric_limits<double>::infinity()));
}

}  // namespace detail

/// First-return path counts c_l for l <= lmax by dynamic programming.
inline std::vector<Integer> path_counts(const GapAutomaton& a, long lmax) {
    const long u = a.unit;
    const long n = lmax / u;
    std::vector<long> states;
    for (long g : a.states) states.push_back(g / u);
    const std::size_t ns = states.size();
    auto idx = [&](long g) { return static_cast<std::size_t>(std::lower_bound(states.begin(), states.end(), g) - states.begin()); };
    const std::size_t zero = idx(0);
    std::vector<std::vector<Integer>> cur(static_cast<std::size_t>(n) + 1, std::vector<Integer>(ns));
    for (const auto& e : a.start_edges) {
        long p = a.x_lengths[e.x_block] / u;
        if (p <= n) cur[static_cast<std::size_t>(p)][idx(e.to / u)] += 1;
    }
    std::vector<std::vector<std::pair<std::size_t, long>>> out_edges(ns);  // (target, x advance)
    for (const auto& e : a.edges)
        out_edges[idx(e.from / u)].emplace_back(idx(e.to / u), e.side == Side::X ? a.x_lengths[e.block] / u : 0);

    std::vector<Integer> counts(static_cast<std::size_t>(lmax) + 1);
    for (long L = 1; L <= n; ++L) {
        auto& row = cur[static_cast<std::size_t>(L)];
        // Y moves keep the x-length fixed and strictly lower a positive gap.
        for (std::size_t s = ns; s-- > 0;) {
            if (states[s] <= 0 || row[s] == 0) continue;
            for (const auto& [t, adv] : out_edges[s]) row[t] += row[s];
        }
        counts[static_cast<std::size_t>(L * u)] = row[zero];
        for (std::size_t s = 0; s < ns; ++s) {
            if (states[s] >= 0 || row[s] == 0) continue;
            for (const auto& [t, adv] : out_edges[s])
                if (L + adv <= n) cur[static_cast<std::size_t>(L + adv)][t] += row[s];
        }
        row.clear();
        row.shrink_to_fit();
    }
    return counts;
}

/// Generating function P/Q of the first-return paths, reduced, with Q(0) = 1.
inline std::pair<Polynomial, Polynomial> first_return_gf(const GapAutomaton& a) {
    const long u = a.unit;
    std::vector<long> live = detail::live_nonzero(a);
    const std::size_t m = live.size();
    auto pos = [&](long g) -> std::optional<std::size_t> {
        auto it = std::lower_bound(live.begin(), live.end(), g);
        if (it == live.end() || *it != g) return std::nullopt;
        return static_cast<std::size_t>(it - live.begin());
    };
    PolynomialMatrix M(m, std::vector<Polynomial>(m));
    for (std::size_t i = 0; i < m; ++i) M[i][i] = Polynomial::constant(1);
    std::vector<Polynomial> uvec(m), vvec(m);
    Polynomial d;
    for (const auto& e : a.start_edges) {
        Polynomial w = Polynomial::monomial(static_cast<std::size_t>(a.x_lengths[e.x_block] / u));
        if (e.to == 0)
            d += w;
        else if (auto j = pos(e.to / u))
            uvec[*j] += w;
    }
    for (const auto& e : a.edges) {
        auto i = pos(e.from / u);
        if (!i) continue;
        Polynomial w = e.side == Side::X ? Polynomial::monomial(static_cast<std::size_t>(a.x_lengths[e.block] / u)) : Polynomial::constant(1);
        if (e.to == 0) {
            vvec[*i] += w;
        } else if (auto j = pos(e.to / u)) {
            M[*i][*j] -= w;
        }
    }
    Polynomial Q = determinant(M);
    PolynomialMatrix Mv = M;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) Mv[i][j] += vvec[i] * uvec[j];
    Polynomial P = d * Q + determinant(Mv) - Q;
    if (P.is_zero()) return {Polynomial{}, Polynomial::constant(1)};
    Polynomial g = gcd(P, Q);
    P = P.exact_div(g);
    Q = Q.exact_div(g);
    Rational q0 = Q.coeff(0);
    if (q0 == 0) fail(ErrorCode::DivisionByZero, "generating function has a pole at 0");
    return {(Rational(1) / q0) * P, (Rational(1) / q0) * Q};
}

namespace detail {

/// Digit-by-digit automaton on (remaining digits of current X block, of current Y block).
struct UnitStepSystem {
    std::vector<std::pair<long, long>> states;
    std::vector<std::vector<std::pair<std::size_t, long>>> rows;  ///< A as sparse rows (target, multiplicity)
    std::vector<long> start;                                      ///< b
    std::size_t closing = 0;                                      ///< index of (1,1)
    bool has_closing = false;
};

inline UnitStepSystem unit_step_system(const GapAutomaton& a, std::size_t cap) {
    const long u = a.unit;
    std::map<long, long> px, qy;
    for (long v : a.x_lengths) ++px[v / u];
    for (long v : a.y_lengths) ++qy[v / u];
    std::map<std::pair<long, long>, std::size_t> index;
    UnitStepSystem s;
    std::vector<std::map<std::size_t, long>> rows;
    std::vector<std::pair<long, long>> todo;
    auto id = [&](std::pair<long, long> st) {
        auto [it, inserted] = index.emplace(st, s.states.size());
        if (inserted) {
            s.states.push_back(st);
            rows.emplace_back();
            todo.push_back(st);
            if (s.states.size() > cap) fail(ErrorCode::CertificateUnavailable, "unit-step automaton exceeds its state cap");
        }
        return it->second;
    };
    std::map<std::size_t, long> start;
    for (auto [p, cp] : px)
        for (auto [q, cq] : qy) start[id({p, q})] += cp * cq;
    while (!todo.empty()) {
        auto st = todo.back();
        todo.pop_back();
        const std::size_t from = index.at(st);
        long rx = st.first - 1, ry = st.second - 1;
        if (rx == 0 && ry == 0) continue;
        std::map<std::size_t, long> out;
        if (rx == 0) {
            for (auto [p, cp] : px) out[id({p, ry})] += cp;
        } else if (ry == 0) {
            for (auto [q, cq] : qy) out[id({rx, q})] += cq;
        } else {
            out[id({rx, ry})] += 1;
        }
        rows[from] = std::move(out);
    }
    auto it = index.find({1, 1});
    s.has_closing = it != index.end();
    if (s.has_closing) s.closing = it->second;
    s.rows.resize(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (auto [t, c] : rows[i]) s.rows[i].emplace_back(t, c);
    s.start.assign(s.states.size(), 0);
    for (auto [i, c] : start) s.start[i] = c;
    return s;
}

}  // namespace detail

/// Certified c_k <= K mu^(k-1): find w > 0 with A w <= mu w, verified in exact arithmetic.
inline std::optional<TailMajorant> certify_majorant(const GapAutomaton& a, double rho_guess, std::string& note, std::size_t cap = 1500) {
    detail::UnitStepSystem sys;
    try {
        sys = detail::unit_step_system(a, cap);
    } catch (const Error& e) {
        note = e.what();
        return std::nullopt;
    }
    if (!sys.has_closing) return TailMajorant{0, 0};
    const std::size_t n = sys.states.size();
    // Keep states reachable from the start vector and able to reach (1,1).
    std::vector<bool> fwd(n, false), bwd(n, false);
    std::vector<std::size_t> stack;
    for (std::size_t i = 0; i < n; ++i)
        if (sys.start[i] > 0) {
            fwd[i] = true;
            stack.push_back(i);
        }
    while (!stack.empty()) {
        std::size_t v = stack.back();
        stack.pop_back();
        for (auto [t, c] : sys.rows[v])
            if (!fwd[t]) {
                fwd[t] = true;
                stack.push_back(t);
            }
    }
    std::vector<std::vector<std::size_t>> rev(n);
    for (std::size_t i = 0; i < n; ++i)
        for (auto [t, c] : sys.rows[i]) rev[t].push_back(i);
    bwd[sys.closing] = true;
    stack.push_back(sys.closing);
    while (!stack.empty()) {
        std::size_t v = stack.back();
        stack.pop_back();
        for (std::size_t f : rev[v])
            if (!bwd[f]) {
                bwd[f] = true;
                stack.push_back(f);
            }
    }
    std::vector<std::size_t> keep;
    std::vector<long> pos(n, -1);
    for (std::size_t i = 0; i < n; ++i)
        if (fwd[i] && bwd[i]) {
            pos[i] = static_cast<long>(keep.size());
            keep.push_back(i);
        }
    const std::size_t m = keep.size();
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    for (std::size_t r = 0; r < m; ++r)
        for (auto [t, c] : sys.rows[keep[r]])
            if (pos[t] >= 0) A(static_cast<Eigen::Index>(r), pos[t]) += static_cast<double>(c);

    const double base = rho_guess > 0 ? rho_guess : 0.5;
    for (double margin : {1e-6, 1e-4, 1e-2, 1e-1, 0.5}) {
        const double mu_d = base * (1 + margin);
        Eigen::MatrixXd S = mu_d * Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m)) - A;
        Eigen::VectorXd w = S.partialPivLu().solve(Eigen::VectorXd::Ones(static_cast<Eigen::Index>(m)));
        bool positive = w.allFinite();
        for (Eigen::Index i = 0; positive && i < w.size(); ++i) positive = w(i) > 0;
        if (!positive) continue;
        const Rational mu = Rational(mu_d);
        std::vector<Rational> wq(m);
        for (std::size_t i = 0; i < m; ++i) wq[i] = Rational(w(static_cast<Eigen::Index>(i)));
        bool ok = true;
        for (std::size_t r = 0; ok && r < m; ++r) {
            Rational acc = 0;
            for (auto [t, c] : sys.rows[keep[r]])
                if (pos[t] >= 0) acc += c * wq[static_cast<std::size_t>(pos[t])];
            ok = acc <= mu * wq[r];
        }
        if (!ok) continue;
        // Counts evolve by the transpose: c_k = b^T A^(k-1) e, and e <= w / w_closing.
        Rational bw = 0;
        for (std::size_t r = 0; r < m; ++r) bw += sys.start[keep[r]] * wq[r];
        TailMajorant t;
        t.mu = mu;
        t.K = bw / wq[static_cast<std::size_t>(pos[sys.closing])];
        return t;
    }
    note = "no positive super-eigenvector found";
    return std::nullopt;
}

inline CountSeries count_series(const GapAutomaton& a, long lmax) {
    CountSeries cs;
    cs.unit = a.unit;
    cs.lmax = lmax;
    cs.counts = path_counts(a, lmax);
    auto [P, Q] = first_return_gf(a);
    cs.numerator = P;
    cs.denominator = Q;

    const std::size_t n = static_cast<std::size_t>(lmax / a.unit);
    std::vector<Rational> taylor = P.series_div(Q, n);
    auto uc = cs.unit_counts();
    for (std::size_t k = 0; k <= n; ++k)
        if (taylor[k] != Rational(uc[k])) fail(ErrorCode::CertificateUnavailable, "generating function disagrees with path counts");

    if (Q.degree() >= 1) {
        cs.radius = smallest_positive_root(Q, pow2(-50));
    }
    double rho_guess = 0.0;
    if (cs.radius) {
        const double lo = to_double(cs.radius->first), hi = to_double(cs.radius->second);
        const double inv_unit = 1.0 / static_cast<double>(a.unit);
        cs.lambda = std::pow(2.0 / (lo + hi), inv_unit);
        cs.lambda_lo = std::pow(1.0 / hi, inv_unit);
        cs.lambda_hi = lo > 0 ? std::pow(1.0 / lo, inv_unit) : std::numeric_limits<double>::infinity();
        rho_guess = 1.0 / lo;
    }
    if (!cs.radius && P.degree() <= static_cast<long>(n)) {
        cs.majorant = TailMajorant{0, 0};  // polynomial GF fully covered: the tail is exactly zero
    } else {
        cs.majorant = certify_majorant(a, rho_guess, cs.majorant_note);
    }
    return cs;
}

}  // namespace projdim
