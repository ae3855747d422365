// Acceptance checks. `acceptance N` runs criterion N, `acceptance` runs all of them.
// Each prints one PASS/FAIL line; the exit code is nonzero if any selected criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "projdim/analysis.hpp"
#include "projdim/covering.hpp"
#include "projdim/example8.hpp"
#include "projdim/finite_type.hpp"
#include "projdim/oracle.hpp"
#include "projdim/osc.hpp"

using namespace projdim;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;
    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << "[failed: " << what << "] ";
        }
    }
};

std::string config_dir() { return std::string(PROJDIM_SOURCE_DIR) + "/configs/"; }

ExactField rational_field(long p, long q = 1) { return ExactField(FieldContext::rational(make_rational(p, q))); }

Rational rational_of(const FieldElement& v) { return v.is_zero() ? Rational(0) : v.coeffs()[0]; }

// Largest real root in [lo, hi]: downward scan for a sign change, then bisection.
double largest_root(const std::function<long double(long double)>& p, double lo, double hi) {
    const int steps = 100000;
    double prev = hi;
    for (int i = 1; i <= steps; ++i) {
        const double x = hi - (hi - lo) * i / steps;
        if ((p(x) > 0) != (p(prev) > 0)) {
            double a = x, b = prev;
            for (int k = 0; k < 200; ++k) {
                const double m = 0.5 * (a + b);
                ((p(m) > 0) == (p(a) > 0) ? a : b) = m;
            }
            return 0.5 * (a + b);
        }
        prev = x;
    }
    return std::nan("");
}

struct Ex8 {
    ExactField f = rational_field(3, 2);
    FieldElement s;
    std::vector<Block<FieldElement>> d, dp;
    Interval<FieldElement> h;
    explicit Ex8(FieldElement slope) : s(std::move(slope)) {
        for (const auto& m : example8::ifs(f).maps) d.push_back(block_of_map(f, m));
        dp = scale_blocks(f, d, s);
        h = attractor_hull(f, example8::ifs(f));
    }
    Interval<FieldElement> hull() const { return sumset_hull(f, h, h, s); }
};

// Number of pairs of words over block lengths {4, 8} with total length L whose
// partial sums meet only at 0 and L.
std::vector<long> dfs_matching_counts(long lmax) {
    std::vector<long> c(static_cast<std::size_t>(lmax + 1), 0);
    std::function<void(long, long)> walk = [&](long x, long y) {
        if (x == y && x > 0) {
            ++c[static_cast<std::size_t>(x)];
            return;
        }
        for (long step : {4L, 8L}) {
            if (x <= y && x + step <= lmax) walk(x + step, y);
            if (y < x && y + step <= lmax) walk(x, y + step);
        }
    };
    // From (0,0) both sides must move; the lagging side moves first afterwards.
    for (long a : {4L, 8L})
        for (long b : {4L, 8L}) walk(a, b);
    return c;
}

// Criterion 1: first Matchings and the count series of the two-map fixture.
void criterion_1(Outcome& o) {
    Ex8 e(example8::special_slope(rational_field(3, 2)));
    auto ms = enumerate_matchings(e.f, e.d, e.dp, 12);
    auto named = example8::named_maps(e.f, e.s);
    const std::vector<Similitude<FieldElement>> want{named.f_map, named.h1, named.h2, named.g, named.phi1, named.phi2};
    o.require(ms.matchings.size() == 6, "six Matchings up to length 12");
    std::vector<bool> seen(want.size(), false);
    for (const auto& m : ms.matchings)
        for (std::size_t i = 0; i < want.size(); ++i)
            if (equal(e.f, m.map, want[i])) seen[i] = true;
    o.require(std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }), "every named block is found");

    const long lmax = 4 * 23 + 8;
    auto cs = count_series(build_gap_automaton(e.d, e.dp), lmax);
    auto ref = dfs_matching_counts(lmax);
    bool match = true;
    for (long l = 1; l <= lmax; ++l) match = match && cs.counts[static_cast<std::size_t>(l)] == ref[static_cast<std::size_t>(l)];
    o.require(match, "counts agree with the exhaustive search");
    bool closed = cs.counts[4] == 1 && cs.counts[8] == 3;
    for (long n = 1; n <= 23; ++n) closed = closed && cs.counts[static_cast<std::size_t>(4 * n + 8)] == 2;
    o.require(closed, "c4 = 1, c8 = 3, c(4n+8) = 2 for n = 1..23");
    o.detail << "matchings=" << ms.matchings.size() << " c4=" << cs.counts[4] << " c8=" << cs.counts[8] << " c100=" << cs.counts[100] << " ";
}

// Criterion 2: the bracket collapses at the midpoint slope.
void criterion_2(Outcome& o) {
    AnalysisConfig c = load_config(config_dir() + "example8_midpoint.json");
    c.options.oracle = false;
    AnalysisReport r = run_analysis(c);
    const double closed = std::log(std::sqrt((1 + std::sqrt(5.0)) / 2)) / std::log(1.5);
    const auto& b = r.dimension;
    const double sum = r.json["factors"]["sum"].get<double>();
    o.require(b.collapsed(), "bracket collapsed");
    o.require(std::fabs(b.lower - closed) <= 1e-9 && std::fabs(b.upper - closed) <= 1e-9, "bracket equals log sqrt(phi) / log 1.5");
    o.require(std::fabs(b.lower - sum) <= 1e-9, "bracket equals dim K1 + dim K2");
    char buf[200];
    std::snprintf(buf, sizeof buf, "lower=%.16f upper=%.16f closed_form=%.16f factor_sum=%.16f quoted=0.5934155 (off by %.1e) ", b.lower, b.upper, closed, sum,
                  0.5934155 - closed);
    o.detail << buf;
}

// Criterion 3: generating-function cubic and the degree-12 polynomial.
void criterion_3(Outcome& o) {
    Ex8 e(example8::special_slope(rational_field(3, 2)));
    auto cs = count_series(build_gap_automaton(e.d, e.dp), 200);
    auto gf = solve_gf_dimension(cs, 1.5);
    const std::string py = polynomial_text(gf.poly_y, "y");
    o.require(py == "y^3 - 2*y^2 - 2*y + 1", "cubic is y^3 - 2y^2 - 2y + 1, got " + py);
    const long double y = std::pow(1.5L, -4.0L * gf.s);
    const long double residual = std::fabs(y * y * y - 2 * y * y - 2 * y + 1);
    o.require(residual < 1e-12L, "cubic residual below 1e-12");
    auto p12 = [](long double x) {
        const long double u = x * x * x * x;
        return u * u * u - 2 * u * u - 2 * u + 1;
    };
    const double root12 = largest_root(p12, 1.0, 3.0);
    auto cubic = [](long double u) { return u * u * u - 2 * u * u - 2 * u + 1; };
    const double root3 = largest_root(cubic, 1.0, 5.0);
    o.require(std::fabs(std::pow(1.5, gf.s) - root12) <= 1e-9, "beta^s is the largest root of x^12 - 2x^8 - 2x^4 + 1");
    o.require(std::fabs(std::pow(1.5, 4 * gf.s) - root3) <= 1e-9, "beta^(4s) is the largest root of u^3 - 2u^2 - 2u + 1");
    char buf[200];
    std::snprintf(buf, sizeof buf, "s=%.16f residual=%.2Le beta^s=%.12f root12=%.12f beta^4s=%.12f ", gf.s, residual, std::pow(1.5, gf.s), root12,
                  std::pow(1.5, 4 * gf.s));
    o.detail << buf;
}

// Coefficients of P/Q up to degree n (Q(0) = 1).
std::vector<Integer> series(const std::vector<Integer>& P, const std::vector<Integer>& Q, std::size_t n) {
    std::vector<Integer> c(n + 1, 0);
    for (std::size_t k = 0; k <= n; ++k) {
        Integer v = k < P.size() ? P[k] : Integer(0);
        for (std::size_t j = 1; j < Q.size() && j <= k; ++j) v -= Q[j] * c[k - j];
        c[k] = v;
    }
    return c;
}

// Criterion 4: Vitali subsystem at the special slope.
void criterion_4(Outcome& o) {
    Ex8 e(example8::special_slope(rational_field(3, 2)));
    auto ms = enumerate_matchings(e.f, e.d, e.dp, 100);
    auto maps = dedup_maps(ms);
    const auto hull = e.hull();
    const double width = e.f.to_double(hull.hi - hull.lo);
    auto sel = vitali_select(e.f, maps, hull, width * std::pow(1.5, -100.0));
    o.require(!sel.budget_exhausted, "selection finished inside its budget");

    auto named = example8::named_maps(e.f, e.s);
    std::size_t phi2 = maps.size(), fm = maps.size();
    for (std::size_t i = 0; i < maps.size(); ++i) {
        if (equal(e.f, maps[i], named.phi2)) phi2 = i;
        if (equal(e.f, maps[i], named.f_map)) fm = i;
    }
    bool words = phi2 < maps.size() && fm < maps.size();
    for (const auto& x : sel.selected) {
        const auto& w = x.word;
        for (std::size_t k = 0; k + 1 < w.size(); ++k) words = words && w[k] == phi2;
        words = words && w.back() != phi2 && (w.size() == 1 || w.back() != fm);
    }
    o.require(words, "selected words are phi2^k h");

    const std::size_t n = 25;
    auto C = series({0, 1, 2, -1}, {1, -1}, n);
    std::vector<Integer> rest = C;
    rest[3] -= 1;
    std::vector<Integer> tail = rest;
    tail[1] -= 1;
    auto geo = series({0, 0, 0, 1}, {1, 0, 0, -1}, n);
    std::vector<Integer> psi(n + 1, 0), got(n + 1, 0);
    for (std::size_t k = 0; k <= n; ++k) {
        psi[k] = rest[k];
        for (std::size_t j = 0; j <= k; ++j) psi[k] += geo[j] * tail[k - j];
    }
    bool lengths = true;
    for (const auto& x : sel.selected) {
        lengths = lengths && x.map.length % 4 == 0;
        if (x.map.length % 4 == 0 && x.map.length / 4 <= static_cast<long>(n)) got[static_cast<std::size_t>(x.map.length / 4)] += 1;
    }
    for (std::size_t k = 1; k <= n; ++k) lengths = lengths && got[k] == psi[k];
    o.require(lengths, "length counts follow the Psi series");

    auto p20 = [](long double x) {
        return std::pow(x, 20) - 2 * std::pow(x, 16) - 2 * std::pow(x, 12) + std::pow(x, 8) + std::pow(x, 4) - 1;
    };
    const double gamma = largest_root(p20, 1.0, 2.0);
    const double target = std::log(gamma) / std::log(1.5);
    auto [lo, hi] = lower_bound_dimension(sel, 1.5);
    const double lb = 0.5 * (lo + hi);
    o.require(std::fabs(lb - target) <= 1e-4, "lower bound within 1e-4 of log gamma / log 1.5");
    char buf[200];
    std::snprintf(buf, sizeof buf, "selected=%zu lower=%.10f target=%.10f gamma=%.10f diff=%.2e ", sel.selected.size(), lb, target, gamma, std::fabs(lb - target));
    o.detail << buf;
}

// Criterion 5: the threshold chain for several beta, and a term-by-term report at 1.39.
void criterion_5(Outcome& o) {
    const std::vector<std::pair<long, long>> betas{{7, 5}, {3, 2}, {7, 4}, {2, 1}};
    for (auto [p, q] : betas) {
        ExactField f = rational_field(p, q);
        auto links = example8::inequality_chain(f);
        std::string broken;
        for (std::size_t i = 0; i < links.size(); ++i)
            if (!links[i].holds) broken += (broken.empty() ? "" : ",") + std::to_string(i + 1);
        o.detail << "beta=" << p << "/" << q << (broken.empty() ? " holds" : " breaks at link " + broken) << "; ";
        o.require(broken.empty(), "chain at beta=" + std::to_string(p) + "/" + std::to_string(q));
    }
    ExactField f = rational_field(139, 100);
    auto t = example8::thresholds(f);
    o.detail << "beta=1.39 terms:";
    char buf[64];
    for (std::size_t i = 0; i < t.size(); ++i) {
        std::snprintf(buf, sizeof buf, " t%zu=%.10g", i + 1, f.to_double(t[i]));
        o.detail << buf;
    }
    o.detail << " links:";
    for (const auto& l : example8::inequality_chain(f)) o.detail << " t" << l.left + 1 << "<t" << l.right + 1 << (l.holds ? "=yes" : "=no");
    o.detail << " ";
}

// Criterion 6: a single overlapping pair among the first 40 Matchings at the special slope.
void criterion_6(Outcome& o) {
    Ex8 e(example8::special_slope(rational_field(3, 2)));
    auto ms = enumerate_matchings(e.f, e.d, e.dp, 200);
    std::vector<Similitude<FieldElement>> maps;
    for (std::size_t i = 0; i < 40 && i < ms.matchings.size(); ++i) maps.push_back(ms.matchings[i].map);
    o.require(maps.size() == 40, "forty Matchings available");
    auto rep = check_osc(e.f, maps, e.hull());
    o.require(rep.overlapping_pairs.size() == 1, "exactly one overlapping pair");
    auto named = example8::named_maps(e.f, e.s);
    if (rep.overlapping_pairs.size() == 1) {
        auto [i, j] = rep.overlapping_pairs[0];
        const bool pair = (equal(e.f, maps[i], named.h2) && equal(e.f, maps[j], named.phi2)) ||
                          (equal(e.f, maps[j], named.h2) && equal(e.f, maps[i], named.phi2));
        o.require(pair, "the pair is (h2, phi2)");
        o.detail << "pair=(" << i << "," << j << ") ";
    }
    o.require(equal(e.f, compose(e.f, named.h2, named.g), compose(e.f, named.phi2, named.f_map)), "h2 o g == phi2 o f");
}

// Criterion 7: classical self-similar cases.
void criterion_7(Outcome& o) {
    auto check = [&](const std::string& name, double want) {
        AnalysisReport r = run_analysis(load_config(config_dir() + name + ".json"));
        const auto& b = r.dimension;
        o.require(r.classification == "SelfSimilar", name + " is SelfSimilar");
        o.require(std::fabs(b.lower - want) <= 1e-9 + b.lower_error && std::fabs(b.upper - want) <= 1e-9 + b.upper_error, name + " dimension");
        const Json& oracle = r.json["oracle"];
        const bool has = oracle.is_object() && oracle.contains("slope");
        o.require(has && std::fabs(oracle["slope"].get<double>() - want) <= 0.05, name + " box slope");
        char buf[200];
        std::snprintf(buf, sizeof buf, "%s: [%.12f, %.12f] want %.12f box=%.4f; ", name.c_str(), b.lower, b.upper, want, has ? oracle["slope"].get<double>() : NAN);
        o.detail << buf;
    };
    check("cantor_pair", 1.0);
    check("dimension_drop", std::log(3.0) / std::log(4.0));
}

Json random_config(std::mt19937& rng, bool oracle) {
    std::uniform_int_distribution<long> den(2, 7), nmaps(1, 3), expo(1, 4), shift(0, 12), sden(1, 4), snum(-9, 9);
    const long q = den(rng);
    std::uniform_int_distribution<long> num(static_cast<long>(std::floor(1.2 * q)) + 1, 3 * q - 1);
    const long p = num(rng);
    auto ifs = [&]() {
        Json a = Json::array();
        for (long i = nmaps(rng); i > 0; --i) a.push_back(Json{{"n", expo(rng)}, {"a", std::to_string(shift(rng)) + "/" + std::to_string(sden(rng))}});
        return a;
    };
    long sn = snum(rng);
    if (sn == 0) sn = 1;
    return Json{{"beta", std::to_string(p) + "/" + std::to_string(q)},
                {"ifs1", ifs()},
                {"ifs2", ifs()},
                {"angle", {{"slope", std::to_string(sn) + "/" + std::to_string(sden(rng))}}},
                {"options", {{"lmax", 24}, {"floor_exponent", 16}, {"oracle", oracle}, {"max_matchings", 20000}, {"vitali_candidates", 50000}}}};
}

Block<FieldElement> random_block(const ExactField& f, std::mt19937& rng) {
    std::uniform_int_distribution<long> len(1, 6), num(-9, 9), den(1, 5);
    std::bernoulli_distribution keep(0.6);
    Block<FieldElement> b{len(rng), {}};
    for (long p = 1; p <= b.length; ++p) {
        if (!keep(rng)) continue;
        const long n = num(rng);
        if (n != 0) b.digits.emplace_back(p, f.from_rational(make_rational(n, den(rng))));
    }
    return b;
}

// Criterion 8: property suites.
void criterion_8(Outcome& o) {
    // Sandwich on random systems.
    std::mt19937 rng(8080);
    int sandwich_bad = 0;
    for (int trial = 0; trial < 200; ++trial) {
        Json cfg = random_config(rng, false);
        AnalysisReport r = run_analysis(parse_config(cfg));
        const auto& b = r.dimension;
        if (!(b.lower <= b.upper + b.lower_error + b.upper_error && b.lower >= 0 && b.upper <= 1)) ++sandwich_bad;
    }
    o.require(sandwich_bad == 0, "sandwich on 200 random systems");
    o.detail << "sandwich 200 (bad " << sandwich_bad << "); ";

    // Vitali monotonicity under a shrinking floor.
    int vitali_bad = 0, vitali_done = 0;
    std::uniform_int_distribution<long> q(2, 6), count(2, 4), expo(1, 3), num(0, 9), den(1, 4);
    while (vitali_done < 50) {
        const long d = q(rng);
        std::uniform_int_distribution<long> p(static_cast<long>(std::floor(1.2 * d)) + 1, 3 * d);
        const Rational beta = make_rational(p(rng), d);
        ExactField f(FieldContext::rational(beta));
        IfsSpec<FieldElement> ifs;
        for (long i = count(rng); i > 0; --i) ifs.maps.push_back({expo(rng), f.from_rational(make_rational(num(rng), den(rng)))});
        std::vector<Similitude<FieldElement>> maps;
        for (const auto& m : ifs.maps) maps.push_back(similitude_of_map(f, m));
        const auto hull = attractor_hull(f, ifs);
        const double width = f.to_double(hull.hi - hull.lo);
        if (width <= 0) continue;
        ++vitali_done;
        const double b = to_double(beta);
        double prev = 0, floor = width * std::pow(b, -3.0);
        for (int k = 0; k < 5; ++k, floor /= 2) {
            VitaliOptions vo;
            vo.max_candidates = 200'000;
            auto sel = vitali_select(f, maps, hull, floor, vo);
            const double lo = lower_bound_dimension(sel, b).first;
            if (lo < prev - 1e-9 || sel.budget_exhausted) ++vitali_bad;
            prev = lo;
        }
    }
    o.require(vitali_bad == 0, "Vitali monotone on 50 instances");
    o.detail << "vitali 50 (bad " << vitali_bad << "); ";

    // Block laws.
    {
        const Rational beta = make_rational(5, 3);
        ExactField f(FieldContext::rational(beta));
        int bad = 0;
        for (int i = 0; i < 1000; ++i) {
            auto A = random_block(f, rng), B = random_block(f, rng), C = random_block(f, rng);
            Rational va = 0, vb = 0;
            for (const auto& [pos, dg] : A.digits) va += rational_of(dg) / pow(beta, static_cast<unsigned>(pos));
            for (const auto& [pos, dg] : B.digits) vb += rational_of(dg) / pow(beta, static_cast<unsigned>(pos));
            auto AB = concat(A, B);
            auto sA = similitude_of_block(f, A), sB = similitude_of_block(f, B), sC = similitude_of_block(f, C);
            bool ok = rational_of(block_value(f, A)) == va;
            ok = ok && rational_of(block_value(f, AB)) == va + vb / pow(beta, static_cast<unsigned>(A.length));
            ok = ok && equal(f, similitude_of_block(f, AB), compose(f, sA, sB));
            ok = ok && equal(f, similitude_of_block(f, concat(AB, C)), similitude_of_block(f, concat(A, concat(B, C))));
            ok = ok && equal(f, compose(f, compose(f, sA, sB), sC), compose(f, sA, compose(f, sB, sC)));
            ok = ok && rational_of(block_value(f, digit_sum(f, A, B))) == va + vb;
            if (!ok) ++bad;
        }
        o.require(bad == 0, "1000 block laws");
        o.detail << "block laws 1000 (bad " << bad << "); ";
    }

    // Box counts inside the widened bracket.
    int box_done = 0, box_bad = 0, box_skipped = 0;
    std::mt19937 brng(99);
    while (box_done < 20 && box_skipped < 200) {
        Json cfg = random_config(brng, true);
        AnalysisReport r = run_analysis(parse_config(cfg));
        const Json& oj = r.json["oracle"];
        if (!oj.is_object() || !oj.contains("slope")) {
            ++box_skipped;
            continue;
        }
        ++box_done;
        const double slope = oj["slope"].get<double>();
        if (slope < r.dimension.lower - 0.1 || slope > r.dimension.upper + 0.1) {
            ++box_bad;
            o.detail << "{box " << slope << " vs [" << r.dimension.lower << "," << r.dimension.upper << "] " << cfg.dump() << "} ";
        }
    }
    o.require(box_done == 20 && box_bad == 0, "20 box counts inside the widened bracket");
    o.detail << "box 20 (bad " << box_bad << ", oracle unavailable " << box_skipped << "); ";
}

// Criterion 9: finite type on digits {0, 1, 3} with beta = 3.
void criterion_9(Outcome& o) {
    ExactField f = rational_field(3);
    std::vector<Similitude<FieldElement>> maps;
    for (long dg : {0L, 1L, 3L}) maps.push_back({1, f.from_rational(make_rational(dg, 3))});
    auto ft = finite_type_dimension(f, maps);

    // Growth of the number of distinct sums d_1 3^(n-1) + ... + d_n.
    std::set<long long> cur{0};
    std::vector<double> a{1};
    for (int n = 1; n <= 16; ++n) {
        std::set<long long> next;
        for (long long v : cur)
            for (long long dg : {0LL, 1LL, 3LL}) next.insert(v * 3 + dg);
        cur = std::move(next);
        a.push_back(static_cast<double>(cur.size()));
    }
    const double growth = a[16] / a[15];
    const double oracle = std::log(growth) / std::log(3.0);
    o.require(std::fabs(ft.dimension - oracle) <= 1e-3, "finite type matches the digit-sum growth");

    AnalysisReport r = run_analysis(load_config(config_dir() + "vertical.json"));
    const Json& oj = r.json["oracle"];
    const bool has = oj.is_object() && oj.contains("slope");
    o.require(has && std::fabs(oj["slope"].get<double>() - ft.dimension) <= 0.05, "box slope within 0.05");
    o.require(std::fabs(r.dimension.lower - ft.dimension) <= 1e-9, "pipeline agrees with the direct finite-type call");
    char buf[200];
    std::snprintf(buf, sizeof buf, "finite_type=%.10f growth_oracle=%.10f box=%.4f types=%zu ", ft.dimension, oracle, has ? oj["slope"].get<double>() : NAN, ft.types);
    o.detail << buf;
}

const std::map<int, std::pair<const char*, void (*)(Outcome&)>> kCriteria{
    {1, {"first Matchings and count series", criterion_1}},
    {2, {"collapsed bracket at the midpoint slope", criterion_2}},
    {3, {"generating-function cubic", criterion_3}},
    {4, {"Vitali subsystem at the special slope", criterion_4}},
    {5, {"threshold inequality chain", criterion_5}},
    {6, {"single overlap among the first 40 Matchings", criterion_6}},
    {7, {"classical self-similar cases", criterion_7}},
    {8, {"property suites", criterion_8}},
    {9, {"finite type on digits {0,1,3}", criterion_9}},
};

bool run_one(int n) {
    const auto& [title, fn] = kCriteria.at(n);
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        fn(o);
    } catch (const std::exception& e) {
        o.pass = false;
        o.detail << "[exception: " << e.what() << "] ";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %d %s: %s (%.2f s) %s\n", n, title, o.pass ? "PASS" : "FAIL", secs, o.detail.str().c_str());
    std::fflush(stdout);
    return o.pass;
}

}  // namespace

int main(int argc, char** argv) {
    bool ok = true;
    if (argc > 1) {
        const int n = std::atoi(argv[1]);
        if (!kCriteria.count(n)) {
            std::fprintf(stderr, "usage: acceptance [1-9]\n");
            return 2;
        }
        ok = run_one(n);
    } else {
        for (const auto& [n, c] : kCriteria) ok = run_one(n) && ok;
    }
    return ok ? 0 : 1;
}
