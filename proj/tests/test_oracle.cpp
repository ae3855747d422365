#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "projdim/oracle.hpp"

using namespace projdim;

namespace {

using Maps = std::vector<std::pair<long, double>>;

// Midpoints of all cylinders whose width is at most `fine`, built by plain recursion.
std::vector<double> reference_points(const Maps& maps, double beta, double fine) {
    double lo = 0, hi = 0;
    bool first = true;
    for (auto [n, a] : maps) {
        double x = a / (1 - std::pow(beta, -static_cast<double>(n)));
        lo = first ? x : std::min(lo, x);
        hi = first ? x : std::max(hi, x);
        first = false;
    }
    const double w = hi - lo;
    std::vector<double> out;
    std::vector<std::pair<double, double>> stack{{0.0, 1.0}};  // (translation, ratio)
    while (!stack.empty()) {
        auto [t, r] = stack.back();
        stack.pop_back();
        if (r * w <= fine) {
            out.push_back(t + r * 0.5 * (lo + hi));
            continue;
        }
        for (auto [n, a] : maps) stack.push_back({t + r * a, r * std::pow(beta, -static_cast<double>(n))});
    }
    std::sort(out.begin(), out.end());
    return out;
}

double distance_to(const std::vector<double>& sorted, double x) {
    auto it = std::lower_bound(sorted.begin(), sorted.end(), x);
    double d = std::numeric_limits<double>::infinity();
    if (it != sorted.end()) d = *it - x;
    if (it != sorted.begin()) d = std::min(d, x - *std::prev(it));
    return d;
}

double directed_hausdorff(const std::vector<double>& from, const std::vector<double>& to) {
    double d = 0;
    for (double x : from) d = std::max(d, distance_to(to, x));
    return d;
}

// Drops points closer than tol to the previous kept point.
std::vector<double> thin(const std::vector<double>& sorted, double tol) {
    std::vector<double> r;
    for (double x : sorted)
        if (r.empty() || x - r.back() > tol) r.push_back(x);
    return r;
}

std::vector<double> pairwise_sums(const std::vector<double>& a, const std::vector<double>& b, double s) {
    std::vector<double> r;
    for (double x : a)
        for (double y : b) r.push_back(x + s * y);
    std::sort(r.begin(), r.end());
    return r;
}

Maps random_maps(std::mt19937& rng, double& beta) {
    std::uniform_real_distribution<double> b(1.6, 3.0), shift(0.0, 2.0);
    std::uniform_int_distribution<int> count(2, 3), expo(1, 2);
    beta = b(rng);
    Maps m;
    for (int i = count(rng); i > 0; --i) m.emplace_back(expo(rng), shift(rng));
    return m;
}

}  // namespace

TEST(Sampling, CantorLevelTwo) {
    auto p = sample_attractor({{1, 0.0}, {1, 2.0 / 3}}, 3.0, 1.0 / 9);
    ASSERT_EQ(p.points.size(), 4u);
    const double want[] = {1.0 / 18, 5.0 / 18, 13.0 / 18, 17.0 / 18};
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(p.points[static_cast<std::size_t>(i)], want[i], 1e-15);
    EXPECT_EQ(p.hull_lo, 0.0);
    EXPECT_NEAR(p.hull_hi, 1.0, 1e-15);
    EXPECT_TRUE(std::is_sorted(p.points.begin(), p.points.end()));
}

TEST(Sampling, TwoSidedNetAgainstCylinderEnumeration) {
    std::mt19937 rng(32);
    for (int trial = 0; trial < 30; ++trial) {
        double beta = 0;
        Maps maps = random_maps(rng, beta);
        const auto probe = sample_attractor(maps, beta, 1.0);
        const double width = probe.hull_hi - probe.hull_lo;
        if (width <= 0) continue;
        const double eps = width / 200;
        auto p = sample_attractor(maps, beta, eps);
        auto ref = reference_points(maps, beta, eps / 16);
        // Reference points lie within eps/32 of the attractor.
        EXPECT_LE(directed_hausdorff(ref, p.points), eps + eps / 32) << "trial " << trial;
        EXPECT_LE(directed_hausdorff(p.points, ref), eps + eps / 32) << "trial " << trial;
    }
}

TEST(Sampling, SumsetRoutesAgree) {
    std::mt19937 rng(33);
    for (int trial = 0; trial < 20; ++trial) {
        double beta = 0;
        Maps m1 = random_maps(rng, beta);
        beta += 0.4;
        std::uniform_int_distribution<int> count(2, 3), expo(1, 2);
        std::uniform_real_distribution<double> shift(0.0, 2.0), slope(-2.0, 2.0);
        Maps m2;
        for (int i = count(rng); i > 0; --i) m2.emplace_back(expo(rng), shift(rng));
        const double s = slope(rng);
        auto a = sample_attractor(m1, beta, 1.0), b = sample_attractor(m2, beta, 1.0);
        const double width = (a.hull_hi - a.hull_lo) + std::fabs(s) * (b.hull_hi - b.hull_lo);
        if (width <= 0) continue;
        const double eps = width / 40;

        auto direct = sample_sumset(m1, m2, beta, s, eps);
        auto pa = sample_attractor(m1, beta, eps / 2), pb = sample_attractor(m2, beta, eps / 2 / std::max(std::fabs(s), 1e-9));
        auto viaNets = sum_samples(pa, pb, s);
        EXPECT_LE(directed_hausdorff(direct.points, viaNets.points), direct.eps + viaNets.eps) << "trial " << trial;
        EXPECT_LE(directed_hausdorff(viaNets.points, direct.points), direct.eps + viaNets.eps) << "trial " << trial;

        const double as = std::max(std::fabs(s), 1e-9);
        auto r1 = thin(reference_points(m1, beta, eps / 16), eps / 32);
        auto r2 = thin(reference_points(m2, beta, eps / 16 / as), eps / 32 / as);
        auto ref = thin(pairwise_sums(r1, r2, s), eps / 64);
        EXPECT_LE(directed_hausdorff(ref, direct.points), eps * 1.2) << "trial " << trial;
        EXPECT_LE(directed_hausdorff(direct.points, ref), eps * 1.2) << "trial " << trial;
        EXPECT_DOUBLE_EQ(direct.hull_lo, viaNets.hull_lo);
        EXPECT_DOUBLE_EQ(direct.hull_hi, viaNets.hull_hi);
    }
}

TEST(BoxCounting, ClassicalSlopes) {
    auto cantor = box_dimension_estimate(sample_attractor({{1, 0.0}, {1, 2.0 / 3}}, 3.0, 1.0 / 65536));
    EXPECT_NEAR(cantor.slope, std::log(2.0) / std::log(3.0), 0.05);
    EXPECT_GT(cantor.r2, 0.99);

    auto interval = box_dimension_estimate(sample_attractor({{1, 0.0}, {1, 0.5}}, 2.0, 1.0 / 65536));
    EXPECT_NEAR(interval.slope, 1.0, 0.01);

    Maps c3{{1, 0.0}, {1, 2.0 / 3}};
    auto sum = box_dimension_estimate(sample_sumset(c3, c3, 3.0, 1.0, 2.0 / 65536));
    EXPECT_NEAR(sum.slope, 1.0, 0.05);

    Maps c4{{1, 0.0}, {1, 0.75}};
    auto drop = box_dimension_estimate(sample_sumset(c4, c4, 4.0, 1.0, 2.0 / 65536));
    EXPECT_NEAR(drop.slope, std::log(3.0) / std::log(4.0), 0.05);
}

TEST(BoxCounting, CsvHasOneRowPerScale) {
    auto fit = box_dimension_estimate(sample_attractor({{1, 0.0}, {1, 2.0 / 3}}, 3.0, 1.0 / 65536));
    const std::string csv = fit.csv();
    EXPECT_EQ(csv.rfind("scale,count\n", 0), 0u);
    EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), fit.scales.size() + 1);
    EXPECT_EQ(fit.j_min, 4);
    for (std::size_t i = 1; i < fit.scales.size(); ++i) {
        EXPECT_LT(fit.scales[i], fit.scales[i - 1]);
        EXPECT_GE(fit.counts[i], fit.counts[i - 1]);
    }
}

TEST(OracleErrors, WindowTooFineAndDegenerateHull) {
    auto coarse = sample_attractor({{1, 0.0}, {1, 2.0 / 3}}, 3.0, 1.0 / 64);
    try {
        box_dimension_estimate(coarse);
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::WindowTooFine);
    }
    auto point = sample_attractor({{1, 1.0}}, 2.0, 1e-3);
    EXPECT_THROW(box_dimension_estimate(point), Error);
}

TEST(OracleErrors, BudgetAndConfig) {
    OracleOptions tiny{100};
    try {
        sample_attractor({{1, 0.0}, {1, 0.5}}, 2.0, 1e-6, tiny);
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::BudgetExceeded);
    }
    EXPECT_THROW(sample_attractor({}, 2.0, 0.1), Error);
    EXPECT_THROW(sample_attractor({{1, 0.0}}, 2.0, 0.0), Error);
    EXPECT_THROW(sample_sumset({}, {{1, 0.0}}, 2.0, 1.0, 0.1), Error);
}
