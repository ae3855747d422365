#pragma once

/**
 * @file finite_type.hpp
 * @brief Neighbour-type transfer matrix for uniform-ratio systems.
 *
 * Level-n cylinders of a system whose maps all have ratio beta^-k are
 * translates of one interval of width W. Measured in units of the level's
 * scale, a cylinder's neighbourhood type is the sorted list of offsets to the
 * other distinct cylinders that overlap it. Each cylinder's children, and
 * their types, depend only on its type, so counting distinct cylinders
 * reduces to a matrix power.
 */

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "projdim/spectral.hpp"
#include "projdim/systems.hpp"

namespace projdim {

struct FiniteTypeOptions {
    std::size_t max_types = 10'000;
    double tol = 1e-9;
};

struct FiniteTypeResult {
    double dimension = 0.0;
    double lambda = 0.0;
    double lambda_lower = 0.0;
    double lambda_upper = 0.0;
    std::size_t types = 0;
    long ratio_exponent = 0;
    SpectralResult spectral;
};

template <ScalarField F, class V = typename F::value_type>
FiniteTypeResult finite_type_dimension(const F& f, const std::vector<Similitude<V>>& maps, const FiniteTypeOptions& opt = {}) {
    if (maps.empty()) fail(ErrorCode::EmptyCounts, "no maps");
    const long k = maps.front().length;
    for (const auto& m : maps)
        if (m.length != k) fail(ErrorCode::NotUniformRatio, "finite-type analysis needs a common ratio");

    const V bk = f.beta_pow(k);
    // Hull from the extreme fixed points.
    V lo = maps.front().t, hi = maps.front().t;
    for (const auto& m : maps) {
        if (f.compare(m.t, lo) < 0) lo = m.t;
        if (f.compare(m.t, hi) > 0) hi = m.t;
    }
    const V denom = f.one() - f.beta_pow(-k);
    const V width = (hi - lo) / denom;

    std::vector<V> child;  // distinct child positions in the child's units
    for (const auto& m : maps) {
        V p = bk * m.t;
        bool dup = false;
        for (const auto& c : child) dup = dup || f.compare(c, p) == 0;
        if (!dup) child.push_back(p);
    }
    std::sort(child.begin(), child.end(), [&](const V& a, const V& b) { return f.compare(a, b) < 0; });

    auto less_vec = [&f](const std::vector<V>& a, const std::vector<V>& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        for (std::size_t i = 0; i < a.size(); ++i) {
            int c = f.compare(a[i], b[i]);
            if (c != 0) return c < 0;
        }
        return false;
    };
    std::map<std::vector<V>, std::size_t, decltype(less_vec)> index(less_vec);
    std::vector<std::vector<V>> types;
    auto id_of = [&](std::vector<V> t) {
        auto it = index.find(t);
        if (it != index.end()) return it->second;
        if (types.size() >= opt.max_types) fail(ErrorCode::TypesExceeded, "neighbour types exceed the cap of " + std::to_string(opt.max_types));
        index.emplace(t, types.size());
        types.push_back(std::move(t));
        return types.size() - 1;
    };
    const bool degenerate = f.sign(width) == 0;
    auto within = [&](const V& o) { return !degenerate && f.compare(o, width) < 0 && f.compare(-o, width) < 0; };

    id_of({});
    SparseRows rows;
    for (std::size_t cur = 0; cur < types.size(); ++cur) {
        const std::vector<V> offsets = types[cur];
        // Children of this cylinder and of its neighbours, relative to this cylinder's scaled position.
        // A child also produced by a left neighbour is owned by that neighbour.
        struct Cand {
            V v;
            double d;
            bool own;
            bool left;
        };
        std::vector<Cand> cands;
        for (const auto& c : child) cands.push_back({c, f.to_double(c), true, false});
        for (const auto& o : offsets) {
            const bool left = f.sign(o) < 0;
            for (const auto& c : child) {
                V v = bk * o + c;
                const double d = f.to_double(v);
                cands.push_back({std::move(v), d, false, left});
            }
        }
        std::sort(cands.begin(), cands.end(), [&](const Cand& a, const Cand& b) { return compare_with_hint(f, a.v, a.d, b.v, b.d) < 0; });
        std::vector<Cand> uniq;
        for (auto& c : cands) {
            if (!uniq.empty() && compare_with_hint(f, uniq.back().v, uniq.back().d, c.v, c.d) == 0) {
                uniq.back().own = uniq.back().own || c.own;
                uniq.back().left = uniq.back().left || c.left;
            } else {
                uniq.push_back(std::move(c));
            }
        }

        std::map<std::size_t, double> out;
        for (std::size_t k = 0; k < uniq.size(); ++k) {
            if (!uniq[k].own || uniq[k].left) continue;
            const V& c = uniq[k].v;
            std::vector<V> t;
            std::size_t lo = k;
            while (lo > 0 && within(uniq[lo - 1].v - c)) --lo;
            for (std::size_t m = lo; m < uniq.size(); ++m) {
                if (m == k) continue;
                V off = uniq[m].v - c;
                if (m > k && !within(off)) break;
                t.push_back(std::move(off));
            }
            out[id_of(std::move(t))] += 1.0;
        }
        if (rows.size() <= cur) rows.resize(cur + 1);
        for (auto [j, w] : out) rows[cur].emplace_back(j, w);
    }
    rows.resize(types.size());

    FiniteTypeResult r;
    r.types = types.size();
    r.ratio_exponent = k;
    r.spectral = spectral_radius(rows, opt.tol);
    r.lambda = r.spectral.rho;
    r.lambda_lower = r.spectral.lower;
    r.lambda_upper = r.spectral.upper;
    const double lb = std::log(f.to_double(f.beta())) * static_cast<double>(k);
    r.dimension = r.lambda > 0 ? std::log(r.lambda) / lb : 0.0;
    return r;
}

}  // namespace projdim
