#pragma once

/**
 * @file covering.hpp
 * @brief Greedy Vitali selection of pairwise disjoint composition images.
 */

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <vector>

#include "projdim/dimension.hpp"
#include "projdim/systems.hpp"

namespace projdim {

template <class V>
struct SelectedMap {
    Similitude<V> map;
    std::vector<std::size_t> word;  ///< indices into the input map list, outermost first
};

template <class V>
struct VitaliSelection {
    std::vector<SelectedMap<V>> selected;  ///< in selection order
    double diameter_floor = 0.0;
    long max_length = 0;  ///< longest composition whose image is at least the floor
    Interval<V> hull;
    std::size_t rejected_overlaps = 0;
    std::size_t pruned = 0;
    std::size_t candidates = 0;
    bool budget_exhausted = false;
};

struct VitaliOptions {
    std::size_t max_candidates = 2'000'000;
};

template <ScalarField F, class V = typename F::value_type>
VitaliSelection<V> vitali_select(const F& f, const std::vector<Similitude<V>>& maps, const Interval<V>& hull, double diameter_floor,
                                 const VitaliOptions& opt = {}) {
    if (maps.empty()) fail(ErrorCode::EmptySelection, "no maps to select from");
    if (!(diameter_floor > 0)) fail(ErrorCode::Config, "diameter floor must be positive");
    VitaliSelection<V> sel;
    sel.diameter_floor = diameter_floor;
    sel.hull = hull;
    const double width = f.to_double(hull.hi - hull.lo);
    const double lb = std::log(f.to_double(f.beta()));
    if (width <= 0) {
        // A single-point hull: every image is that point, so one map stands for all.
        sel.selected.push_back({maps.front(), {0}});
        sel.max_length = maps.front().length;
        return sel;
    }
    sel.max_length = static_cast<long>(std::floor(std::log(width / diameter_floor) / lb + 1e-9));

    // Children of one parent are generated lazily in (length, index) order, which is
    // also their order in the queue, so each pop only needs to push its successor.
    std::vector<std::size_t> by_len(maps.size());
    for (std::size_t i = 0; i < by_len.size(); ++i) by_len[i] = i;
    std::stable_sort(by_len.begin(), by_len.end(), [&](std::size_t a, std::size_t b) { return maps[a].length < maps[b].length; });
    std::vector<Similitude<V>> parents{Similitude<V>{0, f.zero()}};
    std::vector<std::vector<std::size_t>> parent_words{{}};

    struct Candidate {
        long length;
        std::vector<std::size_t> word;
        std::size_t parent;
        std::size_t pos;  ///< position of the last letter in by_len
    };
    auto later = [](const Candidate& a, const Candidate& b) {
        if (a.length != b.length) return a.length > b.length;
        return a.word > b.word;
    };
    std::priority_queue<Candidate, std::vector<Candidate>, decltype(later)> queue(later);
    auto push_child = [&](std::size_t parent, std::size_t pos) {
        if (pos >= by_len.size()) return;
        const std::size_t i = by_len[pos];
        const long len = parents[parent].length + maps[i].length;
        if (len > sel.max_length) return;
        std::vector<std::size_t> w = parent_words[parent];
        w.push_back(i);
        queue.push({len, std::move(w), parent, pos});
    };
    push_child(0, 0);

    struct Bound {
        V v;
        double d;
    };
    auto cmp = [&f](const Bound& a, const Bound& b) { return compare_with_hint(f, a.v, a.d, b.v, b.d) < 0; };
    std::map<Bound, Bound, decltype(cmp)> chosen(cmp);  // lo -> hi of selected images

    long last_length = 0;
    while (!queue.empty()) {
        if (sel.candidates >= opt.max_candidates) {
            sel.budget_exhausted = true;
            break;
        }
        Candidate c = std::move(const_cast<Candidate&>(queue.top()));
        queue.pop();
        push_child(c.parent, c.pos + 1);
        ++sel.candidates;
        if (c.length < last_length) fail(ErrorCode::Config, "selection order is not by non-increasing diameter");
        last_length = c.length;
        const Similitude<V> map = compose(f, parents[c.parent], maps[by_len[c.pos]]);
        Interval<V> iv = image(f, map, hull);
        const Bound lo{iv.lo, f.to_double(iv.lo)}, hi{iv.hi, f.to_double(iv.hi)};

        bool overlap = false, inside = false;
        auto it = chosen.lower_bound(hi);  // first selected with lo >= iv.hi
        if (it != chosen.begin()) {
            auto prev = std::prev(it);  // last selected with lo < iv.hi
            overlap = cmp(lo, prev->second);
            if (overlap) inside = !cmp(lo, prev->first) && !cmp(prev->second, hi);
        }
        if (!overlap) {
            chosen.emplace(lo, hi);
            sel.selected.push_back({map, std::move(c.word)});
            continue;
        }
        if (inside) {
            ++sel.pruned;
            continue;
        }
        ++sel.rejected_overlaps;
        parents.push_back(map);
        parent_words.push_back(std::move(c.word));
        push_child(parents.size() - 1, 0);
    }
    return sel;
}

/// Similarity dimension of the selected subsystem: root of sum beta^(-l_i t) = 1.
template <class V>
std::pair<double, double> lower_bound_dimension(const VitaliSelection<V>& sel, double beta, double tol = kDimensionTolerance) {
    if (sel.selected.empty()) fail(ErrorCode::EmptySelection, "Vitali selection is empty");
    std::map<long, long double> counts;
    for (const auto& s : sel.selected) counts[s.map.length] += 1;
    return solve_length_equation(counts, beta, tol);
}

}  // namespace projdim
