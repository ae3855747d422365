#pragma once

/**
 * @file matcher.hpp
 * @brief Irreducible Matchings of two block alphabets.
 *
 * Two streams of blocks, one from D1 and one from the scaled D2', are laid
 * side by side. The gap g = (D1 length so far) - (D2' length so far) drives a
 * finite automaton: the stream that is behind is extended, and a Matching is
 * emitted the first time the gap returns to 0.
 */

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <tuple>
#include <utility>
#include <vector>

#include "projdim/systems.hpp"

namespace projdim {

enum class Side { X, Y };
enum class Finiteness { ProvedFinite, ProvedInfinite };

inline const char* to_string(Finiteness f) { return f == Finiteness::ProvedFinite ? "ProvedFinite" : "ProvedInfinite"; }

struct GapEdge {
    long from = 0;
    long to = 0;
    std::size_t block = 0;
    Side side = Side::X;
};

/// Initial double step from gap 0: one block from each stream.
struct StartEdge {
    long to = 0;
    std::size_t x_block = 0;
    std::size_t y_block = 0;
};

/// States and edges in original length units; `unit` is the gcd of all block lengths.
struct GapAutomaton {
    long unit = 1;
    std::vector<long> x_lengths;
    std::vector<long> y_lengths;
    std::vector<long> states;  ///< sorted, contains 0
    std::vector<StartEdge> start_edges;
    std::vector<GapEdge> edges;

    long max_block_length() const {
        long m = 0;
        for (long v : x_lengths) m = std::max(m, v);
        for (long v : y_lengths) m = std::max(m, v);
        return m;
    }
    std::size_t index_of(long g) const {
        return static_cast<std::size_t>(std::lower_bound(states.begin(), states.end(), g) - states.begin());
    }
    std::vector<long> nonzero_states() const {
        std::vector<long> r;
        for (long g : states)
            if (g != 0) r.push_back(g);
        return r;
    }
};

inline GapAutomaton build_gap_automaton(std::vector<long> x_lengths, std::vector<long> y_lengths) {
    if (x_lengths.empty() || y_lengths.empty()) fail(ErrorCode::Config, "both block alphabets must be nonempty");
    GapAutomaton a;
    a.x_lengths = std::move(x_lengths);
    a.y_lengths = std::move(y_lengths);
    long u = 0;
    for (long v : a.x_lengths) u = std::gcd(u, v);
    for (long v : a.y_lengths) u = std::gcd(u, v);
    a.unit = u;

    std::set<long> seen{0};
    std::vector<long> frontier;
    for (std::size_t i = 0; i < a.x_lengths.size(); ++i)
        for (std::size_t j = 0; j < a.y_lengths.size(); ++j) {
            long g = a.x_lengths[i] - a.y_lengths[j];
            a.start_edges.push_back({g, i, j});
            if (seen.insert(g).second) frontier.push_back(g);
        }
    while (!frontier.empty()) {
        long g = frontier.back();
        frontier.pop_back();
        const bool x_side = g < 0;
        const auto& lens = x_side ? a.x_lengths : a.y_lengths;
        for (std::size_t k = 0; k < lens.size(); ++k) {
            long h = x_side ? g + lens[k] : g - lens[k];
            a.edges.push_back({g, h, k, x_side ? Side::X : Side::Y});
            if (seen.insert(h).second) frontier.push_back(h);
        }
    }
    a.states.assign(seen.begin(), seen.end());
    std::sort(a.edges.begin(), a.edges.end(), [](const GapEdge& p, const GapEdge& q) {
        return std::tie(p.from, p.side, p.block) < std::tie(q.from, q.side, q.block);
    });
    return a;
}

template <class V>
GapAutomaton build_gap_automaton(const std::vector<Block<V>>& d1, const std::vector<Block<V>>& d2p) {
    std::vector<long> xl, yl;
    for (const auto& b : d1) xl.push_back(b.length);
    for (const auto& b : d2p) yl.push_back(b.length);
    return build_gap_automaton(std::move(xl), std::move(yl));
}

/// Nonzero states from which 0 can be reached.
inline std::vector<bool> coreachable(const GapAutomaton& a) {
    std::vector<bool> ok(a.states.size(), false);
    ok[a.index_of(0)] = true;
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& e : a.edges) {
            std::size_t f = a.index_of(e.from);
            if (!ok[f] && ok[a.index_of(e.to)]) ok[f] = changed = true;
        }
    }
    return ok;
}

/// ProvedInfinite iff some cycle through nonzero states is reachable from 0 and can return to 0.
inline Finiteness classify_finiteness(const GapAutomaton& a) {
    const std::size_t n = a.states.size();
    const std::size_t zero = a.index_of(0);
    std::vector<bool> live = coreachable(a);
    std::vector<std::vector<std::size_t>> adj(n);
    for (const auto& e : a.edges) {
        std::size_t f = a.index_of(e.from), t = a.index_of(e.to);
        if (t != zero && live[f] && live[t]) adj[f].push_back(t);
    }
    // Every state of the automaton is reachable from 0 by construction; detect a cycle by DFS coloring.
    std::vector<int> color(n, 0);
    for (std::size_t s = 0; s < n; ++s) {
        if (s == zero || !live[s] || color[s] != 0) continue;
        std::vector<std::pair<std::size_t, std::size_t>> stack{{s, 0}};
        color[s] = 1;
        while (!stack.empty()) {
            auto& [v, k] = stack.back();
            if (k < adj[v].size()) {
                std::size_t w = adj[v][k++];
                if (color[w] == 1) return Finiteness::ProvedInfinite;
                if (color[w] == 0) {
                    color[w] = 1;
                    stack.emplace_back(w, 0);
                }
            } else {
                color[v] = 2;
                stack.pop_back();
            }
        }
    }
    return Finiteness::ProvedFinite;
}

/// Longest Matching length when the automaton is acyclic on live states; -1 if cyclic.
inline long longest_matching_length(const GapAutomaton& a) {
    if (classify_finiteness(a) == Finiteness::ProvedInfinite) return -1;
    std::vector<bool> live = coreachable(a);
    const std::size_t zero = a.index_of(0);
    std::vector<long> best(a.states.size(), -2);  // -2 unknown, -1 dead
    best[zero] = 0;
    // Longest remaining X length from state g to 0.
    auto solve = [&](auto&& self, std::size_t s) -> long {
        if (best[s] != -2) return best[s];
        long r = -1;
        if (live[s]) {
            for (const auto& e : a.edges) {
                if (a.index_of(e.from) != s) continue;
                std::size_t t = a.index_of(e.to);
                long sub = self(self, t);
                if (sub < 0) continue;
                long add = e.side == Side::X ? a.x_lengths[e.block] : 0;
                r = std::max(r, sub + add);
            }
        }
        return best[s] = r;
    };
    long m = 0;
    for (const auto& se : a.start_edges) {
        long sub = solve(solve, a.index_of(se.to));
        if (sub >= 0) m = std::max(m, a.x_lengths[se.x_block] + sub);
    }
    return m;
}

template <class V>
struct Matching {
    Block<V> block;
    Similitude<V> map;
    std::vector<std::size_t> x_decomposition;
    std::vector<std::size_t> y_decomposition;
};

template <class V>
struct DedupEntry {
    Similitude<V> map;
    std::size_t representative = 0;  ///< index into MatchingSet::matchings
    std::size_t multiplicity = 0;
};

template <class V>
struct MatchingSet {
    GapAutomaton automaton;
    std::vector<Matching<V>> matchings;  ///< sorted by length, then value
    std::vector<DedupEntry<V>> dedup;    ///< one entry per distinct (length, value)
    std::vector<long long> counts;       ///< counts[l] = path count of length l, l <= complete_through
    Finiteness finiteness = Finiteness::ProvedFinite;
    bool truncated = false;
    long lmax = 0;
    long complete_through = 0;  ///< every Matching of length <= this was emitted
};

struct EnumerationOptions {
    std::size_t max_matchings = 200'000;
    std::size_t max_nodes = 4'000'000;
};

template <ScalarField F, class V = typename F::value_type>
MatchingSet<V> enumerate_matchings(const F& f, const std::vector<Block<V>>& d1, const std::vector<Block<V>>& d2p, long lmax,
                                   const EnumerationOptions& opt = {}) {
    MatchingSet<V> out;
    out.automaton = build_gap_automaton(d1, d2p);
    const GapAutomaton& a = out.automaton;
    if (lmax < a.max_block_length()) fail(ErrorCode::CapTooSmall, "Lmax is below the longest block length");
    out.finiteness = classify_finiteness(a);
    out.lmax = lmax;
    const std::vector<bool> live = coreachable(a);

    // Partial decompositions live in an arena; each node records its last block.
    struct Node {
        long parent;
        std::size_t block;
        Side side;
        long len_x;
        long len_y;
    };
    std::vector<Node> arena;
    using Key = std::pair<long, std::size_t>;  // (max stream length, arena index)
    std::priority_queue<Key, std::vector<Key>, std::greater<Key>> queue;

    auto push = [&](const Node& nd) {
        const long key = std::max(nd.len_x, nd.len_y);
        if (!live[a.index_of(nd.len_x - nd.len_y)]) return;
        if (key > lmax) {
            out.truncated = true;
            return;
        }
        arena.push_back(nd);
        queue.emplace(key, arena.size() - 1);
    };
    for (std::size_t i = 0; i < d1.size(); ++i) {
        arena.push_back({-1, i, Side::X, d1[i].length, 0});
        const long xi = static_cast<long>(arena.size() - 1);
        for (std::size_t j = 0; j < d2p.size(); ++j) push({xi, j, Side::Y, d1[i].length, d2p[j].length});
    }

    std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> raw;
    long stopped_at = -1;
    while (!queue.empty()) {
        auto [key, idx] = queue.top();
        if (raw.size() >= opt.max_matchings || arena.size() >= opt.max_nodes) {
            stopped_at = key;
            break;
        }
        queue.pop();
        const Node nd = arena[idx];
        const long g = nd.len_x - nd.len_y;
        if (g == 0) {
            std::vector<std::size_t> xs, ys;
            for (long k = static_cast<long>(idx); k >= 0; k = arena[static_cast<std::size_t>(k)].parent) {
                const Node& c = arena[static_cast<std::size_t>(k)];
                (c.side == Side::X ? xs : ys).push_back(c.block);
            }
            std::reverse(xs.begin(), xs.end());
            std::reverse(ys.begin(), ys.end());
            raw.emplace_back(std::move(xs), std::move(ys));
            continue;
        }
        if (g < 0) {
            for (std::size_t i = 0; i < d1.size(); ++i) push({static_cast<long>(idx), i, Side::X, nd.len_x + d1[i].length, nd.len_y});
        } else {
            for (std::size_t j = 0; j < d2p.size(); ++j) push({static_cast<long>(idx), j, Side::Y, nd.len_x, nd.len_y + d2p[j].length});
        }
    }
    if (stopped_at >= 0) {
        out.truncated = true;
        out.complete_through = stopped_at - 1;
    } else {
        out.complete_through = lmax;
    }

    for (auto& [xs, ys] : raw) {
        Block<V> bx{0, {}}, by{0, {}};
        for (std::size_t i : xs) bx = concat(bx, d1[i]);
        for (std::size_t j : ys) by = concat(by, d2p[j]);
        Matching<V> m;
        m.block = digit_sum(f, bx, by);
        m.map = similitude_of_block(f, m.block);
        m.x_decomposition = std::move(xs);
        m.y_decomposition = std::move(ys);
        out.matchings.push_back(std::move(m));
    }
    std::vector<double> approx;
    approx.reserve(out.matchings.size());
    for (const auto& m : out.matchings) approx.push_back(f.to_double(m.map.t));
    std::vector<std::size_t> order(out.matchings.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        const auto& p = out.matchings[i];
        const auto& q = out.matchings[j];
        if (p.block.length != q.block.length) return p.block.length < q.block.length;
        int c = compare_with_hint(f, p.map.t, approx[i], q.map.t, approx[j]);
        if (c != 0) return c < 0;
        return std::tie(p.x_decomposition, p.y_decomposition) < std::tie(q.x_decomposition, q.y_decomposition);
    });
    {
        std::vector<Matching<V>> sorted;
        std::vector<double> sorted_approx;
        sorted.reserve(order.size());
        for (std::size_t k : order) {
            sorted.push_back(std::move(out.matchings[k]));
            sorted_approx.push_back(approx[k]);
        }
        out.matchings = std::move(sorted);
        approx = std::move(sorted_approx);
    }
    out.counts.assign(static_cast<std::size_t>(std::max(0L, out.complete_through)) + 1, 0);
    for (std::size_t k = 0; k < out.matchings.size(); ++k) {
        const auto& m = out.matchings[k];
        if (m.block.length <= out.complete_through) ++out.counts[static_cast<std::size_t>(m.block.length)];
        if (!out.dedup.empty()) {
            auto& last = out.dedup.back();
            if (last.map.length == m.map.length && compare_with_hint(f, last.map.t, approx[last.representative], m.map.t, approx[k]) == 0) {
                ++last.multiplicity;
                continue;
            }
        }
        out.dedup.push_back({m.map, k, 1});
    }
    return out;
}

/// Distinct maps of a MatchingSet, in sorted order.
template <class V>
std::vector<Similitude<V>> dedup_maps(const MatchingSet<V>& ms) {
    std::vector<Similitude<V>> r;
    r.reserve(ms.dedup.size());
    for (const auto& e : ms.dedup) r.push_back(e.map);
    return r;
}

}  // namespace projdim
