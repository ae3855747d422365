#pragma once

/**
 * @file osc.hpp
 * @brief Open set condition checks.
 *
 * check_osc tests a finite list of maps against an open interval. The
 * separation certificate covers the whole (possibly infinite) Matching
 * system: for every gap state it unfolds a few steps of the block streams in
 * that state's local coordinates and checks that the resulting pieces from
 * different first steps never overlap. Any two distinct Matchings part ways
 * at some partial decomposition, so the local checks together separate every
 * pair of Matching images.
 */

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "projdim/matcher.hpp"

namespace projdim {

enum class OscStatus { DisjointUpToCap, OverlapFound };

inline const char* to_string(OscStatus s) { return s == OscStatus::DisjointUpToCap ? "DisjointUpToCap" : "OverlapFound"; }

template <class V>
struct OscReport {
    std::size_t checked_maps = 0;
    std::vector<std::pair<std::size_t, std::size_t>> overlapping_pairs;
    Interval<V> open_set;
    OscStatus status = OscStatus::DisjointUpToCap;
    bool contained = true;  ///< every image of the closure lies in the closure
    std::optional<long> truncation_length;
};

/// Open intervals (a.lo, a.hi) and (b.lo, b.hi) intersect.
template <ScalarField F, class V = typename F::value_type>
bool open_overlap(const F& f, const Interval<V>& a, const Interval<V>& b) {
    const V& lo = f.compare(a.lo, b.lo) >= 0 ? a.lo : b.lo;
    const V& hi = f.compare(a.hi, b.hi) <= 0 ? a.hi : b.hi;
    return f.compare(lo, hi) < 0;
}

template <ScalarField F, class V = typename F::value_type>
OscReport<V> check_osc(const F& f, const std::vector<Similitude<V>>& maps, const Interval<V>& open_set,
                       std::optional<long> truncation_length = std::nullopt) {
    OscReport<V> rep;
    rep.checked_maps = maps.size();
    rep.open_set = open_set;
    rep.truncation_length = truncation_length;
    std::vector<Interval<V>> imgs;
    imgs.reserve(maps.size());
    for (const auto& m : maps) {
        imgs.push_back(image(f, m, open_set));
        const auto& iv = imgs.back();
        if (f.compare(iv.lo, open_set.lo) < 0 || f.compare(iv.hi, open_set.hi) > 0) rep.contained = false;
    }
    std::vector<double> dlo, dhi;
    for (const auto& iv : imgs) {
        dlo.push_back(f.to_double(iv.lo));
        dhi.push_back(f.to_double(iv.hi));
    }
    std::vector<std::size_t> order(maps.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return compare_with_hint(f, imgs[a].lo, dlo[a], imgs[b].lo, dlo[b]) < 0; });
    for (std::size_t x = 0; x < order.size(); ++x) {
        for (std::size_t y = x + 1; y < order.size(); ++y) {
            const auto& a = imgs[order[x]];
            const auto& b = imgs[order[y]];
            if (compare_with_hint(f, b.lo, dlo[order[y]], a.hi, dhi[order[x]]) >= 0) break;
            if (open_overlap(f, a, b)) rep.overlapping_pairs.emplace_back(std::min(order[x], order[y]), std::max(order[x], order[y]));
        }
    }
    std::sort(rep.overlapping_pairs.begin(), rep.overlapping_pairs.end());
    if (!rep.overlapping_pairs.empty() || !rep.contained) rep.status = OscStatus::OverlapFound;
    return rep;
}

struct CertificateOptions {
    int max_depth = 8;
    std::size_t max_pieces = 5000;
};

struct StateCertificate {
    long state = 0;
    int depth = 0;  ///< unfolding depth that separated the pieces; 0 if none did
    std::size_t pieces = 0;
};

struct SeparationCertificate {
    bool passed = false;
    std::vector<StateCertificate> states;
    std::string failure;
};

namespace detail {

template <ScalarField F, class V = typename F::value_type>
struct Unfolder {
    const F& f;
    const std::vector<Block<V>>& d1;
    const std::vector<Block<V>>& d2p;
    std::vector<V> xv, yv;  ///< block values
    Interval<V> h1, h2p, h;
    std::vector<bool> live;
    const GapAutomaton& a;

    struct Piece {
        Interval<V> iv;
        std::size_t subtree;
    };

    /// Enc(g): all completions from gap g, in coordinates where min(stream lengths) = 0.
    Interval<V> enclosure(long g) const {
        if (g == 0) return h;
        if (g > 0) {
            V sc = f.beta_pow(-g);
            return {sc * h1.lo + h2p.lo, sc * h1.hi + h2p.hi};
        }
        V sc = f.beta_pow(g);
        return {h1.lo + sc * h2p.lo, h1.hi + sc * h2p.hi};
    }

    bool is_live(long g) const { return live[a.index_of(g)]; }

    void expand(long la, long lb, const V& offset, int depth, std::size_t subtree, bool root, std::vector<Piece>& out,
                std::size_t cap, bool& overflow) const {
        if (overflow) return;
        const long g = la - lb;
        if ((!root && g == 0) || depth == 0) {
            const long m = std::min(la, lb);
            Interval<V> e = enclosure(g);
            V sc = f.beta_pow(-m);
            out.push_back({{offset + sc * e.lo, offset + sc * e.hi}, subtree});
            if (out.size() > cap) overflow = true;
            return;
        }
        std::size_t child = 0;
        auto next_subtree = [&]() { return root ? child++ : subtree; };
        if (root && g == 0) {
            for (std::size_t i = 0; i < d1.size(); ++i)
                for (std::size_t j = 0; j < d2p.size(); ++j) {
                    const long na = la + d1[i].length, nb = lb + d2p[j].length;
                    std::size_t st = next_subtree();
                    if (!is_live(na - nb)) continue;
                    expand(na, nb, offset + f.beta_pow(-la) * xv[i] + f.beta_pow(-lb) * yv[j], depth - 1, st, false, out, cap, overflow);
                }
            return;
        }
        if (g < 0) {
            for (std::size_t i = 0; i < d1.size(); ++i) {
                const long na = la + d1[i].length;
                std::size_t st = next_subtree();
                if (!is_live(na - lb)) continue;
                expand(na, lb, offset + f.beta_pow(-la) * xv[i], depth - 1, st, false, out, cap, overflow);
            }
        } else {
            for (std::size_t j = 0; j < d2p.size(); ++j) {
                const long nb = lb + d2p[j].length;
                std::size_t st = next_subtree();
                if (!is_live(la - nb)) continue;
                expand(la, nb, offset + f.beta_pow(-lb) * yv[j], depth - 1, st, false, out, cap, overflow);
            }
        }
    }

    /// Pieces from different first steps have disjoint interiors.
    bool separated(std::vector<Piece>& pieces) const {
        std::stable_sort(pieces.begin(), pieces.end(), [&](const Piece& p, const Piece& q) { return f.compare(p.iv.lo, q.iv.lo) < 0; });
        for (std::size_t x = 0; x < pieces.size(); ++x)
            for (std::size_t y = x + 1; y < pieces.size(); ++y) {
                if (f.compare(pieces[y].iv.lo, pieces[x].iv.hi) >= 0) break;
                if (pieces[x].subtree != pieces[y].subtree && open_overlap(f, pieces[x].iv, pieces[y].iv)) return false;
            }
        return true;
    }
};

}  // namespace detail

/// Separation certificate for all Matching images inside the hull h1 + h2p.
template <ScalarField F, class V = typename F::value_type>
SeparationCertificate separation_certificate(const F& f, const std::vector<Block<V>>& d1, const std::vector<Block<V>>& d2p,
                                             const Interval<V>& h1, const Interval<V>& h2p, const CertificateOptions& opt = {}) {
    GapAutomaton a = build_gap_automaton(d1, d2p);
    detail::Unfolder<F> u{f, d1, d2p, {}, {}, h1, h2p, {h1.lo + h2p.lo, h1.hi + h2p.hi}, coreachable(a), a};
    for (const auto& b : d1) u.xv.push_back(block_value(f, b));
    for (const auto& b : d2p) u.yv.push_back(block_value(f, b));

    SeparationCertificate cert;
    std::vector<long> states{0};
    for (long g : a.states)
        if (g != 0 && u.is_live(g)) states.push_back(g);
    for (long g : states) {
        StateCertificate sc{g, 0, 0};
        for (int depth = 1; depth <= opt.max_depth; ++depth) {
            std::vector<typename detail::Unfolder<F>::Piece> pieces;
            bool overflow = false;
            u.expand(std::max(g, 0L), std::max(-g, 0L), f.zero(), depth, 0, true, pieces, opt.max_pieces, overflow);
            if (overflow) break;
            sc.pieces = pieces.size();
            if (u.separated(pieces)) {
                sc.depth = depth;
                break;
            }
        }
        cert.states.push_back(sc);
        if (sc.depth == 0) {
            cert.failure = "pieces at gap state " + std::to_string(g) + " still overlap at the depth cap";
            return cert;
        }
    }
    cert.passed = true;
    return cert;
}

}  // namespace projdim
