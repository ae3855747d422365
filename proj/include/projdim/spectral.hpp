#pragma once

// Spectral radius of a sparse nonnegative matrix.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

namespace projdim {

using SparseRows = std::vector<std::vector<std::pair<std::size_t, double>>>;

struct SpectralResult {
    double rho = 0.0;
    double lower = 0.0;  ///< Collatz-Wielandt lower bound
    double upper = 0.0;  ///< Collatz-Wielandt upper bound
    double row_sum_min = 0.0;
    double row_sum_max = 0.0;
    int iterations = 0;
};

/// Strongly connected components (Tarjan, iterative). Returns the component id per vertex.
inline std::vector<std::size_t> strong_components(const SparseRows& rows, std::size_t& count) {
    const std::size_t n = rows.size();
    const std::size_t unset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> index(n, unset), low(n, 0), comp(n, unset);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::size_t next = 0;
    count = 0;
    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != unset) continue;
        std::vector<std::pair<std::size_t, std::size_t>> call{{root, 0}};
        index[root] = low[root] = next++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            auto& [v, k] = call.back();
            if (k < rows[v].size()) {
                std::size_t w = rows[v][k++].first;
                if (index[w] == unset) {
                    index[w] = low[w] = next++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.emplace_back(w, 0);
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
            } else {
                const std::size_t done = v;
                call.pop_back();
                if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
                if (low[done] == index[done]) {
                    std::size_t w;
                    do {
                        w = stack.back();
                        stack.pop_back();
                        on_stack[w] = false;
                        comp[w] = count;
                    } while (w != done);
                    ++count;
                }
            }
        }
    }
    return comp;
}

/// Power iteration on (B + I) per strongly connected component, with Collatz-Wielandt brackets.
inline SpectralResult spectral_radius(const SparseRows& rows, double tol = 1e-9, int max_iterations = 200000) {
    SpectralResult r;
    const std::size_t n = rows.size();
    if (n == 0) return r;
    r.row_sum_min = std::numeric_limits<double>::infinity();
    for (const auto& row : rows) {
        double s = 0;
        for (auto [j, v] : row) s += v;
        r.row_sum_min = std::min(r.row_sum_min, s);
        r.row_sum_max = std::max(r.row_sum_max, s);
    }
    std::size_t ncomp = 0;
    std::vector<std::size_t> comp = strong_components(rows, ncomp);
    std::vector<std::vector<std::size_t>> members(ncomp);
    for (std::size_t v = 0; v < n; ++v) members[comp[v]].push_back(v);

    std::vector<double> x(n, 0.0), y(n, 0.0);
    for (std::size_t c = 0; c < ncomp; ++c) {
        const auto& mem = members[c];
        bool cyclic = mem.size() > 1;
        if (!cyclic)
            for (auto [j, v] : rows[mem[0]]) cyclic = cyclic || (j == mem[0] && v > 0);
        if (!cyclic) continue;
        for (std::size_t v : mem) x[v] = 1.0;
        double lo = 0, hi = 0;
        for (int it = 0; it < max_iterations; ++it) {
            ++r.iterations;
            lo = std::numeric_limits<double>::infinity();
            hi = 0;
            double norm = 0;
            for (std::size_t v : mem) {
                double acc = x[v];
                for (auto [j, w] : rows[v])
                    if (comp[j] == c) acc += w * x[j];
                y[v] = acc;
                lo = std::min(lo, acc / x[v]);
                hi = std::max(hi, acc / x[v]);
                norm = std::max(norm, acc);
            }
            for (std::size_t v : mem) x[v] = y[v] / norm;
            if (hi - lo <= tol) break;
        }
        r.rho = std::max(r.rho, 0.5 * (lo + hi) - 1);
        r.lower = std::max(r.lower, lo - 1);
        r.upper = std::max(r.upper, hi - 1);
    }
    r.rho = std::clamp(r.rho, r.row_sum_min, r.row_sum_max);
    r.lower = std::max(r.lower, r.row_sum_min);
    r.upper = std::min(std::max(r.upper, r.lower), r.row_sum_max);
    return r;
}

}  // namespace projdim
