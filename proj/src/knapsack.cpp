#include "csb/knapsack.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace csb {

namespace {

void check_inputs(const std::vector<double>& values, const std::vector<double>& weights) {
    if (values.size() != weights.size())
        throw std::invalid_argument("knapsack: values/weights size mismatch");
    for (double v : values)
        if (!(v >= 0.0))
            throw std::invalid_argument("knapsack: negative value");
    for (double w : weights)
        if (!(w >= 0.0))
            throw std::invalid_argument("knapsack: negative weight");
}

// True if `a` is preferred over `b` among equal-value subsets: the set
// containing the smallest index where they differ wins.
bool prefer_set(const std::vector<int>& a, const std::vector<int>& b) {
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) {
            ++i;
            ++j;
        } else {
            return a[i] < b[j];
        }
    }
    return i < a.size();
}

KnapsackSolution finish(const std::vector<double>& values, const std::vector<double>& weights,
                        std::vector<int> selected) {
    KnapsackSolution sol;
    sol.selected = std::move(selected);
    for (int i : sol.selected) {
        sol.total_value += values[i];
        sol.total_weight += weights[i];
    }
    return sol;
}

} // namespace

KnapsackSolution solve_bruteforce(const std::vector<double>& values,
                                  const std::vector<double>& weights, double capacity) {
    check_inputs(values, weights);
    int n = static_cast<int>(values.size());
    if (n > 20)
        throw std::invalid_argument("solve_bruteforce: limited to 20 items");

    double best_value = -1.0;
    std::vector<int> best;
    std::vector<int> cur;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        double w = 0.0, v = 0.0;
        cur.clear();
        for (int i = 0; i < n; ++i) {
            if (mask & (1u << i)) {
                w += weights[i];
                v += values[i];
                cur.push_back(i);
            }
        }
        if (w > capacity + kFeasTol)
            continue;
        if (v > best_value + 1e-12 ||
            (std::abs(v - best_value) <= 1e-12 && prefer_set(cur, best))) {
            best_value = v;
            best = cur;
        }
    }
    return finish(values, weights, best);
}

KnapsackSolution solve_dp(const std::vector<double>& values, const std::vector<double>& weights,
                          double capacity, long long scale) {
    check_inputs(values, weights);
    if (scale < 1)
        throw std::invalid_argument("solve_dp: scale must be >= 1");
    int n = static_cast<int>(values.size());

    std::vector<long long> w(n), v(n);
    for (int i = 0; i < n; ++i) {
        w[i] = detail::iceil_eps(weights[i] * static_cast<double>(scale));
        v[i] = std::llround(values[i] * static_cast<double>(scale));
    }
    long long cap = capacity > 0.0 ? detail::ifloor_eps(capacity * static_cast<double>(scale)) : 0;

    // The scaled weights often share a large common divisor (grid-aligned
    // thresholds); dividing it out shrinks the DP table without changing the
    // solution set.
    long long g = cap;
    for (int i = 0; i < n; ++i)
        if (w[i] > 0)
            g = std::gcd(g, w[i]);
    if (g > 1) {
        for (int i = 0; i < n; ++i)
            w[i] /= g;
        cap /= g;
    }
    if (cap < 0 || (static_cast<long long>(n) + 1) * (cap + 1) > 200000000LL)
        throw std::invalid_argument("solve_dp: scaled capacity too large");

    // Suffix table suf[i][c] = best scaled value over items i..n-1 with
    // capacity c; walking forward and preferring inclusion yields the same
    // tie-break as the brute force.
    const size_t row = static_cast<size_t>(cap) + 1;
    thread_local std::vector<std::int64_t> suf;
    suf.assign((static_cast<size_t>(n) + 1) * row, 0);
    for (int i = n - 1; i >= 0; --i) {
        const std::int64_t* next = &suf[(static_cast<size_t>(i) + 1) * row];
        std::int64_t* curr = &suf[static_cast<size_t>(i) * row];
        for (long long c = 0; c <= cap; ++c) {
            std::int64_t best = next[c];
            if (w[i] <= c) {
                std::int64_t with = next[c - w[i]] + v[i];
                if (with > best)
                    best = with;
            }
            curr[c] = best;
        }
    }

    std::vector<int> selected;
    long long c = cap;
    for (int i = 0; i < n; ++i) {
        const std::int64_t* next = &suf[(static_cast<size_t>(i) + 1) * row];
        if (w[i] <= c && next[c - w[i]] + v[i] == suf[static_cast<size_t>(i) * row + c]) {
            selected.push_back(i);
            c -= w[i];
        }
    }
    return finish(values, weights, selected);
}

Allocation optimal_allocation(const CsbInstance& inst, long long scale) {
    validate_instance(inst);
    KnapsackSolution sol = solve_dp(inst.mu, inst.theta, inst.Q, scale);
    Allocation alloc;
    alloc.a.assign(inst.K, 0.0);
    for (int i : sol.selected)
        alloc.a[i] = inst.theta[i];
    return alloc;
}

} // namespace csb
