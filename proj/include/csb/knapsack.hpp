#pragma once

#include <vector>

#include "csb/model.hpp"

namespace csb {

struct KnapsackSolution {
    std::vector<int> selected; // ascending item indices
    double total_value = 0.0;
    double total_weight = 0.0;
};

// Exhaustive 0-1 knapsack over <= 20 items. Ties between equal-value subsets
// are broken toward the set containing the smallest differing index.
KnapsackSolution solve_bruteforce(const std::vector<double>& values,
                                  const std::vector<double>& weights, double capacity);

// Exact DP on the integer problem obtained by scaling: weights ceil(w*S),
// capacity floor(Q*S), values round(v*S). Ceiling the weights keeps every
// returned solution feasible under the original weights. Same tie-break rule
// as the brute force.
KnapsackSolution solve_dp(const std::vector<double>& values, const std::vector<double>& weights,
                          double capacity, long long scale);

inline constexpr long long kDefaultKnapsackScale = 10000;

// Optimal censoring allocation: solve KP(mu, theta, Q) and assign theta_i to
// each selected arm, 0 elsewhere.
Allocation optimal_allocation(const CsbInstance& inst, long long scale = kDefaultKnapsackScale);

} // namespace csb
