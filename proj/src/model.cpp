#include "csb/model.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace csb {

std::string to_string(Mode mode) { return mode == Mode::Loss ? "loss" : "reward"; }

Mode mode_from_string(const std::string& s) {
    if (s == "loss")
        return Mode::Loss;
    if (s == "reward")
        return Mode::Reward;
    throw std::invalid_argument("unknown mode: " + s);
}

void validate_instance(const CsbInstance& inst) {
    if (inst.K < 1)
        throw std::invalid_argument("instance: K must be >= 1");
    if (!(inst.Q > 0.0))
        throw std::invalid_argument("instance: Q must be positive");
    if (static_cast<int>(inst.mu.size()) != inst.K || static_cast<int>(inst.theta.size()) != inst.K)
        throw std::invalid_argument("instance: mu/theta length must equal K");
    for (double m : inst.mu)
        if (!(m >= 0.0 && m <= 1.0))
            throw std::invalid_argument("instance: mu entries must lie in [0,1]");
    for (double t : inst.theta)
        if (!(t > 0.0 && t <= inst.Q + kFeasTol))
            throw std::invalid_argument("instance: theta entries must lie in (0,Q]");
}

CsbInstance make_instance(std::vector<double> mu, std::vector<double> theta, double Q, Mode mode) {
    CsbInstance inst;
    inst.K = static_cast<int>(mu.size());
    inst.Q = Q;
    inst.mode = mode;
    inst.mu = std::move(mu);
    inst.theta = std::move(theta);
    validate_instance(inst);
    return inst;
}

CsbInstance make_same_threshold_instance(std::vector<double> mu, double theta_s, double Q, Mode mode) {
    std::vector<double> theta(mu.size(), theta_s);
    return make_instance(std::move(mu), std::move(theta), Q, mode);
}

std::uint64_t instance_hash(const CsbInstance& inst) {
    char buf[64];
    std::string text = to_string(inst.mode);
    auto put = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g,", v);
        text += buf;
    };
    text += ";";
    put(static_cast<double>(inst.K));
    put(inst.Q);
    for (double m : inst.mu)
        put(m);
    text += ";";
    for (double t : inst.theta)
        put(t);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

bool is_feasible(const CsbInstance& inst, const Allocation& alloc) {
    if (static_cast<int>(alloc.a.size()) != inst.K)
        return false;
    double total = 0.0;
    for (double v : alloc.a) {
        if (!(v >= 0.0 && v <= inst.Q + kFeasTol))
            return false;
        total += v;
    }
    return total <= inst.Q + kFeasTol;
}

std::vector<double> theta_candidate_set(int K, double Q) {
    if (K < 1)
        throw std::invalid_argument("theta_candidate_set: K must be >= 1");
    if (!(Q > 0.0))
        throw std::invalid_argument("theta_candidate_set: Q must be positive");
    std::vector<double> set(K);
    for (int i = 0; i < K; ++i)
        set[i] = Q / static_cast<double>(K - i);
    return set;
}

SameThresholdEquivalent same_threshold_equivalent(double theta_s, int K, double Q) {
    if (K < 1)
        throw std::invalid_argument("same_threshold_equivalent: K must be >= 1");
    if (!(theta_s > 0.0 && theta_s <= Q + kFeasTol))
        throw std::invalid_argument("same_threshold_equivalent: theta_s outside (0,Q]");
    long long m = detail::ifloor_eps(Q / theta_s);
    int M = static_cast<int>(std::min<long long>(m, K));
    return {M, Q / static_cast<double>(M)};
}

double expected_loss(const CsbInstance& inst, const Allocation& alloc) {
    if (!is_feasible(inst, alloc))
        throw std::invalid_argument("expected_loss: infeasible allocation");
    double total = 0.0;
    for (int i = 0; i < inst.K; ++i) {
        bool funded = alloc.a[i] >= inst.theta[i];
        if (inst.mode == Mode::Loss ? !funded : funded)
            total += inst.mu[i];
    }
    return total;
}

double per_round_regret(const CsbInstance& inst, const Allocation& alloc, const Allocation& opt) {
    double va = expected_loss(inst, alloc);
    double vo = expected_loss(inst, opt);
    double gap = inst.mode == Mode::Loss ? va - vo : vo - va;
    if (gap < -kFeasTol)
        throw std::logic_error("per_round_regret: supplied optimum is not optimal");
    return gap < 0.0 ? 0.0 : gap;
}

double residual_gamma(const CsbInstance& inst, const Allocation& opt) {
    double funded = 0.0;
    for (int i = 0; i < inst.K; ++i)
        if (opt.a[i] >= inst.theta[i])
            funded += inst.theta[i];
    double r = inst.Q - funded;
    if (r < 0.0)
        r = 0.0;
    return r / static_cast<double>(inst.K);
}

bool in_tolerance_interval(double theta_hat, double theta, double gamma) {
    if (!(gamma > 0.0))
        throw std::invalid_argument("in_tolerance_interval: gamma must be positive");
    double end = detail::ceil_eps(theta / gamma) * gamma;
    return theta_hat >= theta - 1e-12 && theta_hat <= end + 1e-12;
}

bool thresholds_differ(double theta_i, double theta_j, double gamma) {
    if (!(gamma > 0.0))
        throw std::invalid_argument("thresholds_differ: gamma must be positive");
    return detail::iceil_eps(theta_i / gamma) != detail::iceil_eps(theta_j / gamma);
}

int distinct_threshold_count(const CsbInstance& inst, double gamma) {
    if (!(gamma > 0.0))
        throw std::invalid_argument("distinct_threshold_count: gamma must be positive");
    std::vector<long long> cells;
    cells.reserve(inst.theta.size());
    for (double t : inst.theta)
        cells.push_back(detail::iceil_eps(t / gamma));
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
    return static_cast<int>(cells.size());
}

double optimal_loss_same_threshold(const std::vector<double>& mu, double theta_s, double Q) {
    auto eq = same_threshold_equivalent(theta_s, static_cast<int>(mu.size()), Q);
    std::vector<double> sorted = mu;
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());
    double loss = 0.0;
    for (size_t i = eq.M; i < sorted.size(); ++i)
        loss += sorted[i];
    return loss;
}

namespace {

// Max funded value over all subsets with total threshold weight <= Q.
double max_funded_value(const std::vector<double>& mu, const std::vector<double>& theta, double Q) {
    int K = static_cast<int>(mu.size());
    double best = 0.0;
    for (std::uint32_t mask = 0; mask < (1u << K); ++mask) {
        double w = 0.0, v = 0.0;
        for (int i = 0; i < K; ++i) {
            if (mask & (1u << i)) {
                w += theta[i];
                v += mu[i];
            }
        }
        if (w <= Q + kFeasTol && v > best)
            best = v;
    }
    return best;
}

} // namespace

bool is_allocation_equivalent(const std::vector<double>& theta_hat, const CsbInstance& inst) {
    if (inst.K > 20)
        throw std::invalid_argument("is_allocation_equivalent: exhaustive oracle limited to K <= 20");
    if (static_cast<int>(theta_hat.size()) != inst.K)
        throw std::invalid_argument("is_allocation_equivalent: theta_hat length mismatch");
    double v_true = max_funded_value(inst.mu, inst.theta, inst.Q);
    double v_hat = max_funded_value(inst.mu, theta_hat, inst.Q);
    return std::abs(v_true - v_hat) <= 1e-12;
}

GapSummary gap_summary(const CsbInstance& inst) {
    GapSummary gs;
    gs.nabla_i_min.assign(inst.K, 0.0);

    bool same_theta = std::all_of(inst.theta.begin(), inst.theta.end(),
                                  [&](double t) { return t == inst.theta[0]; });
    if (inst.K > 20 && !same_theta)
        throw std::invalid_argument("gap_summary: exhaustive enumeration limited to K <= 20");

    if (inst.K > 20) {
        // Same-threshold closed form: feasible funded sets are exactly the
        // subsets of size <= M, so gaps reduce to sorted-mean differences.
        auto eq = same_threshold_equivalent(inst.theta[0], inst.K, inst.Q);
        int M = eq.M;
        std::vector<int> order(inst.K);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            return inst.mu[a] != inst.mu[b] ? inst.mu[a] > inst.mu[b] : a < b;
        });
        std::vector<double> sorted(inst.K);
        for (int p = 0; p < inst.K; ++p)
            sorted[p] = inst.mu[order[p]];
        gs.M = M;
        gs.k_prime = M;
        for (int p = 0; p < M; ++p)
            gs.nabla_max += sorted[p];
        auto min_swap_gap = [&](int p, int skip) {
            double best = sorted[p] > 0.0 ? sorted[p] : 0.0; // drop the arm entirely
            for (int j = M; j < inst.K; ++j) {
                if (j == skip)
                    continue;
                if (sorted[j] < sorted[p]) {
                    best = sorted[p] - sorted[j];
                    break;
                }
            }
            return best;
        };
        gs.nabla_min = M > 0 ? min_swap_gap(M - 1, -1) : 0.0;
        for (int p = 0; p < inst.K; ++p) {
            double g = p < M ? min_swap_gap(p, -1) : (M > 0 ? min_swap_gap(M - 1, p) : 0.0);
            gs.nabla_i_min[order[p]] = g;
        }
        return gs;
    }

    const std::uint32_t full = 1u << inst.K;
    double best_value = 0.0;
    std::uint32_t best_mask = 0;
    std::vector<double> weight(full, 0.0), value(full, 0.0);
    for (std::uint32_t mask = 1; mask < full; ++mask) {
        std::uint32_t low = mask & (mask - 1);
        int bit = std::countr_zero(mask);
        weight[mask] = weight[low] + inst.theta[bit];
        value[mask] = value[low] + inst.mu[bit];
    }
    for (std::uint32_t mask = 0; mask < full; ++mask) {
        if (weight[mask] > inst.Q + kFeasTol)
            continue;
        if (value[mask] > best_value + 1e-15) {
            best_value = value[mask];
            best_mask = mask;
        }
        gs.k_prime = std::max(gs.k_prime, std::popcount(mask));
    }
    gs.M = std::popcount(best_mask);

    double min_pos = std::numeric_limits<double>::infinity();
    std::vector<double> per_arm(inst.K, std::numeric_limits<double>::infinity());
    for (std::uint32_t mask = 0; mask < full; ++mask) {
        if (weight[mask] > inst.Q + kFeasTol)
            continue;
        double gap = best_value - value[mask];
        gs.nabla_max = std::max(gs.nabla_max, gap);
        if (gap > 1e-12) {
            min_pos = std::min(min_pos, gap);
            for (int i = 0; i < inst.K; ++i)
                if (!(mask & (1u << i)))
                    per_arm[i] = std::min(per_arm[i], gap);
        }
    }
    gs.nabla_min = std::isinf(min_pos) ? 0.0 : min_pos;
    for (int i = 0; i < inst.K; ++i)
        gs.nabla_i_min[i] = std::isinf(per_arm[i]) ? 0.0 : per_arm[i];
    return gs;
}

} // namespace csb
