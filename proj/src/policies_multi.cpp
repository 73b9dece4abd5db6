#include "csb/policies.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "csb/knapsack.hpp"

namespace csb {

namespace {

double resolve_delta(double delta, long long horizon) {
    if (delta > 0.0)
        return delta;
    if (horizon < 1)
        throw std::invalid_argument("delta unset and no horizon to derive delta = 1/T from");
    return 1.0 / static_cast<double>(horizon);
}

} // namespace

// ---------------------------------------------------------------------------
// CSB-MK (and the shared engine NumMk builds on)

CsbMk::CsbMk(const InstancePublic& pub, const MultiThresholdKnownConfig& cfg, RngStream rng)
    : CsbMk(pub, cfg, std::move(rng), Mode::Loss) {}

CsbMk::CsbMk(const InstancePublic& pub, const MultiThresholdKnownConfig& cfg, RngStream rng,
             Mode expected_mode)
    : pub_(pub), rng_(std::move(rng)), n_(cfg.n), gamma_(cfg.gamma), cadence_(cfg.resolve_cadence) {
    if (pub.mode != expected_mode)
        throw std::invalid_argument("multi-threshold policy: instance mode not supported");
    if (n_ < 1 || n_ > pub.K)
        throw std::invalid_argument("multi-threshold policy: n must lie in [1, K]");
    if (!(gamma_ > 0.0))
        throw std::invalid_argument("multi-threshold policy: gamma must be positive");
    if (cadence_ < 1)
        throw std::invalid_argument("multi-threshold policy: resolve_cadence must be >= 1");
    double delta = resolve_delta(cfg.delta, cfg.horizon);
    w_delta_ = w_delta_multi(pub.K, delta, cfg.epsilon, pub.Q, gamma_);
    grid_top_ = std::max<long long>(1, detail::iceil_eps(pub.Q / gamma_));

    S_.assign(pub.K, 1);
    F_.assign(pub.K, 1);
    Z_.assign(pub.K, 0);
    k_l_.assign(pub.K, 0);
    k_u_.assign(pub.K, grid_top_);
    cand_.assign(pub.K, grid_top_ / 2);
    good_.assign(pub.K, 0);
    alloc_idx_.assign(pub.K, 0);
    funded_.assign(pub.K, 0);
    for (int i = 0; i < pub.K; ++i) {
        if (k_u_[i] - k_l_[i] <= 1) { // gamma >= Q: the whole interval is in tolerance
            good_[i] = 1;
            cand_[i] = k_u_[i];
        }
    }
    next_arm_ = n_ < pub.K ? 1 : 0;
}

bool CsbMk::locked() const {
    return std::all_of(good_.begin(), good_.end(), [](std::uint8_t g) { return g != 0; });
}

double CsbMk::grid_value(long long k) const {
    double v = static_cast<double>(k) * gamma_;
    return v > pub_.Q ? pub_.Q : v;
}

void CsbMk::advance_next_arm() {
    while (next_arm_ >= 1 && next_arm_ <= pub_.K && good_[next_arm_ - 1]) {
        long long confirmed = k_u_[next_arm_ - 1];
        auto it = std::lower_bound(theta_n_.begin(), theta_n_.end(), confirmed);
        if (it == theta_n_.end() || *it != confirmed)
            theta_n_.insert(it, confirmed);
        ++next_arm_;
    }
}

void CsbMk::choose_active_candidate(int arm) {
    long long kl = k_l_[arm - 1];
    long long ku = k_u_[arm - 1];
    // First look for a confirmed threshold inside (theta_l, theta_u].
    auto lo = std::upper_bound(theta_n_.begin(), theta_n_.end(), kl);
    auto hi = std::upper_bound(theta_n_.begin(), theta_n_.end(), ku);
    if (lo == hi) {
        cand_[arm - 1] = (kl + ku) / 2;
        return;
    }
    int l = static_cast<int>(lo - theta_n_.begin()) + 1;
    int u = static_cast<int>(hi - theta_n_.begin());
    int j = (l + u) / 2;
    long long val = theta_n_[j - 1];
    cand_[arm - 1] = val == ku ? val - 1 : val;
}

void CsbMk::assign_estimation_allocations(int active) {
    std::fill(alloc_idx_.begin(), alloc_idx_.end(), 0);
    double bad_sum = 0.0;    // midpoints of every bad arm seen so far, funded or not
    double funded_sum = 0.0; // what bad arms actually received
    if (active >= 1) {
        alloc_idx_[active - 1] = cand_[active - 1];
        bad_sum = funded_sum = grid_value(cand_[active - 1]);
    }
    for (int i = 0; i < pub_.K; ++i) {
        if (i == active - 1 || good_[i])
            continue;
        long long mid = (k_l_[i] + k_u_[i]) / 2;
        double v = grid_value(mid);
        if (bad_sum + v <= pub_.Q + kFeasTol) { // event B_i
            alloc_idx_[i] = mid;
            funded_sum += v;
        }
        bad_sum += v;
    }
    // Good arms ranked by sampled loss-to-resource ratio take their upper
    // bound from whatever remains (event H_i).
    std::vector<int> good_order;
    for (int i = 0; i < pub_.K; ++i)
        if (good_[i])
            good_order.push_back(i);
    std::sort(good_order.begin(), good_order.end(), [&](int a, int b) {
        double ra = mu_hat_[a] / grid_value(k_u_[a]);
        double rb = mu_hat_[b] / grid_value(k_u_[b]);
        return ra != rb ? ra > rb : a < b;
    });
    double leftover = pub_.Q - funded_sum;
    double ranked_sum = 0.0;
    for (int i : good_order) {
        double tu = grid_value(k_u_[i]);
        if (ranked_sum + tu <= leftover + kFeasTol)
            alloc_idx_[i] = k_u_[i];
        ranked_sum += tu;
    }
}

Allocation CsbMk::materialize() const {
    Allocation alloc;
    alloc.a.assign(pub_.K, 0.0);
    for (int i = 0; i < pub_.K; ++i)
        if (alloc_idx_[i] > 0)
            alloc.a[i] = grid_value(alloc_idx_[i]);
    return alloc;
}

Allocation CsbMk::select(long long round) {
    round_ = round;
    mu_hat_.resize(pub_.K);
    for (int i = 0; i < pub_.K; ++i)
        mu_hat_[i] = rng_.sample_beta(S_[i], F_[i]);

    estimation_round_ = !locked();
    if (estimation_round_) {
        if (next_arm_ >= 1) {
            advance_next_arm();
            choose_active_candidate(next_arm_);
            assign_estimation_allocations(next_arm_);
        } else {
            assign_estimation_allocations(0);
        }
        return materialize();
    }

    if (knap_rounds_ % cadence_ == 0) {
        std::vector<double> weights(pub_.K);
        for (int i = 0; i < pub_.K; ++i)
            weights[i] = grid_value(k_u_[i]);
        KnapsackSolution sol = solve_dp(mu_hat_, weights, pub_.Q, kDefaultKnapsackScale);
        std::fill(funded_.begin(), funded_.end(), 0);
        for (int i : sol.selected)
            funded_[i] = 1;
    }
    ++knap_rounds_;
    for (int i = 0; i < pub_.K; ++i)
        alloc_idx_[i] = funded_[i] ? k_u_[i] : 0;
    return materialize();
}

void CsbMk::update(const FeedbackVector& fb) {
    if (estimation_round_)
        update_estimation(fb);
    else
        update_knapsack(fb);
}

void CsbMk::update_estimation(const FeedbackVector& fb) {
    for (int i = 0; i < pub_.K; ++i) {
        long long ai = alloc_idx_[i];
        if (!good_[i] && ai > k_l_[i]) {
            if (fb.y[i]) {
                k_l_[i] = ai;
                S_[i] += 1;
                F_[i] += Z_[i];
                Z_[i] = 0;
                events_.push_back({round_, 'L', i, static_cast<int>(k_l_[i]),
                                   static_cast<int>(k_u_[i]), static_cast<int>(ai)});
            } else {
                ++Z_[i];
            }
            if (Z_[i] == w_delta_) {
                k_u_[i] = ai;
                Z_[i] = 0;
                events_.push_back({round_, 'W', i, static_cast<int>(k_l_[i]),
                                   static_cast<int>(k_u_[i]), static_cast<int>(ai)});
            }
            if (k_u_[i] - k_l_[i] <= 1) {
                good_[i] = 1;
                cand_[i] = k_u_[i];
                events_.push_back({round_, 'K', i, static_cast<int>(k_l_[i]),
                                   static_cast<int>(k_u_[i]), static_cast<int>(k_u_[i])});
            }
        } else if (ai <= k_l_[i] || (good_[i] && ai < k_u_[i])) {
            S_[i] += fb.y[i];
            F_[i] += 1 - fb.y[i];
        }
    }
}

void CsbMk::update_knapsack(const FeedbackVector& fb) {
    for (int i = 0; i < pub_.K; ++i) {
        if (!funded_[i]) {
            S_[i] += fb.y[i];
            F_[i] += 1 - fb.y[i];
        }
    }
}

// ---------------------------------------------------------------------------
// NUM-MK

NumMk::NumMk(const InstancePublic& pub, const MultiThresholdKnownConfig& cfg, RngStream rng)
    : CsbMk(pub, cfg, std::move(rng), Mode::Reward) {}

void NumMk::update_estimation(const FeedbackVector& fb) {
    for (int i = 0; i < pub_.K; ++i) {
        long long ai = alloc_idx_[i];
        if (!good_[i] && ai > k_l_[i]) {
            if (fb.y[i]) {
                // A reward proves the allocation reaches the threshold.
                k_u_[i] = ai;
                S_[i] += 1;
                F_[i] += Z_[i];
                Z_[i] = 0;
                events_.push_back({round_, 'L', i, static_cast<int>(k_l_[i]),
                                   static_cast<int>(k_u_[i]), static_cast<int>(ai)});
            } else {
                ++Z_[i];
            }
            if (Z_[i] == w_delta_) {
                k_l_[i] = ai;
                Z_[i] = 0;
                events_.push_back({round_, 'W', i, static_cast<int>(k_l_[i]),
                                   static_cast<int>(k_u_[i]), static_cast<int>(ai)});
            }
            if (k_u_[i] - k_l_[i] <= 1) {
                good_[i] = 1;
                cand_[i] = k_u_[i];
                events_.push_back({round_, 'K', i, static_cast<int>(k_l_[i]),
                                   static_cast<int>(k_u_[i]), static_cast<int>(k_u_[i])});
            }
        } else if (ai >= k_u_[i] && ai > 0) {
            S_[i] += fb.y[i];
            F_[i] += 1 - fb.y[i];
        }
    }
}

void NumMk::update_knapsack(const FeedbackVector& fb) {
    for (int i = 0; i < pub_.K; ++i) {
        if (funded_[i]) {
            S_[i] += fb.y[i];
            F_[i] += 1 - fb.y[i];
        }
    }
}

// ---------------------------------------------------------------------------
// CSB-DU

CsbDu::CsbDu(const InstancePublic& pub, const AnytimeMultiConfig& cfg, RngStream rng)
    : pub_(pub), rng_(std::move(rng)), gamma_(cfg.gamma), cadence_(cfg.resolve_cadence) {
    if (pub.mode != Mode::Loss)
        throw std::invalid_argument("csb-du: instance mode not supported");
    if (!(gamma_ > 0.0))
        throw std::invalid_argument("csb-du: gamma must be positive");
    if (cadence_ < 1)
        throw std::invalid_argument("csb-du: resolve_cadence must be >= 1");
    S_.assign(pub.K, 1);
    F_.assign(pub.K, 1);
    L_.assign(pub.K, 0);
    z_counts_.resize(pub.K);
    alloc_idx_.assign(pub.K, 0);
    in_set_.assign(pub.K, 0);
    funded_.assign(pub.K, 0);
}

Allocation CsbDu::select(long long round) {
    round_ = round;
    mu_hat_.resize(pub_.K);
    for (int i = 0; i < pub_.K; ++i)
        mu_hat_[i] = rng_.sample_beta(S_[i], F_[i]);

    long long sum_all = 0;
    for (long long l : L_)
        sum_all += l;
    bool exploration = gamma_ * static_cast<double>(sum_all + pub_.K) <= pub_.Q + kFeasTol;

    std::fill(alloc_idx_.begin(), alloc_idx_.end(), 0);
    if (exploration) {
        std::fill(in_set_.begin(), in_set_.end(), 1);
        long long nonzero_sum = 0;
        int zero_count = 0;
        for (int i = 0; i < pub_.K; ++i) {
            if (L_[i] != 0)
                nonzero_sum += L_[i] + 1;
            else
                ++zero_count;
        }
        long long share_idx = 0;
        if (zero_count > 0) {
            double leftover = pub_.Q - gamma_ * static_cast<double>(nonzero_sum);
            // Snap the equal share down to the search grid so lower bounds
            // stay grid-aligned.
            share_idx = detail::ifloor_eps(leftover / static_cast<double>(zero_count) / gamma_);
            if (share_idx < 1)
                share_idx = 1;
        }
        for (int i = 0; i < pub_.K; ++i)
            alloc_idx_[i] = L_[i] != 0 ? L_[i] + 1 : share_idx;
    } else {
        bool need_solve = knap_rounds_ % cadence_ == 0;
        if (!need_solve) {
            // A funded arm may have climbed since the last solve; re-solve
            // rather than hand out an over-budget allocation.
            double funded_weight = 0.0;
            for (int i = 0; i < pub_.K; ++i)
                if (funded_[i])
                    funded_weight += static_cast<double>(L_[i] + 1) * gamma_;
            if (funded_weight > pub_.Q + kFeasTol) {
                need_solve = true;
                knap_rounds_ = 0;
            }
        }
        if (need_solve) {
            std::vector<double> weights(pub_.K);
            for (int i = 0; i < pub_.K; ++i)
                weights[i] = static_cast<double>(L_[i] + 1) * gamma_;
            KnapsackSolution sol = solve_dp(mu_hat_, weights, pub_.Q, kDefaultKnapsackScale);
            std::fill(funded_.begin(), funded_.end(), 0);
            for (int i : sol.selected)
                funded_[i] = 1;
        }
        ++knap_rounds_;
        for (int i = 0; i < pub_.K; ++i) {
            in_set_[i] = funded_[i];
            alloc_idx_[i] = funded_[i] ? L_[i] + 1 : 0;
        }
    }

    Allocation alloc;
    alloc.a.assign(pub_.K, 0.0);
    for (int i = 0; i < pub_.K; ++i)
        if (alloc_idx_[i] > 0)
            alloc.a[i] = static_cast<double>(alloc_idx_[i]) * gamma_;
    return alloc;
}

void CsbDu::update(const FeedbackVector& fb) {
    for (int i = 0; i < pub_.K; ++i) {
        if (in_set_[i]) {
            long long ai = alloc_idx_[i];
            if (fb.y[i]) {
                if (L_[i] < ai)
                    L_[i] = ai;
                S_[i] += 1;
                long long transferred = 0;
                auto& zm = z_counts_[i];
                for (auto it = zm.begin(); it != zm.end() && it->first <= L_[i];) {
                    transferred += it->second;
                    it = zm.erase(it);
                }
                F_[i] += transferred;
                events_.push_back({round_, 'L', i, static_cast<int>(L_[i]), 0,
                                   static_cast<int>(ai)});
            } else {
                z_counts_[i][ai] += 1;
            }
        } else {
            S_[i] += fb.y[i];
            F_[i] += 1 - fb.y[i];
        }
    }
}

// ---------------------------------------------------------------------------
// Factories

PolicyFactory csb_mk_factory(MultiThresholdKnownConfig cfg) {
    return [cfg](const InstancePublic& pub, RngStream rng) -> std::unique_ptr<Policy> {
        return std::make_unique<CsbMk>(pub, cfg, std::move(rng));
    };
}

PolicyFactory num_mk_factory(MultiThresholdKnownConfig cfg) {
    return [cfg](const InstancePublic& pub, RngStream rng) -> std::unique_ptr<Policy> {
        return std::make_unique<NumMk>(pub, cfg, std::move(rng));
    };
}

PolicyFactory csb_du_factory(AnytimeMultiConfig cfg) {
    return [cfg](const InstancePublic& pub, RngStream rng) -> std::unique_ptr<Policy> {
        return std::make_unique<CsbDu>(pub, cfg, std::move(rng));
    };
}

} // namespace csb
