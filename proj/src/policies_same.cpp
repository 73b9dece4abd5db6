#include "csb/policies.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "csb/knapsack.hpp"

namespace csb {

namespace {

void check_delta_epsilon(double delta, double epsilon) {
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("delta must lie in (0,1)");
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("epsilon must lie in (0,1)");
}

double resolve_delta(double delta, long long horizon) {
    if (delta > 0.0)
        return delta;
    if (horizon < 1)
        throw std::invalid_argument("delta unset and no horizon to derive delta = 1/T from");
    return 1.0 / static_cast<double>(horizon);
}

void require_mode(const InstancePublic& pub, Mode mode, const char* who) {
    if (pub.mode != mode)
        throw std::invalid_argument(std::string(who) + ": instance mode not supported");
}

} // namespace

long long w_delta_same(int K, double delta, double epsilon) {
    if (K < 2)
        throw std::invalid_argument("w_delta_same: K must be >= 2");
    check_delta_epsilon(delta, epsilon);
    double w = std::log(std::log2(static_cast<double>(K)) / delta) / std::log(1.0 / (1.0 - epsilon));
    long long iw = detail::iceil_eps(w);
    return iw < 1 ? 1 : iw;
}

long long w_delta_multi(int K, double delta, double epsilon, double Q, double gamma) {
    if (K < 1)
        throw std::invalid_argument("w_delta_multi: K must be >= 1");
    check_delta_epsilon(delta, epsilon);
    if (!(Q > 0.0) || !(gamma > 0.0))
        throw std::invalid_argument("w_delta_multi: Q and gamma must be positive");
    double cells = detail::ceil_eps(1.0 + Q / gamma);
    double w = std::log(static_cast<double>(K) * std::log2(cells) / delta) /
               std::log(1.0 / (1.0 - epsilon));
    long long iw = detail::iceil_eps(w);
    return iw < 1 ? 1 : iw;
}

std::vector<int> top_k_indices(const std::vector<double>& vals, int k) {
    std::vector<int> order(vals.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return vals[a] != vals[b] ? vals[a] > vals[b] : a < b;
    });
    order.resize(std::min<size_t>(order.size(), static_cast<size_t>(std::max(k, 0))));
    return order;
}

// ---------------------------------------------------------------------------
// CSB-SK

CsbSk::CsbSk(const InstancePublic& pub, const SameThresholdKnownConfig& cfg, RngStream rng)
    : pub_(pub), rng_(std::move(rng)) {
    require_mode(pub, Mode::Loss, "csb-sk");
    theta_set_ = theta_candidate_set(pub.K, pub.Q);
    S_.assign(pub.K, 1);
    F_.assign(pub.K, 1);
    Z_.assign(pub.K, 0);
    in_set_.assign(pub.K, 0);
    if (pub.K >= 2) {
        double delta = resolve_delta(cfg.delta, cfg.horizon);
        w_delta_ = w_delta_same(pub.K, delta, cfg.epsilon);
    }
    l_ = 1;
    u_ = pub.K;
    j_ = (l_ + u_) / 2;
    if (cfg.lock_at_index != 0) {
        if (cfg.lock_at_index < 1 || cfg.lock_at_index > pub.K)
            throw std::invalid_argument("csb-sk: lock_at_index out of range");
        l_ = u_ = j_ = cfg.lock_at_index;
    }
}

void CsbSk::sample_posteriors(std::vector<double>& out) {
    out.resize(pub_.K);
    for (int i = 0; i < pub_.K; ++i)
        out[i] = rng_.sample_beta(S_[i], F_[i]);
}

Allocation CsbSk::allocate_top(double theta_hat) {
    std::vector<double> mu_hat;
    sample_posteriors(mu_hat);
    int count = static_cast<int>(
        std::min<long long>(detail::ifloor_eps(pub_.Q / theta_hat), pub_.K));
    std::vector<int> chosen = top_k_indices(mu_hat, count);
    Allocation alloc;
    alloc.a.assign(pub_.K, 0.0);
    std::fill(in_set_.begin(), in_set_.end(), 0);
    for (int i : chosen) {
        alloc.a[i] = theta_hat;
        in_set_[i] = 1;
    }
    return alloc;
}

Allocation CsbSk::select(long long round) {
    round_ = round;
    return allocate_top(theta_set_[j_ - 1]);
}

void CsbSk::update(const FeedbackVector& fb) {
    bool any_loss = false;
    for (int i = 0; i < pub_.K; ++i)
        if (in_set_[i] && fb.y[i])
            any_loss = true;

    if (j_ != u_) {
        if (any_loss) {
            l_ = j_ + 1;
            j_ = (l_ + u_) / 2;
            C_ = 0;
            for (int i = 0; i < pub_.K; ++i) {
                S_[i] += fb.y[i];
                F_[i] += 1 - fb.y[i] + Z_[i];
                Z_[i] = 0;
            }
            events_.push_back({round_, 'L', -1, l_, u_, j_});
        } else {
            ++C_;
            for (int i = 0; i < pub_.K; ++i)
                if (in_set_[i])
                    ++Z_[i];
            if (C_ == w_delta_) {
                u_ = j_;
                j_ = (l_ + u_) / 2;
                C_ = 0;
                std::fill(Z_.begin(), Z_.end(), 0);
                events_.push_back({round_, 'W', -1, l_, u_, j_});
            }
            for (int i = 0; i < pub_.K; ++i) {
                if (!in_set_[i]) {
                    S_[i] += fb.y[i];
                    F_[i] += 1 - fb.y[i];
                }
            }
        }
        if (j_ == u_)
            events_.push_back({round_, 'K', -1, l_, u_, j_});
    } else {
        for (int i = 0; i < pub_.K; ++i) {
            if (!in_set_[i]) {
                S_[i] += fb.y[i];
                F_[i] += 1 - fb.y[i];
            }
        }
    }
}

// ---------------------------------------------------------------------------
// CSB-SU

CsbSu::CsbSu(const InstancePublic& pub, RngStream rng) : pub_(pub), rng_(std::move(rng)) {
    require_mode(pub, Mode::Loss, "csb-su");
    S_.assign(pub.K, 1);
    F_.assign(pub.K, 1);
    Z_.assign(pub.K, 0);
    in_set_.assign(pub.K, 0);
    L_ = pub.K;
}

Allocation CsbSu::select(long long round) {
    round_ = round;
    std::vector<double> mu_hat(pub_.K);
    for (int i = 0; i < pub_.K; ++i)
        mu_hat[i] = rng_.sample_beta(S_[i], F_[i]);
    std::vector<int> chosen = top_k_indices(mu_hat, L_);
    Allocation alloc;
    alloc.a.assign(pub_.K, 0.0);
    std::fill(in_set_.begin(), in_set_.end(), 0);
    double share = pub_.Q / static_cast<double>(L_);
    for (int i : chosen) {
        alloc.a[i] = share;
        in_set_[i] = 1;
    }
    return alloc;
}

void CsbSu::update(const FeedbackVector& fb) {
    bool any_loss = false;
    for (int i = 0; i < pub_.K; ++i)
        if (in_set_[i] && fb.y[i])
            any_loss = true;

    if (any_loss) {
        if (L_ > 1)
            --L_;
        for (int i = 0; i < pub_.K; ++i) {
            if (in_set_[i]) {
                S_[i] += fb.y[i];
                F_[i] += 1 - fb.y[i] + Z_[i];
            }
            Z_[i] = 0;
        }
        events_.push_back({round_, 'L', -1, 1, pub_.K, L_});
    } else {
        for (int i = 0; i < pub_.K; ++i)
            if (in_set_[i])
                ++Z_[i];
    }
    for (int i = 0; i < pub_.K; ++i) {
        if (!in_set_[i]) {
            S_[i] += fb.y[i];
            F_[i] += 1 - fb.y[i];
        }
    }
}

// ---------------------------------------------------------------------------
// NUM-SK

NumSk::NumSk(const InstancePublic& pub, const SameThresholdKnownConfig& cfg, RngStream rng)
    : pub_(pub), rng_(std::move(rng)) {
    require_mode(pub, Mode::Reward, "num-sk");
    theta_set_ = theta_candidate_set(pub.K, pub.Q);
    S_.assign(pub.K, 1);
    F_.assign(pub.K, 1);
    Z_.assign(pub.K, 0);
    in_set_.assign(pub.K, 0);
    if (pub.K >= 2) {
        double delta = resolve_delta(cfg.delta, cfg.horizon);
        w_delta_ = w_delta_same(pub.K, delta, cfg.epsilon);
    }
    l_ = 1;
    u_ = pub.K;
    j_ = (l_ + u_) / 2;
    if (cfg.lock_at_index != 0) {
        if (cfg.lock_at_index < 1 || cfg.lock_at_index > pub.K)
            throw std::invalid_argument("num-sk: lock_at_index out of range");
        l_ = u_ = j_ = cfg.lock_at_index;
    }
}

Allocation NumSk::select(long long round) {
    round_ = round;
    double theta_hat = theta_set_[j_ - 1];
    std::vector<double> mu_hat(pub_.K);
    for (int i = 0; i < pub_.K; ++i)
        mu_hat[i] = rng_.sample_beta(S_[i], F_[i]);
    int count = static_cast<int>(
        std::min<long long>(detail::ifloor_eps(pub_.Q / theta_hat), pub_.K));
    std::vector<int> chosen = top_k_indices(mu_hat, count);
    Allocation alloc;
    alloc.a.assign(pub_.K, 0.0);
    std::fill(in_set_.begin(), in_set_.end(), 0);
    for (int i : chosen) {
        alloc.a[i] = theta_hat;
        in_set_[i] = 1;
    }
    return alloc;
}

void NumSk::update(const FeedbackVector& fb) {
    bool any_reward = false;
    for (int i = 0; i < pub_.K; ++i)
        if (in_set_[i] && fb.y[i])
            any_reward = true;

    if (j_ != u_) {
        if (any_reward) {
            // A reward proves the allocation reaches the threshold.
            u_ = j_;
            j_ = (l_ + u_) / 2;
            C_ = 0;
            for (int i = 0; i < pub_.K; ++i) {
                if (in_set_[i]) {
                    S_[i] += fb.y[i];
                    F_[i] += 1 - fb.y[i] + Z_[i];
                } else {
                    F_[i] += Z_[i];
                }
                Z_[i] = 0;
            }
            events_.push_back({round_, 'L', -1, l_, u_, j_});
        } else {
            ++C_;
            for (int i = 0; i < pub_.K; ++i)
                if (in_set_[i])
                    ++Z_[i];
            if (C_ == w_delta_) {
                l_ = j_ + 1;
                j_ = (l_ + u_) / 2;
                C_ = 0;
                std::fill(Z_.begin(), Z_.end(), 0);
                events_.push_back({round_, 'W', -1, l_, u_, j_});
            }
        }
        if (j_ == u_)
            events_.push_back({round_, 'K', -1, l_, u_, j_});
    } else {
        for (int i = 0; i < pub_.K; ++i) {
            if (in_set_[i]) {
                S_[i] += fb.y[i];
                F_[i] += 1 - fb.y[i];
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Baselines

MpTs::MpTs(const InstancePublic& pub, const MpTsConfig& cfg, RngStream rng)
    : pub_(pub), rng_(std::move(rng)), m_(cfg.m) {
    require_mode(pub, Mode::Loss, "mp-ts");
    if (m_ < 1 || m_ > pub.K - 1)
        throw std::invalid_argument("mp-ts: m must lie in [1, K-1]");
    S_.assign(pub.K, 1);
    F_.assign(pub.K, 1);
    in_set_.assign(pub.K, 0);
}

Allocation MpTs::select(long long round) {
    (void)round;
    std::vector<double> mu_hat(pub_.K);
    for (int i = 0; i < pub_.K; ++i)
        mu_hat[i] = rng_.sample_beta(S_[i], F_[i]);
    // Censor the K-m arms with the largest sampled losses; the m remaining
    // arms form the played superarm.
    std::vector<int> censored = top_k_indices(mu_hat, pub_.K - m_);
    Allocation alloc;
    alloc.a.assign(pub_.K, 0.0);
    std::fill(in_set_.begin(), in_set_.end(), 0);
    double share = pub_.Q / static_cast<double>(pub_.K - m_);
    for (int i : censored) {
        alloc.a[i] = share;
        in_set_[i] = 1;
    }
    return alloc;
}

void MpTs::update(const FeedbackVector& fb) {
    for (int i = 0; i < pub_.K; ++i) {
        if (!in_set_[i]) {
            S_[i] += fb.y[i];
            F_[i] += 1 - fb.y[i];
        }
    }
}

FixedPolicy::FixedPolicy(Allocation alloc, std::string name)
    : alloc_(std::move(alloc)), name_(std::move(name)) {}

// ---------------------------------------------------------------------------
// Factories

PolicyFactory csb_sk_factory(SameThresholdKnownConfig cfg) {
    return [cfg](const InstancePublic& pub, RngStream rng) -> std::unique_ptr<Policy> {
        return std::make_unique<CsbSk>(pub, cfg, std::move(rng));
    };
}

PolicyFactory csb_su_factory() {
    return [](const InstancePublic& pub, RngStream rng) -> std::unique_ptr<Policy> {
        return std::make_unique<CsbSu>(pub, std::move(rng));
    };
}

PolicyFactory num_sk_factory(SameThresholdKnownConfig cfg) {
    return [cfg](const InstancePublic& pub, RngStream rng) -> std::unique_ptr<Policy> {
        return std::make_unique<NumSk>(pub, cfg, std::move(rng));
    };
}

PolicyFactory mp_ts_factory(MpTsConfig cfg) {
    return [cfg](const InstancePublic& pub, RngStream rng) -> std::unique_ptr<Policy> {
        return std::make_unique<MpTs>(pub, cfg, std::move(rng));
    };
}

PolicyFactory oracle_factory(const CsbInstance& inst) {
    Allocation opt = inst.K <= 20 ? [&] {
        KnapsackSolution sol = solve_bruteforce(inst.mu, inst.theta, inst.Q);
        Allocation a;
        a.a.assign(inst.K, 0.0);
        for (int i : sol.selected)
            a.a[i] = inst.theta[i];
        return a;
    }()
                                  : optimal_allocation(inst);
    return [opt](const InstancePublic& pub, RngStream rng) -> std::unique_ptr<Policy> {
        (void)rng;
        if (static_cast<int>(opt.a.size()) != pub.K)
            throw std::invalid_argument("oracle: instance mismatch");
        return std::make_unique<FixedPolicy>(opt, "oracle");
    };
}

PolicyFactory fixed_factory(Allocation alloc) {
    return [alloc](const InstancePublic& pub, RngStream rng) -> std::unique_ptr<Policy> {
        (void)rng;
        if (static_cast<int>(alloc.a.size()) != pub.K)
            throw std::invalid_argument("fixed: allocation length mismatch");
        return std::make_unique<FixedPolicy>(alloc, "fixed");
    };
}

} // namespace csb
