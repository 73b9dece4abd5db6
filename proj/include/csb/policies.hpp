#pragma once

#include <map>
#include <optional>

#include "csb/policy.hpp"

namespace csb {

// Waiting budget of consecutive no-loss rounds before an allocation is
// declared an overestimate, same-threshold search. Ceiled, at least 1.
long long w_delta_same(int K, double delta, double epsilon);

// Waiting budget for the per-arm searches of the multi-threshold policies.
long long w_delta_multi(int K, double delta, double epsilon, double Q, double gamma);

// Indices of the k largest entries; lower index wins ties.
std::vector<int> top_k_indices(const std::vector<double>& vals, int k);

struct SameThresholdKnownConfig {
    double delta = 0.0;     // 0 = derive as 1/horizon
    double epsilon = 0.0;
    long long horizon = 0;  // only needed when delta is unset
    // Start with the search already closed on this 1-based candidate index
    // (reduction tests); 0 = run the binary search normally.
    int lock_at_index = 0;
};

struct MultiThresholdKnownConfig {
    int n = 0;              // number of different thresholds; n = K means all differ
    double delta = 0.0;
    double epsilon = 0.0;
    double gamma = 0.0;
    int resolve_cadence = 20;
    long long horizon = 0;
};

struct AnytimeMultiConfig {
    double gamma = 0.0;
    int resolve_cadence = 20;
};

struct MpTsConfig {
    int m = 0; // superarm size: arms observed per round
};

// Binary search over the same-threshold candidate set with Thompson sampling
// on the arm posteriors; after the search locks it plays MP-TS on the
// complement set.
class CsbSk : public Policy {
public:
    CsbSk(const InstancePublic& pub, const SameThresholdKnownConfig& cfg, RngStream rng);
    Allocation select(long long round) override;
    void update(const FeedbackVector& fb) override;
    std::string name() const override { return "csb-sk"; }
    bool locked() const override { return j_ == u_; }
    const std::vector<SearchEvent>& events() const override { return events_; }

    int candidate_index() const { return j_; }
    double candidate_threshold() const { return theta_set_[j_ - 1]; }
    long long waiting_budget() const { return w_delta_; }
    const std::vector<long long>& successes() const { return S_; }
    const std::vector<long long>& failures() const { return F_; }

protected:
    InstancePublic pub_;
    RngStream rng_;
    std::vector<double> theta_set_;
    std::vector<long long> S_, F_, Z_;
    long long C_ = 0;
    int l_ = 1, u_ = 1, j_ = 1;
    long long w_delta_ = 1;
    long long round_ = 0;
    std::vector<std::uint8_t> in_set_;
    std::vector<SearchEvent> events_;

    void sample_posteriors(std::vector<double>& out);
    Allocation allocate_top(double theta_hat);
};

// Same-threshold anytime policy: spread Q over the L arms with the largest
// sampled means, shrink L whenever an allocated arm shows a loss.
class CsbSu : public Policy {
public:
    CsbSu(const InstancePublic& pub, RngStream rng);
    Allocation select(long long round) override;
    void update(const FeedbackVector& fb) override;
    std::string name() const override { return "csb-su"; }
    bool locked() const override { return false; } // no internal lock notion
    const std::vector<SearchEvent>& events() const override { return events_; }

    int live_arm_count() const { return L_; }
    const std::vector<long long>& successes() const { return S_; }
    const std::vector<long long>& failures() const { return F_; }

private:
    InstancePublic pub_;
    RngStream rng_;
    std::vector<long long> S_, F_, Z_;
    int L_;
    long long round_ = 0;
    std::vector<std::uint8_t> in_set_;
    std::vector<SearchEvent> events_;
};

// Reward-setting mirror of CsbSk: observing a reward proves the allocation
// sufficient (upper bound moves), a silent waiting budget proves it short.
class NumSk : public Policy {
public:
    NumSk(const InstancePublic& pub, const SameThresholdKnownConfig& cfg, RngStream rng);
    Allocation select(long long round) override;
    void update(const FeedbackVector& fb) override;
    std::string name() const override { return "num-sk"; }
    bool locked() const override { return j_ == u_; }
    const std::vector<SearchEvent>& events() const override { return events_; }

    int candidate_index() const { return j_; }
    double candidate_threshold() const { return theta_set_[j_ - 1]; }
    const std::vector<long long>& successes() const { return S_; }
    const std::vector<long long>& failures() const { return F_; }

private:
    InstancePublic pub_;
    RngStream rng_;
    std::vector<double> theta_set_;
    std::vector<long long> S_, F_, Z_;
    long long C_ = 0;
    int l_ = 1, u_ = 1, j_ = 1;
    long long w_delta_ = 1;
    long long round_ = 0;
    std::vector<std::uint8_t> in_set_;
    std::vector<SearchEvent> events_;
};

// Per-arm binary search on the gamma grid with knapsack-driven exploitation
// once every arm's threshold estimate is within tolerance.
class CsbMk : public Policy {
public:
    CsbMk(const InstancePublic& pub, const MultiThresholdKnownConfig& cfg, RngStream rng);
    Allocation select(long long round) override;
    void update(const FeedbackVector& fb) override;
    std::string name() const override { return "csb-mk"; }
    bool locked() const override;
    const std::vector<SearchEvent>& events() const override { return events_; }

    double gamma() const { return gamma_; }
    bool arm_good(int i) const { return good_[i]; }
    double arm_estimate(int i) const { return grid_value(k_u_[i]); }
    long long waiting_budget() const { return w_delta_; }
    const std::vector<long long>& successes() const { return S_; }
    const std::vector<long long>& failures() const { return F_; }

protected:
    struct EqAllocation {
        std::vector<long long> alloc_idx; // candidate grid index per arm, 0 = unfunded
    };

    InstancePublic pub_;
    RngStream rng_;
    int n_;
    double gamma_;
    int cadence_;
    long long w_delta_ = 1;
    long long grid_top_ = 1; // index of the top grid point (value Q)

    std::vector<long long> S_, F_, Z_;
    std::vector<long long> k_l_, k_u_, cand_;
    std::vector<std::uint8_t> good_;
    std::vector<long long> theta_n_; // confirmed threshold grid indices, sorted unique
    int next_arm_ = 0;               // 1-based; 0 = every arm searched independently

    std::vector<double> mu_hat_;
    std::vector<long long> alloc_idx_;
    bool estimation_round_ = true;
    std::vector<std::uint8_t> funded_;
    long long knap_rounds_ = 0;
    long long round_ = 0;
    std::vector<SearchEvent> events_;

    CsbMk(const InstancePublic& pub, const MultiThresholdKnownConfig& cfg, RngStream rng,
          Mode expected_mode);

    double grid_value(long long k) const;
    void advance_next_arm();
    void choose_active_candidate(int arm);
    void assign_estimation_allocations(int active); // events B_i / H_i
    Allocation materialize() const;
    virtual void update_estimation(const FeedbackVector& fb);
    virtual void update_knapsack(const FeedbackVector& fb);
};

// Reward-setting mirror of CsbMk.
class NumMk : public CsbMk {
public:
    NumMk(const InstancePublic& pub, const MultiThresholdKnownConfig& cfg, RngStream rng);
    std::string name() const override { return "num-mk"; }

private:
    void update_estimation(const FeedbackVector& fb) override;
    void update_knapsack(const FeedbackVector& fb) override;
};

// Anytime multi-threshold policy: per-arm lower bounds climb the gamma grid
// on observed losses; once the budget no longer covers everyone, a knapsack
// on the candidate thresholds picks who gets funded.
class CsbDu : public Policy {
public:
    CsbDu(const InstancePublic& pub, const AnytimeMultiConfig& cfg, RngStream rng);
    Allocation select(long long round) override;
    void update(const FeedbackVector& fb) override;
    std::string name() const override { return "csb-du"; }
    bool locked() const override { return false; }
    const std::vector<SearchEvent>& events() const override { return events_; }

    double gamma() const { return gamma_; }
    long long lower_bound_index(int i) const { return L_[i]; }
    double candidate_threshold(int i) const { return static_cast<double>(L_[i] + 1) * gamma_; }
    const std::vector<long long>& successes() const { return S_; }
    const std::vector<long long>& failures() const { return F_; }

private:
    InstancePublic pub_;
    RngStream rng_;
    double gamma_;
    int cadence_;
    std::vector<long long> S_, F_;
    std::vector<long long> L_; // lower-bound grid indices
    std::vector<std::map<long long, long long>> z_counts_;
    std::vector<double> mu_hat_;
    std::vector<long long> alloc_idx_;
    std::vector<std::uint8_t> in_set_, funded_;
    long long knap_rounds_ = 0;
    long long round_ = 0;
    std::vector<SearchEvent> events_;
};

// Plays the m arms with the smallest sampled means (loss setting), censoring
// the rest with equal shares; the post-lock reduction target of CsbSk.
class MpTs : public Policy {
public:
    MpTs(const InstancePublic& pub, const MpTsConfig& cfg, RngStream rng);
    Allocation select(long long round) override;
    void update(const FeedbackVector& fb) override;
    std::string name() const override { return "mp-ts"; }

private:
    InstancePublic pub_;
    RngStream rng_;
    int m_;
    std::vector<long long> S_, F_;
    std::vector<std::uint8_t> in_set_; // funded (censored) arms
};

// Replays a fixed allocation; the oracle baseline feeds it the optimum.
class FixedPolicy : public Policy {
public:
    FixedPolicy(Allocation alloc, std::string name);
    Allocation select(long long round) override { (void)round; return alloc_; }
    void update(const FeedbackVector& fb) override { (void)fb; }
    std::string name() const override { return name_; }

private:
    Allocation alloc_;
    std::string name_;
};

PolicyFactory csb_sk_factory(SameThresholdKnownConfig cfg);
PolicyFactory csb_su_factory();
PolicyFactory csb_mk_factory(MultiThresholdKnownConfig cfg);
PolicyFactory csb_du_factory(AnytimeMultiConfig cfg);
PolicyFactory num_sk_factory(SameThresholdKnownConfig cfg);
PolicyFactory num_mk_factory(MultiThresholdKnownConfig cfg);
PolicyFactory mp_ts_factory(MpTsConfig cfg);
// Baseline with full instance knowledge (test/report use only).
PolicyFactory oracle_factory(const CsbInstance& inst);
PolicyFactory fixed_factory(Allocation alloc);

} // namespace csb
