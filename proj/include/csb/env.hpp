#pragma once

#include <functional>
#include <optional>
#include <string>

#include "csb/model.hpp"
#include "csb/policy.hpp"
#include "csb/rng.hpp"

namespace csb {

// Stream roles hung off one master seed, so that policies with different
// draw counts stay comparable under shared environment randomness.
inline constexpr std::uint64_t kEnvStreamId = 0;
inline constexpr std::uint64_t kPolicyStreamId = 1;

// One protocol round: draws the latent Bernoulli vector for every arm in
// fixed order (so runs sharing a seed see identical latent samples), then
// censors it against the allocation.
FeedbackVector env_step(const CsbInstance& inst, const Allocation& alloc, RngStream& rng);

struct RegretTrace {
    long long horizon = 0;
    long long log_stride = 1;
    // cumulative expected regret at rounds stride, 2*stride, ..., horizon
    std::vector<long long> logged_rounds;
    std::vector<double> cumulative_regret;
    double final_regret = 0.0;
    std::optional<long long> rounds_to_threshold_lock;
    std::optional<double> regret_at_lock; // cumulative regret when the search locked
    std::uint64_t master_seed = 0;
    std::uint64_t instance_hash = 0;
};

struct EpisodeOptions {
    long long log_stride = 1;
    // Called after each policy update; tests use this to watch internal state.
    std::function<void(long long round, const Policy&, const Allocation&, const FeedbackVector&)>
        observer;
};

// Runs the interaction protocol for `horizon` rounds. Regret accounting uses
// exact per-round expected gaps against a knapsack-optimal allocation
// (exhaustive for K <= 20, scaled DP otherwise), so traces are noise-free in
// the regret dimension. Pure function of (instance, factory config, horizon,
// master_seed).
RegretTrace run_episode(const CsbInstance& inst, const PolicyFactory& factory, long long horizon,
                        std::uint64_t master_seed, const EpisodeOptions& opts = {});

// CSV with "# key=value" metadata rows followed by round,cumulative_regret.
void write_trace_csv(const RegretTrace& trace, const std::string& path);

} // namespace csb
