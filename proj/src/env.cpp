#include "csb/env.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "csb/knapsack.hpp"

namespace csb {

FeedbackVector env_step(const CsbInstance& inst, const Allocation& alloc, RngStream& rng) {
    if (!is_feasible(inst, alloc))
        throw std::invalid_argument("env_step: infeasible allocation");
    FeedbackVector fb;
    fb.y.assign(inst.K, 0);
    fb.observed.assign(inst.K, 0);
    for (int i = 0; i < inst.K; ++i) {
        int x = rng.sample_bernoulli(inst.mu[i]);
        bool funded = alloc.a[i] >= inst.theta[i];
        bool observed = inst.mode == Mode::Loss ? !funded : funded;
        fb.observed[i] = observed ? 1 : 0;
        fb.y[i] = observed ? static_cast<std::uint8_t>(x) : 0;
    }
    return fb;
}

RegretTrace run_episode(const CsbInstance& inst, const PolicyFactory& factory, long long horizon,
                        std::uint64_t master_seed, const EpisodeOptions& opts) {
    validate_instance(inst);
    if (horizon < 1)
        throw std::invalid_argument("run_episode: horizon must be >= 1");
    if (opts.log_stride < 1)
        throw std::invalid_argument("run_episode: log_stride must be >= 1");

    Allocation opt = inst.K <= 20
                         ? [&] {
                               KnapsackSolution sol =
                                   solve_bruteforce(inst.mu, inst.theta, inst.Q);
                               Allocation a;
                               a.a.assign(inst.K, 0.0);
                               for (int i : sol.selected)
                                   a.a[i] = inst.theta[i];
                               return a;
                           }()
                         : optimal_allocation(inst);

    RngStream env_rng = derive_stream(master_seed, kEnvStreamId);
    std::unique_ptr<Policy> policy = factory(public_view(inst), derive_stream(master_seed, kPolicyStreamId));

    RegretTrace trace;
    trace.horizon = horizon;
    trace.log_stride = opts.log_stride;
    trace.master_seed = master_seed;
    trace.instance_hash = instance_hash(inst);

    bool was_locked = policy->locked();
    double cum = 0.0;
    for (long long t = 1; t <= horizon; ++t) {
        Allocation alloc = policy->select(t);
        if (!is_feasible(inst, alloc))
            throw std::logic_error("run_episode: policy produced an infeasible allocation");
        FeedbackVector fb = env_step(inst, alloc, env_rng);
        policy->update(fb);
        cum += per_round_regret(inst, alloc, opt);
        if (!was_locked && policy->locked()) {
            was_locked = true;
            trace.rounds_to_threshold_lock = t;
            trace.regret_at_lock = cum;
        }
        if (t % opts.log_stride == 0 || t == horizon) {
            trace.logged_rounds.push_back(t);
            trace.cumulative_regret.push_back(cum);
        }
        if (opts.observer)
            opts.observer(t, *policy, alloc, fb);
    }
    trace.final_regret = cum;
    return trace;
}

void write_trace_csv(const RegretTrace& trace, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("write_trace_csv: cannot open " + path);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(trace.instance_hash));
    out << "# instance_hash=" << buf << "\n";
    out << "# master_seed=" << trace.master_seed << "\n";
    out << "# horizon=" << trace.horizon << "\n";
    out << "round,cumulative_regret\n";
    for (size_t i = 0; i < trace.logged_rounds.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.10g", trace.cumulative_regret[i]);
        out << trace.logged_rounds[i] << "," << buf << "\n";
    }
}

} // namespace csb
