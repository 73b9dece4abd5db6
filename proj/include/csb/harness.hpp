#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "csb/env.hpp"
#include "csb/model.hpp"
#include "csb/policies.hpp"

namespace csb {

// An instance plus experiment defaults that ride along with it (the gamma
// used by the multi-threshold studies).
struct LoadedInstance {
    std::string label;
    CsbInstance inst;
    std::optional<double> gamma;
};

// The four synthetic study instances.
LoadedInstance preset_instance(const std::string& name);

// Flat key/value instance document: K, Q, mode, mu, theta (or theta_s),
// optional gamma.
LoadedInstance parse_instance_text(const std::string& text, const std::string& label);
LoadedInstance load_instance_file(const std::string& path);

// Preset name if it matches, otherwise treated as a file path.
LoadedInstance resolve_instance(const std::string& name_or_path);

// Strict flat key=value parser ('#' comments); duplicate keys are errors.
std::map<std::string, std::string> parse_key_values(const std::string& text);

struct ExperimentConfig {
    std::string instance;                       // preset name or file path
    std::optional<std::string> mode_override;   // "loss" / "reward"
    std::optional<double> q_override;
    std::optional<double> theta_s_override;     // same-threshold instances only
    std::string policy;
    std::map<std::string, std::string> policy_params;
    long long horizon = 0;
    int repetitions = 1;
    std::uint64_t master_seed = 0;
    long long log_stride = 100;
    std::string output_path;
    int workers = 0; // 0 = CSB_WORKERS env var, else hardware concurrency
};

ExperimentConfig parse_experiment_config(const std::string& text);
ExperimentConfig load_experiment_config(const std::string& path);

// Applies mode/Q/theta_s overrides and returns the instance to run on.
LoadedInstance materialize_instance(const ExperimentConfig& cfg);

// Builds the policy factory named by the config; unknown or inapplicable
// parameter keys are errors.
PolicyFactory policy_from_config(const ExperimentConfig& cfg, const LoadedInstance& loaded);

struct AggregateResult {
    std::vector<long long> rounds;
    std::vector<double> mean_regret;
    std::vector<double> ci_halfwidth; // 95%, normal approximation
    std::vector<double> per_run_final;
    std::vector<long long> rounds_to_lock;   // -1 where the policy has no lock notion
    std::vector<double> regret_at_lock;      // -1 likewise
};

struct RunSpec {
    CsbInstance inst;
    PolicyFactory factory;
    long long horizon = 0;
    int repetitions = 1;
    std::uint64_t master_seed = 0;
    long long log_stride = 100;
    int workers = 0;
};

// Runs `repetitions` episodes with seeds master_seed + r and aggregates the
// logged regrets. Reduction is ordered by repetition index, so the worker
// count never changes the result.
AggregateResult run_repetitions(const RunSpec& spec);

// Full config-driven run.
AggregateResult run_experiment(const ExperimentConfig& cfg);

// mean and 1.96 * stddev / sqrt(n); requires at least two samples.
std::pair<double, double> confidence_interval(const std::vector<double>& samples);

// CSV with '#'-prefixed metadata rows carrying the resolved config.
void write_aggregate_csv(const AggregateResult& agg, const ExperimentConfig& cfg,
                         const CsbInstance& inst, const std::string& path);

int default_workers();

} // namespace csb
