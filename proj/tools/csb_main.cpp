#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "csb/acceptance.hpp"
#include "csb/bounds.hpp"
#include "csb/harness.hpp"

namespace {

int cmd_run(const std::string& config_path, std::optional<std::uint64_t> seed,
            const std::string& out) {
    csb::ExperimentConfig cfg = csb::load_experiment_config(config_path);
    if (seed)
        cfg.master_seed = *seed;
    if (!out.empty())
        cfg.output_path = out;
    csb::AggregateResult agg = csb::run_experiment(cfg);
    std::printf("instance=%s policy=%s reps=%d horizon=%lld final_mean_regret=%.6g\n",
                cfg.instance.c_str(), cfg.policy.c_str(), cfg.repetitions,
                static_cast<long long>(cfg.horizon), agg.mean_regret.back());
    if (!cfg.output_path.empty())
        std::printf("wrote %s\n", cfg.output_path.c_str());
    return 0;
}

int cmd_bounds(const std::string& instance, double delta, double epsilon, double gamma, int n,
               const std::string& format) {
    csb::LoadedInstance li = csb::resolve_instance(instance);
    double g = gamma > 0.0 ? gamma : li.gamma.value_or(0.0);
    if (!(g > 0.0))
        throw std::invalid_argument("bounds: supply --gamma (instance has no default)");
    int nn = n > 0 ? n : csb::distinct_threshold_count(li.inst, g);
    auto rows = csb::table1_report(li.inst, delta, epsilon, g, nn);
    std::cout << (format == "csv" ? csb::render_csv(rows) : csb::render_markdown(rows));
    return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& vary, const std::string& out_prefix) {
    size_t eq = vary.find('=');
    if (eq == std::string::npos)
        throw std::invalid_argument("--vary expects key=v1,v2,... (key is Q or theta_s)");
    std::string key = vary.substr(0, eq);
    if (key != "Q" && key != "theta_s")
        throw std::invalid_argument("--vary supports only Q or theta_s, got '" + key + "'");
    std::vector<double> values;
    std::stringstream ss(vary.substr(eq + 1));
    std::string item;
    while (std::getline(ss, item, ','))
        values.push_back(std::stod(item));
    if (values.empty())
        throw std::invalid_argument("--vary has an empty value list");

    csb::ExperimentConfig base = csb::load_experiment_config(config_path);
    for (double v : values) {
        csb::ExperimentConfig cfg = base;
        if (key == "Q")
            cfg.q_override = v;
        else
            cfg.theta_s_override = v;
        char suffix[64];
        std::snprintf(suffix, sizeof(suffix), "_%s%g.csv", key.c_str(), v);
        cfg.output_path = out_prefix + suffix;
        csb::AggregateResult agg = csb::run_experiment(cfg);
        std::printf("%s=%g final_mean_regret=%.6g -> %s\n", key.c_str(), v,
                    agg.mean_regret.back(), cfg.output_path.c_str());
    }
    return 0;
}

int cmd_verify(int workers, const std::vector<int>& only, const std::string& scratch) {
    csb::AcceptanceOptions opts;
    opts.workers = workers;
    opts.only = only;
    opts.scratch_dir = scratch;
    auto results = csb::run_acceptance(opts);
    bool all_pass = true;
    for (const auto& r : results) {
        std::cout << csb::format_result_line(r) << "\n";
        all_pass = all_pass && r.pass;
    }
    std::cout << (all_pass ? "acceptance: all criteria passed\n" : "acceptance: FAILURES above\n");
    return all_pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Censored semi-bandit resource-allocation lab"};
    app.require_subcommand(1);

    std::string config_path, out, instance = "I", format = "markdown", vary, scratch = ".";
    std::string out_prefix = "sweep";
    double delta = 1e-5, epsilon = 0.1, gamma = 0.0;
    int n = 0, workers = 0;
    std::uint64_t seed_value = 0;
    bool seed_given = false;
    std::vector<int> only;

    auto* run = app.add_subcommand("run", "run an experiment from a config file");
    run->add_option("--config", config_path, "experiment config file")->required();
    run->add_option("--seed", seed_value, "override master_seed")->each([&](const std::string&) {
        seed_given = true;
    });
    run->add_option("--out", out, "override output path");

    auto* bounds = app.add_subcommand("bounds", "closed-form round bounds for an instance");
    bounds->add_option("--instance", instance, "preset name or instance file")->required();
    bounds->add_option("--delta", delta, "confidence parameter");
    bounds->add_option("--epsilon", epsilon, "mean-loss floor");
    bounds->add_option("--gamma", gamma, "threshold tolerance (defaults from the instance)");
    bounds->add_option("--n", n, "number of different thresholds (default: counted)");
    bounds->add_option("--format", format, "markdown or csv")
        ->check(CLI::IsMember({"markdown", "csv"}));

    auto* sweep = app.add_subcommand("sweep", "run a config while varying Q or theta_s");
    sweep->add_option("--config", config_path, "experiment config file")->required();
    sweep->add_option("--vary", vary, "Q=5,10,15 or theta_s=0.3,0.5")->required();
    sweep->add_option("--out-prefix", out_prefix, "output file prefix");

    auto* verify = app.add_subcommand("verify", "run the acceptance suite");
    verify->add_option("--workers", workers, "worker threads (default: auto)");
    verify->add_option("--only", only, "criterion ids to run (default: all)");
    verify->add_option("--scratch", scratch, "directory for determinism-check files");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed())
            return cmd_run(config_path,
                           seed_given ? std::optional<std::uint64_t>(seed_value) : std::nullopt,
                           out);
        if (bounds->parsed())
            return cmd_bounds(instance, delta, epsilon, gamma, n, format);
        if (sweep->parsed())
            return cmd_sweep(config_path, vary, out_prefix);
        if (verify->parsed())
            return cmd_verify(workers, only, scratch);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
