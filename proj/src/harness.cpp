#include "csb/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "csb/knapsack.hpp"

namespace csb {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size())
            throw std::invalid_argument("trailing characters");
        return d;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: key '" + key + "' has a non-numeric value '" + v + "'");
    }
}

long long to_int(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        long long d = std::stoll(v, &pos);
        if (pos != v.size())
            throw std::invalid_argument("trailing characters");
        return d;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: key '" + key + "' has a non-integer value '" + v + "'");
    }
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(to_double(key, trim(item)));
    if (out.empty())
        throw std::invalid_argument("config: key '" + key + "' has an empty list");
    return out;
}

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

} // namespace

std::map<std::string, std::string> parse_key_values(const std::string& text) {
    std::map<std::string, std::string> out;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#')
            continue;
        size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key=value, got '" + t + "'");
        std::string key = trim(t.substr(0, eq));
        std::string val = trim(t.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
        if (!out.emplace(key, val).second)
            throw std::invalid_argument("config: duplicate key '" + key + "'");
    }
    return out;
}

LoadedInstance preset_instance(const std::string& name) {
    auto ramp = [](double x100, int K) {
        std::vector<double> mu(K);
        for (int i = 0; i < K; ++i)
            mu[i] = (x100 - i) / 100.0;
        return mu;
    };
    if (name == "I")
        return {"I", make_same_threshold_instance(ramp(50, 50), 0.5, 15.0), std::nullopt};
    if (name == "II")
        return {"II", make_same_threshold_instance(ramp(70, 50), 0.5, 15.0), std::nullopt};
    const std::vector<double> mu34 = {0.9, 0.8, 0.42, 0.6, 0.5, 0.2, 0.1, 0.3, 0.7, 0.98};
    if (name == "III") {
        std::vector<double> theta = {0.65, 0.55, 0.3, 0.46, 0.37, 0.2, 0.07, 0.25, 0.3, 0.8};
        return {"III", make_instance(mu34, theta, 3.0), 0.01};
    }
    if (name == "IV") {
        std::vector<double> theta = {0.55, 0.55, 0.3, 0.55, 0.55, 0.55, 0.3, 0.3, 0.3, 0.55};
        return {"IV", make_instance(mu34, theta, 3.0), 0.01};
    }
    throw std::invalid_argument("unknown preset instance '" + name + "'");
}

LoadedInstance parse_instance_text(const std::string& text, const std::string& label) {
    auto kv = parse_key_values(text);
    auto take = [&](const char* key) -> std::optional<std::string> {
        auto it = kv.find(key);
        if (it == kv.end())
            return std::nullopt;
        std::string v = it->second;
        kv.erase(it);
        return v;
    };

    auto mu_s = take("mu");
    if (!mu_s)
        throw std::invalid_argument("instance file: missing key 'mu'");
    std::vector<double> mu = to_list("mu", *mu_s);

    auto q_s = take("Q");
    if (!q_s)
        throw std::invalid_argument("instance file: missing key 'Q'");
    double Q = to_double("Q", *q_s);

    Mode mode = Mode::Loss;
    if (auto m = take("mode"))
        mode = mode_from_string(*m);

    std::vector<double> theta;
    auto theta_s = take("theta");
    auto theta_scalar = take("theta_s");
    if (theta_s && theta_scalar)
        throw std::invalid_argument("instance file: give either 'theta' or 'theta_s', not both");
    if (theta_s)
        theta = to_list("theta", *theta_s);
    else if (theta_scalar)
        theta.assign(mu.size(), to_double("theta_s", *theta_scalar));
    else
        throw std::invalid_argument("instance file: missing key 'theta' (or 'theta_s')");

    if (auto k_s = take("K")) {
        long long K = to_int("K", *k_s);
        if (K != static_cast<long long>(mu.size()))
            throw std::invalid_argument("instance file: K does not match the length of mu");
    }
    std::optional<double> gamma;
    if (auto g = take("gamma"))
        gamma = to_double("gamma", *g);

    if (!kv.empty())
        throw std::invalid_argument("instance file: unknown key '" + kv.begin()->first + "'");
    return {label, make_instance(std::move(mu), std::move(theta), Q, mode), gamma};
}

LoadedInstance load_instance_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open instance file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_instance_text(ss.str(), path);
}

LoadedInstance resolve_instance(const std::string& name_or_path) {
    if (name_or_path == "I" || name_or_path == "II" || name_or_path == "III" ||
        name_or_path == "IV")
        return preset_instance(name_or_path);
    return load_instance_file(name_or_path);
}

ExperimentConfig parse_experiment_config(const std::string& text) {
    auto kv = parse_key_values(text);
    ExperimentConfig cfg;
    auto take = [&](const char* key) -> std::optional<std::string> {
        auto it = kv.find(key);
        if (it == kv.end())
            return std::nullopt;
        std::string v = it->second;
        kv.erase(it);
        return v;
    };

    if (auto v = take("instance"))
        cfg.instance = *v;
    else
        throw std::invalid_argument("config: missing key 'instance'");
    if (auto v = take("policy"))
        cfg.policy = *v;
    else
        throw std::invalid_argument("config: missing key 'policy'");
    if (auto v = take("horizon"))
        cfg.horizon = to_int("horizon", *v);
    else
        throw std::invalid_argument("config: missing key 'horizon'");
    if (auto v = take("mode"))
        cfg.mode_override = *v;
    if (auto v = take("Q"))
        cfg.q_override = to_double("Q", *v);
    if (auto v = take("theta_s"))
        cfg.theta_s_override = to_double("theta_s", *v);
    if (auto v = take("repetitions"))
        cfg.repetitions = static_cast<int>(to_int("repetitions", *v));
    if (auto v = take("master_seed"))
        cfg.master_seed = static_cast<std::uint64_t>(to_int("master_seed", *v));
    if (auto v = take("log_stride"))
        cfg.log_stride = to_int("log_stride", *v);
    if (auto v = take("output"))
        cfg.output_path = *v;
    if (auto v = take("workers"))
        cfg.workers = static_cast<int>(to_int("workers", *v));

    cfg.policy_params = kv; // validated against the chosen policy later
    if (cfg.horizon < 1)
        throw std::invalid_argument("config: horizon must be >= 1");
    if (cfg.repetitions < 1)
        throw std::invalid_argument("config: repetitions must be >= 1");
    if (cfg.log_stride < 1)
        throw std::invalid_argument("config: log_stride must be >= 1");
    return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_experiment_config(ss.str());
}

LoadedInstance materialize_instance(const ExperimentConfig& cfg) {
    LoadedInstance loaded = resolve_instance(cfg.instance);
    CsbInstance inst = loaded.inst;
    if (cfg.mode_override)
        inst.mode = mode_from_string(*cfg.mode_override);
    if (cfg.theta_s_override) {
        bool same = std::all_of(inst.theta.begin(), inst.theta.end(),
                                [&](double t) { return t == inst.theta[0]; });
        if (!same)
            throw std::invalid_argument("theta_s override requires a same-threshold instance");
        std::fill(inst.theta.begin(), inst.theta.end(), *cfg.theta_s_override);
    }
    if (cfg.q_override)
        inst.Q = *cfg.q_override;
    validate_instance(inst);
    loaded.inst = std::move(inst);
    return loaded;
}

PolicyFactory policy_from_config(const ExperimentConfig& cfg, const LoadedInstance& loaded) {
    std::map<std::string, std::string> params = cfg.policy_params;
    auto take = [&](const char* key) -> std::optional<std::string> {
        auto it = params.find(key);
        if (it == params.end())
            return std::nullopt;
        std::string v = it->second;
        params.erase(it);
        return v;
    };
    auto finish = [&]() {
        if (!params.empty())
            throw std::invalid_argument("config: unknown parameter '" + params.begin()->first +
                                        "' for policy " + cfg.policy);
    };
    auto need_gamma = [&](std::optional<std::string> g) {
        if (g)
            return to_double("gamma", *g);
        if (loaded.gamma)
            return *loaded.gamma;
        throw std::invalid_argument("config: policy " + cfg.policy +
                                    " needs 'gamma' (instance provides no default)");
    };

    const std::string& p = cfg.policy;
    if (p == "csb-sk" || p == "num-sk") {
        SameThresholdKnownConfig c;
        c.horizon = cfg.horizon;
        if (auto v = take("delta"))
            c.delta = to_double("delta", *v);
        if (auto v = take("epsilon"))
            c.epsilon = to_double("epsilon", *v);
        else
            throw std::invalid_argument("config: policy " + p + " needs 'epsilon'");
        if (auto v = take("lock_at_index"))
            c.lock_at_index = static_cast<int>(to_int("lock_at_index", *v));
        finish();
        return p == "csb-sk" ? csb_sk_factory(c) : num_sk_factory(c);
    }
    if (p == "csb-su") {
        finish();
        return csb_su_factory();
    }
    if (p == "csb-mk" || p == "num-mk") {
        MultiThresholdKnownConfig c;
        c.horizon = cfg.horizon;
        c.n = loaded.inst.K;
        if (auto v = take("n"))
            c.n = static_cast<int>(to_int("n", *v));
        if (auto v = take("delta"))
            c.delta = to_double("delta", *v);
        if (auto v = take("epsilon"))
            c.epsilon = to_double("epsilon", *v);
        else
            throw std::invalid_argument("config: policy " + p + " needs 'epsilon'");
        c.gamma = need_gamma(take("gamma"));
        if (auto v = take("resolve_cadence"))
            c.resolve_cadence = static_cast<int>(to_int("resolve_cadence", *v));
        finish();
        return p == "csb-mk" ? csb_mk_factory(c) : num_mk_factory(c);
    }
    if (p == "csb-du") {
        AnytimeMultiConfig c;
        c.gamma = need_gamma(take("gamma"));
        if (auto v = take("resolve_cadence"))
            c.resolve_cadence = static_cast<int>(to_int("resolve_cadence", *v));
        finish();
        return csb_du_factory(c);
    }
    if (p == "mp-ts") {
        MpTsConfig c;
        if (auto v = take("m"))
            c.m = static_cast<int>(to_int("m", *v));
        else
            throw std::invalid_argument("config: policy mp-ts needs 'm'");
        finish();
        return mp_ts_factory(c);
    }
    if (p == "oracle") {
        finish();
        return oracle_factory(loaded.inst);
    }
    if (p == "uniform") {
        finish();
        Allocation alloc;
        alloc.a.assign(loaded.inst.K, loaded.inst.Q / loaded.inst.K);
        return fixed_factory(std::move(alloc));
    }
    throw std::invalid_argument("config: unknown policy '" + p + "'");
}

int default_workers() {
    if (const char* env = std::getenv("CSB_WORKERS")) {
        int w = std::atoi(env);
        if (w >= 1)
            return w;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

std::pair<double, double> confidence_interval(const std::vector<double>& samples) {
    if (samples.size() < 2)
        throw std::invalid_argument("confidence_interval: need at least two samples");
    double n = static_cast<double>(samples.size());
    double mean = 0.0;
    for (double s : samples)
        mean += s;
    mean /= n;
    double ss = 0.0;
    for (double s : samples)
        ss += (s - mean) * (s - mean);
    double sd = std::sqrt(ss / (n - 1.0));
    return {mean, 1.96 * sd / std::sqrt(n)};
}

AggregateResult run_repetitions(const RunSpec& spec) {
    if (spec.repetitions < 1)
        throw std::invalid_argument("run_repetitions: repetitions must be >= 1");
    const int reps = spec.repetitions;
    std::vector<RegretTrace> traces(reps);

    int workers = spec.workers > 0 ? spec.workers : default_workers();
    workers = std::min(workers, reps);

    std::exception_ptr failure;
    std::mutex failure_mu;
    auto body = [&](int w) {
        try {
            EpisodeOptions opts;
            opts.log_stride = spec.log_stride;
            for (int r = w; r < reps; r += workers)
                traces[r] = run_episode(spec.inst, spec.factory, spec.horizon,
                                        spec.master_seed + static_cast<std::uint64_t>(r), opts);
        } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mu);
            if (!failure)
                failure = std::current_exception();
        }
    };
    if (workers <= 1) {
        body(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w)
            pool.emplace_back(body, w);
        for (auto& t : pool)
            t.join();
    }
    if (failure)
        std::rethrow_exception(failure);

    AggregateResult agg;
    agg.rounds = traces[0].logged_rounds;
    size_t points = agg.rounds.size();
    agg.mean_regret.resize(points);
    agg.ci_halfwidth.resize(points);
    std::vector<double> column(reps);
    for (size_t p = 0; p < points; ++p) {
        for (int r = 0; r < reps; ++r)
            column[r] = traces[r].cumulative_regret[p];
        if (reps >= 2) {
            auto [mean, half] = confidence_interval(column);
            agg.mean_regret[p] = mean;
            agg.ci_halfwidth[p] = half;
        } else {
            agg.mean_regret[p] = column[0];
            agg.ci_halfwidth[p] = 0.0;
        }
    }
    agg.per_run_final.reserve(reps);
    for (int r = 0; r < reps; ++r) {
        agg.per_run_final.push_back(traces[r].final_regret);
        agg.rounds_to_lock.push_back(traces[r].rounds_to_threshold_lock.value_or(-1));
        agg.regret_at_lock.push_back(traces[r].regret_at_lock.value_or(-1.0));
    }
    return agg;
}

AggregateResult run_experiment(const ExperimentConfig& cfg) {
    LoadedInstance loaded = materialize_instance(cfg);
    RunSpec spec;
    spec.inst = loaded.inst;
    spec.factory = policy_from_config(cfg, loaded);
    spec.horizon = cfg.horizon;
    spec.repetitions = cfg.repetitions;
    spec.master_seed = cfg.master_seed;
    spec.log_stride = cfg.log_stride;
    spec.workers = cfg.workers;
    AggregateResult agg = run_repetitions(spec);
    if (!cfg.output_path.empty())
        write_aggregate_csv(agg, cfg, loaded.inst, cfg.output_path);
    return agg;
}

void write_aggregate_csv(const AggregateResult& agg, const ExperimentConfig& cfg,
                         const CsbInstance& inst, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open output file " + path);
    out << "# instance=" << cfg.instance << "\n";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(instance_hash(inst)));
    out << "# instance_hash=" << buf << "\n";
    out << "# mode=" << to_string(inst.mode) << "\n";
    if (cfg.q_override)
        out << "# Q=" << fmt(*cfg.q_override) << "\n";
    if (cfg.theta_s_override)
        out << "# theta_s=" << fmt(*cfg.theta_s_override) << "\n";
    out << "# policy=" << cfg.policy << "\n";
    for (const auto& [k, v] : cfg.policy_params)
        out << "# " << k << "=" << v << "\n";
    out << "# horizon=" << cfg.horizon << "\n";
    out << "# repetitions=" << cfg.repetitions << "\n";
    out << "# master_seed=" << cfg.master_seed << "\n";
    out << "# log_stride=" << cfg.log_stride << "\n";
    out << "round,mean_regret,ci_halfwidth\n";
    for (size_t p = 0; p < agg.rounds.size(); ++p)
        out << agg.rounds[p] << "," << fmt(agg.mean_regret[p]) << "," << fmt(agg.ci_halfwidth[p])
            << "\n";
}

} // namespace csb
