#include "csb/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include "csb/bounds.hpp"
#include "csb/harness.hpp"
#include "csb/knapsack.hpp"

namespace csb {

namespace {

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double elapsed() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

double mean_of(const std::vector<double>& xs) {
    double m = 0.0;
    for (double x : xs)
        m += x;
    return m / static_cast<double>(xs.size());
}

double stderr_of(const std::vector<double>& xs) {
    double m = mean_of(xs);
    double ss = 0.0;
    for (double x : xs)
        ss += (x - m) * (x - m);
    double n = static_cast<double>(xs.size());
    return std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
}

long long scaled_value_sum(const std::vector<double>& values, const std::vector<int>& selected,
                           long long scale) {
    long long total = 0;
    for (int i : selected)
        total += std::llround(values[i] * static_cast<double>(scale));
    return total;
}

Allocation allocation_from_selection(const CsbInstance& inst, const std::vector<int>& selected) {
    Allocation a;
    a.a.assign(inst.K, 0.0);
    for (int i : selected)
        a.a[i] = inst.theta[i];
    return a;
}

// Heavy runs reused by more than one criterion.
struct SharedRuns {
    std::optional<AggregateResult> sk_instance1; // criterion 8 run, reused by 9
};

constexpr long long kHorizon = 100000;
constexpr int kReps = 100;
constexpr long long kStride = 10000;

AggregateResult run_sk_instance1(int workers) {
    LoadedInstance li = preset_instance("I");
    SameThresholdKnownConfig cfg;
    cfg.delta = 1e-5; // delta = 1/T
    cfg.epsilon = 0.1;
    RunSpec spec{li.inst, csb_sk_factory(cfg), kHorizon, kReps, 81000, kStride, workers};
    return run_repetitions(spec);
}

// --------------------------------------------------------------- criterion 1

CriterionResult criterion_knapsack_oracle(const AcceptanceOptions&) {
    Timer timer;
    RngStream rng(911, 0);
    int mismatches = 0;
    for (int it = 0; it < 500; ++it) {
        int K = 1 + static_cast<int>(rng.next_u64() % 15);
        std::vector<double> w(K), v(K);
        double wsum = 0.0;
        for (int i = 0; i < K; ++i) {
            w[i] = static_cast<double>(1 + rng.next_u64() % 10000) / 1e4;
            v[i] = static_cast<double>(1 + rng.next_u64() % 10000) / 1e4;
            wsum += w[i];
        }
        long long grid = std::llround(wsum * 1e4);
        double cap = static_cast<double>(rng.next_u64() % static_cast<std::uint64_t>(grid + 1)) / 1e4;
        KnapsackSolution bf = solve_bruteforce(v, w, cap);
        KnapsackSolution dp = solve_dp(v, w, cap, 10000);
        if (scaled_value_sum(v, bf.selected, 10000) != scaled_value_sum(v, dp.selected, 10000))
            ++mismatches;
    }
    double secs = timer.elapsed();
    CriterionResult r{1, "knapsack-dp-matches-bruteforce", mismatches == 0 && secs < 60.0,
                      "500 random instances, mismatches=" + std::to_string(mismatches) +
                          ", elapsed=" + fmt(secs) + "s (limit 60s)",
                      secs};
    return r;
}

// --------------------------------------------------------------- criterion 2

CriterionResult criterion_prop2_example(const AcceptanceOptions&) {
    Timer timer;
    CsbInstance inst = make_instance({0.9, 0.6, 0.4}, {0.6, 0.55, 0.45}, 1.0);
    Allocation a = optimal_allocation(inst);
    bool pass = a.a.size() == 3 && a.a[0] == 0.0 && a.a[1] == 0.55 && a.a[2] == 0.45;
    std::string got = "(" + fmt(a.a[0]) + ", " + fmt(a.a[1]) + ", " + fmt(a.a[2]) + ")";
    return {2, "prop2-three-arm-allocation", pass, "optimal_allocation = " + got + ", expected (0, 0.55, 0.45)",
            timer.elapsed()};
}

// --------------------------------------------------------------- criterion 3

CriterionResult criterion_lemma1(const AcceptanceOptions&) {
    Timer timer;
    RngStream rng(912, 0);
    int ok = 0;
    for (int it = 0; it < 200; ++it) {
        int K = 1 + static_cast<int>(rng.next_u64() % 10);
        double Q = 0.5 + 4.5 * rng.next_uniform();
        double theta_s = Q * (0.02 + 0.98 * rng.next_uniform());
        std::vector<double> mu(K);
        for (double& m : mu)
            m = rng.next_uniform();
        CsbInstance inst = make_same_threshold_instance(mu, theta_s, Q);
        auto eq = same_threshold_equivalent(theta_s, K, Q);
        std::vector<double> theta_hat(K, eq.theta_hat);
        if (is_allocation_equivalent(theta_hat, inst))
            ++ok;
    }
    return {3, "lemma1-threshold-equivalent", ok == 200,
            std::to_string(ok) + "/200 random same-threshold instances equivalent under Q/M",
            timer.elapsed()};
}

// --------------------------------------------------------------- criterion 4

CriterionResult criterion_lemma3(const AcceptanceOptions&) {
    Timer timer;
    RngStream rng(913, 0);
    int ok = 0;
    for (int it = 0; it < 1000; ++it) {
        CsbInstance inst;
        double gamma = 0.0;
        for (;;) {
            int K = 2 + static_cast<int>(rng.next_u64() % 7);
            double Q = 1.0 + 3.0 * rng.next_uniform();
            std::vector<double> mu(K), theta(K);
            for (int i = 0; i < K; ++i) {
                mu[i] = 0.05 + 0.95 * rng.next_uniform();
                theta[i] = Q * (0.05 + 0.95 * rng.next_uniform());
            }
            inst = make_instance(mu, theta, Q);
            KnapsackSolution sol = solve_bruteforce(inst.mu, inst.theta, inst.Q);
            gamma = residual_gamma(inst, allocation_from_selection(inst, sol.selected));
            if (gamma > 1e-9)
                break;
        }
        std::vector<double> theta_hat(inst.K);
        bool inside = true;
        for (int i = 0; i < inst.K; ++i) {
            double end = detail::ceil_eps(inst.theta[i] / gamma) * gamma;
            theta_hat[i] = inst.theta[i] + (end - inst.theta[i]) * rng.next_uniform();
            inside = inside && in_tolerance_interval(theta_hat[i], inst.theta[i], gamma);
        }
        if (inside && is_allocation_equivalent(theta_hat, inst))
            ++ok;
    }
    return {4, "lemma3-tolerance-intervals", ok == 1000,
            std::to_string(ok) + "/1000 sampled in-tolerance vectors allocation equivalent",
            timer.elapsed()};
}

// --------------------------------------------------------------- criterion 5

CriterionResult criterion_lemma2_rounds(const AcceptanceOptions&) {
    Timer timer;
    LoadedInstance li = preset_instance("I");
    const double delta = 1e-2, epsilon = 0.1;
    long long bound = detail::iceil_eps(rounds_bound_csb_sk(li.inst.K, delta, epsilon));
    double opt_loss = optimal_loss_same_threshold(li.inst.mu, li.inst.theta[0], li.inst.Q);

    SameThresholdKnownConfig cfg;
    cfg.delta = delta;
    cfg.epsilon = epsilon;
    PolicyFactory factory = csb_sk_factory(cfg);

    int good = 0;
    for (int s = 0; s < 100; ++s) {
        double locked_theta = -1.0;
        EpisodeOptions opts;
        opts.log_stride = bound;
        opts.observer = [&](long long, const Policy& p, const Allocation&, const FeedbackVector&) {
            if (locked_theta < 0.0 && p.locked())
                locked_theta = dynamic_cast<const CsbSk&>(p).candidate_threshold();
        };
        RegretTrace tr = run_episode(li.inst, factory, bound, 5000 + s, opts);
        bool locked_in_time = tr.rounds_to_threshold_lock.has_value();
        bool equivalent =
            locked_theta > 0.0 &&
            std::abs(optimal_loss_same_threshold(li.inst.mu, locked_theta, li.inst.Q) - opt_loss) <=
                1e-12;
        if (locked_in_time && equivalent)
            ++good;
    }
    double secs = timer.elapsed();
    return {5, "lemma2-round-budget", good >= 99 && secs < 120.0,
            std::to_string(good) + "/100 runs locked on an allocation equivalent within " +
                std::to_string(bound) + " rounds, elapsed=" + fmt(secs) + "s (limit 120s)",
            secs};
}

// --------------------------------------------------------------- criterion 6

CriterionResult criterion_lemma6_rounds(const AcceptanceOptions&) {
    Timer timer;
    LoadedInstance li = preset_instance("I");
    auto eq = same_threshold_equivalent(li.inst.theta[0], li.inst.K, li.inst.Q);
    double bound = expected_rounds_csb_su(li.inst.mu, eq.M); // instance means already sorted desc

    const long long horizon = 2000;
    std::vector<double> rounds;
    for (int s = 0; s < 200; ++s) {
        long long lock_round = -1;
        EpisodeOptions opts;
        opts.log_stride = horizon;
        opts.observer = [&](long long t, const Policy& p, const Allocation&, const FeedbackVector&) {
            if (lock_round < 0 && dynamic_cast<const CsbSu&>(p).live_arm_count() <= eq.M)
                lock_round = t;
        };
        run_episode(li.inst, csb_su_factory(), horizon, 6000 + s, opts);
        rounds.push_back(static_cast<double>(lock_round < 0 ? horizon : lock_round));
    }
    double m = mean_of(rounds), se = stderr_of(rounds);
    bool pass = m + 2.0 * se <= bound;
    return {6, "lemma6-expected-rounds", pass,
            "mean=" + fmt(m) + " +2se=" + fmt(m + 2 * se) + " vs bound=" + fmt(bound) +
                " (200 seeds)",
            timer.elapsed()};
}

// --------------------------------------------------------------- criterion 7

CriterionResult criterion_lemma7_rounds(const AcceptanceOptions&) {
    Timer timer;
    LoadedInstance li = preset_instance("III");
    const double gamma = *li.gamma;
    double bound = expected_rounds_csb_du(li.inst.mu, li.inst.theta, gamma);

    AnytimeMultiConfig cfg;
    cfg.gamma = gamma;
    PolicyFactory factory = csb_du_factory(cfg);

    const long long horizon = 20000;
    std::vector<double> rounds;
    int never = 0;
    for (int s = 0; s < 100; ++s) {
        long long done = -1;
        EpisodeOptions opts;
        opts.log_stride = horizon;
        opts.observer = [&](long long t, const Policy& p, const Allocation&, const FeedbackVector&) {
            if (done >= 0)
                return;
            const auto& du = dynamic_cast<const CsbDu&>(p);
            for (int i = 0; i < li.inst.K; ++i)
                if (!in_tolerance_interval(du.candidate_threshold(i), li.inst.theta[i], gamma))
                    return;
            done = t;
        };
        run_episode(li.inst, factory, horizon, 7000 + s, opts);
        if (done < 0) {
            ++never;
            done = horizon;
        }
        rounds.push_back(static_cast<double>(done));
    }
    double m = mean_of(rounds), se = stderr_of(rounds);
    bool pass = never == 0 && m <= bound + 2.0 * se;
    return {7, "lemma7-expected-rounds", pass,
            "mean=" + fmt(m) + " vs bound+2se=" + fmt(bound + 2 * se) + ", unfinished=" +
                std::to_string(never) + "/100 (horizon cap " + std::to_string(horizon) + ")",
            timer.elapsed()};
}

// --------------------------------------------------------------- criterion 8

struct SublinearSpec {
    std::string label;
    LoadedInstance li;
    PolicyFactory factory;
    std::uint64_t seed;
};

std::vector<SublinearSpec> sublinear_specs() {
    std::vector<SublinearSpec> specs;
    {
        LoadedInstance li = preset_instance("I");
        SameThresholdKnownConfig cfg;
        cfg.delta = 1e-5;
        cfg.epsilon = 0.1;
        specs.push_back({"csb-sk/I", li, csb_sk_factory(cfg), 81000});
        specs.push_back({"csb-su/I", li, csb_su_factory(), 82000});
    }
    for (const char* name : {"III", "IV"}) {
        LoadedInstance li = preset_instance(name);
        MultiThresholdKnownConfig mk;
        mk.n = distinct_threshold_count(li.inst, *li.gamma);
        mk.delta = 1e-5;
        mk.epsilon = 0.1;
        mk.gamma = *li.gamma;
        AnytimeMultiConfig du;
        du.gamma = *li.gamma;
        std::uint64_t base = name[0] == 'I' && name[1] == 'I' && name[2] == 'I' ? 83000 : 84000;
        specs.push_back({std::string("csb-mk/") + name, li, csb_mk_factory(mk), base});
        specs.push_back({std::string("csb-du/") + name, li, csb_du_factory(du), base + 1000});
    }
    return specs;
}

CriterionResult criterion_sublinear(const AcceptanceOptions& opts, SharedRuns& shared) {
    Timer timer;
    bool pass = true;
    std::string detail;
    for (auto& spec : sublinear_specs()) {
        AggregateResult agg;
        if (spec.label == "csb-sk/I") {
            if (!shared.sk_instance1)
                shared.sk_instance1 = run_sk_instance1(opts.workers);
            agg = *shared.sk_instance1;
        } else {
            RunSpec rs{spec.li.inst, spec.factory, kHorizon, kReps, spec.seed, kStride,
                       opts.workers};
            agg = run_repetitions(rs);
        }
        size_t last = agg.rounds.size() - 1;
        double r4 = agg.mean_regret[0];        // T = 1e4
        double r5 = agg.mean_regret[last];     // T = 1e5
        double rate4 = r4 / 1e4, rate5 = r5 / 1e5;
        double window = (agg.mean_regret[last] - agg.mean_regret[last - 1]) / 1e4;
        double nmax = gap_summary(spec.li.inst).nabla_max;
        bool ok = rate5 < 0.5 * rate4 && window < 0.05 * nmax;
        pass = pass && ok;
        detail += spec.label + (ok ? " ok" : " FAIL") + " (rate1e5=" + fmt(rate5) +
                  " vs 0.5*rate1e4=" + fmt(0.5 * rate4) + ", tail=" + fmt(window) + " vs " +
                  fmt(0.05 * nmax) + "); ";
    }
    double secs = timer.elapsed();
    pass = pass && secs < 1800.0;
    return {8, "sublinear-regret", pass, detail + "elapsed=" + fmt(secs) + "s (limit 1800s)", secs};
}

// --------------------------------------------------------------- criterion 9

CriterionResult criterion_theorem1(const AcceptanceOptions& opts, SharedRuns& shared) {
    Timer timer;
    if (!shared.sk_instance1)
        shared.sk_instance1 = run_sk_instance1(opts.workers);
    const AggregateResult& agg = *shared.sk_instance1;

    LoadedInstance li = preset_instance("I");
    auto eq = same_threshold_equivalent(li.inst.theta[0], li.inst.K, li.inst.Q);
    double log_term = lower_bound_same(li.inst.mu, eq.M, static_cast<double>(kHorizon));

    std::vector<double> post_lock;
    int unlocked = 0;
    for (size_t r = 0; r < agg.per_run_final.size(); ++r) {
        if (agg.rounds_to_lock[r] < 0) {
            ++unlocked;
            continue;
        }
        post_lock.push_back(agg.per_run_final[r] - agg.regret_at_lock[r]);
    }
    double m = post_lock.empty() ? 0.0 : mean_of(post_lock);
    bool pass = unlocked == 0 && m <= 3.0 * log_term;
    return {9, "theorem1-log-term", pass,
            "mean post-lock regret=" + fmt(m) + " vs 3x explicit log term=" + fmt(3.0 * log_term) +
                ", unlocked runs=" + std::to_string(unlocked),
            timer.elapsed()};
}

// -------------------------------------------------------------- criterion 10

CriterionResult criterion_prop1_identity(const AcceptanceOptions&) {
    Timer timer;
    LoadedInstance li = preset_instance("I");
    auto eq = same_threshold_equivalent(li.inst.theta[0], li.inst.K, li.inst.Q);
    int lock_index = li.inst.K - eq.M + 1;

    SameThresholdKnownConfig sk;
    sk.delta = 1e-2;
    sk.epsilon = 0.1;
    sk.lock_at_index = lock_index;
    MpTsConfig mp;
    mp.m = li.inst.K - eq.M;

    const long long rounds = 1000;
    auto funded_masks = [&](const PolicyFactory& f) {
        std::vector<std::vector<std::uint8_t>> masks;
        EpisodeOptions opts;
        opts.log_stride = rounds;
        opts.observer = [&](long long, const Policy&, const Allocation& a, const FeedbackVector&) {
            std::vector<std::uint8_t> mask(a.a.size());
            for (size_t i = 0; i < a.a.size(); ++i)
                mask[i] = a.a[i] > 0.0 ? 1 : 0;
            masks.push_back(std::move(mask));
        };
        run_episode(li.inst, f, rounds, 1010, opts);
        return masks;
    };
    auto m1 = funded_masks(csb_sk_factory(sk));
    auto m2 = funded_masks(mp_ts_factory(mp));
    long long identical = 0;
    for (long long t = 0; t < rounds; ++t)
        if (m1[t] == m2[t])
            ++identical;
    bool pass = identical == rounds;
    return {10, "prop1-trace-identity", pass,
            std::to_string(identical) + "/" + std::to_string(rounds) +
                " rounds selected identical observed sets",
            timer.elapsed()};
}

// -------------------------------------------------------------- criterion 11

CriterionResult criterion_resource_trend(const AcceptanceOptions& opts) {
    Timer timer;
    LoadedInstance li2 = preset_instance("II");
    const double qs[3] = {5.0, 10.0, 15.0};
    bool pass = true;
    std::string detail;
    for (const char* policy : {"csb-sk", "csb-su"}) {
        double finals[3];
        for (int qi = 0; qi < 3; ++qi) {
            CsbInstance inst = li2.inst;
            inst.Q = qs[qi];
            PolicyFactory f;
            if (std::string(policy) == "csb-sk") {
                SameThresholdKnownConfig cfg;
                cfg.delta = 1e-4;
                cfg.epsilon = 0.1;
                f = csb_sk_factory(cfg);
            } else {
                f = csb_su_factory();
            }
            RunSpec rs{inst, f, 10000, kReps, 90000 + static_cast<std::uint64_t>(qi) * 100,
                       10000, opts.workers};
            finals[qi] = mean_of(run_repetitions(rs).per_run_final);
        }
        bool ok = finals[0] < finals[1] && finals[1] < finals[2];
        pass = pass && ok;
        detail += std::string(policy) + (ok ? " ok" : " FAIL") + " (Q=5: " + fmt(finals[0]) +
                  ", Q=10: " + fmt(finals[1]) + ", Q=15: " + fmt(finals[2]) + "); ";
    }
    return {11, "figure2-resource-trend", pass, detail, timer.elapsed()};
}

// -------------------------------------------------------------- criterion 12

CriterionResult criterion_num(const AcceptanceOptions& opts) {
    Timer timer;
    bool pass = true;
    std::string detail;

    auto reward_preset = [](const char* name) {
        LoadedInstance li = preset_instance(name);
        li.inst.mode = Mode::Reward;
        return li;
    };

    // Zero-regret oracle baseline on both reward instances.
    for (const char* name : {"I", "IV"}) {
        LoadedInstance li = reward_preset(name);
        RunSpec rs{li.inst, oracle_factory(li.inst), kHorizon, kReps,
                   name[0] == 'I' && name[1] == '\0' ? 95000u : 95100u, kStride, opts.workers};
        AggregateResult agg = run_repetitions(rs);
        bool zero = std::all_of(agg.per_run_final.begin(), agg.per_run_final.end(),
                                [](double v) { return v == 0.0; });
        pass = pass && zero;
        detail += std::string("oracle/") + name + (zero ? " zero" : " NONZERO") + "; ";
    }

    // Sub-linearity of the NUM learners.
    auto ratio_check = [&](const std::string& label, const LoadedInstance& li,
                           const PolicyFactory& f, std::uint64_t seed) {
        RunSpec rs{li.inst, f, kHorizon, kReps, seed, kStride, opts.workers};
        AggregateResult agg = run_repetitions(rs);
        size_t last = agg.rounds.size() - 1;
        double rate4 = agg.mean_regret[0] / 1e4;
        double rate5 = agg.mean_regret[last] / 1e5;
        bool ok = rate5 < 0.5 * rate4;
        pass = pass && ok;
        detail += label + (ok ? " ok" : " FAIL") + " (rate1e5=" + fmt(rate5) +
                  " vs 0.5*rate1e4=" + fmt(0.5 * rate4) + "); ";
    };
    {
        LoadedInstance li = reward_preset("I");
        SameThresholdKnownConfig cfg;
        cfg.delta = 1e-5;
        cfg.epsilon = 0.1;
        ratio_check("num-sk/I", li, num_sk_factory(cfg), 96000);
    }
    {
        LoadedInstance li = reward_preset("IV");
        MultiThresholdKnownConfig cfg;
        cfg.n = distinct_threshold_count(li.inst, *li.gamma);
        cfg.delta = 1e-5;
        cfg.epsilon = 0.1;
        cfg.gamma = *li.gamma;
        ratio_check("num-mk/IV", li, num_mk_factory(cfg), 97000);
    }

    // Mirror audit: on a deterministic mu = 1 instance the two binary
    // searches must walk identical (l,u,j) paths with inverted event kinds.
    {
        std::vector<double> ones(8, 1.0);
        CsbInstance loss_inst = make_same_threshold_instance(ones, 0.55, 2.0, Mode::Loss);
        CsbInstance reward_inst = make_same_threshold_instance(ones, 0.55, 2.0, Mode::Reward);
        SameThresholdKnownConfig cfg;
        cfg.delta = 0.05;
        cfg.epsilon = 0.5;

        auto collect = [&](const CsbInstance& inst, const PolicyFactory& f) {
            std::vector<SearchEvent> events;
            EpisodeOptions o;
            o.log_stride = 200;
            o.observer = [&](long long t, const Policy& p, const Allocation&,
                             const FeedbackVector&) {
                if (t == 200)
                    events = p.events();
            };
            run_episode(inst, f, 200, 99, o);
            return events;
        };
        auto ev_sk = collect(loss_inst, csb_sk_factory(cfg));
        auto ev_num = collect(reward_inst, num_sk_factory(cfg));
        bool mirror = ev_sk.size() == ev_num.size() && !ev_sk.empty();
        for (size_t i = 0; mirror && i < ev_sk.size(); ++i) {
            const SearchEvent& a = ev_sk[i];
            const SearchEvent& b = ev_num[i];
            bool same_state = a.l == b.l && a.u == b.u && a.j == b.j;
            bool inverted = (a.kind == 'K' && b.kind == 'K') ||
                            (a.kind == 'L' && b.kind == 'W') || (a.kind == 'W' && b.kind == 'L');
            mirror = same_state && inverted;
        }
        pass = pass && mirror;
        detail += std::string("mirror-audit ") + (mirror ? "ok" : "FAIL") + " (" +
                  std::to_string(ev_sk.size()) + " events); ";
    }
    return {12, "num-reward-setting", pass, detail, timer.elapsed()};
}

// -------------------------------------------------------------- criterion 13

CriterionResult criterion_determinism(const AcceptanceOptions& opts) {
    Timer timer;
    auto read_file = [](const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    auto run_once = [&](const std::string& out, int workers) {
        ExperimentConfig cfg;
        cfg.instance = "III";
        cfg.policy = "csb-mk";
        cfg.policy_params = {{"epsilon", "0.1"}, {"n", "9"}};
        cfg.horizon = 2000;
        cfg.repetitions = 10;
        cfg.master_seed = 3;
        cfg.log_stride = 100;
        cfg.output_path = out;
        cfg.workers = workers;
        run_experiment(cfg);
        return read_file(out);
    };
    std::string base = opts.scratch_dir + "/csb_determinism_";
    std::string a = run_once(base + "a.csv", 1);
    std::string b = run_once(base + "b.csv", 1);
    std::string c = run_once(base + "c.csv", 4);
    bool pass = !a.empty() && a == b && a == c;
    return {13, "byte-identical-reruns", pass,
            std::string("rerun ") + (a == b ? "identical" : "DIFFERS") + ", worker-count " +
                (a == c ? "invariant" : "DEPENDENT"),
            timer.elapsed()};
}

} // namespace

std::string format_result_line(const CriterionResult& r) {
    char head[16];
    std::snprintf(head, sizeof(head), "%2d", r.id);
    return std::string(r.pass ? "[PASS] " : "[FAIL] ") + head + " " + r.name + ": " + r.detail;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts) {
    SharedRuns shared;
    std::vector<std::pair<int, std::function<CriterionResult()>>> all = {
        {1, [&] { return criterion_knapsack_oracle(opts); }},
        {2, [&] { return criterion_prop2_example(opts); }},
        {3, [&] { return criterion_lemma1(opts); }},
        {4, [&] { return criterion_lemma3(opts); }},
        {5, [&] { return criterion_lemma2_rounds(opts); }},
        {6, [&] { return criterion_lemma6_rounds(opts); }},
        {7, [&] { return criterion_lemma7_rounds(opts); }},
        {8, [&] { return criterion_sublinear(opts, shared); }},
        {9, [&] { return criterion_theorem1(opts, shared); }},
        {10, [&] { return criterion_prop1_identity(opts); }},
        {11, [&] { return criterion_resource_trend(opts); }},
        {12, [&] { return criterion_num(opts); }},
        {13, [&] { return criterion_determinism(opts); }},
    };
    std::vector<CriterionResult> results;
    for (auto& [id, fn] : all) {
        if (!opts.only.empty() &&
            std::find(opts.only.begin(), opts.only.end(), id) == opts.only.end())
            continue;
        try {
            results.push_back(fn());
        } catch (const std::exception& e) {
            results.push_back({id, "criterion", false, std::string("exception: ") + e.what(), 0.0});
        }
    }
    return results;
}

} // namespace csb
