#include "doctest.h"

#include <stdexcept>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "csb/env.hpp"
#include "csb/harness.hpp"
#include "csb/policies.hpp"

using namespace csb;

TEST_CASE("env_step censors fully funded arms in loss mode") {
    CsbInstance inst = make_instance({0.9, 0.9}, {0.3, 0.3}, 1.0);
    RngStream rng = derive_stream(1, kEnvStreamId);
    Allocation a{{0.3, 0.3}};
    for (int t = 0; t < 50; ++t) {
        FeedbackVector fb = env_step(inst, a, rng);
        CHECK(fb.y == std::vector<std::uint8_t>{0, 0});
        CHECK(fb.observed == std::vector<std::uint8_t>{0, 0});
    }
}

TEST_CASE("env_step empirical means match mu under zero allocation") {
    CsbInstance inst = make_instance({0.2, 0.5, 0.8}, {0.3, 0.3, 0.3}, 1.0);
    RngStream rng = derive_stream(2, kEnvStreamId);
    Allocation zero{{0.0, 0.0, 0.0}};
    const int n = 100000;
    std::vector<double> sums(3, 0.0);
    for (int t = 0; t < n; ++t) {
        FeedbackVector fb = env_step(inst, zero, rng);
        for (int i = 0; i < 3; ++i) {
            CHECK(fb.observed[i] == 1);
            sums[i] += fb.y[i];
        }
    }
    for (int i = 0; i < 3; ++i) {
        double band = 3.0 * std::sqrt(inst.mu[i] * (1 - inst.mu[i]) / n);
        CHECK(std::abs(sums[i] / n - inst.mu[i]) < band);
    }
}

TEST_CASE("env_step reward mode censors unfunded arms") {
    CsbInstance inst = make_instance({0.9, 0.9}, {0.3, 0.3}, 1.0, Mode::Reward);
    RngStream rng = derive_stream(3, kEnvStreamId);
    Allocation zero{{0.0, 0.0}};
    for (int t = 0; t < 50; ++t) {
        FeedbackVector fb = env_step(inst, zero, rng);
        CHECK(fb.y == std::vector<std::uint8_t>{0, 0});
    }
}

TEST_CASE("latent draws are shared across allocations under one seed") {
    CsbInstance inst = make_instance({0.5, 0.5, 0.5}, {0.4, 0.4, 0.4}, 1.2);
    RngStream r1 = derive_stream(77, kEnvStreamId);
    RngStream r2 = derive_stream(77, kEnvStreamId);
    Allocation zero{{0.0, 0.0, 0.0}};
    Allocation partial{{0.4, 0.0, 0.4}};
    for (int t = 0; t < 200; ++t) {
        FeedbackVector full = env_step(inst, zero, r1);
        FeedbackVector part = env_step(inst, partial, r2);
        CHECK(part.y[1] == full.y[1]); // the one arm observed by both
    }
}

TEST_CASE("oracle episodes have identically zero regret") {
    LoadedInstance li = preset_instance("III");
    RegretTrace tr = run_episode(li.inst, oracle_factory(li.inst), 500, 9, {});
    for (double c : tr.cumulative_regret)
        CHECK(c == 0.0);
}

TEST_CASE("uniform allocation accrues linear regret at the exact gap slope") {
    LoadedInstance li = preset_instance("I");
    Allocation uniform;
    uniform.a.assign(li.inst.K, li.inst.Q / li.inst.K);
    EpisodeOptions opts;
    opts.log_stride = 100;
    RegretTrace tr = run_episode(li.inst, fixed_factory(uniform), 1000, 5, opts);
    // Q/K = 0.3 funds nothing, so the per-round gap is the full optimal value.
    double slope = 10.65;
    REQUIRE(tr.logged_rounds.back() == 1000);
    CHECK(tr.cumulative_regret.back() == doctest::Approx(1000 * slope));
    CHECK(tr.cumulative_regret[0] == doctest::Approx(100 * slope));
}

TEST_CASE("episodes replay identically") {
    LoadedInstance li = preset_instance("III");
    AnytimeMultiConfig cfg;
    cfg.gamma = 0.01;
    RegretTrace a = run_episode(li.inst, csb_du_factory(cfg), 1500, 42, {});
    RegretTrace b = run_episode(li.inst, csb_du_factory(cfg), 1500, 42, {});
    CHECK(a.cumulative_regret == b.cumulative_regret);
    CHECK(a.final_regret == b.final_regret);
}

TEST_CASE("cumulative regret is nondecreasing") {
    LoadedInstance li = preset_instance("IV");
    MultiThresholdKnownConfig cfg;
    cfg.n = 2;
    cfg.delta = 1e-3;
    cfg.epsilon = 0.1;
    cfg.gamma = 0.01;
    RegretTrace tr = run_episode(li.inst, csb_mk_factory(cfg), 3000, 11, {});
    for (size_t i = 1; i < tr.cumulative_regret.size(); ++i)
        CHECK(tr.cumulative_regret[i] >= tr.cumulative_regret[i - 1]);
    CHECK(tr.cumulative_regret[0] >= 0.0);
}

TEST_CASE("infeasible policies are rejected") {
    CsbInstance inst = make_instance({0.5}, {0.5}, 1.0);
    Allocation over{{2.0}};
    CHECK_THROWS(run_episode(inst, fixed_factory(over), 10, 1, {}));
}

TEST_CASE("log stride controls the recorded points") {
    LoadedInstance li = preset_instance("III");
    EpisodeOptions opts;
    opts.log_stride = 40;
    RegretTrace tr = run_episode(li.inst, oracle_factory(li.inst), 100, 1, opts);
    CHECK(tr.logged_rounds == std::vector<long long>{40, 80, 100});
}

TEST_CASE("trace csv carries the instance hash header") {
    LoadedInstance li = preset_instance("III");
    EpisodeOptions opts;
    opts.log_stride = 50;
    RegretTrace tr = run_episode(li.inst, oracle_factory(li.inst), 100, 4, opts);
    std::string path = "trace_test_tmp.csv";
    write_trace_csv(tr, path);
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line.rfind("# instance_hash=", 0) == 0);
    std::getline(in, line);
    CHECK(line == "# master_seed=4");
    in.close();
    std::remove(path.c_str());
}
