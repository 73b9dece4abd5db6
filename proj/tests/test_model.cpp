#include "doctest.h"

#include <stdexcept>
#include <cmath>

#include "csb/knapsack.hpp"
#include "csb/model.hpp"
#include "csb/rng.hpp"

using namespace csb;

namespace {

CsbInstance three_arm() { return make_instance({0.9, 0.6, 0.4}, {0.6, 0.55, 0.45}, 1.0); }

Allocation alloc_of(std::vector<double> a) { return Allocation{std::move(a)}; }

} // namespace

TEST_CASE("theta candidate set") {
    auto s = theta_candidate_set(3, 1.0);
    REQUIRE(s.size() == 3);
    CHECK(s[0] == doctest::Approx(1.0 / 3));
    CHECK(s[1] == doctest::Approx(0.5));
    CHECK(s[2] == 1.0);

    CHECK(theta_candidate_set(1, 5.0) == std::vector<double>{5.0});

    auto s4 = theta_candidate_set(4, 2.0);
    CHECK(s4[0] == 0.5);
    CHECK(s4[1] == doctest::Approx(2.0 / 3));
    CHECK(s4[2] == 1.0);
    CHECK(s4[3] == 2.0);
    for (size_t i = 1; i < s4.size(); ++i)
        CHECK(s4[i] > s4[i - 1]);
    CHECK(s4.back() == 2.0);

    CHECK_THROWS_AS(theta_candidate_set(0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(theta_candidate_set(3, 0.0), std::invalid_argument);
}

TEST_CASE("same threshold equivalent") {
    auto eq = same_threshold_equivalent(0.5, 50, 15.0);
    CHECK(eq.M == 30);
    CHECK(eq.theta_hat == 0.5);

    auto one = same_threshold_equivalent(7.0, 12, 7.0);
    CHECK(one.M == 1);
    CHECK(one.theta_hat == 7.0);

    auto capped = same_threshold_equivalent(0.3, 3, 1.0);
    CHECK(capped.M == 3);
    CHECK(capped.theta_hat == doctest::Approx(1.0 / 3));

    // theta_hat is always a member of the candidate set
    auto cands = theta_candidate_set(50, 15.0);
    CHECK(std::abs(cands[50 - eq.M] - eq.theta_hat) < 1e-12);

    CHECK_THROWS_AS(same_threshold_equivalent(0.0, 3, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(same_threshold_equivalent(1.5, 3, 1.0), std::invalid_argument);
}

TEST_CASE("expected loss on the three-arm example") {
    CsbInstance inst = three_arm();
    CHECK(expected_loss(inst, alloc_of({0.0, 0.55, 0.45})) == doctest::Approx(0.9));
    CHECK(expected_loss(inst, alloc_of({0.0, 0.0, 0.0})) == doctest::Approx(1.9));
    CHECK_THROWS_AS(expected_loss(inst, alloc_of({0.6, 0.55, 0.45})), std::invalid_argument);

    CsbInstance full = make_instance({0.5, 0.5}, {0.2, 0.2}, 1.0);
    CHECK(expected_loss(full, alloc_of({0.2, 0.2})) == 0.0);
}

TEST_CASE("expected loss is monotone nonincreasing per coordinate in loss mode") {
    RngStream rng(31, 0);
    for (int it = 0; it < 200; ++it) {
        int K = 2 + static_cast<int>(rng.next_u64() % 5);
        std::vector<double> mu(K), theta(K), a(K);
        double Q = 2.0;
        for (int i = 0; i < K; ++i) {
            mu[i] = rng.next_uniform();
            theta[i] = 0.05 + 0.95 * rng.next_uniform();
            a[i] = rng.next_uniform() * Q / K;
        }
        CsbInstance inst = make_instance(mu, theta, Q);
        double before = expected_loss(inst, alloc_of(a));
        int i = static_cast<int>(rng.next_u64() % K);
        std::vector<double> more = a;
        more[i] += 0.1;
        double after = expected_loss(inst, alloc_of(more));
        CHECK(after <= before + 1e-12);
    }
}

TEST_CASE("per round regret") {
    CsbInstance inst = three_arm();
    Allocation opt = alloc_of({0.0, 0.55, 0.45});
    CHECK(per_round_regret(inst, opt, opt) == 0.0);
    CHECK(per_round_regret(inst, alloc_of({0.0, 0.0, 0.0}), opt) == doctest::Approx(1.0));
    CHECK(per_round_regret(inst, alloc_of({0.6, 0.0, 0.0}), opt) == doctest::Approx(0.1));
}

TEST_CASE("residual gamma") {
    CsbInstance inst = three_arm();
    CHECK(residual_gamma(inst, alloc_of({0.0, 0.55, 0.45})) == doctest::Approx(0.0));

    CsbInstance slack = make_instance({0.5, 0.5}, {0.2, 0.3}, 1.0);
    CHECK(residual_gamma(slack, alloc_of({0.2, 0.3})) == doctest::Approx(0.25));

    // Instance III residual from the brute-force optimum
    CsbInstance iii = make_instance({0.9, 0.8, 0.42, 0.6, 0.5, 0.2, 0.1, 0.3, 0.7, 0.98},
                                    {0.65, 0.55, 0.3, 0.46, 0.37, 0.2, 0.07, 0.25, 0.3, 0.8},
                                    3.0);
    KnapsackSolution sol = solve_bruteforce(iii.mu, iii.theta, iii.Q);
    Allocation opt;
    opt.a.assign(iii.K, 0.0);
    for (int i : sol.selected)
        opt.a[i] = iii.theta[i];
    CHECK(residual_gamma(iii, opt) == doctest::Approx(0.005));
}

TEST_CASE("tolerance interval membership") {
    CHECK(in_tolerance_interval(0.46, 0.46, 0.01));
    CHECK(in_tolerance_interval(0.46, 0.455, 0.01));
    CHECK_FALSE(in_tolerance_interval(0.47, 0.455, 0.01));
    CHECK_FALSE(in_tolerance_interval(0.44, 0.455, 0.01));
    CHECK_THROWS_AS(in_tolerance_interval(0.4, 0.4, 0.0), std::invalid_argument);
}

TEST_CASE("thresholds differ via gamma cells") {
    CHECK_FALSE(thresholds_differ(0.5, 0.5, 0.01));
    CHECK(thresholds_differ(0.30, 0.55, 0.01));
    CHECK_FALSE(thresholds_differ(0.301, 0.309, 0.01));
    CHECK_THROWS_AS(thresholds_differ(0.1, 0.2, -1.0), std::invalid_argument);
}

TEST_CASE("distinct threshold count on presets") {
    CsbInstance iv = make_instance({0.9, 0.8, 0.42, 0.6, 0.5, 0.2, 0.1, 0.3, 0.7, 0.98},
                                   {0.55, 0.55, 0.3, 0.55, 0.55, 0.55, 0.3, 0.3, 0.3, 0.55},
                                   3.0);
    CHECK(distinct_threshold_count(iv, 0.01) == 2);
}

TEST_CASE("allocation equivalence oracle") {
    CsbInstance inst = three_arm();
    CHECK(is_allocation_equivalent(inst.theta, inst));

    // Lemma 1: Q/M is equivalent for a same-threshold instance
    CsbInstance st = make_same_threshold_instance({0.7, 0.5, 0.3, 0.2}, 0.4, 1.0);
    auto eq = same_threshold_equivalent(0.4, 4, 1.0);
    CHECK(is_allocation_equivalent(std::vector<double>(4, eq.theta_hat), st));

    CHECK_THROWS_AS(
        is_allocation_equivalent(std::vector<double>(21, 0.1),
                                 make_same_threshold_instance(std::vector<double>(21, 0.5), 0.1, 5.0)),
        std::invalid_argument);
}

TEST_CASE("lemma3 sampled tolerance vectors stay equivalent") {
    RngStream rng(32, 0);
    for (int it = 0; it < 100; ++it) {
        CsbInstance inst;
        double gamma = 0.0;
        Allocation opt;
        for (;;) {
            int K = 2 + static_cast<int>(rng.next_u64() % 5);
            std::vector<double> mu(K), theta(K);
            double Q = 1.0 + 2.0 * rng.next_uniform();
            for (int i = 0; i < K; ++i) {
                mu[i] = 0.05 + 0.95 * rng.next_uniform();
                theta[i] = Q * (0.05 + 0.95 * rng.next_uniform());
            }
            inst = make_instance(mu, theta, Q);
            KnapsackSolution sol = solve_bruteforce(inst.mu, inst.theta, inst.Q);
            opt.a.assign(K, 0.0);
            for (int i : sol.selected)
                opt.a[i] = inst.theta[i];
            gamma = residual_gamma(inst, opt);
            if (gamma > 1e-9)
                break;
        }
        std::vector<double> theta_hat(inst.K);
        for (int i = 0; i < inst.K; ++i) {
            double end = detail::ceil_eps(inst.theta[i] / gamma) * gamma;
            theta_hat[i] = inst.theta[i] + (end - inst.theta[i]) * rng.next_uniform();
        }
        CHECK(is_allocation_equivalent(theta_hat, inst));
    }
}

TEST_CASE("gap summary by enumeration") {
    SUBCASE("single arm") {
        CsbInstance inst = make_instance({0.7}, {0.5}, 1.0);
        GapSummary gs = gap_summary(inst);
        CHECK(gs.nabla_max == doctest::Approx(0.7));
        CHECK(gs.nabla_min == doctest::Approx(0.7));
        CHECK(gs.M == 1);
        CHECK(gs.k_prime == 1);
    }
    SUBCASE("three-arm example") {
        GapSummary gs = gap_summary(three_arm());
        CHECK(gs.nabla_max == doctest::Approx(1.0));
        CHECK(gs.nabla_min == doctest::Approx(0.1));
        CHECK(gs.M == 2);
        CHECK(gs.k_prime == 2);
        // best pattern observing arm 0 funds only arm 1
        CHECK(gs.nabla_i_min[0] == doctest::Approx(0.4));
        CHECK(gs.nabla_i_min[1] == doctest::Approx(0.1));
    }
}

TEST_CASE("gap summary closed form for large same-threshold instances") {
    std::vector<double> mu(50);
    for (int i = 0; i < 50; ++i)
        mu[i] = (50.0 - i) / 100.0;
    CsbInstance inst = make_same_threshold_instance(mu, 0.5, 15.0);
    GapSummary gs = gap_summary(inst);
    CHECK(gs.M == 30);
    CHECK(gs.k_prime == 30);
    CHECK(gs.nabla_max == doctest::Approx(10.65));
    CHECK(gs.nabla_min == doctest::Approx(0.01));
}

TEST_CASE("same-threshold optimal loss closed form") {
    std::vector<double> mu(50);
    for (int i = 0; i < 50; ++i)
        mu[i] = (50.0 - i) / 100.0;
    CHECK(optimal_loss_same_threshold(mu, 0.5, 15.0) == doctest::Approx(2.1));
}

TEST_CASE("instance hash is stable and sensitive") {
    CsbInstance a = three_arm();
    CsbInstance b = three_arm();
    CHECK(instance_hash(a) == instance_hash(b));
    b.mu[0] = 0.91;
    CHECK(instance_hash(a) != instance_hash(b));
}

TEST_CASE("instance validation") {
    CHECK_THROWS_AS(make_instance({0.5}, {0.0}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_instance({1.5}, {0.5}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_instance({0.5}, {2.0}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_instance({}, {}, 1.0), std::invalid_argument);
}
