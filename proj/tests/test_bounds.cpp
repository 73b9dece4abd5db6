#include "doctest.h"

#include <stdexcept>
#include <cmath>

#include "csb/bounds.hpp"
#include "csb/harness.hpp"

using namespace csb;

TEST_CASE("bernoulli kl divergence") {
    CHECK(kl_bernoulli(0.3, 0.3) == 0.0);
    CHECK(kl_bernoulli(0.5, 0.75) == doctest::Approx(0.5 * std::log(4.0 / 3.0)));
    CHECK(kl_bernoulli(0.0, 0.4) == doctest::Approx(std::log(1.0 / 0.6)));
    CHECK(kl_bernoulli(1.0, 1.0) == 0.0);
    CHECK_THROWS_AS(kl_bernoulli(0.3, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(kl_bernoulli(0.3, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(kl_bernoulli(-0.1, 0.5), std::invalid_argument);
}

TEST_CASE("lower bound for the same-threshold case") {
    CHECK(lower_bound_same({0.9, 0.5}, 0, 100.0) == 0.0);

    double d = kl_bernoulli(0.4, 0.6);
    CHECK(lower_bound_same({0.6, 0.4}, 1, std::exp(1.0)) == doctest::Approx(0.2 / d));

    CHECK_THROWS_AS(lower_bound_same({0.5, 0.5, 0.3}, 1, 100.0), std::invalid_argument);
    CHECK_THROWS_AS(lower_bound_same({0.3, 0.5}, 1, 100.0), std::invalid_argument);
}

TEST_CASE("round bounds evaluate the closed forms") {
    // W * log2(K) with W = ln(log2(50)/0.01)/ln(1/0.9)
    double lg = std::log2(50.0);
    double w = std::log(lg / 0.01) / std::log(1.0 / 0.9);
    CHECK(rounds_bound_csb_sk(50, 0.01, 0.1) == doctest::Approx(w * lg));
    CHECK(static_cast<long long>(std::ceil(rounds_bound_csb_sk(50, 0.01, 0.1))) == 340);

    double cells = 301.0;
    double wm = std::log(10.0 * std::log2(cells) / 1e-5) / std::log(1.0 / 0.9);
    CHECK(rounds_bound_csb_mk(10, 1e-5, 0.1, 3.0, 0.01, 9, 9) ==
          doctest::Approx(wm * (9 * std::log2(cells) + 10 * std::log2(10.0))));
}

TEST_CASE("round bounds are monotone in delta and epsilon") {
    double prev = 0.0;
    for (double delta : {0.1, 0.01, 0.001}) {
        double v = rounds_bound_csb_sk(50, delta, 0.1);
        CHECK(v > prev);
        prev = v;
    }
    prev = 0.0;
    for (double eps : {0.3, 0.2, 0.1}) {
        double v = rounds_bound_csb_mk(10, 0.01, eps, 3.0, 0.01, 10, 10);
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("expected rounds of the anytime same-threshold search") {
    // degenerate all-ones means: every summand is exactly 1
    CHECK(expected_rounds_csb_su({1.0, 1.0}, 1) == doctest::Approx(1.0));
    CHECK(expected_rounds_csb_su({1.0, 1.0, 1.0}, 1) == doctest::Approx(2.0));

    // summands are at least 1 and at most 1/mu_min
    std::vector<double> mu = {0.9, 0.6, 0.4, 0.2};
    double total = expected_rounds_csb_su(mu, 1);
    CHECK(total >= 3.0);
    CHECK(total <= 3.0 / 0.2);
}

TEST_CASE("expected rounds of the anytime multi-threshold search on instance III") {
    LoadedInstance li = preset_instance("III");
    double expected = 65 / 0.9 + 55 / 0.8 + 30 / 0.42 + 46 / 0.6 + 37 / 0.5 + 20 / 0.2 +
                      7 / 0.1 + 25 / 0.3 + 30 / 0.7 + 80 / 0.98;
    CHECK(expected_rounds_csb_du(li.inst.mu, li.inst.theta, 0.01) == doctest::Approx(expected));
    CHECK_THROWS_AS(expected_rounds_csb_du(li.inst.mu, li.inst.theta, 0.0), std::invalid_argument);
}

TEST_CASE("explicit regret bounds") {
    LoadedInstance li = preset_instance("I");
    double lb = lower_bound_same(li.inst.mu, 30, 1e5);
    double ub = regret_bound_csb_sk(10.65, li.inst.mu, 30, 1e5, 1e-5, 0.1);
    CHECK(lb > 0.0);
    CHECK(lb <= ub); // the upper bound carries the same log-term plus the search cost
    CHECK(regret_bound_csb_su(li.inst.mu, 30, 10.65) ==
          doctest::Approx(expected_rounds_csb_su(li.inst.mu, 30) * 10.65));
}

TEST_CASE("table rows by regime") {
    LoadedInstance li1 = preset_instance("I");
    auto rows1 = table1_report(li1.inst, 1e-5, 0.1, 0.3, 50);
    REQUIRE(rows1.size() == 4); // same-threshold pair + different-threshold pair, no n-row
    CHECK(rows1[0].name == "same-threshold/known");
    CHECK(rows1[0].value == doctest::Approx(rounds_bound_csb_sk(50, 1e-5, 0.1)));
    CHECK(rows1[1].value == doctest::Approx(expected_rounds_csb_su(li1.inst.mu, 30)));

    LoadedInstance li3 = preset_instance("III");
    auto rows3 = table1_report(li3.inst, 1e-5, 0.1, 0.01, 9);
    REQUIRE(rows3.size() == 3); // different-threshold pair + the 1 < n < K row
    CHECK(rows3.back().name == "n-thresholds/known");
    CHECK(rows3.back().value == doctest::Approx(rounds_bound_csb_mk(10, 1e-5, 0.1, 3.0, 0.01, 9, 9)));

    auto rows_nk = table1_report(li3.inst, 1e-5, 0.1, 0.01, 10);
    CHECK(rows_nk.size() == 2); // n = K drops the row, as the table leaves that cell empty

    CHECK(!render_markdown(rows3).empty());
    CHECK(!render_csv(rows3).empty());
}
