#pragma once

#include <string>
#include <vector>

#include "csb/model.hpp"

namespace csb {

// KL divergence between Bernoulli(p) and Bernoulli(q), with 0*log 0 = 0.
// q in {0,1} is rejected unless p == q.
double kl_bernoulli(double p, double q);

// Asymptotic regret lower bound for the same-threshold case: the log(T)
// coefficient summed over the top-M arms. mu must be sorted descending with
// mu_M > mu_{M+1}.
double lower_bound_same(const std::vector<double>& mu_sorted, int M, double T);

// High-probability round counts for the threshold-estimation phases.
double rounds_bound_csb_sk(int K, double delta, double epsilon);
double rounds_bound_csb_mk(int K, double delta, double epsilon, double Q, double gamma, int n,
                           int a_theta_n_size);

// Expected rounds for the anytime searches.
double expected_rounds_csb_su(const std::vector<double>& mu_sorted, int M);
double expected_rounds_csb_du(const std::vector<double>& mu, const std::vector<double>& theta,
                              double gamma);

// Explicit closed-form parts of the regret upper bounds. Asymptotic
// remainders carry no stated constants and are reported symbolically via
// BoundReport, never folded into the value.
double regret_bound_csb_sk(double nabla_max, const std::vector<double>& mu_sorted, int M, double T,
                           double delta, double epsilon);
double regret_bound_csb_su(const std::vector<double>& mu_sorted, int M, double nabla_max);

struct BoundReport {
    std::string name;
    double value = 0.0;
    std::string inputs;
    std::string remainder; // unscaled asymptotic term, if the bound has one
};

// The round-count comparison table rows evaluated on one instance. The
// known-parameters row for 1 < n < K appears only in that regime.
std::vector<BoundReport> table1_report(const CsbInstance& inst, double delta, double epsilon,
                                       double gamma, int n);

std::string render_markdown(const std::vector<BoundReport>& rows);
std::string render_csv(const std::vector<BoundReport>& rows);

} // namespace csb
