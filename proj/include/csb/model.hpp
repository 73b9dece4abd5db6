#pragma once

#include <cmath>
#include <string>
#include <vector>

namespace csb {

// Absolute tolerance for feasibility sums; Q/M style allocations must not
// fail feasibility by float rounding.
inline constexpr double kFeasTol = 1e-9;

namespace detail {
// floor/ceil with a guard against arguments that sit one ulp off an integer.
inline double floor_eps(double x) { return std::floor(x + 1e-9); }
inline double ceil_eps(double x) { return std::ceil(x - 1e-9); }
inline long long ifloor_eps(double x) { return static_cast<long long>(floor_eps(x)); }
inline long long iceil_eps(double x) { return static_cast<long long>(ceil_eps(x)); }
} // namespace detail

enum class Mode { Loss, Reward };

std::string to_string(Mode mode);
Mode mode_from_string(const std::string& s);

// A CSB problem instance P = (mu, theta, Q) plus the loss/reward setting.
// Arms are not assumed ordered by mean.
struct CsbInstance {
    int K = 0;
    double Q = 0.0;
    Mode mode = Mode::Loss;
    std::vector<double> mu;    // mean losses (or rewards), each in [0,1]
    std::vector<double> theta; // per-arm thresholds, each in (0, Q]
};

// Validates invariants and throws std::invalid_argument on violation.
CsbInstance make_instance(std::vector<double> mu, std::vector<double> theta, double Q,
                          Mode mode = Mode::Loss);
CsbInstance make_same_threshold_instance(std::vector<double> mu, double theta_s, double Q,
                                         Mode mode = Mode::Loss);
void validate_instance(const CsbInstance& inst);

// FNV-1a over a canonical text rendering; used to stamp output files.
std::uint64_t instance_hash(const CsbInstance& inst);

struct Allocation {
    std::vector<double> a;
};

bool is_feasible(const CsbInstance& inst, const Allocation& alloc);

struct GapSummary {
    double nabla_max = 0.0;
    double nabla_min = 0.0;              // smallest positive per-round gap
    std::vector<double> nabla_i_min;     // per arm, over observed sets containing it
    int M = 0;                           // arms funded by the optimal allocation
    int k_prime = 0;                     // max arms in any feasible allocation
};

// Candidate set for a same-threshold equivalent: [Q/K, Q/(K-1), ..., Q].
std::vector<double> theta_candidate_set(int K, double Q);

struct SameThresholdEquivalent {
    int M = 0;
    double theta_hat = 0.0;
};

// M = min(floor(Q/theta_s), K), theta_hat = Q/M.
SameThresholdEquivalent same_threshold_equivalent(double theta_s, int K, double Q);

// Expected objective of one allocation: loss mode sums mu_i over uncensored
// arms (a_i < theta_i); reward mode sums mu_i over funded arms (a_i >= theta_i).
double expected_loss(const CsbInstance& inst, const Allocation& alloc);

// Gap between alloc and a caller-supplied optimal allocation; nonnegative in
// both modes when opt is optimal.
double per_round_regret(const CsbInstance& inst, const Allocation& alloc, const Allocation& opt);

// gamma = (Q - sum of thresholds funded by opt) / K.
double residual_gamma(const CsbInstance& inst, const Allocation& opt);

// True iff theta_i <= theta_hat <= ceil(theta_i/gamma)*gamma.
bool in_tolerance_interval(double theta_hat, double theta, double gamma);

// True iff ceil(theta_i/gamma) != ceil(theta_j/gamma).
bool thresholds_differ(double theta_i, double theta_j, double gamma);

// Number of pairwise-different thresholds at tolerance gamma.
int distinct_threshold_count(const CsbInstance& inst, double gamma);

// Optimal expected loss of a same-threshold instance, in closed form: fund
// the top-M arms, incur the sum of the K-M smallest means.
double optimal_loss_same_threshold(const std::vector<double>& mu, double theta_s, double Q);

// Exhaustive check of Definition 1; K <= 20 only.
bool is_allocation_equivalent(const std::vector<double>& theta_hat, const CsbInstance& inst);

// Enumerates funded subsets to produce every gap statistic; K <= 20, with a
// closed-form path for same-threshold instances of any K.
GapSummary gap_summary(const CsbInstance& inst);

} // namespace csb
