#include "csb/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace csb {

namespace {

void check_prob_open(double x, const char* who) {
    if (!(x > 0.0 && x < 1.0))
        throw std::invalid_argument(std::string(who) + ": parameter must lie in (0,1)");
}

void require_sorted_desc(const std::vector<double>& mu, const char* who) {
    for (size_t i = 1; i < mu.size(); ++i)
        if (mu[i] > mu[i - 1] + 1e-15)
            throw std::invalid_argument(std::string(who) + ": mu must be sorted descending");
}

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

} // namespace

double kl_bernoulli(double p, double q) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("kl_bernoulli: p outside [0,1]");
    if (!(q >= 0.0 && q <= 1.0))
        throw std::invalid_argument("kl_bernoulli: q outside [0,1]");
    if (p == q)
        return 0.0;
    if (q <= 0.0 || q >= 1.0)
        throw std::invalid_argument("kl_bernoulli: divergence undefined for q in {0,1} with p != q");
    double d = 0.0;
    if (p > 0.0)
        d += p * std::log(p / q);
    if (p < 1.0)
        d += (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
    return d;
}

double lower_bound_same(const std::vector<double>& mu_sorted, int M, double T) {
    require_sorted_desc(mu_sorted, "lower_bound_same");
    int K = static_cast<int>(mu_sorted.size());
    if (M < 0 || M > K)
        throw std::invalid_argument("lower_bound_same: M out of range");
    if (!(T > 0.0))
        throw std::invalid_argument("lower_bound_same: T must be positive");
    if (M == 0 || M == K)
        return 0.0;
    if (!(mu_sorted[M - 1] > mu_sorted[M]))
        throw std::invalid_argument("lower_bound_same: tie at the M boundary");
    double sum = 0.0;
    for (int i = 0; i < M; ++i) {
        double gap = mu_sorted[i] - mu_sorted[M];
        if (gap <= 0.0)
            continue;
        sum += gap / kl_bernoulli(mu_sorted[M], mu_sorted[i]);
    }
    return std::log(T) * sum;
}

double rounds_bound_csb_sk(int K, double delta, double epsilon) {
    if (K < 2)
        throw std::invalid_argument("rounds_bound_csb_sk: K must be >= 2");
    check_prob_open(delta, "rounds_bound_csb_sk");
    check_prob_open(epsilon, "rounds_bound_csb_sk");
    double lg = std::log2(static_cast<double>(K));
    double w = std::log(lg / delta) / std::log(1.0 / (1.0 - epsilon));
    return w * lg;
}

double rounds_bound_csb_mk(int K, double delta, double epsilon, double Q, double gamma, int n,
                           int a_theta_n_size) {
    if (K < 1)
        throw std::invalid_argument("rounds_bound_csb_mk: K must be >= 1");
    check_prob_open(delta, "rounds_bound_csb_mk");
    check_prob_open(epsilon, "rounds_bound_csb_mk");
    if (!(Q > 0.0) || !(gamma > 0.0))
        throw std::invalid_argument("rounds_bound_csb_mk: Q and gamma must be positive");
    if (n < 1 || n > K || a_theta_n_size < 0 || a_theta_n_size > K)
        throw std::invalid_argument("rounds_bound_csb_mk: n out of range");
    double cells = detail::ceil_eps(1.0 + Q / gamma);
    double w = std::log(static_cast<double>(K) * std::log2(cells) / delta) /
               std::log(1.0 / (1.0 - epsilon));
    return w * (static_cast<double>(a_theta_n_size) * std::log2(cells) +
                static_cast<double>(K) * std::log2(static_cast<double>(n) + 1.0));
}

double expected_rounds_csb_su(const std::vector<double>& mu_sorted, int M) {
    require_sorted_desc(mu_sorted, "expected_rounds_csb_su");
    int K = static_cast<int>(mu_sorted.size());
    if (M < 0 || M > K)
        throw std::invalid_argument("expected_rounds_csb_su: M out of range");
    double total = 0.0;
    for (int L = M + 1; L <= K; ++L) {
        // Product over the bottom-L arms: the slowest set to show a loss.
        double prod = 1.0;
        for (int i = K - L; i < K; ++i)
            prod *= 1.0 - mu_sorted[i];
        if (prod >= 1.0)
            throw std::invalid_argument("expected_rounds_csb_su: all-zero means never observe a loss");
        total += 1.0 / (1.0 - prod);
    }
    return total;
}

double expected_rounds_csb_du(const std::vector<double>& mu, const std::vector<double>& theta,
                              double gamma) {
    if (mu.size() != theta.size())
        throw std::invalid_argument("expected_rounds_csb_du: mu/theta size mismatch");
    if (!(gamma > 0.0))
        throw std::invalid_argument("expected_rounds_csb_du: gamma must be positive");
    double total = 0.0;
    for (size_t i = 0; i < mu.size(); ++i) {
        if (mu[i] == 0.0)
            continue;
        total += static_cast<double>(detail::ifloor_eps(theta[i] / gamma)) / mu[i];
    }
    return total;
}

double regret_bound_csb_sk(double nabla_max, const std::vector<double>& mu_sorted, int M, double T,
                           double delta, double epsilon) {
    require_sorted_desc(mu_sorted, "regret_bound_csb_sk");
    int K = static_cast<int>(mu_sorted.size());
    if (M < 1 || M >= K)
        throw std::invalid_argument("regret_bound_csb_sk: M out of range");
    if (!(mu_sorted[M - 1] > mu_sorted[M]))
        throw std::invalid_argument("regret_bound_csb_sk: tie at the M boundary");
    double lg = std::log2(static_cast<double>(K));
    double w = std::log(lg / delta) / std::log(1.0 / (1.0 - epsilon));
    double est = w * lg * nabla_max;
    double post = 0.0;
    for (int i = 0; i < M; ++i) {
        double gap = mu_sorted[i] - mu_sorted[M];
        if (gap <= 0.0)
            continue;
        post += gap * std::log(T) / kl_bernoulli(mu_sorted[M], mu_sorted[i]);
    }
    return est + post;
}

double regret_bound_csb_su(const std::vector<double>& mu_sorted, int M, double nabla_max) {
    return expected_rounds_csb_su(mu_sorted, M) * nabla_max;
}

std::vector<BoundReport> table1_report(const CsbInstance& inst, double delta, double epsilon,
                                       double gamma, int n) {
    std::vector<BoundReport> rows;
    std::string common = "K=" + fmt(inst.K) + " Q=" + fmt(inst.Q) + " delta=" + fmt(delta) +
                         " epsilon=" + fmt(epsilon);

    bool same_theta = std::all_of(inst.theta.begin(), inst.theta.end(),
                                  [&](double t) { return t == inst.theta[0]; });
    std::vector<double> sorted = inst.mu;
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());

    if (same_theta && inst.K >= 2) {
        auto eq = same_threshold_equivalent(inst.theta[0], inst.K, inst.Q);
        rows.push_back({"same-threshold/known",
                        rounds_bound_csb_sk(inst.K, delta, epsilon),
                        common + " theta_s=" + fmt(inst.theta[0]),
                        ""});
        rows.push_back({"same-threshold/anytime",
                        expected_rounds_csb_su(sorted, eq.M),
                        common + " M=" + fmt(eq.M),
                        ""});
    }

    double cells = detail::ceil_eps(1.0 + inst.Q / gamma);
    double w_multi = std::log(static_cast<double>(inst.K) * std::log2(cells) / delta) /
                     std::log(1.0 / (1.0 - epsilon));
    rows.push_back({"different-threshold/known",
                    static_cast<double>(inst.K) * w_multi * std::log2(cells),
                    common + " gamma=" + fmt(gamma),
                    ""});
    rows.push_back({"different-threshold/anytime",
                    expected_rounds_csb_du(inst.mu, inst.theta, gamma),
                    common + " gamma=" + fmt(gamma),
                    ""});
    if (n > 1 && n < inst.K) {
        rows.push_back({"n-thresholds/known",
                        rounds_bound_csb_mk(inst.K, delta, epsilon, inst.Q, gamma, n, n),
                        common + " gamma=" + fmt(gamma) + " n=" + fmt(n),
                        ""});
    }
    return rows;
}

std::string render_markdown(const std::vector<BoundReport>& rows) {
    std::string out = "| bound | rounds | inputs |\n|---|---|---|\n";
    for (const auto& r : rows) {
        out += "| " + r.name + " | " + fmt(r.value);
        if (!r.remainder.empty())
            out += " (+ " + r.remainder + ")";
        out += " | " + r.inputs + " |\n";
    }
    return out;
}

std::string render_csv(const std::vector<BoundReport>& rows) {
    std::string out = "bound,rounds,inputs\n";
    for (const auto& r : rows) {
        std::string v = fmt(r.value);
        if (!r.remainder.empty())
            v += " (+ " + r.remainder + ")";
        out += r.name + "," + v + ",\"" + r.inputs + "\"\n";
    }
    return out;
}

} // namespace csb
