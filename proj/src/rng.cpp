#include "csb/rng.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace csb {

namespace {

// splitmix64; used to spread (seed, stream_id) into a well-mixed engine seed.
std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
    std::uint64_t s = mix64(mix64(seed) ^ mix64(stream_id * 0xda942042e4dd58b5ULL + 1));
    engine_.seed(s);
}

RngStream derive_stream(std::uint64_t master_seed, std::uint64_t stream_id) {
    return RngStream(master_seed, stream_id);
}

std::uint64_t RngStream::next_u64() { return engine_(); }

double RngStream::next_uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

int RngStream::sample_bernoulli(double p) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("sample_bernoulli: p outside [0,1]");
    return next_uniform() < p ? 1 : 0;
}

double RngStream::sample_normal() {
    if (has_spare_normal_) {
        has_spare_normal_ = false;
        return spare_normal_;
    }
    // Marsaglia polar method.
    for (;;) {
        double u = 2.0 * next_uniform() - 1.0;
        double v = 2.0 * next_uniform() - 1.0;
        double s = u * u + v * v;
        if (s > 0.0 && s < 1.0) {
            double m = std::sqrt(-2.0 * std::log(s) / s);
            spare_normal_ = v * m;
            has_spare_normal_ = true;
            return u * m;
        }
    }
}

double RngStream::sample_gamma(double alpha) {
    if (!(alpha >= 1.0))
        throw std::invalid_argument("sample_gamma: alpha must be >= 1");
    const double d = alpha - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = sample_normal();
        double t = 1.0 + c * x;
        if (t <= 0.0)
            continue;
        double v = t * t * t;
        double u = next_uniform();
        double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2)
            return d * v;
        if (u > 0.0 && std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v)))
            return d * v;
    }
}

double RngStream::sample_beta(long long s, long long f) {
    if (s < 1 || f < 1)
        throw std::invalid_argument("sample_beta: counts must be >= 1");
    double a = sample_gamma(static_cast<double>(s));
    double b = sample_gamma(static_cast<double>(f));
    double r = a / (a + b);
    // Keep draws strictly inside (0,1); exact endpoints would break
    // deterministic top-k ranking downstream.
    const double lo = std::numeric_limits<double>::min();
    const double hi = 1.0 - std::numeric_limits<double>::epsilon() / 2;
    if (!(r > lo))
        r = lo;
    if (r > hi)
        r = hi;
    return r;
}

} // namespace csb
