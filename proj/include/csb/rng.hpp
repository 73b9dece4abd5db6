#pragma once

#include <cstdint>
#include <random>

namespace csb {

// Deterministic random stream keyed by (seed, stream_id). Streams with the
// same key replay bit-identical draw sequences; distinct stream_ids derived
// from one master seed are statistically independent. A stream is
// single-owner: never share one across concurrent tasks, derive one per
// episode/role instead.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    std::uint64_t next_u64();

    // Uniform on [0,1), 53-bit resolution; consumes one engine draw.
    double next_uniform();

    // Returns 1 with probability p; consumes exactly one uniform draw.
    int sample_bernoulli(double p);

    // Exact Beta(s,f) draw for integer counts s,f >= 1. Output is strictly
    // inside (0,1).
    double sample_beta(long long s, long long f);

    // Gamma(alpha,1) for alpha >= 1 (Marsaglia-Tsang squeeze method).
    double sample_gamma(double alpha);

    // Standard normal via the polar method; draw count varies per call.
    double sample_normal();

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::mt19937_64 engine_;
    double spare_normal_ = 0.0;
    bool has_spare_normal_ = false;
};

RngStream derive_stream(std::uint64_t master_seed, std::uint64_t stream_id);

} // namespace csb
