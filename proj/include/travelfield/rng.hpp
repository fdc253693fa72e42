// Reproducible random number streams. Same (seed, stream_id) gives the same
// draw sequence on every run and platform (transcendental steps of the normal
// converter are the only libm dependence, covered by the 1e-12 cross-platform
// contract).
#pragma once

#include <cstdint>

namespace tfld {

// xoshiro256++ keyed by splitmix64 expansion of (seed, stream_id).
class RngStream {
public:
    RngStream() : RngStream(0, 0) {}
    RngStream(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    std::uint64_t next_u64();

    // Uniform on [0,1) with 53-bit resolution.
    double next_uniform();

    // Standard normal via Box-Muller; draws are produced in pairs and the
    // spare is cached, so the consumed uniform count is deterministic.
    double next_normal();

    // Normal pair in one call (both members of a Box-Muller pair).
    void next_normal_pair(double& a, double& b);

private:
    std::uint64_t seed_ = 0;
    std::uint64_t stream_id_ = 0;
    std::uint64_t state_[4] = {};
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Standard normal CDF.
double normal_cdf(double x);

// Inverse standard normal CDF (Acklam's rational approximation refined by one
// Halley step; relative error well below 1e-12 over (0,1)).
double normal_quantile(double p);

// CDF of a wrapped normal on the arc (mu - pi, mu + pi]. The argument is
// wrapped onto the same arc first, so F(mu) == 0.5 exactly by symmetry.
double wrapped_normal_cdf(double theta, double mu, double sigma);

// Wrap an angle onto (mu - pi, mu + pi].
double wrap_angle(double theta, double mu = 0.0);

// 95th percentile z-score of the standard normal, used by the planner.
inline constexpr double kZ95 = 1.6448536269514722;

}  // namespace tfld
