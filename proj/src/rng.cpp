#include "travelfield/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace tfld {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id) : seed_(seed), stream_id_(stream_id) {
    std::uint64_t sm = seed ^ (stream_id * 0xda942042e4dd58b5ULL) ^ 0x8f1bbcdcbfa53e0bULL;
    for (auto& s : state_) s = splitmix64(sm);
    // xoshiro must not start from the all-zero state.
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
}

std::uint64_t RngStream::next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double RngStream::next_uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

void RngStream::next_normal_pair(double& a, double& b) {
    // u1 in (0,1] so the log is finite.
    const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = next_uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * 3.14159265358979323846 * u2;
    a = r * std::cos(phi);
    b = r * std::sin(phi);
}

double RngStream::next_normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double a, b;
    next_normal_pair(a, b);
    spare_ = b;
    have_spare_ = true;
    return a;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x * 0.7071067811865475244); }

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("normal_quantile: p must be in (0,1)");
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                               1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                               6.680131188771972e+01, -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                               -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                               3.754408661907416e+00};
    const double p_low = 0.02425;
    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    // One Halley refinement against the exact CDF.
    const double e = normal_cdf(x) - p;
    const double u = e * std::sqrt(2.0 * 3.14159265358979323846) * std::exp(0.5 * x * x);
    return x - u / (1.0 + 0.5 * x * u);
}

double wrap_angle(double theta, double mu) {
    const double pi = 3.14159265358979323846;
    const double two_pi = 2.0 * pi;
    double w = theta - two_pi * std::floor((theta - mu + pi) / two_pi);
    // Land on (mu - pi, mu + pi]; points within rounding slack of the open
    // end belong to the closed end.
    const double slack = 16.0 * 2.220446049250313e-16 * (std::abs(theta) + std::abs(mu) + two_pi);
    if (w <= mu - pi + slack) w += two_pi;
    else if (w > mu + pi + slack) w -= two_pi;
    return w;
}

double wrapped_normal_cdf(double theta, double mu, double sigma) {
    if (!(sigma > 0.0)) return wrap_angle(theta, mu) >= mu ? 1.0 : 0.0;
    const double pi = 3.14159265358979323846;
    const double tw = wrap_angle(theta, mu);
    // Sum the unwrapped probability of each 2*pi branch intersected with
    // (mu - pi, tw]; branches beyond ~8 sigma contribute nothing.
    const int kmax = static_cast<int>(std::ceil((8.0 * sigma + pi) / (2.0 * pi))) + 1;
    double acc = 0.0;
    for (int k = -kmax; k <= kmax; ++k) {
        const double shift = 2.0 * pi * k;
        acc += normal_cdf((tw - mu + shift) / sigma) - normal_cdf((-pi + shift) / sigma);
    }
    if (acc < 0.0) acc = 0.0;
    if (acc > 1.0) acc = 1.0;
    return acc;
}

}  // namespace tfld
