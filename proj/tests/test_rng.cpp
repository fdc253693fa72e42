#include "doctest.h"

#include <cmath>
#include <initializer_list>

#include "travelfield/rng.hpp"

using namespace tfld;

TEST_CASE("same (seed, stream) gives identical draws") {
    RngStream a(42, 7), b(42, 7);
    for (int i = 0; i < 100; ++i) CHECK(a.next_normal() == b.next_normal());
}

TEST_CASE("distinct streams decorrelate") {
    RngStream a(42, 0), b(42, 1);
    int same = 0;
    for (int i = 0; i < 64; ++i)
        if (a.next_u64() == b.next_u64()) ++same;
    CHECK(same == 0);
}

TEST_CASE("normal stream moments over 1e6 draws") {
    RngStream rng(123, 0);
    const int n = 1'000'000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = rng.next_normal();
        sum += x;
        sumsq += x * x;
    }
    const double mean = sum / n;
    const double var = sumsq / n - mean * mean;
    CHECK(std::abs(mean) < 0.005);   // 4 sigma/sqrt(n) ~ 0.004
    CHECK(var > 0.994);
    CHECK(var < 1.006);
}

TEST_CASE("uniforms live in [0,1)") {
    RngStream rng(9, 9);
    for (int i = 0; i < 10000; ++i) {
        const double u = rng.next_uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("normal cdf reference points") {
    CHECK(normal_cdf(0.0) == doctest::Approx(0.5));
    CHECK(normal_cdf(1.6448536269514722) == doctest::Approx(0.95).epsilon(1e-9));
    CHECK(normal_cdf(-1.96) == doctest::Approx(0.0249979).epsilon(1e-4));
}

TEST_CASE("wrapped normal cdf: median at mu, full mass over the arc") {
    for (double sigma : {0.2, 0.5, 2.0, 5.0}) {
        for (double mu : {0.0, 1.3, -2.0}) {
            CHECK(wrapped_normal_cdf(mu, mu, sigma) == doctest::Approx(0.5).epsilon(1e-12));
            const double pi = 3.14159265358979323846;
            CHECK(wrapped_normal_cdf(mu + pi, mu, sigma) == doctest::Approx(1.0).epsilon(1e-12));
            // Monotone along the arc.
            double prev = -1.0;
            for (double x = mu - pi + 1e-9; x < mu + pi; x += pi / 7) {
                const double fx = wrapped_normal_cdf(x, mu, sigma);
                CHECK(fx >= prev);
                prev = fx;
            }
        }
    }
}

TEST_CASE("wrapped normal cdf against a Monte-Carlo oracle") {
    // F(theta) = P(wrap(N(mu, sigma^2)) <= theta) estimated from 2e5 draws.
    const double mu = 0.7, sigma = 5.0;
    RngStream rng(2024, 3);
    const int n = 200'000;
    const double probe = mu + 1.0;
    int below = 0;
    for (int i = 0; i < n; ++i) {
        const double theta = wrap_angle(mu + sigma * rng.next_normal(), mu);
        if (theta <= probe) ++below;
    }
    const double mc = static_cast<double>(below) / n;
    const double se = std::sqrt(mc * (1.0 - mc) / n);
    CHECK(std::abs(wrapped_normal_cdf(probe, mu, sigma) - mc) < 4.0 * se + 1e-4);
}

TEST_CASE("wrap_angle lands on (mu-pi, mu+pi]") {
    const double pi = 3.14159265358979323846;
    for (double x : {-9.0, -3.2, 0.0, 3.2, 12.7, 100.0}) {
        const double w = wrap_angle(x, 0.4);
        CHECK(w > 0.4 - pi - 1e-12);
        CHECK(w <= 0.4 + pi + 1e-12);
        CHECK(std::abs(std::remainder(w - x, 2 * pi)) < 1e-12);
    }
}
