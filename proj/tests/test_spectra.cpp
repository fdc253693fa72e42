#include "doctest.h"

#include <cmath>

#include "travelfield/rng.hpp"
#include "travelfield/spectrum.hpp"

using namespace tfld;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("power-law spatial spectrum values") {
    const SpectrumSpec spec = SpectrumSpec::power_law(5.0);
    CHECK(eval_spatial(spec, {kPi, 0.0}) == doctest::Approx(std::pow(kPi, -5.0)).epsilon(1e-14));
    CHECK(eval_spatial(spec, {0.0, 0.0}) == 0.0);  // DC clamp

    const SpectrumSpec quad = SpectrumSpec::power_law(2.0);
    CHECK(eval_spatial(quad, {3.0, 4.0}) == doctest::Approx(1.0 / 25.0).epsilon(1e-14));
}

TEST_CASE("compact exponential spectrum matches the closed-form Hankel transform") {
    // For h0 >> rho the truncated transform approaches
    // (1/2pi) * rho^2 / (1 + (k rho)^2)^{3/2}.
    const double rho = 2.0;
    const SpectrumSpec spec = SpectrumSpec::compact("exponential", rho, 40.0);
    for (double k : {0.0, 0.3, 1.0, 2.5}) {
        const double expected = rho * rho / std::pow(1.0 + k * rho * k * rho, 1.5) / (2.0 * kPi);
        CHECK(eval_spatial(spec, {k, 0.0}) == doctest::Approx(expected).epsilon(1e-6));
    }
}

TEST_CASE("compact spectra are nonnegative and finite on grid frequencies") {
    for (const char* base : {"exponential", "gaussian", "wendland_c2"}) {
        const SpectrumSpec spec = SpectrumSpec::compact(base, 3.0, 9.0);
        const auto freqs = dft_frequencies(16);
        for (double k1 : freqs) {
            for (double k2 : freqs) {
                const double s = eval_spatial(spec, {k1, k2});
                CHECK(s >= 0.0);
                CHECK(std::isfinite(s));
            }
        }
    }
}

TEST_CASE("space-time spectra at hand-computed points") {
    const SpatialSpectrum pl5 = SpatialSpectrum::power_law(5.0);
    const Vec2 v{10.0, 0.0};

    const SpectrumSpec damped = SpectrumSpec::damped(pl5, v, 2.0, 1.0);
    const double sxx = eval_spatial(pl5, {0.1, 0.0});
    // On the line omega = -k.v the damped factor is (0 + h^2)^-delta = 1.
    CHECK(eval_spacetime(damped, {0.1, 0.0}, -1.0) == doctest::Approx(sxx).epsilon(1e-12));

    const SpectrumSpec orient = SpectrumSpec::orient_persistent(pl5, v, 2.0);
    CHECK(eval_spacetime(orient, {0.1, 0.0}, 1.0) == doctest::Approx(sxx / 16.0).epsilon(1e-12));

    const SpectrumSpec freq = SpectrumSpec::freq_damped(pl5, v, 2.0, 1.0);
    const double sxx2 = eval_spatial(pl5, {0.0, 0.2});
    CHECK(eval_spacetime(freq, {0.0, 0.2}, 0.5) == doctest::Approx(sxx2 * 4.0).epsilon(1e-12));
}

TEST_CASE("frozen delta has no pointwise value but a line descriptor") {
    const SpectrumSpec spec = SpectrumSpec::frozen_delta(SpatialSpectrum::power_law(5.0), {10.0, 0.0});
    CHECK_THROWS_AS(eval_spacetime(spec, {0.1, 0.0}, 0.0), std::invalid_argument);
    const DeltaLine line = delta_line(spec, {0.1, 0.2});
    CHECK(line.support_omega == doctest::Approx(-1.0));
    CHECK(line.mass == doctest::Approx(eval_spatial(spec.spatial, {0.1, 0.2})));
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(SpectrumSpec::power_law(0.0), ConfigError);
    CHECK_THROWS_AS(SpectrumSpec::compact("exponential", 1.0, 0.0), ConfigError);
    CHECK_THROWS_AS(SpectrumSpec::compact("unknown", 1.0, 1.0), ConfigError);
    CHECK_THROWS_AS(SpectrumSpec::damped(SpatialSpectrum::power_law(2.0), {0, 0}, 0.0, 1.0), ConfigError);
    CHECK_THROWS_AS(SpectrumSpec::damped(SpatialSpectrum::power_law(2.0), {0, 0}, 1.0, 0.0), ConfigError);

    // The paper defines delta in (0, 1/2) but simulates at delta = 2.
    CHECK(SpectrumSpec::damped(SpatialSpectrum::power_law(2.0), {0, 0}, 2.0, 1.0)
              .delta_outside_definition_range());
    CHECK_FALSE(SpectrumSpec::damped(SpatialSpectrum::power_law(2.0), {0, 0}, 0.3, 1.0)
                    .delta_outside_definition_range());
}

TEST_CASE("frequency ladder is antisymmetric bitwise") {
    for (int n : {4, 5, 8, 9, 16}) {
        const auto f = dft_frequencies(n);
        for (int j = 0; j < n; ++j) {
            const int m = mirror_index(j, n);
            if (j == m) continue;
            if (2 * j == n) continue;  // Nyquist self-pairs modulo 2 pi
            CHECK(f[m] == -f[j]);
        }
    }
}

TEST_CASE("discretized spectra are Hermitian-symmetric bitwise") {
    const FreqGrid3 grid(8, 6, 8);
    const SpatialSpectrum pl = SpatialSpectrum::power_law(3.0);
    for (const SpectrumSpec& spec :
         {SpectrumSpec::orient_persistent(pl, {2.0, -1.0}, 1.5),
          SpectrumSpec::damped(pl, {2.0, -1.0}, 2.0, 0.7),
          SpectrumSpec::freq_damped(pl, {2.0, -1.0}, 2.0, 1.3),
          SpectrumSpec::frozen_delta(pl, {1.0, 0.0})}) {
        const std::vector<double> S = discretize_spectrum(spec, grid);
        for (int t = 0; t < grid.nt; ++t)
            for (int i = 0; i < grid.n1; ++i)
                for (int j = 0; j < grid.n2; ++j) {
                    const double a = S[grid.index(t, i, j)];
                    const double b = S[grid.index(mirror_index(t, grid.nt), mirror_index(i, grid.n1),
                                                  mirror_index(j, grid.n2))];
                    CHECK(a == b);
                    CHECK(a >= 0.0);
                    CHECK(std::isfinite(a));
                }
    }
}

TEST_CASE("frozen delta with zero velocity concentrates on the omega=0 plane") {
    const FreqGrid3 grid(8, 8, 8);
    const SpectrumSpec spec = SpectrumSpec::frozen_delta(SpatialSpectrum::power_law(3.0), {0.0, 0.0});
    const std::vector<double> S = discretize_spectrum(spec, grid);
    for (int t = 1; t < grid.nt; ++t)
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 8; ++j) CHECK(S[grid.index(t, i, j)] == 0.0);
}

TEST_CASE("orientationally persistent maximum sits on the clamped line") {
    const FreqGrid3 grid(16, 16, 16);
    const SpectrumSpec spec =
        SpectrumSpec::orient_persistent(SpatialSpectrum::power_law(5.0), {10.0, 0.0}, 2.0);
    const std::vector<double> S = discretize_spectrum(spec, grid);

    // Exhaustive scan: the max bin must be among the bins minimizing
    // |omega + k.v| within its spatial column.
    std::size_t argmax = 0;
    for (std::size_t b = 1; b < S.size(); ++b)
        if (S[b] > S[argmax]) argmax = b;
    const int tmax = static_cast<int>(argmax) / (16 * 16);
    const int imax = (static_cast<int>(argmax) / 16) % 16;
    const int jmax = static_cast<int>(argmax) % 16;
    double best_line = 1e300;
    int best_t = -1;
    for (int t = 0; t < 16; ++t) {
        const double line = std::abs(grid.omega[t] + grid.k1[imax] * 10.0);
        if (line < best_line) {
            best_line = line;
            best_t = t;
        }
    }
    const double line_at_max = std::abs(grid.omega[tmax] + grid.k1[imax] * 10.0);
    CHECK(line_at_max == doctest::Approx(std::abs(grid.omega[best_t] + grid.k1[imax] * 10.0)));
    CHECK(jmax >= 0);
}

TEST_CASE("damped spectrum decreases pointwise in h") {
    const FreqGrid3 grid(8, 8, 8);
    const SpatialSpectrum pl = SpatialSpectrum::power_law(4.0);
    const std::vector<double> s1 =
        discretize_spectrum(SpectrumSpec::damped(pl, {3.0, 1.0}, 1.7, 0.5), grid);
    const std::vector<double> s2 =
        discretize_spectrum(SpectrumSpec::damped(pl, {3.0, 1.0}, 1.7, 1.5), grid);
    for (std::size_t b = 0; b < s1.size(); ++b) {
        if (s1[b] == 0.0) CHECK(s2[b] == 0.0);
        else CHECK(s2[b] < s1[b]);
    }
}

TEST_CASE("damped converges to orientationally persistent as h -> 0, off the line") {
    const FreqGrid3 grid(16, 16, 16);
    const SpectrumSpec orient =
        SpectrumSpec::orient_persistent(SpatialSpectrum::power_law(5.0), {10.0, 0.0}, 2.0);
    const SpectrumSpec damped =
        SpectrumSpec::damped(SpatialSpectrum::power_law(5.0), {10.0, 0.0}, 2.0, 1e-6);
    const std::vector<double> so = discretize_spectrum(orient, grid);
    const std::vector<double> sd = discretize_spectrum(damped, grid);
    const double eps = grid.eps_line();
    for (int t = 0; t < 16; ++t)
        for (int i = 0; i < 16; ++i)
            for (int j = 0; j < 16; ++j) {
                const double line = std::abs(grid.omega[t] + grid.k1[i] * 10.0);
                if (line <= eps) continue;
                const std::size_t b = grid.index(t, i, j);
                if (so[b] == 0.0) continue;
                CHECK(sd[b] == doctest::Approx(so[b]).epsilon(1e-4));
            }
}

TEST_CASE("frequency-dependent damping is bounded off omega = 0") {
    const FreqGrid3 grid(8, 8, 8);
    const SpectrumSpec spec =
        SpectrumSpec::freq_damped(SpatialSpectrum::compact("exponential", 2.0, 8.0), {1.0, 0.0}, 2.0, 1.0);
    const std::vector<double> S = discretize_spectrum(spec, grid);
    for (int t = 0; t < 8; ++t) {
        if (grid.omega[t] == 0.0) continue;
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 8; ++j) CHECK(std::isfinite(S[grid.index(t, i, j)]));
    }
}

TEST_CASE("flat spectrum inverts to a unit delta at lag zero") {
    const FreqGrid3 grid(8, 8, 4);
    const std::vector<double> S(grid.size(), 1.0);
    const std::vector<double> c = covariance_from_spectrum(S, grid);
    CHECK(c[grid.index(0, 0, 0)] == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t b = 1; b < c.size(); ++b) CHECK(std::abs(c[b]) < 1e-12);
}

TEST_CASE("frozen-delta covariance concentrates on the wrap line h = (tau, 0)") {
    // Hand-built delta line with a flat spatial factor: for v = (1, 0) the
    // line omega = -k1 passes exactly through bin mirror(i), so
    // c(h, tau) = delta((h1 - tau) mod 8) * delta(h2).
    const FreqGrid3 grid(8, 8, 8);
    std::vector<double> S(grid.size(), 0.0);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) S[grid.index(mirror_index(i, 8), i, j)] = 1.0;
    const std::vector<double> c = covariance_from_spectrum(S, grid);
    const double c00 = c[grid.index(0, 0, 0)];
    CHECK(c00 == doctest::Approx(0.125).epsilon(1e-12));
    for (int tau = 0; tau < 8; ++tau)
        for (int h1 = 0; h1 < 8; ++h1)
            for (int h2 = 0; h2 < 8; ++h2) {
                const double val = c[grid.index(tau, h1, h2)];
                if (h1 == tau && h2 == 0) CHECK(val == doctest::Approx(c00).epsilon(1e-9));
                else CHECK(std::abs(val) < 1e-9 * c00);
            }

    // The discretized FrozenDelta spec has the same support structure: one
    // nonzero bin per spatial column, on the aliased line.
    const SpectrumSpec spec =
        SpectrumSpec::frozen_delta(SpatialSpectrum::compact("exponential", 1.0, 0.5), {1.0, 0.0});
    const std::vector<double> Sd = discretize_spectrum(spec, grid);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j)
            for (int t = 0; t < 8; ++t) {
                const double val = Sd[grid.index(t, i, j)];
                if (t == mirror_index(i, 8)) CHECK(val > 0.0);
                else CHECK(val == 0.0);
            }
}

TEST_CASE("c(0,0) equals the mean of the spectrum") {
    const FreqGrid3 grid(8, 8, 8);
    const SpectrumSpec spec =
        SpectrumSpec::damped(SpatialSpectrum::power_law(4.0), {2.0, 0.0}, 1.0, 1.0);
    const std::vector<double> S = discretize_spectrum(spec, grid);
    double mean = 0.0;
    for (double s : S) mean += s;
    mean /= static_cast<double>(S.size());
    const std::vector<double> c = covariance_from_spectrum(S, grid);
    CHECK(c[0] == doctest::Approx(mean).epsilon(1e-12));
}

TEST_CASE("symmetry violations are rejected") {
    const FreqGrid3 grid(8, 8, 4);
    std::vector<double> S(grid.size(), 1.0);
    S[grid.index(1, 2, 3)] += 0.5;  // breaks the Hermitian pairing
    CHECK_THROWS_AS(covariance_from_spectrum(S, grid), std::runtime_error);
}
