#include "travelfield/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "travelfield/diagnostics.hpp"
#include "travelfield/generators.hpp"
#include "travelfield/simulate.hpp"
#include "travelfield/velocity.hpp"

namespace tfld {

std::string bench_method_name(BenchResult::Method m) {
    switch (m) {
        case BenchResult::Method::WindowShift: return "window_shift";
        case BenchResult::Method::Spectral3D: return "spectral3d";
        default: return "cholesky";
    }
}

BenchResult::Method bench_method_from_name(const std::string& name) {
    if (name == "window_shift") return BenchResult::Method::WindowShift;
    if (name == "spectral3d") return BenchResult::Method::Spectral3D;
    if (name == "cholesky") return BenchResult::Method::Cholesky;
    throw std::invalid_argument("unknown bench method '" + name + "'");
}

namespace {

void run_window_shift(int n, int T, std::uint64_t rep) {
    RngStream rng(0xBE5C0001, rep);
    const VelocitySpec vel = VelocitySpec::constant({1.0, 0.0});
    const PlanReport plan = plan_extended_grid(n, T, vel);
    const Grid2D out_grid(n, n);
    const Grid2D ext = extended_grid_for(out_grid, plan);
    auto [big, report] = simulate_spatial_circulant(SpectrumSpec::power_law(5.0), ext, rng);
    const SpaceTimeField z = frozen_field(big, out_grid, T, {1.0, 0.0});
    (void)z;
}

void run_spectral3d(int n, int T, std::uint64_t rep) {
    RngStream rng(0xBE5C0002, rep);
    const SpectrumSpec spec =
        SpectrumSpec::damped(SpatialSpectrum::power_law(5.0), {1.0, 0.0}, 2.0, 1.0);
    const FreqGrid3 freq(n, n, T + 1);
    const SpaceTimeField z = simulate_spacetime_spectral(spec, freq, rng);
    (void)z;
}

void run_cholesky(int n, int T, std::uint64_t rep) {
    RngStream rng(0xBE5C0003, rep);
    const CovarianceFn cov = SpatialSpectrum::compact("exponential", 1.5, 1e6).covariance_fn();
    const SpaceTimeField z = cholesky_oracle(cov, Grid2D(n, n), T, {1.0, 0.0}, rng);
    (void)z;
}

std::size_t accounted_bytes(BenchResult::Method method, int n, int T) {
    const std::size_t n2 = static_cast<std::size_t>(n) * n;
    const std::size_t frames = n2 * static_cast<std::size_t>(T + 1) * sizeof(double);
    switch (method) {
        case BenchResult::Method::WindowShift: {
            const PlanReport plan = plan_extended_grid(n, T, VelocitySpec::constant({1.0, 0.0}));
            const std::size_t m2 =
                4 * static_cast<std::size_t>(plan.n_required) * static_cast<std::size_t>(plan.n_required);
            // covariance row (real) + synthesis buffer (complex) + amplitudes + big field + frames
            return m2 * (sizeof(double) * 2 + 16) + m2 / 4 * sizeof(double) + frames;
        }
        case BenchResult::Method::Spectral3D: {
            const std::size_t bins = n2 * static_cast<std::size_t>(T + 1);
            // spectrum + amplitudes (real) + synthesis buffer (complex) + frames
            return bins * (sizeof(double) * 2 + 16) + frames;
        }
        default: {
            const std::size_t pts = n2 * static_cast<std::size_t>(T + 1);
            return pts * pts * sizeof(double) + pts * 2 * sizeof(double) + frames;
        }
    }
}

}  // namespace

BenchResult run_bench(BenchResult::Method method, int n, int T, int repeats, double time_budget_s) {
    if (repeats < 3) throw std::invalid_argument("bench: repeats must be >= 3");
    if (method == BenchResult::Method::Cholesky &&
        static_cast<long long>(n) * n * (T + 1) > 4096)
        throw std::invalid_argument("bench: cholesky is capped at 4096 space-time points");

    auto run_once = [&](std::uint64_t rep) {
        const auto start = std::chrono::steady_clock::now();
        switch (method) {
            case BenchResult::Method::WindowShift: run_window_shift(n, T, rep); break;
            case BenchResult::Method::Spectral3D: run_spectral3d(n, T, rep); break;
            default: run_cholesky(n, T, rep); break;
        }
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
        if (elapsed.count() > time_budget_s)
            throw BenchTimeout(bench_method_name(method) + " exceeded the per-run time budget at n=" +
                               std::to_string(n));
        return elapsed.count();
    };

    run_once(0);  // warmup, discarded
    std::vector<double> times(repeats);
    for (int r = 0; r < repeats; ++r) times[r] = run_once(static_cast<std::uint64_t>(r) + 1);
    std::sort(times.begin(), times.end());
    const double median = repeats % 2 ? times[repeats / 2]
                                      : 0.5 * (times[repeats / 2 - 1] + times[repeats / 2]);

    BenchResult result;
    result.method = method;
    result.n = n;
    result.T = T;
    result.wall_time_s = median;
    result.peak_bytes = accounted_bytes(method, n, T);
    result.repeats = repeats;
    return result;
}

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_loglog_slope: need matching arrays of >= 2 points");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace tfld
