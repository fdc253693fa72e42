// Wall-time comparison of the simulation methods: extended-grid window shift,
// direct 3-D spectral synthesis, and the tiny-grid Cholesky oracle. The paper
// reports asymptotic orders only, so the harness measures medians and fits
// log-log slopes.
//
// Benchmark models: window_shift runs a frozen field v=(1,0) over a
// power-law(5) base; spectral3d runs Damped{alpha=5, delta=2, h=1, v=(1,0)}
// on (n, n, T+1); cholesky draws from the truncated-exponential space-time
// covariance. peak_bytes is the accounted dominant working set (buffers the
// method must hold), not a sampled RSS.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace tfld {

struct BenchResult {
    enum class Method { WindowShift, Spectral3D, Cholesky };
    Method method = Method::WindowShift;
    int n = 0;
    int T = 0;
    double wall_time_s = 0.0;  // median over repeats (one warmup discarded)
    std::size_t peak_bytes = 0;
    int repeats = 0;
};

class BenchTimeout : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string bench_method_name(BenchResult::Method m);
BenchResult::Method bench_method_from_name(const std::string& name);

// Runs one (method, n, T) cell: a warmup plus `repeats` timed runs. Throws
// BenchTimeout when a single run exceeds time_budget_s, and
// std::invalid_argument when the size is infeasible (cholesky beyond 4096
// space-time points).
BenchResult run_bench(BenchResult::Method method, int n, int T, int repeats, double time_budget_s);

// Least-squares slope of log(y) against log(x).
double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace tfld
