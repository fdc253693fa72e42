// Acceptance suite: one binary, one pass/fail line per criterion, nonzero
// exit if any criterion fails. Tolerances are pinned in code next to each
// check.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "travelfield/bench.hpp"
#include "travelfield/checks.hpp"
#include "travelfield/diagnostics.hpp"
#include "travelfield/generators.hpp"
#include "travelfield/scenario.hpp"
#include "travelfield/simulate.hpp"

using namespace tfld;

namespace {

struct Criterion {
    const char* id;
    const char* title;
    std::function<std::string()> run;  // empty string = pass, else failure detail
};

double now_s() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

std::string fail(const char* fmt, double a, double b) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), fmt, a, b);
    return buf;
}

// ---- C1: frozen-field exactness on the fig2 preset --------------------------

std::string c1_frozen_exactness() {
    const double start = now_s();
    const RunResult run = run_scenario(make_preset("fig2"));
    const SpaceTimeField& z = run.field;
    for (int t = 1; t <= 8; ++t) {
        const int shift = 10 * t;
        for (int i = shift; i < z.grid.n1; ++i)
            for (int j = 0; j < z.grid.n2; ++j)
                if (z.at(t, i, j) != z.at(0, i - shift, j))
                    return "frame " + std::to_string(t) + " is not a bitwise shift of frame 0";
    }
    const double elapsed = now_s() - start;
    if (elapsed >= 5.0) return fail("runtime %.2f s exceeds %.0f s", elapsed, 5.0);
    return {};
}

// ---- C2/C3: second-order structure and Taylor's hypothesis ------------------

std::string c2_second_order() {
    const double start = now_s();
    const CheckVerdict v = check_cov_match(make_preset("frozen_mc"), 300);
    if (!v.pass)
        return fail("only %.1f%% of lag cells within 3 SE (need %.0f%%)", 100.0 * v.statistic, 95.0);
    const double elapsed = now_s() - start;
    if (elapsed >= 120.0) return fail("runtime %.1f s exceeds %.0f s", elapsed, 120.0);
    return {};
}

std::string c3_taylor() {
    const CheckVerdict v = check_taylor(make_preset("frozen_mc"), 300);
    if (!v.pass) return fail("worst deviation %.2f SE exceeds %.0f SE", v.statistic, 3.0);
    return {};
}

// ---- C4: spectral fidelity ---------------------------------------------------

std::string c4_spectral_fidelity() {
    const double start = now_s();
    ScenarioConfig cfg;
    cfg.name = "damped_fidelity";
    cfg.grid = Grid2D(32, 32);
    cfg.epochs = 15;  // (32, 32, 16) bins
    cfg.seed = 424242;
    cfg.method = ScenarioConfig::Method::Spectral3D;
    cfg.spectrum = SpectrumSpec::damped(SpatialSpectrum::power_law(5.0), {10.0, 0.0}, 2.0, 1.0);
    const CheckVerdict v = check_periodogram(cfg, 50);
    if (!v.pass) return fail("worst coarse-bin deviation %.3f exceeds %.2f", v.statistic, 0.25);

    // Limit check: Damped(h -> 0) converges to OrientPersistent off the line.
    const FreqGrid3 grid(32, 32, 16);
    const std::vector<double> so = discretize_spectrum(
        SpectrumSpec::orient_persistent(SpatialSpectrum::power_law(5.0), {10.0, 0.0}, 2.0), grid);
    const std::vector<double> sd = discretize_spectrum(
        SpectrumSpec::damped(SpatialSpectrum::power_law(5.0), {10.0, 0.0}, 2.0, 1e-6), grid);
    for (int t = 0; t < grid.nt; ++t)
        for (int i = 0; i < grid.n1; ++i)
            for (int j = 0; j < grid.n2; ++j) {
                const std::size_t b = grid.index(t, i, j);
                if (std::abs(grid.omega[t] + 10.0 * grid.k1[i]) <= grid.eps_line() || so[b] == 0.0)
                    continue;
                if (std::abs(sd[b] / so[b] - 1.0) > 1e-4)
                    return fail("h->0 limit off by %.2e (tol %.0e) off-line",
                                std::abs(sd[b] / so[b] - 1.0), 1e-4);
            }
    const double elapsed = now_s() - start;
    if (elapsed >= 120.0) return fail("runtime %.1f s exceeds %.0f s", elapsed, 120.0);
    return {};
}

// ---- C5: mixture reduction ---------------------------------------------------

std::string c5_mixture_reduction() {
    // Singleton mixture == frozen field, bitwise.
    {
        const Grid2D window(32, 32);
        const VelocitySpec vel = VelocitySpec::mixture({{3.0, -1.0}}, {1.0});
        const PlanReport plan = plan_extended_grid(window, 4, vel);
        RngStream rng(5150, 0);
        auto [big, rep] = simulate_spatial_circulant(SpectrumSpec::compact("exponential", 4.0, 16.0),
                                                     extended_grid_for(window, plan), rng);
        const SpaceTimeField zm = distributed_field(big, window, 4, {{3.0, -1.0}}, {1.0});
        const SpaceTimeField zf = frozen_field(big, window, 4, {3.0, -1.0});
        for (int t = 0; t <= 4; ++t)
            if (zm.frames[t] != zf.frames[t]) return "singleton mixture differs from frozen field";
    }

    // fig4: frames equal the independently recomputed normalized weighted sum.
    const ScenarioConfig cfg = make_preset("fig4");
    const RunResult run = run_scenario(cfg);
    RngStream velocity_rng(cfg.seed, 1);  // documented stream layout, member 0
    auto [vels, weights] = sample_mixture_velocities({10.0, 0.0}, 10, 0.5, 2.0, velocity_rng);
    double total = 0.0;
    for (double w : weights) total += w;

    const PlanReport plan = plan_extended_grid(cfg.grid, cfg.epochs, run.config.velocity, cfg.dt);
    const Grid2D ext = extended_grid_for(cfg.grid, plan, cfg.extended_grid_override);
    const SpatialField big = make_test_image(ext, cfg.grid, cfg.image);

    for (int t = 0; t <= cfg.epochs; ++t) {
        std::vector<double> expect(cfg.grid.size(), 0.0);
        for (std::size_t m = 0; m < vels.size(); ++m) {
            const SpatialField term = window_extract(big, vels[m] * static_cast<double>(t), cfg.grid);
            for (std::size_t c = 0; c < expect.size(); ++c)
                expect[c] += (weights[m] / total) * term.values[c];
        }
        for (std::size_t c = 0; c < expect.size(); ++c)
            if (std::abs(run.field.frames[t][c] - expect[c]) > 1e-12)
                return fail("fig4 frame deviates by %.2e (tol %.0e)",
                            std::abs(run.field.frames[t][c] - expect[c]), 1e-12);
    }
    return {};
}

// ---- C6: rotation identity and fig5 centers ----------------------------------

std::string c6_rotation_identity() {
    // Full 2 pi turn on a smooth field reproduces the window to 1e-9 relative.
    {
        RngStream rng(6021, 0);
        auto [big, rep] = simulate_spatial_circulant(SpectrumSpec::compact("gaussian", 3.0, 12.0),
                                                     Grid2D(64, 64), rng);
        const Grid2D window(28, 28, 1.0, {18.0, 18.0});
        const SpatialField straight = window_extract(big, {0.0, 0.0}, window);
        const SpatialField turned =
            rotate_extract(big, window, 2.0 * 3.14159265358979323846, {30.0, 34.0});
        double max_abs = 0.0, max_diff = 0.0;
        for (std::size_t c = 0; c < straight.values.size(); ++c) {
            max_abs = std::max(max_abs, std::abs(straight.values[c]));
            max_diff = std::max(max_diff, std::abs(straight.values[c] - turned.values[c]));
        }
        if (max_diff > 1e-9 * max_abs)
            return fail("full-turn deviation %.2e exceeds %.0e relative", max_diff / max_abs, 1e-9);
    }

    // fig5: emitted centers C^t = C^0 - v^t t, exactly.
    const RunResult run = run_scenario(make_preset("fig5"));
    for (int t = 0; t <= run.field.epochs(); ++t) {
        const FrameMeta& meta = run.frames[t];
        if (!meta.rotation_center) return "fig5 frame metadata lacks a rotation center";
        const Vec2 v = meta.velocities.at(0);
        if (meta.rotation_center->first != 75.0 - v.first * t ||
            meta.rotation_center->second != 105.0 - v.second * t)
            return "fig5 rotation center does not equal C0 - v^t t";
    }
    return {};
}

// ---- C7: evolving-field degeneracy, Jacobians, propagation path --------------

std::string c7_evolving_path() {
    // Constant flow == frozen field, bitwise.
    {
        const Grid2D window(24, 24);
        const VelocitySpec vel = VelocitySpec::field(FlowField::constant({2.0, 1.0}));
        const PlanReport plan = plan_extended_grid(window, 4, vel);
        RngStream rng(7007, 0);
        auto [big, rep] = simulate_spatial_circulant(SpectrumSpec::compact("exponential", 4.0, 16.0),
                                                     extended_grid_for(window, plan), rng);
        const SpaceTimeField ze = evolving_field(big, window, 4, FlowField::constant({2.0, 1.0}));
        const SpaceTimeField zf = frozen_field(big, window, 4, {2.0, 1.0});
        for (int t = 0; t <= 4; ++t)
            if (ze.frames[t] != zf.frames[t]) return "constant flow differs from frozen field";
    }

    // Spiral Jacobians against central finite differences at random points.
    const FlowField spiral = FlowField::spiral();
    RngStream pick(7100, 0);
    for (int probe = 0; probe < 100; ++probe) {
        const Vec2 s{5.0 + pick.next_uniform() * 40.0, 5.0 + pick.next_uniform() * 40.0};
        const double t = pick.next_uniform() * 8.0;
        const Jacobian2 J = spiral.jacobian(s, t);
        const double eps = 1e-5;
        auto fd1 = [&](int comp, int axis) {
            Vec2 hi = s, lo = s;
            (axis == 0 ? hi.first : hi.second) += eps;
            (axis == 0 ? lo.first : lo.second) -= eps;
            const Vec2 a = spiral.eval(hi, t), b = spiral.eval(lo, t);
            return ((comp == 0 ? a.first : a.second) - (comp == 0 ? b.first : b.second)) / (2 * eps);
        };
        for (int comp = 0; comp < 2; ++comp)
            for (int axis = 0; axis < 2; ++axis)
                if (std::abs(J.ds[comp][axis] - fd1(comp, axis)) >
                    1e-6 * std::max(1.0, std::abs(J.ds[comp][axis])))
                    return "spiral spatial Jacobian disagrees with finite differences";
        const Vec2 ta = spiral.eval(s, t + eps), tb = spiral.eval(s, t - eps);
        if (std::abs(J.dt.first - (ta.first - tb.first) / (2 * eps)) >
                1e-6 * std::max(1.0, std::abs(J.dt.first)) ||
            std::abs(J.dt.second - (ta.second - tb.second) / (2 * eps)) >
                1e-6 * std::max(1.0, std::abs(J.dt.second)))
            return "spiral temporal derivative disagrees with finite differences";
    }

    // Correlation-peak offsets against the propagation path at tau = 1.
    ScenarioConfig cfg = make_preset("fig6");
    cfg.base = ScenarioConfig::Base::Gaussian;
    cfg.spectrum = SpectrumSpec::compact("exponential", 4.0, 16.0);
    cfg.grid = Grid2D(48, 48);
    cfg.extended_grid_override = 0;
    cfg.epochs = 6;
    cfg.output.velocity_fields = false;
    const CheckVerdict v = check_path(cfg, 300);
    if (!v.pass)
        return fail("correlation peak off the prediction by %.2f cells (tol %.0f)", v.statistic, 1.0);
    return {};
}

// ---- C8: oracle equivalence ---------------------------------------------------

std::string c8_oracle_equivalence() {
    const double start = now_s();
    const Grid2D grid(4, 4);
    const int T = 2;
    const Vec2 v{1.0, 0.0};
    const int members = 2000;
    const SpectrumSpec cov_spec = SpectrumSpec::compact("exponential", 1.5, 12.0);
    const CovarianceFn cov = cov_spec.spatial.covariance_fn();

    std::vector<SpaceTimeField> oracle;
    oracle.reserve(members);
    for (int m = 0; m < members; ++m) {
        RngStream rng(8001, m);
        oracle.push_back(cholesky_oracle(cov, grid, T, v, rng));
    }

    ScenarioConfig cfg;
    cfg.name = "oracle_window";
    cfg.grid = grid;
    cfg.epochs = T;
    cfg.seed = 8002;
    cfg.spectrum = cov_spec;
    cfg.velocity = VelocitySpec::constant(v);
    const std::vector<SpaceTimeField> window = run_ensemble(cfg, members);

    std::vector<std::pair<int, int>> lags_h;
    for (int h1 = -2; h1 <= 2; ++h1)
        for (int h2 = -2; h2 <= 2; ++h2) lags_h.emplace_back(h1, h2);
    const std::vector<int> lags_tau{0, 1, 2};
    const CovEstimate eo = empirical_cov(oracle, lags_h, lags_tau);
    const CovEstimate ew = empirical_cov(window, lags_h, lags_tau);

    for (std::size_t hi = 0; hi < lags_h.size(); ++hi)
        for (std::size_t ti = 0; ti < lags_tau.size(); ++ti) {
            const double se = std::hypot(eo.std_error(hi, ti), ew.std_error(hi, ti));
            const double diff = std::abs(eo.value(hi, ti) - ew.value(hi, ti));
            if (diff > 3.0 * se)
                return fail("lag disagreement %.3f exceeds 3 combined SE = %.3f", diff, 3.0 * se);
        }
    const double elapsed = now_s() - start;
    if (elapsed >= 180.0) return fail("runtime %.1f s exceeds %.0f s", elapsed, 180.0);
    return {};
}

// ---- C9: planner soundness ----------------------------------------------------

std::string c9_planner_soundness() {
    {  // fig2 bound check
        const PlanReport plan = plan_extended_grid(150, 8, VelocitySpec::constant({10.0, 0.0}));
        if (plan.n_required < 230 || plan.n_required > 600)
            return fail("fig2 N_required %.0f outside [%.0f, 600]",
                        static_cast<double>(plan.n_required), 230.0);
    }
    RngStream pick(9001, 0);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 8 + static_cast<int>(pick.next_uniform() * 40);
        const int T = static_cast<int>(pick.next_uniform() * 9);
        VelocitySpec vel;
        const int flavor = static_cast<int>(pick.next_uniform() * 4);
        if (flavor == 0) {
            vel = VelocitySpec::constant(
                {(pick.next_uniform() - 0.5) * 12.0, (pick.next_uniform() - 0.5) * 12.0});
        } else if (flavor == 1) {
            std::vector<Vec2> vels;
            std::vector<double> weights;
            const int k = 1 + static_cast<int>(pick.next_uniform() * 5);
            for (int i = 0; i < k; ++i) {
                vels.push_back({(pick.next_uniform() - 0.5) * 8.0, (pick.next_uniform() - 0.5) * 8.0});
                weights.push_back(0.05 + pick.next_uniform());
            }
            vel = VelocitySpec::mixture(vels, weights);
        } else if (flavor == 2) {
            const double k = 0.01 + pick.next_uniform() * 0.08;
            const int which = static_cast<int>(pick.next_uniform() * 3);
            vel = VelocitySpec::field(which == 0   ? FlowField::stagnation(k)
                                      : which == 1 ? FlowField::rigid_rotation(k)
                                                   : FlowField::spiral());
        } else {
            vel = VelocitySpec::field(FlowField::constant(
                {(pick.next_uniform() - 0.5) * 10.0, (pick.next_uniform() - 0.5) * 10.0}));
        }

        const Grid2D window(n, n);
        try {
            const PlanReport plan = plan_extended_grid(window, T, vel);
            SpatialField big(extended_grid_for(window, plan));
            switch (vel.kind) {
                case VelocitySpec::Kind::Constant:
                    frozen_field(big, window, T, vel.v);
                    break;
                case VelocitySpec::Kind::Mixture:
                    distributed_field(big, window, T, vel.velocities, vel.weights);
                    break;
                default:
                    evolving_field(big, window, T, vel.flow);
                    break;
            }
        } catch (const OutOfDomainError& e) {
            return std::string("trial ") + std::to_string(trial) + " overran a passing plan: " + e.what();
        }
    }
    return {};
}

// ---- C10: performance direction ------------------------------------------------

std::string c10_performance() {
    const double start = now_s();
    const int T = 8;
    const std::vector<int> sizes{32, 64, 128};
    std::vector<double> ns, window_times, spectral_times;
    double window_128 = 0.0, spectral_128 = 0.0;
    for (int n : sizes) {
        const BenchResult w = run_bench(BenchResult::Method::WindowShift, n, T, 5, 60.0);
        const BenchResult s = run_bench(BenchResult::Method::Spectral3D, n, T, 5, 60.0);
        ns.push_back(n);
        window_times.push_back(w.wall_time_s);
        spectral_times.push_back(s.wall_time_s);
        if (n == 128) {
            window_128 = w.wall_time_s;
            spectral_128 = s.wall_time_s;
        }
        std::printf("        n=%3d window_shift=%.4fs spectral3d=%.4fs\n", n, w.wall_time_s,
                    s.wall_time_s);
    }
    const double ratio = spectral_128 / window_128;
    const double slope_w = fit_loglog_slope(ns, window_times);
    const double slope_s = fit_loglog_slope(ns, spectral_times);
    std::printf("        ratio(n=128)=%.2fx slopes: window_shift=%.2f spectral3d=%.2f\n", ratio,
                slope_w, slope_s);
    if (ratio < 2.0) return fail("spectral3d only %.2fx slower at n=128 (need >= %.0fx)", ratio, 2.0);
    if (slope_w >= slope_s)
        return fail("slope ordering violated: window %.2f >= spectral %.2f", slope_w, slope_s);
    const double elapsed = now_s() - start;
    if (elapsed >= 300.0) return fail("runtime %.1f s exceeds %.0f s", elapsed, 300.0);
    return {};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {"C1", "frozen-field exactness (fig2 bitwise translation, < 5 s)", c1_frozen_exactness},
        {"C2", "second-order structure (c_ZZ vs c_XX(h - v tau), 3 SE, >= 95% cells)", c2_second_order},
        {"C3", "Taylor's hypothesis (c(v tau, 0) vs c(0, tau), 3 combined SE)", c3_taylor},
        {"C4", "spectral fidelity (damped periodogram +-25%, h->0 limit 1e-4)", c4_spectral_fidelity},
        {"C5", "mixture reduction (singleton bitwise; fig4 weighted sum 1e-12)", c5_mixture_reduction},
        {"C6", "rotation identity (2 pi turn 1e-9; fig5 centers exact)", c6_rotation_identity},
        {"C7", "evolving degeneracy and path (bitwise; FD 1e-6; peak within 1 cell)", c7_evolving_path},
        {"C8", "oracle equivalence (Cholesky vs window shift, 3 combined SE)", c8_oracle_equivalence},
        {"C9", "planner soundness (1000 fuzz trials; fig2 bound)", c9_planner_soundness},
        {"C10", "performance direction (>= 2x at n=128, slope ordering)", c10_performance},
    };

    int failures = 0;
    for (const Criterion& criterion : criteria) {
        std::string detail;
        try {
            detail = criterion.run();
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        if (detail.empty()) {
            std::printf("[PASS] %-4s %s\n", criterion.id, criterion.title);
        } else {
            std::printf("[FAIL] %-4s %s: %s\n", criterion.id, criterion.title, detail.c_str());
            ++failures;
        }
        std::fflush(stdout);
    }
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    else std::printf("all 10 acceptance criteria passed\n");
    return failures == 0 ? 0 : 1;
}
