#include "travelfield/velocity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "travelfield/rng.hpp"

namespace tfld {

void GaussianDist2::validate() const {
    if (cov[0][1] != cov[1][0]) throw ConfigError("velocity: covariance must be symmetric");
    const double tr = cov[0][0] + cov[1][1];
    const double det = cov[0][0] * cov[1][1] - cov[0][1] * cov[1][0];
    const double tol = 1e-12 * std::max(1.0, tr);
    if (cov[0][0] < -tol || cov[1][1] < -tol || det < -tol * std::max(1.0, tr))
        throw ConfigError("velocity: covariance must be positive semidefinite");
}

Mat2 GaussianDist2::cholesky() const {
    validate();
    Mat2 L{{{0.0, 0.0}, {0.0, 0.0}}};
    const double a = std::max(cov[0][0], 0.0);
    L[0][0] = std::sqrt(a);
    if (L[0][0] > 0.0) L[1][0] = cov[1][0] / L[0][0];
    const double rem = cov[1][1] - L[1][0] * L[1][0];
    L[1][1] = std::sqrt(std::max(rem, 0.0));
    return L;
}

std::string redraw_name(Redraw r) {
    switch (r) {
        case Redraw::OncePerField: return "once-per-field";
        case Redraw::PerTimeStep: return "per-time-step";
        default: return "per-point";
    }
}

Redraw redraw_from_name(const std::string& name) {
    if (name == "once-per-field") return Redraw::OncePerField;
    if (name == "per-time-step") return Redraw::PerTimeStep;
    if (name == "per-point") return Redraw::PerPoint;
    throw ConfigError("unknown redraw mode '" + name + "'");
}

VelocitySpec VelocitySpec::constant(Vec2 v) {
    VelocitySpec s;
    s.kind = Kind::Constant;
    s.v = v;
    return s;
}

VelocitySpec VelocitySpec::gaussian(Vec2 mu, Mat2 cov, Redraw redraw) {
    VelocitySpec s;
    s.kind = Kind::GaussianRandom;
    s.gauss = {mu, cov};
    s.redraw = redraw;
    s.validate();
    return s;
}

VelocitySpec VelocitySpec::mixture(std::vector<Vec2> velocities, std::vector<double> weights) {
    VelocitySpec s;
    s.kind = Kind::Mixture;
    s.velocities = std::move(velocities);
    s.weights = std::move(weights);
    s.validate();
    return s;
}

VelocitySpec VelocitySpec::sampled_mixture(MixtureSampling sampling) {
    VelocitySpec s;
    s.kind = Kind::Mixture;
    s.sampled = true;
    s.sampling = sampling;
    s.validate();
    return s;
}

VelocitySpec VelocitySpec::rotation_mixture(RotationMixtureSpec spec) {
    VelocitySpec s;
    s.kind = Kind::RotationMixture;
    s.rotation = spec;
    s.validate();
    return s;
}

VelocitySpec VelocitySpec::field(FlowField flow) {
    VelocitySpec s;
    s.kind = Kind::Field;
    s.flow = std::move(flow);
    return s;
}

void VelocitySpec::validate() const {
    switch (kind) {
        case Kind::Mixture: {
            if (sampled) {
                if (sampling.n_v < 1) throw ConfigError("mixture: n_v must be >= 1");
                if (sampling.phase_sigma < 0 || sampling.amp_sigma < 0)
                    throw ConfigError("mixture: sigmas must be >= 0");
                return;
            }
            if (velocities.empty() || velocities.size() != weights.size())
                throw ConfigError("mixture: velocities and weights must have equal positive length");
            double total = 0.0;
            for (double w : weights) {
                if (w < 0.0) throw ConfigError("mixture: weights must be >= 0");
                total += w;
            }
            if (!(total > 0.0)) throw ConfigError("mixture: weights must not all be zero");
            return;
        }
        case Kind::GaussianRandom:
            gauss.validate();
            return;
        case Kind::RotationMixture:
            if (rotation.n_theta < 1) throw ConfigError("rotation mixture: n_theta must be >= 1");
            if (rotation.phase.sigma < 0) throw ConfigError("rotation mixture: sigma must be >= 0");
            rotation.translation.validate();
            return;
        default:
            return;
    }
}

namespace {

struct AxisHull {
    double lo = 0.0;
    double hi = 0.0;
    void include(double x) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
};

// z-score of the planning band. A single draw uses the plain 95th
// percentile; modes that draw repeatedly (per time step, per point, per
// frame) bound the run's maximum instead, so the whole run still stays
// inside the plan with 95% probability (union bound over draws and tails).
double plan_z(long long n_draws) {
    if (n_draws <= 1) return kZ95;
    return normal_quantile(1.0 - 0.05 / (4.0 * static_cast<double>(n_draws)));
}

// Hull of -v*t over t in [0, T*dt] for the z-sigma band of a Gaussian
// velocity, per axis, in cell units.
void gaussian_hull(const GaussianDist2& g, double z, double horizon, double spacing, AxisHull hull[2],
                   double& v_max) {
    const double mu[2] = {g.mu.first, g.mu.second};
    v_max = 0.0;
    for (int axis = 0; axis < 2; ++axis) {
        const double sigma = std::sqrt(std::max(g.cov[axis][axis], 0.0));
        const double band = std::abs(mu[axis]) + z * sigma;
        v_max = std::max(v_max, band);
        hull[axis].include(-(mu[axis] + z * sigma) * horizon / spacing);
        hull[axis].include(-(mu[axis] - z * sigma) * horizon / spacing);
    }
}

}  // namespace

PlanReport plan_extended_grid(const Grid2D& out_grid, int T, const VelocitySpec& vel, double dt) {
    if (T < 0) throw std::invalid_argument("plan_extended_grid: T must be >= 0");
    vel.validate();
    const double horizon = T * dt;
    const double spacing = out_grid.spacing;
    const int n[2] = {out_grid.n1, out_grid.n2};

    PlanReport plan;
    // Per-axis hull of planned sample positions in window cell coordinates.
    AxisHull sample[2];
    sample[0] = {0.0, static_cast<double>(n[0] - 1)};
    sample[1] = {0.0, static_cast<double>(n[1] - 1)};

    switch (vel.kind) {
        case VelocitySpec::Kind::Constant: {
            plan.rule = PlanReport::Rule::Deterministic;
            plan.v_max = std::max(std::abs(vel.v.first), std::abs(vel.v.second));
            sample[0].include(-vel.v.first * horizon / spacing);
            sample[0].include(n[0] - 1 - vel.v.first * horizon / spacing);
            sample[1].include(-vel.v.second * horizon / spacing);
            sample[1].include(n[1] - 1 - vel.v.second * horizon / spacing);
            break;
        }
        case VelocitySpec::Kind::Mixture: {
            if (vel.sampled)
                throw PlanningError(
                    "plan_extended_grid: sampled mixture must be materialized before planning");
            plan.rule = PlanReport::Rule::Percentile95;  // random-velocity family
            plan.v_max = 0.0;
            for (const Vec2& w : vel.velocities) {
                plan.v_max = std::max({plan.v_max, std::abs(w.first), std::abs(w.second)});
                sample[0].include(-w.first * horizon / spacing);
                sample[0].include(n[0] - 1 - w.first * horizon / spacing);
                sample[1].include(-w.second * horizon / spacing);
                sample[1].include(n[1] - 1 - w.second * horizon / spacing);
            }
            break;
        }
        case VelocitySpec::Kind::GaussianRandom: {
            plan.rule = PlanReport::Rule::Percentile95;
            long long n_draws = 1;
            if (vel.redraw == Redraw::PerTimeStep) n_draws = T;
            if (vel.redraw == Redraw::PerPoint)
                n_draws = static_cast<long long>(n[0]) * n[1] * T;
            AxisHull q[2];
            gaussian_hull(vel.gauss, plan_z(n_draws), horizon, spacing, q, plan.v_max);
            for (int axis = 0; axis < 2; ++axis) {
                sample[axis].include(q[axis].lo);
                sample[axis].include(n[axis] - 1 + q[axis].hi);
            }
            break;
        }
        case VelocitySpec::Kind::RotationMixture: {
            plan.rule = PlanReport::Rule::Percentile95;
            AxisHull q[2];
            gaussian_hull(vel.rotation.translation, plan_z(T + 1), horizon, spacing, q, plan.v_max);
            // Rotated samples live on circles about C0 of radius up to the
            // window circumradius seen from C0.
            const double c0[2] = {(vel.rotation.c0.first - out_grid.origin.first) / spacing,
                                  (vel.rotation.c0.second - out_grid.origin.second) / spacing};
            double radius = 0.0;
            for (int ci = 0; ci < 2; ++ci)
                for (int cj = 0; cj < 2; ++cj)
                    radius = std::max(radius, std::hypot(ci * (n[0] - 1) - c0[0], cj * (n[1] - 1) - c0[1]));
            for (int axis = 0; axis < 2; ++axis) {
                sample[axis].include(c0[axis] - radius + q[axis].lo);
                sample[axis].include(c0[axis] + radius + q[axis].hi);
            }
            break;
        }
        case VelocitySpec::Kind::Field: {
            plan.rule = PlanReport::Rule::FieldSup;
            const Vec2 lo = out_grid.origin;
            const Vec2 hi = index_to_coord(out_grid, n[0] - 1, n[1] - 1);
            if (vel.flow.singular_inside(lo, hi)) {
                std::ostringstream msg;
                msg << vel.flow.name() << " flow is singular at (0,0), which lies inside the domain ["
                    << lo.first << "," << hi.first << "]x[" << lo.second << "," << hi.second << "]";
                throw PlanningError(msg.str());
            }
            double sup_v = 0.0, sup_disp = 0.0;
            for (int t = 0; t <= T; ++t) {
                const double time = t * dt;
                for (int i = 0; i < n[0]; ++i) {
                    for (int j = 0; j < n[1]; ++j) {
                        const Vec2 s = index_to_coord(out_grid, i, j);
                        const Vec2 w = vel.flow.eval(s, time);
                        if (!std::isfinite(w.first) || !std::isfinite(w.second)) {
                            std::ostringstream msg;
                            msg << vel.flow.name() << " flow is unbounded at s = (" << s.first << ","
                                << s.second << "), t = " << time;
                            throw PlanningError(msg.str());
                        }
                        sup_v = std::max({sup_v, std::abs(w.first), std::abs(w.second)});
                        sup_disp = std::max({sup_disp, std::abs(w.first) * time, std::abs(w.second) * time});
                        sample[0].include(i - w.first * time / spacing);
                        sample[1].include(j - w.second * time / spacing);
                    }
                }
            }
            // The effective rate: worst warp displacement per unit horizon.
            // The raw sup of |v| is hugely pessimistic for flows whose
            // velocity peaks where t (and hence the displacement v*t) is
            // small, and would reject extended grids the displacement hull
            // comfortably fits (the spiral being the prime case).
            plan.v_max = horizon > 0.0 ? sup_disp / horizon : sup_v;
            break;
        }
    }

    const int interp_margin = 1;
    int required = 0;
    for (int axis = 0; axis < 2; ++axis) {
        plan.sample_lo[axis] = sample[axis].lo;
        plan.sample_hi[axis] = sample[axis].hi;
        plan.window_base[axis] = interp_margin + static_cast<int>(std::ceil(-sample[axis].lo));
        const int n_axis = plan.window_base[axis] + static_cast<int>(std::ceil(sample[axis].hi)) + 1 +
                           interp_margin;
        required = std::max(required, n_axis);
    }
    // Honor the paper's bound even when the exact hull is tighter.
    const int paper_bound =
        std::max(n[0], n[1]) + static_cast<int>(std::ceil(horizon * plan.v_max / spacing)) + 1;
    plan.n_required = std::max(required, paper_bound);
    plan.margin_cells = plan.n_required - std::max(n[0], n[1]) -
                        static_cast<int>(std::ceil(horizon * plan.v_max / spacing));
    return plan;
}

PlanReport plan_extended_grid(int n, int T, const VelocitySpec& vel, double dt) {
    return plan_extended_grid(Grid2D(n, n), T, vel, dt);
}

Grid2D extended_grid_for(const Grid2D& out_grid, const PlanReport& plan, int n_override) {
    int n_big = plan.n_required;
    std::array<int, 2> base = plan.window_base;
    if (n_override > 0) {
        if (n_override < plan.n_required) {
            std::ostringstream msg;
            msg << "extended grid override " << n_override << " is smaller than the required "
                << plan.n_required;
            throw PlanningError(msg.str());
        }
        // Center the slack.
        const int shift = (n_override - plan.n_required) / 2;
        base[0] += shift;
        base[1] += shift;
        n_big = n_override;
    }
    const Vec2 origin{out_grid.origin.first - out_grid.spacing * base[0],
                      out_grid.origin.second - out_grid.spacing * base[1]};
    return Grid2D(n_big, n_big, out_grid.spacing, origin);
}

}  // namespace tfld
