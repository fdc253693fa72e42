// Velocity specification shared by the planner and the generators.
//
// Velocities are in coordinate units per unit time; with spacing = 1 and
// dt = 1 (the default everywhere) that is cells per time step. The offset a
// velocity contributes at epoch t is v * (t * dt).
#pragma once

#include <array>
#include <string>
#include <vector>

#include "travelfield/core.hpp"
#include "travelfield/flows.hpp"

namespace tfld {

using Mat2 = std::array<std::array<double, 2>, 2>;

struct WrappedNormalDist {
    double mu = 0.0;
    double sigma = 1.0;
};

struct GaussianDist2 {
    Vec2 mu{0.0, 0.0};
    Mat2 cov{{{1.0, 0.0}, {0.0, 1.0}}};

    void validate() const;  // symmetric, nonnegative eigenvalues
    // Lower-triangular factor L with L L^T = cov; tolerates zero eigenvalues.
    Mat2 cholesky() const;
};

enum class Redraw { OncePerField, PerTimeStep, PerPoint };

std::string redraw_name(Redraw r);
Redraw redraw_from_name(const std::string& name);

// Deferred sampling recipe for a discrete mixture: phases from a wrapped
// normal around angle(v_pref), amplitudes from a normal around ||v_pref||,
// weights from the CDF products. Materialized once at run start.
struct MixtureSampling {
    Vec2 v_pref{0.0, 0.0};
    int n_v = 1;
    double phase_sigma = 0.5;
    double amp_sigma = 1.0;
};

struct RotationMixtureSpec {
    int n_theta = 1;
    WrappedNormalDist phase{0.0, 1.0};
    GaussianDist2 translation;
    Vec2 c0{0.0, 0.0};  // initial rotation center, grid coordinates
};

struct VelocitySpec {
    enum class Kind { Constant, GaussianRandom, Mixture, RotationMixture, Field };
    Kind kind = Kind::Constant;

    Vec2 v{0.0, 0.0};  // Constant

    GaussianDist2 gauss;  // GaussianRandom
    Redraw redraw = Redraw::OncePerField;

    std::vector<Vec2> velocities;  // Mixture
    std::vector<double> weights;
    bool sampled = false;  // Mixture velocities still to be drawn
    MixtureSampling sampling;

    RotationMixtureSpec rotation;

    FlowField flow;

    static VelocitySpec constant(Vec2 v);
    static VelocitySpec gaussian(Vec2 mu, Mat2 cov, Redraw redraw);
    static VelocitySpec mixture(std::vector<Vec2> velocities, std::vector<double> weights);
    static VelocitySpec sampled_mixture(MixtureSampling sampling);
    static VelocitySpec rotation_mixture(RotationMixtureSpec spec);
    static VelocitySpec field(FlowField flow);

    void validate() const;
};

struct PlanReport {
    int n_required = 0;
    double v_max = 0.0;
    enum class Rule { Deterministic, FieldSup, Percentile95 } rule = Rule::Deterministic;
    int margin_cells = 0;

    // Implementation extras beyond the spec fields: where the n x n window
    // sits inside the extended grid, and the per-axis hull of sample
    // positions (in window cell coordinates) the plan accounts for.
    std::array<int, 2> window_base{0, 0};
    std::array<double, 2> sample_lo{0.0, 0.0};
    std::array<double, 2> sample_hi{0.0, 0.0};
};

// Extended-grid size for an n x n window traveling for T epochs: the sample
// hull of every planned source lookup, one interpolation cell of margin, and
// (for random velocity rules) the 95th-percentile bound. Deterministic and
// field plans are sound: a run that passed planning cannot leave the domain.
PlanReport plan_extended_grid(int n, int T, const VelocitySpec& vel, double dt = 1.0);
PlanReport plan_extended_grid(const Grid2D& out_grid, int T, const VelocitySpec& vel, double dt = 1.0);

// Extended grid whose index `base` aligns with the window's cell (0,0).
Grid2D extended_grid_for(const Grid2D& out_grid, const PlanReport& plan, int n_override = 0);

}  // namespace tfld
