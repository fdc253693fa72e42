// Analytic velocity-field catalog for evolving frozen fields, with exact
// Jacobians where the closed forms exist and central finite differences for
// tabulated fields.
#pragma once

#include <array>
#include <string>
#include <vector>

#include "travelfield/core.hpp"

namespace tfld {

struct Jacobian2 {
    // d v_i / d s_j, row i column j.
    std::array<std::array<double, 2>, 2> ds{{{0.0, 0.0}, {0.0, 0.0}}};
    Vec2 dt{0.0, 0.0};
};

// Steady flows take one parameter k; the spiral has none (its radius function
// R(s) = ||s||/2 is fixed, direction (cos t, sin t)/(t+1)). Vortex and
// source_sink are singular at s = 0, the spiral is non-differentiable there.
struct FlowField {
    enum class Kind { Constant, Stagnation, RigidRotation, Vortex, SourceSink, Spiral, Tabulated };
    Kind kind = Kind::Constant;
    double k = 0.0;
    Vec2 v0{0.0, 0.0};  // Constant

    // Tabulated: per-epoch component grids, v1[t]/v2[t] sampled at the cells
    // of `table_grid` (nearest-cell lookup, FD derivatives).
    Grid2D table_grid;
    std::vector<std::vector<double>> table_v1, table_v2;
    double table_dt = 1.0;

    static FlowField constant(Vec2 v);
    static FlowField stagnation(double k);
    static FlowField rigid_rotation(double k);
    static FlowField vortex(double k);
    static FlowField source_sink(double k);
    static FlowField spiral();
    static FlowField tabulated(const Grid2D& grid, std::vector<std::vector<double>> v1,
                               std::vector<std::vector<double>> v2, double dt = 1.0);

    static FlowField from_name(const std::string& name, double k, Vec2 v0 = {0.0, 0.0});
    std::string name() const;

    Vec2 eval(Vec2 s, double t) const;

    // Analytic for catalog flows, central differences (step 1e-5) for
    // tabulated ones. Throws std::domain_error at singular points.
    Jacobian2 jacobian(Vec2 s, double t) const;

    // Vortex and source_sink have no value at the origin; the spiral is
    // finite there (v = 0) but its Jacobian is not.
    bool value_singular() const { return kind == Kind::Vortex || kind == Kind::SourceSink; }
    bool jacobian_singular() const { return value_singular() || kind == Kind::Spiral; }

    // True when the value-singular point (the origin) lies inside or within
    // `margin` of the closed coordinate box [lo, hi].
    bool singular_inside(Vec2 lo, Vec2 hi, double margin = 0.0) const;
};

// Divergence and scalar curl dv2/ds1 - dv1/ds2 at (s, t).
std::pair<double, double> flow_divergence_curl(const FlowField& flow, Vec2 s, double t);

}  // namespace tfld
