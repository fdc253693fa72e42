// Traveling-field generators: turn one extended spatial field plus a velocity
// specification into a stack of frames via window shifting, mixtures,
// rotations, or pointwise velocity-field warping.
//
// All generators share the window_extract sampling convention (content
// translated by +offset) so that integer-velocity runs are bitwise shifts of
// the base window. Frame 0 always carries zero offset.
#pragma once

#include <optional>
#include <vector>

#include "travelfield/core.hpp"
#include "travelfield/flows.hpp"
#include "travelfield/rng.hpp"
#include "travelfield/velocity.hpp"

namespace tfld {

// Per-frame draw record, written into the run sidecar.
struct FrameMeta {
    std::vector<Vec2> velocities;      // applied velocity or velocities
    std::vector<double> weights_raw;   // CDF-product weights as drawn
    std::vector<double> weights_norm;  // normalized to sum 1
    std::vector<double> thetas;        // rotation angles (radians)
    std::optional<Vec2> rotation_center;  // C^t
};

// Z(s,t) = X_S(s - v t): frame t is the base window translated by v*(t*dt).
SpaceTimeField frozen_field(const SpatialField& big, const Grid2D& out_grid, int T, Vec2 v,
                            double dt = 1.0, Interp interp = Interp::Bilinear);

// Random-velocity frozen field, v ~ N(mu, cov). Redraw granularity:
//  - OncePerField: one draw for the whole field (a frozen field with random v);
//  - PerTimeStep: one draw per frame t = 1..T;
//  - PerPoint: i.i.d. draw per (s, t) cell, bilinear sampling.
// A draw that leaves the planned domain aborts with OutOfDomainError advising
// a larger extended grid (the 95th-percentile plan makes this rare, and
// clamping would silently change the model).
SpaceTimeField random_velocity_field(const SpatialField& big, const Grid2D& out_grid, int T, Vec2 mu,
                                     const Mat2& cov, Redraw redraw, RngStream& rng, double dt = 1.0,
                                     std::vector<FrameMeta>* meta = nullptr);

// Z(s,t) = sum_i w_i X_S(s - v_i t), weights normalized to sum 1 (raw weights
// are preserved in the metadata). A singleton list reduces to frozen_field
// bitwise.
SpaceTimeField distributed_field(const SpatialField& big, const Grid2D& out_grid, int T,
                                 const std::vector<Vec2>& velocities, const std::vector<double>& weights,
                                 double dt = 1.0, std::vector<FrameMeta>* meta = nullptr,
                                 Interp interp = Interp::Bilinear);

// Phases theta_i ~ WN(angle(v_pref), phase_sigma^2) and amplitudes
// ||v_i|| ~ N(||v_pref||, amp_sigma^2); v_i = ||v_i||(cos theta_i, sin
// theta_i); raw weights p_i = F_P(theta_i) * F_A(||v_i||). Normalization is
// deferred to distributed_field.
std::pair<std::vector<Vec2>, std::vector<double>> sample_mixture_velocities(Vec2 v_pref, int n_v,
                                                                            double phase_sigma,
                                                                            double amp_sigma,
                                                                            RngStream& rng);

// One rotated-and-translated window term: out(s) = big(R_{-theta}((s -
// translation) - center) + center). Used by the rotation mixture; exposed for
// the full-turn identity tests.
SpatialField rotate_extract(const SpatialField& big, const Grid2D& out_grid, double theta, Vec2 center,
                            Vec2 translation = {0.0, 0.0});

// Z(s,t) = sum_i p(theta_i^t) X^{theta_i^t}(s - v^t t) with per-frame draws:
// n_theta wrapped-normal phases first, then one translation draw. Rotation
// centers follow C^t = C^0 - v^t t and are recorded in the frame metadata.
SpaceTimeField rotation_mixture_field(const SpatialField& big, const Grid2D& out_grid, int T,
                                      const RotationMixtureSpec& spec, RngStream& rng, double dt = 1.0,
                                      std::vector<FrameMeta>* meta = nullptr);

// Z(s,t) = X_S(s - v(s,t) t): the literal pointwise warp of the definition
// (no trajectory integration). Constant flows coincide with frozen_field.
SpaceTimeField evolving_field(const SpatialField& big, const Grid2D& out_grid, int T,
                              const FlowField& flow, double dt = 1.0,
                              std::vector<FrameMeta>* meta = nullptr);

// Z(s,t) = X_T(t - eta.s / v) from a 1-D signal sampled at u = u0, u0+1, ...
// (linear interpolation). eta should be a unit direction; v must be nonzero.
SpaceTimeField plane_wave(const std::vector<double>& signal, double u0, const Grid2D& out_grid, int T,
                          Vec2 eta, double v, double dt = 1.0);

}  // namespace tfld
