#include "travelfield/generators.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace tfld {

namespace {

void push_meta(std::vector<FrameMeta>* meta, FrameMeta&& m) {
    if (meta) meta->push_back(std::move(m));
}

[[noreturn]] void replan_advice(const OutOfDomainError& err) {
    std::ostringstream msg;
    msg << "random velocity draw left the planned extended grid (" << err.what()
        << "); re-plan with an extended grid of at least " << err.required_size() << " cells";
    throw OutOfDomainError(msg.str(), err.required_size());
}

Vec2 draw_gaussian2(Vec2 mu, const Mat2& L, RngStream& rng) {
    double z1, z2;
    rng.next_normal_pair(z1, z2);
    return {mu.first + L[0][0] * z1, mu.second + L[1][0] * z1 + L[1][1] * z2};
}

}  // namespace

SpaceTimeField frozen_field(const SpatialField& big, const Grid2D& out_grid, int T, Vec2 v, double dt,
                            Interp interp) {
    SpaceTimeField out(out_grid, T, dt);
    for (int t = 0; t <= T; ++t) {
        out.frames[t] = window_extract(big, v * (t * dt), out_grid, interp).values;
    }
    return out;
}

SpaceTimeField random_velocity_field(const SpatialField& big, const Grid2D& out_grid, int T, Vec2 mu,
                                     const Mat2& cov, Redraw redraw, RngStream& rng, double dt,
                                     std::vector<FrameMeta>* meta) {
    const Mat2 L = GaussianDist2{mu, cov}.cholesky();
    SpaceTimeField out(out_grid, T, dt);
    try {
        if (redraw == Redraw::OncePerField) {
            const Vec2 v = draw_gaussian2(mu, L, rng);
            for (int t = 0; t <= T; ++t) {
                out.frames[t] = window_extract(big, v * (t * dt), out_grid).values;
                push_meta(meta, FrameMeta{{v}, {}, {}, {}, std::nullopt});
            }
            return out;
        }
        if (redraw == Redraw::PerTimeStep) {
            out.frames[0] = window_extract(big, {0.0, 0.0}, out_grid).values;
            push_meta(meta, FrameMeta{{Vec2{0.0, 0.0}}, {}, {}, {}, std::nullopt});
            for (int t = 1; t <= T; ++t) {
                const Vec2 v = draw_gaussian2(mu, L, rng);
                out.frames[t] = window_extract(big, v * (t * dt), out_grid).values;
                push_meta(meta, FrameMeta{{v}, {}, {}, {}, std::nullopt});
            }
            return out;
        }
        // PerPoint: each cell of each frame is shifted by its own draw;
        // draws are consumed frame-major, row-major.
        out.frames[0] = window_extract(big, {0.0, 0.0}, out_grid).values;
        push_meta(meta, FrameMeta{});
        for (int t = 1; t <= T; ++t) {
            const double time = t * dt;
            for (int i = 0; i < out_grid.n1; ++i) {
                for (int j = 0; j < out_grid.n2; ++j) {
                    const Vec2 v = draw_gaussian2(mu, L, rng);
                    const Vec2 s = index_to_coord(out_grid, i, j);
                    out.at(t, i, j) =
                        sample_field(big, {s.first - v.first * time, s.second - v.second * time},
                                     Interp::Bilinear);
                }
            }
            push_meta(meta, FrameMeta{});
        }
        return out;
    } catch (const OutOfDomainError& err) {
        replan_advice(err);
    }
}

SpaceTimeField distributed_field(const SpatialField& big, const Grid2D& out_grid, int T,
                                 const std::vector<Vec2>& velocities, const std::vector<double>& weights,
                                 double dt, std::vector<FrameMeta>* meta, Interp interp) {
    if (velocities.empty()) throw std::invalid_argument("distributed_field: empty velocity list");
    if (velocities.size() != weights.size())
        throw std::invalid_argument("distributed_field: velocities/weights length mismatch");
    double total = 0.0;
    for (double w : weights) total += w;
    if (!(total > 0.0)) throw std::invalid_argument("distributed_field: weights sum to zero");
    std::vector<double> wn(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i) wn[i] = weights[i] / total;

    SpaceTimeField out(out_grid, T, dt);
    for (int t = 0; t <= T; ++t) {
        // First term assigns, the rest accumulate; a singleton mixture is
        // then a bitwise window extraction.
        auto& frame = out.frames[t];
        frame = window_extract(big, velocities[0] * (t * dt), out_grid, interp).values;
        if (wn[0] != 1.0)
            for (double& x : frame) x *= wn[0];
        for (std::size_t m = 1; m < velocities.size(); ++m) {
            const SpatialField term = window_extract(big, velocities[m] * (t * dt), out_grid, interp);
            for (std::size_t c = 0; c < frame.size(); ++c) frame[c] += wn[m] * term.values[c];
        }
        push_meta(meta, FrameMeta{velocities, weights, wn, {}, std::nullopt});
    }
    return out;
}

std::pair<std::vector<Vec2>, std::vector<double>> sample_mixture_velocities(Vec2 v_pref, int n_v,
                                                                            double phase_sigma,
                                                                            double amp_sigma,
                                                                            RngStream& rng) {
    if (n_v < 1) throw std::invalid_argument("sample_mixture_velocities: n_v must be >= 1");
    const double theta_pref = std::atan2(v_pref.second, v_pref.first);
    const double amp_pref = std::hypot(v_pref.first, v_pref.second);

    // Phases first, then amplitudes, so the stream layout is stable.
    std::vector<double> thetas(n_v), amps(n_v);
    for (int i = 0; i < n_v; ++i) thetas[i] = wrap_angle(theta_pref + phase_sigma * rng.next_normal(), theta_pref);
    for (int i = 0; i < n_v; ++i) amps[i] = amp_pref + amp_sigma * rng.next_normal();

    std::vector<Vec2> velocities(n_v);
    std::vector<double> weights(n_v);
    for (int i = 0; i < n_v; ++i) {
        velocities[i] = {amps[i] * std::cos(thetas[i]), amps[i] * std::sin(thetas[i])};
        weights[i] = wrapped_normal_cdf(thetas[i], theta_pref, phase_sigma) *
                     normal_cdf(amp_sigma > 0.0 ? (amps[i] - amp_pref) / amp_sigma : 0.0);
    }
    return {std::move(velocities), std::move(weights)};
}

SpatialField rotate_extract(const SpatialField& big, const Grid2D& out_grid, double theta, Vec2 center,
                            Vec2 translation) {
    // Anticlockwise rotation of the field by theta about `center` means
    // sampling at the clockwise-rotated coordinate.
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    SpatialField out(out_grid);
    for (int i = 0; i < out_grid.n1; ++i) {
        for (int j = 0; j < out_grid.n2; ++j) {
            const Vec2 p = index_to_coord(out_grid, i, j);
            const double d1 = p.first - translation.first - center.first;
            const double d2 = p.second - translation.second - center.second;
            out.at(i, j) = sample_field(
                big, {center.first + c * d1 + s * d2, center.second - s * d1 + c * d2}, Interp::Bilinear);
        }
    }
    return out;
}

SpaceTimeField rotation_mixture_field(const SpatialField& big, const Grid2D& out_grid, int T,
                                      const RotationMixtureSpec& spec, RngStream& rng, double dt,
                                      std::vector<FrameMeta>* meta) {
    const Mat2 L = spec.translation.cholesky();
    SpaceTimeField out(out_grid, T, dt);
    try {
        for (int t = 0; t <= T; ++t) {
            const double time = t * dt;
            FrameMeta fm;
            fm.thetas.resize(spec.n_theta);
            for (int i = 0; i < spec.n_theta; ++i)
                fm.thetas[i] = wrap_angle(spec.phase.mu + spec.phase.sigma * rng.next_normal(),
                                          spec.phase.mu);
            const Vec2 v = draw_gaussian2(spec.translation.mu, L, rng);
            const Vec2 translation = v * time;
            const Vec2 center{spec.c0.first - translation.first, spec.c0.second - translation.second};

            fm.velocities = {v};
            fm.rotation_center = center;
            fm.weights_raw.resize(spec.n_theta);
            double total = 0.0;
            for (int i = 0; i < spec.n_theta; ++i) {
                fm.weights_raw[i] = wrapped_normal_cdf(fm.thetas[i], spec.phase.mu, spec.phase.sigma);
                total += fm.weights_raw[i];
            }
            if (!(total > 0.0)) total = 1.0;
            fm.weights_norm.resize(spec.n_theta);
            for (int i = 0; i < spec.n_theta; ++i) fm.weights_norm[i] = fm.weights_raw[i] / total;

            auto& frame = out.frames[t];
            frame = rotate_extract(big, out_grid, fm.thetas[0], center, translation).values;
            if (fm.weights_norm[0] != 1.0)
                for (double& x : frame) x *= fm.weights_norm[0];
            for (int m = 1; m < spec.n_theta; ++m) {
                const SpatialField term = rotate_extract(big, out_grid, fm.thetas[m], center, translation);
                for (std::size_t c = 0; c < frame.size(); ++c)
                    frame[c] += fm.weights_norm[m] * term.values[c];
            }
            push_meta(meta, std::move(fm));
        }
        return out;
    } catch (const OutOfDomainError& err) {
        replan_advice(err);
    }
}

SpaceTimeField evolving_field(const SpatialField& big, const Grid2D& out_grid, int T,
                              const FlowField& flow, double dt, std::vector<FrameMeta>* meta) {
    SpaceTimeField out(out_grid, T, dt);
    for (int t = 0; t <= T; ++t) {
        const double time = t * dt;
        for (int i = 0; i < out_grid.n1; ++i) {
            for (int j = 0; j < out_grid.n2; ++j) {
                const Vec2 s = index_to_coord(out_grid, i, j);
                const Vec2 v = flow.eval(s, time);
                out.at(t, i, j) = sample_field(
                    big, {s.first - v.first * time, s.second - v.second * time}, Interp::Bilinear);
            }
        }
        push_meta(meta, FrameMeta{});
    }
    return out;
}

SpaceTimeField plane_wave(const std::vector<double>& signal, double u0, const Grid2D& out_grid, int T,
                          Vec2 eta, double v, double dt) {
    if (v == 0.0) throw std::invalid_argument("plane_wave: velocity must be nonzero");
    if (signal.size() < 2) throw std::invalid_argument("plane_wave: signal needs at least 2 samples");
    const double u_max = u0 + static_cast<double>(signal.size() - 1);
    SpaceTimeField out(out_grid, T, dt);
    for (int t = 0; t <= T; ++t) {
        const double time = t * dt;
        for (int i = 0; i < out_grid.n1; ++i) {
            for (int j = 0; j < out_grid.n2; ++j) {
                const Vec2 s = index_to_coord(out_grid, i, j);
                const double u = time - (eta.first * s.first + eta.second * s.second) / v;
                if (u < u0 || u > u_max) {
                    std::ostringstream msg;
                    msg << "plane_wave: signal does not cover u = " << u << " (have [" << u0 << ", "
                        << u_max << "])";
                    throw std::out_of_range(msg.str());
                }
                const double pos = u - u0;
                const double f = std::floor(pos);
                const std::size_t i0 = static_cast<std::size_t>(f);
                const double frac = pos - f;
                out.at(t, i, j) = frac == 0.0 ? signal[i0]
                                              : (1.0 - frac) * signal[i0] + frac * signal[i0 + 1];
            }
        }
    }
    return out;
}

}  // namespace tfld
