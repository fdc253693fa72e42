#include "travelfield/diagnostics.hpp"

#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>

#include "fft_backend.hpp"

namespace tfld {

CovEstimate empirical_cov(const std::vector<SpaceTimeField>& ensemble,
                          const std::vector<std::pair<int, int>>& lags_h,
                          const std::vector<int>& lags_tau) {
    if (ensemble.size() < 2) throw std::invalid_argument("empirical_cov: need >= 2 realizations");
    const Grid2D& grid = ensemble.front().grid;
    const int T = ensemble.front().epochs();
    for (const auto& f : ensemble)
        if (!(f.grid == grid) || f.epochs() != T)
            throw std::invalid_argument("empirical_cov: realizations must share grid and epochs");
    for (const auto& [h1, h2] : lags_h)
        if (std::abs(h1) >= grid.n1 || std::abs(h2) >= grid.n2)
            throw std::out_of_range("empirical_cov: spatial lag exceeds grid");
    for (int tau : lags_tau)
        if (std::abs(tau) > T) throw std::out_of_range("empirical_cov: temporal lag exceeds epochs");

    const std::size_t n_cells = lags_h.size() * lags_tau.size();
    std::vector<double> sum(n_cells, 0.0), sumsq(n_cells, 0.0);
    for (const auto& f : ensemble) {
        std::size_t cell = 0;
        for (const auto& [h1, h2] : lags_h) {
            for (int tau : lags_tau) {
                const int i_lo = std::max(0, -h1), i_hi = grid.n1 - std::max(0, h1);
                const int j_lo = std::max(0, -h2), j_hi = grid.n2 - std::max(0, h2);
                const int t_lo = std::max(0, -tau), t_hi = T + 1 - std::max(0, tau);
                double acc = 0.0;
                std::size_t count = 0;
                for (int t = t_lo; t < t_hi; ++t) {
                    for (int i = i_lo; i < i_hi; ++i) {
                        for (int j = j_lo; j < j_hi; ++j) {
                            acc += f.at(t, i, j) * f.at(t + tau, i + h1, j + h2);
                            ++count;
                        }
                    }
                }
                const double est = count ? acc / static_cast<double>(count) : 0.0;
                sum[cell] += est;
                sumsq[cell] += est * est;
                ++cell;
            }
        }
    }

    CovEstimate out;
    out.lags_h = lags_h;
    out.lags_tau = lags_tau;
    out.n_realizations = static_cast<int>(ensemble.size());
    out.values.resize(n_cells);
    out.std_errors.resize(n_cells);
    const double m = static_cast<double>(ensemble.size());
    for (std::size_t c = 0; c < n_cells; ++c) {
        out.values[c] = sum[c] / m;
        const double var = std::max(0.0, (sumsq[c] - sum[c] * sum[c] / m) / (m - 1.0));
        out.std_errors[c] = std::sqrt(var / m);
    }
    return out;
}

std::vector<double> periodogram3(const SpaceTimeField& field) {
    const int n1 = field.grid.n1, n2 = field.grid.n2, nt = field.epochs() + 1;
    const std::size_t total = static_cast<std::size_t>(n1) * n2 * nt;
    std::vector<std::complex<double>> buf(total);
    const std::size_t frame_size = field.grid.size();
    for (int t = 0; t < nt; ++t)
        for (std::size_t c = 0; c < frame_size; ++c) buf[t * frame_size + c] = field.frames[t][c];
    fft::forward(buf, {nt, n1, n2});
    std::vector<double> P(total);
    const double norm = 1.0 / static_cast<double>(total);
    for (std::size_t b = 0; b < total; ++b) P[b] = std::norm(buf[b]) * norm;
    return P;
}

PathPrediction propagation_path(const FlowField& flow, Vec2 s, double t, double tau) {
    const Vec2 v = flow.eval(s, t);
    const Jacobian2 J = flow.jacobian(s, t);
    const double scale = t + tau;
    // A = I - D_s * (t + tau)
    const double a11 = 1.0 - J.ds[0][0] * scale;
    const double a12 = -J.ds[0][1] * scale;
    const double a21 = -J.ds[1][0] * scale;
    const double a22 = 1.0 - J.ds[1][1] * scale;
    const double det = a11 * a22 - a12 * a21;
    const double norm1 = std::max(std::abs(a11) + std::abs(a21), std::abs(a12) + std::abs(a22));
    if (det == 0.0 || norm1 * norm1 / std::abs(det) > 1e8) {
        std::ostringstream msg;
        msg << "propagation_path: I - D_s(s,t)(t+tau) is singular at s = (" << s.first << "," << s.second
            << "), t = " << t;
        throw std::domain_error(msg.str());
    }
    const double b1 = (v.first + J.dt.first * scale) * tau;
    const double b2 = (v.second + J.dt.second * scale) * tau;
    PathPrediction p;
    p.base_point = s;
    p.base_time = t;
    p.tau = tau;
    p.predicted_offset = {(a22 * b1 - a12 * b2) / det, (-a21 * b1 + a11 * b2) / det};
    return p;
}

SpaceTimeField cholesky_oracle(const CovarianceFn& cov, const Grid2D& grid, int T, Vec2 v,
                               RngStream& rng, double dt) {
    const std::size_t n_pts = grid.size() * static_cast<std::size_t>(T + 1);
    if (n_pts > 4096) throw std::invalid_argument("cholesky_oracle: more than 4096 space-time points");

    // Full covariance over points ordered (t, i, j), C = c_XX(h - v*tau).
    std::vector<double> C(n_pts * n_pts);
    std::vector<Vec2> coords(n_pts);
    std::vector<double> times(n_pts);
    std::size_t p = 0;
    for (int t = 0; t <= T; ++t)
        for (int i = 0; i < grid.n1; ++i)
            for (int j = 0; j < grid.n2; ++j) {
                coords[p] = index_to_coord(grid, i, j);
                times[p] = t * dt;
                ++p;
            }
    for (std::size_t r = 0; r < n_pts; ++r) {
        for (std::size_t c = 0; c <= r; ++c) {
            const double tau = times[r] - times[c];
            const double h1 = coords[r].first - coords[c].first - v.first * tau;
            const double h2 = coords[r].second - coords[c].second - v.second * tau;
            const double value = cov(h1, h2);
            C[r * n_pts + c] = value;
            C[c * n_pts + r] = value;
        }
    }
    for (std::size_t d = 0; d < n_pts; ++d) C[d * n_pts + d] += 1e-10 * C[d * n_pts + d];

    // In-place lower Cholesky.
    for (std::size_t c = 0; c < n_pts; ++c) {
        double diag = C[c * n_pts + c];
        for (std::size_t k = 0; k < c; ++k) diag -= C[c * n_pts + k] * C[c * n_pts + k];
        if (!(diag > 0.0))
            throw std::runtime_error("cholesky_oracle: covariance not positive definite after jitter");
        const double root = std::sqrt(diag);
        C[c * n_pts + c] = root;
        for (std::size_t r = c + 1; r < n_pts; ++r) {
            double acc = C[r * n_pts + c];
            for (std::size_t k = 0; k < c; ++k) acc -= C[r * n_pts + k] * C[c * n_pts + k];
            C[r * n_pts + c] = acc / root;
        }
        for (std::size_t r = 0; r < c; ++r) C[r * n_pts + c] = 0.0;
    }

    std::vector<double> z(n_pts);
    for (auto& x : z) x = rng.next_normal();
    SpaceTimeField out(grid, T, dt);
    const std::size_t frame_size = grid.size();
    for (std::size_t r = 0; r < n_pts; ++r) {
        double acc = 0.0;
        for (std::size_t k = 0; k <= r; ++k) acc += C[r * n_pts + k] * z[k];
        out.frames[r / frame_size][r % frame_size] = acc;
    }
    return out;
}

}  // namespace tfld
