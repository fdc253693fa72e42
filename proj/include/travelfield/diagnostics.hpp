// Statistical and analytical verification tools: empirical covariance and
// periodogram estimators, the propagation-path predictor for evolving fields,
// and a tiny-grid exact Cholesky oracle.
#pragma once

#include <vector>

#include "travelfield/core.hpp"
#include "travelfield/flows.hpp"
#include "travelfield/rng.hpp"
#include "travelfield/spectrum.hpp"

namespace tfld {

struct CovEstimate {
    std::vector<std::pair<int, int>> lags_h;
    std::vector<int> lags_tau;
    std::vector<double> values;      // [h_index * lags_tau.size() + tau_index]
    std::vector<double> std_errors;  // across-realization standard errors
    int n_realizations = 0;

    double value(std::size_t hi, std::size_t ti) const { return values[hi * lags_tau.size() + ti]; }
    double std_error(std::size_t hi, std::size_t ti) const {
        return std_errors[hi * lags_tau.size() + ti];
    }
};

// Cross-moment estimate of cov{Z(s,t), Z(s+h,t+tau)} averaged over the valid
// (edge-respecting, no wraparound) pairs of each realization, then across
// realizations. The fields are zero-mean by construction, so no mean is
// subtracted. Standard errors come from the across-realization spread.
CovEstimate empirical_cov(const std::vector<SpaceTimeField>& ensemble,
                          const std::vector<std::pair<int, int>>& lags_h,
                          const std::vector<int>& lags_tau);

// |DFT3(Z)|^2 / (n1*n2*nt), t-major layout; with this normalization the
// expectation for spectrally synthesized fields equals the discretized
// target, and the total mass equals the field's sum of squares (Parseval).
std::vector<double> periodogram3(const SpaceTimeField& field);

struct PathPrediction {
    Vec2 base_point{0.0, 0.0};
    double base_time = 0.0;
    double tau = 0.0;
    Vec2 predicted_offset{0.0, 0.0};
};

// Propagation path of an evolving frozen field:
// offset = (I - D_s(s,t)(t+tau))^{-1} {v(s,t) + D_t(s,t)(t+tau)} tau.
// Throws std::domain_error when the matrix is singular (condition > 1e8).
PathPrediction propagation_path(const FlowField& flow, Vec2 s, double t, double tau);

// Exact Gaussian draw from the full space-time covariance c_XX(h - v tau) on
// a tiny grid (n1*n2*(T+1) <= 4096 points); jitter 1e-10*diag is added before
// the Cholesky factorization.
SpaceTimeField cholesky_oracle(const CovarianceFn& cov, const Grid2D& grid, int T, Vec2 v,
                               RngStream& rng, double dt = 1.0);

}  // namespace tfld
