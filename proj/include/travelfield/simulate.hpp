// Gaussian field synthesis: 2-D circulant embedding for spatial fields and
// 3-D spectral (Davis-Harte style) synthesis for space-time spectra. The
// spectral method is approximate (the pointwise-sampled spectrum stands in
// for the embedding eigenvalues); the embedding method is exact whenever the
// wrapped covariance is nonnegative definite.
#pragma once

#include "travelfield/core.hpp"
#include "travelfield/rng.hpp"
#include "travelfield/spectrum.hpp"

namespace tfld {

struct EmbeddingReport {
    int m1 = 0, m2 = 0;                 // embedding dimensions
    double min_eigenvalue = 0.0;
    double clipped_mass_fraction = 0.0;  // sum of clipped |eigenvalues| / sum |eigenvalues|
    bool exact = false;                  // min_eigenvalue >= -tol_eig
    bool clip_warning = false;           // clipped_mass_fraction > 0.05
};

// One zero-mean realization whose covariance is the wrapped/embedded target.
// PowerLaw specs derive their covariance row from the inverse DFT of the
// clamped spectrum on the doubled grid; compact specs evaluate the covariance
// directly. Negative embedding eigenvalues are clipped to zero and reported.
std::pair<SpatialField, EmbeddingReport> simulate_spatial_circulant(const SpectrumSpec& spec,
                                                                    const Grid2D& grid, RngStream& rng);
std::pair<SpatialField, EmbeddingReport> simulate_spatial_circulant(const CovarianceFn& cov,
                                                                    const Grid2D& grid, RngStream& rng);

// Z = inverse 3-D DFT of sqrt(S[b]) * xi[b] with Hermitian-symmetric complex
// standard Gaussians xi (self-conjugate bins carry real unit-variance draws),
// normalized so the periodogram expectation equals the discretized target.
SpaceTimeField simulate_spacetime_spectral(const SpectrumSpec& spec, const FreqGrid3& grid,
                                           RngStream& rng, double dt = 1.0);

// Same synthesis from an already-discretized spectrum (t-major layout).
SpaceTimeField synthesize_from_spectrum(const std::vector<double>& S, const FreqGrid3& grid,
                                        RngStream& rng, double dt = 1.0);

}  // namespace tfld
