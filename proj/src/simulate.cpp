#include "travelfield/simulate.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "fft_backend.hpp"

namespace tfld {

namespace {

constexpr double kInvSqrt2 = 0.7071067811865475244;

std::size_t linear_index(const std::vector<int>& idx, const std::vector<int>& dims) {
    std::size_t lin = 0;
    for (std::size_t d = 0; d < dims.size(); ++d) lin = lin * dims[d] + idx[d];
    return lin;
}

// Fill `out` with amplitude[b] * xi[b] where xi is a Hermitian-symmetric
// field of complex standard Gaussians (E|xi|^2 = 1; self-conjugate bins get
// real N(0,1) draws). Bins are visited in row-major order; each pair is drawn
// at its first (lexicographically smaller) member, which fixes the stream
// layout for reproducibility.
void fill_hermitian_gaussian(const std::vector<double>& amplitude, const std::vector<int>& dims,
                             RngStream& rng, std::vector<std::complex<double>>& out) {
    const std::size_t total = amplitude.size();
    out.assign(total, {0.0, 0.0});
    std::vector<int> idx(dims.size(), 0);
    std::vector<int> mir(dims.size(), 0);
    for (std::size_t lin = 0; lin < total; ++lin) {
        for (std::size_t d = 0; d < dims.size(); ++d) mir[d] = mirror_index(idx[d], dims[d]);
        const std::size_t mlin = linear_index(mir, dims);
        if (lin < mlin) {
            double g1, g2;
            rng.next_normal_pair(g1, g2);
            const std::complex<double> xi{g1 * kInvSqrt2, g2 * kInvSqrt2};
            out[lin] = amplitude[lin] * xi;
            out[mlin] = amplitude[mlin] * std::conj(xi);
        } else if (lin == mlin) {
            out[lin] = amplitude[lin] * rng.next_normal();
        }
        for (int d = static_cast<int>(dims.size()) - 1; d >= 0; --d) {
            if (++idx[d] < dims[d]) break;
            idx[d] = 0;
        }
    }
}

// Backward FFT of the Hermitian field, checking that the imaginary residue is
// below 1e-10 relative before discarding it.
std::vector<double> realize(std::vector<std::complex<double>>& buf, const std::vector<int>& dims,
                            const char* what) {
    fft::backward(buf, dims);
    std::size_t total = 1;
    for (int d : dims) total *= static_cast<std::size_t>(d);
    const double norm = 1.0 / static_cast<double>(total);
    double max_abs = 0.0, max_imag = 0.0;
    for (const auto& z : buf) {
        max_abs = std::max(max_abs, std::abs(z.real()));
        max_imag = std::max(max_imag, std::abs(z.imag()));
    }
    if (max_imag > 1e-10 * std::max(max_abs, 1e-300))
        throw std::runtime_error(std::string(what) + ": Hermitian symmetry construction failed");
    std::vector<double> values(total);
    for (std::size_t i = 0; i < total; ++i) values[i] = buf[i].real() * norm;
    return values;
}

// Circulant eigenvalues in FFTW's half-spectrum layout: m1 rows of m2/2+1
// entries; interior columns (0 < j < m2 - j) stand for a conjugate pair of
// logical bins.
struct Embedding {
    std::vector<double> eigenvalues;  // clipped
    EmbeddingReport report;
};

void finalize_embedding(Embedding& e, int m1, int m2) {
    const int half = m2 / 2 + 1;
    double max_eig = 0.0, min_eig = 0.0, clipped = 0.0, total = 0.0;
    for (int i = 0; i < m1; ++i) {
        for (int j = 0; j < half; ++j) {
            double& lam = e.eigenvalues[static_cast<std::size_t>(i) * half + j];
            const double weight = (j == 0 || 2 * j == m2) ? 1.0 : 2.0;  // logical multiplicity
            max_eig = std::max(max_eig, lam);
            min_eig = std::min(min_eig, lam);
            total += weight * std::abs(lam);
            if (lam < 0.0) {
                clipped += weight * -lam;
                lam = 0.0;
            }
        }
    }
    e.report.m1 = m1;
    e.report.m2 = m2;
    e.report.min_eigenvalue = min_eig;
    e.report.clipped_mass_fraction = total > 0.0 ? clipped / total : 0.0;
    e.report.exact = min_eig >= -1e-10 * std::max(max_eig, 0.0);
    e.report.clip_warning = e.report.clipped_mass_fraction > 0.05;
}

// Eigenvalues = r2c DFT of the wrapped covariance row; boundary columns are
// symmetrized over their conjugate line so paired amplitudes match bitwise.
Embedding embed_covariance(const CovarianceFn& cov, double spacing, int m1, int m2) {
    std::vector<double> row(static_cast<std::size_t>(m1) * m2);
    for (int i = 0; i < m1; ++i) {
        const int l1 = i <= m1 / 2 ? i : i - m1;
        for (int j = 0; j < m2; ++j) {
            const int l2 = j <= m2 / 2 ? j : j - m2;
            const double c = cov(l1 * spacing, l2 * spacing);
            if (!std::isfinite(c))
                throw std::runtime_error("simulate_spatial_circulant: non-finite covariance value");
            row[static_cast<std::size_t>(i) * m2 + j] = c;
        }
    }
    const std::vector<std::complex<double>> spec = fft::forward_r2c(row, m1, m2);
    const int half = m2 / 2 + 1;

    Embedding e;
    e.eigenvalues.resize(spec.size());
    for (int i = 0; i < m1; ++i) {
        for (int j = 0; j < half; ++j) {
            double lam = spec[static_cast<std::size_t>(i) * half + j].real();
            if (j == 0 || 2 * j == m2) {
                const int mi = mirror_index(i, m1);
                lam = 0.5 * (lam + spec[static_cast<std::size_t>(mi) * half + j].real());
            }
            e.eigenvalues[static_cast<std::size_t>(i) * half + j] = lam;
        }
    }
    finalize_embedding(e, m1, m2);
    return e;
}

std::pair<SpatialField, EmbeddingReport> synthesize_embedded(const Embedding& e, const Grid2D& grid,
                                                             RngStream& rng) {
    const int m1 = e.report.m1, m2 = e.report.m2;
    const int half = m2 / 2 + 1;
    const double mtot = static_cast<double>(m1) * m2;
    std::vector<std::complex<double>> buf(e.eigenvalues.size());

    // Interior columns hold free complex Gaussians; the j = 0 and Nyquist
    // columns are self-conjugate lines and get the Hermitian 1-D treatment.
    // Draw order is row-major over the stored half-spectrum.
    for (int i = 0; i < m1; ++i) {
        for (int j = 0; j < half; ++j) {
            const std::size_t idx = static_cast<std::size_t>(i) * half + j;
            const double amp = std::sqrt(e.eigenvalues[idx] * mtot);
            if (j == 0 || 2 * j == m2) {
                const int mi = mirror_index(i, m1);
                if (i < mi) {
                    double g1, g2;
                    rng.next_normal_pair(g1, g2);
                    const std::complex<double> xi{g1 * kInvSqrt2, g2 * kInvSqrt2};
                    buf[idx] = amp * xi;
                    buf[static_cast<std::size_t>(mi) * half + j] = amp * std::conj(xi);
                } else if (i == mi) {
                    buf[idx] = amp * rng.next_normal();
                }
            } else {
                double g1, g2;
                rng.next_normal_pair(g1, g2);
                buf[idx] = amp * std::complex<double>{g1 * kInvSqrt2, g2 * kInvSqrt2};
            }
        }
    }

    std::vector<double> values = fft::backward_c2r(buf, m1, m2);
    const double norm = 1.0 / mtot;
    SpatialField out(grid);
    for (int i = 0; i < grid.n1; ++i)
        for (int j = 0; j < grid.n2; ++j)
            out.at(i, j) = values[static_cast<std::size_t>(i) * m2 + j] * norm;
    return {std::move(out), e.report};
}

}  // namespace

std::pair<SpatialField, EmbeddingReport> simulate_spatial_circulant(const CovarianceFn& cov,
                                                                    const Grid2D& grid, RngStream& rng) {
    if (grid.n1 < 2 || grid.n2 < 2)
        throw std::invalid_argument("simulate_spatial_circulant: grid dims must be >= 2");
    const int m1 = fft::next_fast_size(2 * grid.n1);
    const int m2 = fft::next_fast_size(2 * grid.n2);
    return synthesize_embedded(embed_covariance(cov, grid.spacing, m1, m2), grid, rng);
}

std::pair<SpatialField, EmbeddingReport> simulate_spatial_circulant(const SpectrumSpec& spec,
                                                                    const Grid2D& grid, RngStream& rng) {
    if (!spec.is_spatial())
        throw std::invalid_argument("simulate_spatial_circulant: requires a spatial spectrum (kinds a-b)");
    if (grid.n1 < 2 || grid.n2 < 2)
        throw std::invalid_argument("simulate_spatial_circulant: grid dims must be >= 2");
    if (spec.kind == SpectrumSpec::Kind::CompactCovariance)
        return simulate_spatial_circulant(spec.spatial.covariance_fn(), grid, rng);

    // Power law: the target covariance row is the inverse DFT of the clamped
    // spectrum on the doubled grid, so the embedding eigenvalues are that
    // spectrum itself (nonnegative by construction); the DFT round trip is
    // skipped.
    const int m1 = fft::next_fast_size(2 * grid.n1);
    const int m2 = fft::next_fast_size(2 * grid.n2);
    const int half = m2 / 2 + 1;
    const std::vector<double> f1 = dft_frequencies(m1);
    const std::vector<double> f2 = dft_frequencies(m2);
    Embedding e;
    e.eigenvalues.resize(static_cast<std::size_t>(m1) * half);
    for (int i = 0; i < m1; ++i) {
        for (int j = 0; j < half; ++j) {
            double lam = eval_spatial(spec.spatial, {f1[i], f2[j]});
            if (j == 0 || 2 * j == m2) {
                const int mi = mirror_index(i, m1);
                lam = 0.5 * (lam + eval_spatial(spec.spatial, {f1[mi], f2[j]}));
            }
            e.eigenvalues[static_cast<std::size_t>(i) * half + j] = lam;
        }
    }
    finalize_embedding(e, m1, m2);
    return synthesize_embedded(e, grid, rng);
}

SpaceTimeField synthesize_from_spectrum(const std::vector<double>& S, const FreqGrid3& grid,
                                        RngStream& rng, double dt) {
    if (S.size() != grid.size())
        throw std::invalid_argument("synthesize_from_spectrum: spectrum size does not match grid");
    const double mtot = static_cast<double>(grid.size());
    std::vector<double> amp(S.size());
    for (std::size_t i = 0; i < S.size(); ++i) {
        if (!(S[i] >= 0.0) || !std::isfinite(S[i]))
            throw std::invalid_argument("synthesize_from_spectrum: spectrum must be finite and >= 0");
        amp[i] = std::sqrt(S[i] * mtot);
    }
    std::vector<std::complex<double>> buf;
    fill_hermitian_gaussian(amp, {grid.nt, grid.n1, grid.n2}, rng, buf);
    std::vector<double> values = realize(buf, {grid.nt, grid.n1, grid.n2}, "simulate_spacetime_spectral");

    SpaceTimeField out(Grid2D(grid.n1, grid.n2), grid.nt - 1, dt);
    const std::size_t frame_size = out.grid.size();
    for (int t = 0; t < grid.nt; ++t)
        std::copy_n(values.begin() + static_cast<std::size_t>(t) * frame_size, frame_size,
                    out.frames[t].begin());
    return out;
}

SpaceTimeField simulate_spacetime_spectral(const SpectrumSpec& spec, const FreqGrid3& grid,
                                           RngStream& rng, double dt) {
    return synthesize_from_spectrum(discretize_spectrum(spec, grid), grid, rng, dt);
}

}  // namespace tfld
