// Parametric spatial and space-time spectral densities and their grid
// discretization.
//
// Conventions (used everywhere):
//  - wavenumbers/frequencies are angular, on the unit lattice, in (-pi, pi];
//  - the inverse DFT is unitary-inverse (divides by the total bin count), so
//    c(0,0) equals the mean of the discretized spectrum over all bins;
//  - singular bins are clamped: a power law is 0 at k = 0, the frequency-
//    dependent damped spectrum is 0 where its denominator vanishes, and the
//    orientationally persistent line |omega + k.v| is floored at eps_line
//    (half an omega bin) during discretization.
#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "travelfield/core.hpp"

namespace tfld {

// Isotropic covariance in coordinate units.
using CovarianceFn = std::function<double(double h1, double h2)>;

struct SpatialSpectrum {
    enum class Kind { PowerLaw, CompactCovariance };
    Kind kind = Kind::PowerLaw;

    double alpha = 2.0;  // PowerLaw: S_XX(k) = ||k||^-alpha

    // CompactCovariance: named radial base truncated at lag h0.
    // Bases: "exponential" exp(-r/rho), "gaussian" exp(-r^2/(2 rho^2)),
    // "wendland_c2" (1-r/h0)^4 (4 r/h0 + 1) (rho unused).
    std::string base = "exponential";
    double rho = 1.0;
    double h0 = 1.0;

    static SpatialSpectrum power_law(double alpha);
    static SpatialSpectrum compact(const std::string& base, double rho, double h0);

    void validate() const;

    // Radial covariance c0(r) truncated at h0 (CompactCovariance only).
    double covariance_at(double r) const;
    CovarianceFn covariance_fn() const;
};

struct SpectrumSpec {
    enum class Kind { PowerLaw, CompactCovariance, FrozenDelta, OrientPersistent, Damped, FreqDamped };
    Kind kind = Kind::PowerLaw;

    SpatialSpectrum spatial;  // the S_XX factor; kinds a/b are this alone
    Vec2 v{0.0, 0.0};
    double delta = 1.0;  // persistence exponent
    double h = 1.0;      // constant damping (Damped)
    double a = 1.0;      // frequency-proportional damping (FreqDamped)

    static SpectrumSpec power_law(double alpha);
    static SpectrumSpec compact(const std::string& base, double rho, double h0);
    static SpectrumSpec frozen_delta(SpatialSpectrum spatial, Vec2 v);
    static SpectrumSpec orient_persistent(SpatialSpectrum spatial, Vec2 v, double delta);
    static SpectrumSpec damped(SpatialSpectrum spatial, Vec2 v, double delta, double h);
    static SpectrumSpec freq_damped(SpatialSpectrum spatial, Vec2 v, double delta, double a);

    bool is_spatial() const { return kind == Kind::PowerLaw || kind == Kind::CompactCovariance; }

    // The paper defines the spectra for delta in (0, 1/2) but simulates with
    // delta = 2; both are accepted, this flag reports the mismatch.
    bool delta_outside_definition_range() const { return !(delta > 0.0 && delta < 0.5); }

    void validate() const;
};

// S_XX(k) for spatial specs (PowerLaw or CompactCovariance). PowerLaw clamps
// k = 0 to 0; CompactCovariance is evaluated by Hankel quadrature of the
// truncated radial base, with negative quadrature results clamped to 0.
double eval_spatial(const SpectrumSpec& spec, Vec2 k);
double eval_spatial(const SpatialSpectrum& spatial, Vec2 k);

// Pointwise S_ZZ(k, omega) for kinds c-f. eps_line floors |omega + k.v| in
// the orientationally persistent line factor (0 disables the clamp, in which
// case the value is +inf on the line). FrozenDelta has no pointwise value and
// throws std::invalid_argument; use delta_line() instead.
double eval_spacetime(const SpectrumSpec& spec, Vec2 k, double omega, double eps_line = 0.0);

struct DeltaLine {
    double support_omega = 0.0;  // the line omega = -k.v
    double mass = 0.0;           // S_XX(k)
};
DeltaLine delta_line(const SpectrumSpec& spec, Vec2 k);

// DFT bin frequencies for an (n1, n2, nt) grid, in (-pi, pi], built so that
// freq[mirror(j)] == -freq[j] bitwise (mirror(j) = (n - j) % n).
struct FreqGrid3 {
    int n1 = 0, n2 = 0, nt = 0;
    std::vector<double> k1, k2, omega;

    FreqGrid3() = default;
    FreqGrid3(int n1_, int n2_, int nt_);

    std::size_t size() const {
        return static_cast<std::size_t>(n1) * static_cast<std::size_t>(n2) * static_cast<std::size_t>(nt);
    }
    // Row-major with time slowest: idx = (t*n1 + i)*n2 + j.
    std::size_t index(int t, int i, int j) const {
        return (static_cast<std::size_t>(t) * n1 + i) * n2 + j;
    }
    double eps_line() const { return 3.14159265358979323846 / nt; }
};

inline int mirror_index(int j, int n) { return j == 0 ? 0 : n - j; }

// Antisymmetric DFT frequency ladder of length n (used by FreqGrid3 and the
// 2-D embedding spectra).
std::vector<double> dft_frequencies(int n);

// S_ZZ sampled on every bin of the grid, time slowest. Hermitian symmetry
// S(k, omega) = S(-k, -omega) holds bitwise; FrozenDelta places each column's
// mass on the bin nearest to the aliased line omega = -k.v.
std::vector<double> discretize_spectrum(const SpectrumSpec& spec, const FreqGrid3& grid);

// Unitary-inverse 3-D DFT of a nonnegative Hermitian-symmetric spectrum;
// throws std::runtime_error if the imaginary residue exceeds 1e-10 relative
// (symmetry violation).
std::vector<double> covariance_from_spectrum(const std::vector<double>& S, const FreqGrid3& grid);

}  // namespace tfld
