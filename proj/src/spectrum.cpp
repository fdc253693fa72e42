#include "travelfield/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fft_backend.hpp"
#include "travelfield/rng.hpp"

namespace tfld {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

SpatialSpectrum SpatialSpectrum::power_law(double alpha) {
    SpatialSpectrum s;
    s.kind = Kind::PowerLaw;
    s.alpha = alpha;
    s.validate();
    return s;
}

SpatialSpectrum SpatialSpectrum::compact(const std::string& base, double rho, double h0) {
    SpatialSpectrum s;
    s.kind = Kind::CompactCovariance;
    s.base = base;
    s.rho = rho;
    s.h0 = h0;
    s.validate();
    return s;
}

void SpatialSpectrum::validate() const {
    if (kind == Kind::PowerLaw) {
        if (!(alpha > 0.0)) throw ConfigError("spectrum: alpha must be > 0");
        return;
    }
    if (base != "exponential" && base != "gaussian" && base != "wendland_c2")
        throw ConfigError("spectrum: unknown compact base '" + base + "'");
    if (!(h0 > 0.0)) throw ConfigError("spectrum: cutoff h0 must be > 0");
    if (base != "wendland_c2" && !(rho > 0.0)) throw ConfigError("spectrum: rho must be > 0");
}

double SpatialSpectrum::covariance_at(double r) const {
    if (kind != Kind::CompactCovariance)
        throw std::invalid_argument("covariance_at: spec has no covariance form");
    if (r > h0) return 0.0;
    if (base == "exponential") return std::exp(-r / rho);
    if (base == "gaussian") return std::exp(-r * r / (2.0 * rho * rho));
    const double u = 1.0 - r / h0;  // wendland_c2
    return u * u * u * u * (4.0 * r / h0 + 1.0);
}

CovarianceFn SpatialSpectrum::covariance_fn() const {
    SpatialSpectrum copy = *this;
    return [copy](double h1, double h2) { return copy.covariance_at(std::hypot(h1, h2)); };
}

SpectrumSpec SpectrumSpec::power_law(double alpha) {
    SpectrumSpec s;
    s.kind = Kind::PowerLaw;
    s.spatial = SpatialSpectrum::power_law(alpha);
    return s;
}

SpectrumSpec SpectrumSpec::compact(const std::string& base, double rho, double h0) {
    SpectrumSpec s;
    s.kind = Kind::CompactCovariance;
    s.spatial = SpatialSpectrum::compact(base, rho, h0);
    return s;
}

SpectrumSpec SpectrumSpec::frozen_delta(SpatialSpectrum spatial, Vec2 v) {
    SpectrumSpec s;
    s.kind = Kind::FrozenDelta;
    s.spatial = spatial;
    s.v = v;
    s.validate();
    return s;
}

SpectrumSpec SpectrumSpec::orient_persistent(SpatialSpectrum spatial, Vec2 v, double delta) {
    SpectrumSpec s;
    s.kind = Kind::OrientPersistent;
    s.spatial = spatial;
    s.v = v;
    s.delta = delta;
    s.validate();
    return s;
}

SpectrumSpec SpectrumSpec::damped(SpatialSpectrum spatial, Vec2 v, double delta, double h) {
    SpectrumSpec s;
    s.kind = Kind::Damped;
    s.spatial = spatial;
    s.v = v;
    s.delta = delta;
    s.h = h;
    s.validate();
    return s;
}

SpectrumSpec SpectrumSpec::freq_damped(SpatialSpectrum spatial, Vec2 v, double delta, double a) {
    SpectrumSpec s;
    s.kind = Kind::FreqDamped;
    s.spatial = spatial;
    s.v = v;
    s.delta = delta;
    s.a = a;
    s.validate();
    return s;
}

void SpectrumSpec::validate() const {
    spatial.validate();
    if (is_spatial()) return;
    if (!(delta > 0.0)) throw ConfigError("spectrum: delta must be > 0");
    if (kind == Kind::Damped && !(h > 0.0)) throw ConfigError("spectrum: damping h must be > 0");
    if (kind == Kind::FreqDamped && !(a > 0.0)) throw ConfigError("spectrum: damping a must be > 0");
    if (!std::isfinite(v.first) || !std::isfinite(v.second))
        throw ConfigError("spectrum: velocity must be finite");
}

namespace {

// (1/2pi) * int_0^h0 c0(r) J0(|k| r) r dr by composite Simpson, node count
// scaled with the support length and the Bessel oscillation count.
double hankel_spectrum(const SpatialSpectrum& spatial, double kmag) {
    const double h0 = spatial.h0;
    int n = 64 + 8 * static_cast<int>(std::ceil(h0)) + 16 * static_cast<int>(std::ceil(kmag * h0));
    if (n % 2) ++n;
    const double dr = h0 / n;
    double acc = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double r = i * dr;
        const double f = spatial.covariance_at(r) * std::cyl_bessel_j(0.0, kmag * r) * r;
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        acc += w * f;
    }
    const double integral = acc * dr / 3.0;
    return std::max(0.0, integral / (2.0 * kPi));
}

}  // namespace

double eval_spatial(const SpatialSpectrum& spatial, Vec2 k) {
    const double kmag2 = k.first * k.first + k.second * k.second;
    if (spatial.kind == SpatialSpectrum::Kind::PowerLaw) {
        if (kmag2 == 0.0) return 0.0;  // DC clamp: zero-mean field
        return std::pow(kmag2, -0.5 * spatial.alpha);
    }
    return hankel_spectrum(spatial, std::sqrt(kmag2));
}

double eval_spatial(const SpectrumSpec& spec, Vec2 k) {
    if (!spec.is_spatial()) throw std::invalid_argument("eval_spatial: spec is a space-time spectrum");
    return eval_spatial(spec.spatial, k);
}

double eval_spacetime(const SpectrumSpec& spec, Vec2 k, double omega, double eps_line) {
    const double sxx = eval_spatial(spec.spatial, k);
    const double line = omega + k.first * spec.v.first + k.second * spec.v.second;
    switch (spec.kind) {
        case SpectrumSpec::Kind::OrientPersistent: {
            const double m = std::max(std::abs(line), eps_line);
            return sxx * std::pow(m * m, -spec.delta);
        }
        case SpectrumSpec::Kind::Damped:
            return sxx * std::pow(line * line + spec.h * spec.h, -spec.delta);
        case SpectrumSpec::Kind::FreqDamped: {
            const double den = line * line + spec.a * omega * spec.a * omega;
            if (den == 0.0) return 0.0;  // omega = 0 on the line: no DC power
            return sxx * std::pow(den, -spec.delta);
        }
        case SpectrumSpec::Kind::FrozenDelta:
            throw std::invalid_argument(
                "eval_spacetime: FrozenDelta is a delta line, not pointwise evaluable; use delta_line()");
        default:
            throw std::invalid_argument("eval_spacetime: spec is purely spatial");
    }
}

DeltaLine delta_line(const SpectrumSpec& spec, Vec2 k) {
    if (spec.kind != SpectrumSpec::Kind::FrozenDelta)
        throw std::invalid_argument("delta_line: spec is not a FrozenDelta spectrum");
    return {-(k.first * spec.v.first + k.second * spec.v.second), eval_spatial(spec.spatial, k)};
}

std::vector<double> dft_frequencies(int n) {
    std::vector<double> f(n);
    f[0] = 0.0;
    for (int j = 1; j <= n / 2; ++j) f[j] = 2.0 * kPi * j / n;
    // Negative half mirrors the positive half bitwise.
    for (int j = n / 2 + 1; j < n; ++j) f[j] = -f[n - j];
    return f;
}

FreqGrid3::FreqGrid3(int n1_, int n2_, int nt_) : n1(n1_), n2(n2_), nt(nt_) {
    if (n1 < 2 || n2 < 2 || nt < 2) throw std::invalid_argument("FreqGrid3: dims must be >= 2");
    k1 = dft_frequencies(n1);
    k2 = dft_frequencies(n2);
    omega = dft_frequencies(nt);
}

namespace {

void discretize_frozen_delta(const SpectrumSpec& spec, const FreqGrid3& g, std::vector<double>& S) {
    // Place each spatial column's mass on the omega bin nearest to the
    // aliased line. Columns are filled in mirror pairs so Hermitian symmetry
    // is exact regardless of tie-breaking.
    for (int i = 0; i < g.n1; ++i) {
        for (int j = 0; j < g.n2; ++j) {
            const int mi = mirror_index(i, g.n1);
            const int mj = mirror_index(j, g.n2);
            if (std::make_pair(i, j) > std::make_pair(mi, mj)) continue;
            const Vec2 k{g.k1[i], g.k2[j]};
            const DeltaLine line = delta_line(spec, k);
            const double target = wrap_angle(line.support_omega);
            int best = 0;
            double best_dist = 1e300;
            for (int t = 0; t < g.nt; ++t) {
                double d = std::abs(wrap_angle(g.omega[t] - target));
                if (d < best_dist) {
                    best_dist = d;
                    best = t;
                }
            }
            S[g.index(best, i, j)] = line.mass;
            S[g.index(mirror_index(best, g.nt), mi, mj)] = line.mass;
        }
    }
}

}  // namespace

std::vector<double> discretize_spectrum(const SpectrumSpec& spec, const FreqGrid3& grid) {
    spec.validate();
    if (spec.is_spatial())
        throw std::invalid_argument("discretize_spectrum: requires a space-time spectrum (kinds c-f)");
    std::vector<double> S(grid.size(), 0.0);
    if (spec.kind == SpectrumSpec::Kind::FrozenDelta) {
        discretize_frozen_delta(spec, grid, S);
        return S;
    }
    // Evaluate each mirror pair once and copy: a Nyquist component reads +pi
    // while its mirror is the same bin, so independent evaluation would break
    // the exact S(k, omega) = S(-k, -omega) pairing.
    const double eps = grid.eps_line();
    for (int i = 0; i < grid.n1; ++i) {
        for (int j = 0; j < grid.n2; ++j) {
            const int mi = mirror_index(i, grid.n1);
            const int mj = mirror_index(j, grid.n2);
            const bool self_column = std::make_pair(i, j) == std::make_pair(mi, mj);
            if (std::make_pair(i, j) > std::make_pair(mi, mj)) continue;
            const double sxx = eval_spatial(spec.spatial, {grid.k1[i], grid.k2[j]});
            for (int t = 0; t < grid.nt; ++t) {
                const int mt = mirror_index(t, grid.nt);
                if (self_column && mt < t) continue;
                const double line = grid.omega[t] + grid.k1[i] * spec.v.first + grid.k2[j] * spec.v.second;
                double value;
                switch (spec.kind) {
                    case SpectrumSpec::Kind::OrientPersistent: {
                        const double m = std::max(std::abs(line), eps);
                        value = sxx * std::pow(m * m, -spec.delta);
                        break;
                    }
                    case SpectrumSpec::Kind::Damped:
                        value = sxx * std::pow(line * line + spec.h * spec.h, -spec.delta);
                        break;
                    default: {  // FreqDamped
                        const double aw = spec.a * grid.omega[t];
                        const double den = line * line + aw * aw;
                        value = den == 0.0 ? 0.0 : sxx * std::pow(den, -spec.delta);
                        break;
                    }
                }
                S[grid.index(t, i, j)] = value;
                S[grid.index(mt, mi, mj)] = value;
            }
        }
    }
    return S;
}

std::vector<double> covariance_from_spectrum(const std::vector<double>& S, const FreqGrid3& grid) {
    if (S.size() != grid.size())
        throw std::invalid_argument("covariance_from_spectrum: spectrum size does not match grid");
    std::vector<std::complex<double>> buf(S.begin(), S.end());
    fft::backward(buf, {grid.nt, grid.n1, grid.n2});
    const double norm = 1.0 / static_cast<double>(grid.size());
    double max_abs = 0.0, max_imag = 0.0;
    for (auto& z : buf) {
        max_abs = std::max(max_abs, std::abs(z.real()) * norm);
        max_imag = std::max(max_imag, std::abs(z.imag()) * norm);
    }
    if (max_imag > 1e-10 * std::max(max_abs, 1e-300))
        throw std::runtime_error("covariance_from_spectrum: spectrum is not Hermitian-symmetric");
    std::vector<double> c(S.size());
    for (std::size_t idx = 0; idx < c.size(); ++idx) c[idx] = buf[idx].real() * norm;
    return c;
}

}  // namespace tfld
