#include "travelfield/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tfld {

Vec2 index_to_coord(const Grid2D& grid, int i, int j) {
    if (i < 0 || i >= grid.n1 || j < 0 || j >= grid.n2) {
        std::ostringstream msg;
        msg << "index (" << i << "," << j << ") outside grid " << grid.n1 << "x" << grid.n2;
        throw std::out_of_range(msg.str());
    }
    return {grid.origin.first + grid.spacing * i, grid.origin.second + grid.spacing * j};
}

std::pair<int, int> coord_to_index(const Grid2D& grid, Vec2 coord) {
    const double u = (coord.first - grid.origin.first) / grid.spacing;
    const double v = (coord.second - grid.origin.second) / grid.spacing;
    const int i = static_cast<int>(std::lround(u));
    const int j = static_cast<int>(std::lround(v));
    if (i < 0 || i >= grid.n1 || j < 0 || j >= grid.n2) {
        throw std::out_of_range("coordinate outside grid");
    }
    return {i, j};
}

bool SpatialField::all_finite() const {
    for (double v : values) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

namespace {

[[noreturn]] void throw_out_of_domain(const SpatialField& big, double u1, double u2, int margin) {
    // Overshoot in index units tells the caller how much bigger the extended
    // grid would have needed to be.
    const double over1 = std::max(-u1, u1 - (big.grid.n1 - 1));
    const double over2 = std::max(-u2, u2 - (big.grid.n2 - 1));
    const double over = std::max({over1, over2, 0.0});
    const int required = std::max(big.grid.n1, big.grid.n2) + static_cast<int>(std::ceil(over)) + margin;
    std::ostringstream msg;
    msg << "sample index (" << u1 << "," << u2 << ") outside extended field " << big.grid.n1 << "x"
        << big.grid.n2 << "; extended grid of at least " << required << " cells required";
    throw OutOfDomainError(msg.str(), required);
}

double sample_index(const SpatialField& big, double u1, double u2, Interp interp) {
    const int n1 = big.grid.n1;
    const int n2 = big.grid.n2;
    if (interp == Interp::Nearest) {
        const double r1 = std::floor(u1 + 0.5);
        const double r2 = std::floor(u2 + 0.5);
        if (r1 < 0 || r1 > n1 - 1 || r2 < 0 || r2 > n2 - 1) throw_out_of_domain(big, u1, u2, 1);
        return big.at(static_cast<int>(r1), static_cast<int>(r2));
    }
    if (u1 < 0 || u1 > n1 - 1 || u2 < 0 || u2 > n2 - 1) throw_out_of_domain(big, u1, u2, 1);
    const double f1 = std::floor(u1);
    const double f2 = std::floor(u2);
    int i0 = static_cast<int>(f1);
    int j0 = static_cast<int>(f2);
    const double a = u1 - f1;
    const double b = u2 - f2;
    // Exact pass-through on integer coordinates (keeps frozen-field frames
    // bitwise equal to the source block, including signed zeros).
    if (a == 0.0 && b == 0.0) return big.at(i0, j0);
    if (a == 0.0) return (1.0 - b) * big.at(i0, j0) + b * big.at(i0, j0 + 1);
    if (b == 0.0) return (1.0 - a) * big.at(i0, j0) + a * big.at(i0 + 1, j0);
    return (1.0 - a) * ((1.0 - b) * big.at(i0, j0) + b * big.at(i0, j0 + 1)) +
           a * ((1.0 - b) * big.at(i0 + 1, j0) + b * big.at(i0 + 1, j0 + 1));
}

}  // namespace

double sample_field(const SpatialField& big, Vec2 coord, Interp interp) {
    const double u1 = (coord.first - big.grid.origin.first) / big.grid.spacing;
    const double u2 = (coord.second - big.grid.origin.second) / big.grid.spacing;
    return sample_index(big, u1, u2, interp);
}

SpatialField window_extract(const SpatialField& big, Vec2 offset, const Grid2D& out_grid, Interp interp) {
    SpatialField out(out_grid);
    const double inv = 1.0 / big.grid.spacing;
    // Index of the output origin in the source, shifted against the offset.
    const double base1 = (out_grid.origin.first - offset.first - big.grid.origin.first) * inv;
    const double base2 = (out_grid.origin.second - offset.second - big.grid.origin.second) * inv;
    const double step = out_grid.spacing * inv;

    // Aligned integer shifts are plain row copies (and the common case for
    // frozen fields).
    if (step == 1.0 && base1 == std::floor(base1) && base2 == std::floor(base2)) {
        const int b1 = static_cast<int>(base1);
        const int b2 = static_cast<int>(base2);
        if (b1 < 0 || b2 < 0 || b1 + out_grid.n1 > big.grid.n1 || b2 + out_grid.n2 > big.grid.n2)
            throw_out_of_domain(big, b1 < 0 ? base1 : base1 + out_grid.n1 - 1,
                                b2 < 0 ? base2 : base2 + out_grid.n2 - 1, 1);
        for (int i = 0; i < out_grid.n1; ++i) {
            const double* src = &big.values[static_cast<std::size_t>(b1 + i) * big.grid.n2 + b2];
            std::copy(src, src + out_grid.n2, &out.values[static_cast<std::size_t>(i) * out_grid.n2]);
        }
        return out;
    }

    for (int i = 0; i < out_grid.n1; ++i) {
        const double u1 = base1 + step * i;
        for (int j = 0; j < out_grid.n2; ++j) {
            out.at(i, j) = sample_index(big, u1, base2 + step * j, interp);
        }
    }
    return out;
}

}  // namespace tfld
