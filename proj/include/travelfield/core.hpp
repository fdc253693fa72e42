// Grid geometry and field containers shared by all generators.
#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tfld {

using Vec2 = std::pair<double, double>;

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.first + b.first, a.second + b.second}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.first - b.first, a.second - b.second}; }
inline Vec2 operator*(Vec2 a, double s) { return {a.first * s, a.second * s}; }

// Raised when a sampling footprint leaves the extended field. Carries the
// extended size that would have been needed so callers can re-plan.
class OutOfDomainError : public std::runtime_error {
public:
    OutOfDomainError(const std::string& msg, int required_size)
        : std::runtime_error(msg), required_size_(required_size) {}
    int required_size() const { return required_size_; }

private:
    int required_size_ = 0;
};

class PlanningError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Regular 2-D grid. Cell (i,j) sits at origin + spacing*(i,j); axis 1 is the
// first coordinate and the slow (row-major) index.
struct Grid2D {
    int n1 = 1;
    int n2 = 1;
    double spacing = 1.0;
    Vec2 origin{0.0, 0.0};

    Grid2D() = default;
    Grid2D(int n1_, int n2_, double spacing_ = 1.0, Vec2 origin_ = {0.0, 0.0})
        : n1(n1_), n2(n2_), spacing(spacing_), origin(origin_) {
        if (n1 < 1 || n2 < 1) throw std::invalid_argument("Grid2D: grid dimensions must be >= 1");
        if (!(spacing > 0.0)) throw std::invalid_argument("Grid2D: spacing must be > 0");
    }

    std::size_t size() const { return static_cast<std::size_t>(n1) * static_cast<std::size_t>(n2); }

    bool operator==(const Grid2D& o) const {
        return n1 == o.n1 && n2 == o.n2 && spacing == o.spacing && origin == o.origin;
    }
};

// Coordinate of cell (i,j); throws std::out_of_range for indices off the grid.
Vec2 index_to_coord(const Grid2D& grid, int i, int j);

// Inverse of index_to_coord for in-range coordinates; exact for values
// produced by index_to_coord.
std::pair<int, int> coord_to_index(const Grid2D& grid, Vec2 coord);

// Real scalar field on a Grid2D, row-major: values[i*n2 + j].
struct SpatialField {
    Grid2D grid;
    std::vector<double> values;

    SpatialField() = default;
    explicit SpatialField(const Grid2D& g, double fill = 0.0) : grid(g), values(g.size(), fill) {}

    double& at(int i, int j) { return values[static_cast<std::size_t>(i) * grid.n2 + j]; }
    double at(int i, int j) const { return values[static_cast<std::size_t>(i) * grid.n2 + j]; }

    // All values finite; generators assert this before returning.
    bool all_finite() const;
};

// Stack of T+1 frames on one grid; frame index t is physical time t*dt.
struct SpaceTimeField {
    Grid2D grid;
    double dt = 1.0;
    std::vector<std::vector<double>> frames;

    SpaceTimeField() = default;
    SpaceTimeField(const Grid2D& g, int epochs, double dt_ = 1.0)
        : grid(g), dt(dt_), frames(static_cast<std::size_t>(epochs) + 1, std::vector<double>(g.size(), 0.0)) {
        if (epochs < 0) throw std::invalid_argument("SpaceTimeField: epochs must be >= 0");
        if (!(dt > 0.0)) throw std::invalid_argument("SpaceTimeField: dt must be > 0");
    }

    int epochs() const { return static_cast<int>(frames.size()) - 1; }
    double& at(int t, int i, int j) { return frames[t][static_cast<std::size_t>(i) * grid.n2 + j]; }
    double at(int t, int i, int j) const { return frames[t][static_cast<std::size_t>(i) * grid.n2 + j]; }
};

enum class Interp { Nearest, Bilinear };

// Returns the window content of `big` translated by `offset`: the output cell
// at coordinate c carries the source value at c - offset, so positive offsets
// move content toward larger coordinates (a frozen field with velocity v uses
// offset = v*t). Integer offsets reproduce source values bitwise under either
// interpolation mode.
SpatialField window_extract(const SpatialField& big, Vec2 offset, const Grid2D& out_grid,
                            Interp interp = Interp::Bilinear);

// Single-point version of the same sampling convention: value of `big` at an
// absolute coordinate. Throws OutOfDomainError outside the (interpolation-
// aware) footprint.
double sample_field(const SpatialField& big, Vec2 coord, Interp interp);

}  // namespace tfld
