#include "travelfield/flows.hpp"

#include <cmath>
#include <stdexcept>

namespace tfld {

FlowField FlowField::constant(Vec2 v) {
    FlowField f;
    f.kind = Kind::Constant;
    f.v0 = v;
    return f;
}

FlowField FlowField::stagnation(double k) {
    FlowField f;
    f.kind = Kind::Stagnation;
    f.k = k;
    return f;
}

FlowField FlowField::rigid_rotation(double k) {
    FlowField f;
    f.kind = Kind::RigidRotation;
    f.k = k;
    return f;
}

FlowField FlowField::vortex(double k) {
    FlowField f;
    f.kind = Kind::Vortex;
    f.k = k;
    return f;
}

FlowField FlowField::source_sink(double k) {
    FlowField f;
    f.kind = Kind::SourceSink;
    f.k = k;
    return f;
}

FlowField FlowField::spiral() {
    FlowField f;
    f.kind = Kind::Spiral;
    return f;
}

FlowField FlowField::tabulated(const Grid2D& grid, std::vector<std::vector<double>> v1,
                               std::vector<std::vector<double>> v2, double dt) {
    if (v1.empty() || v1.size() != v2.size())
        throw std::invalid_argument("FlowField: tabulated components must have matching epoch counts");
    for (const auto& frame : v1)
        if (frame.size() != grid.size()) throw std::invalid_argument("FlowField: table size mismatch");
    for (const auto& frame : v2)
        if (frame.size() != grid.size()) throw std::invalid_argument("FlowField: table size mismatch");
    FlowField f;
    f.kind = Kind::Tabulated;
    f.table_grid = grid;
    f.table_v1 = std::move(v1);
    f.table_v2 = std::move(v2);
    f.table_dt = dt;
    return f;
}

FlowField FlowField::from_name(const std::string& name, double k, Vec2 v0) {
    if (name == "constant") return constant(v0);
    if (name == "stagnation") return stagnation(k);
    if (name == "rigid_rotation") return rigid_rotation(k);
    if (name == "vortex") return vortex(k);
    if (name == "source_sink") return source_sink(k);
    if (name == "spiral") return spiral();
    throw ConfigError("unknown flow field '" + name + "'");
}

std::string FlowField::name() const {
    switch (kind) {
        case Kind::Constant: return "constant";
        case Kind::Stagnation: return "stagnation";
        case Kind::RigidRotation: return "rigid_rotation";
        case Kind::Vortex: return "vortex";
        case Kind::SourceSink: return "source_sink";
        case Kind::Spiral: return "spiral";
        default: return "tabulated";
    }
}

namespace {

[[noreturn]] void singular(const char* flow) {
    throw std::domain_error(std::string(flow) + " flow is singular at s = (0,0)");
}

double table_lookup(const FlowField& f, const std::vector<std::vector<double>>& comp, Vec2 s, double t) {
    const auto [i, j] = coord_to_index(f.table_grid, s);
    int epoch = static_cast<int>(std::lround(t / f.table_dt));
    epoch = std::max(0, std::min<int>(epoch, static_cast<int>(comp.size()) - 1));
    return comp[epoch][static_cast<std::size_t>(i) * f.table_grid.n2 + j];
}

}  // namespace

Vec2 FlowField::eval(Vec2 s, double t) const {
    switch (kind) {
        case Kind::Constant:
            return v0;
        case Kind::Stagnation:
            return {k * s.first, -k * s.second};
        case Kind::RigidRotation:
            return {-k * s.second, k * s.first};
        case Kind::Vortex: {
            const double r = std::hypot(s.first, s.second);
            if (r == 0.0) singular("vortex");
            return {-k * s.second / r, k * s.first / r};
        }
        case Kind::SourceSink: {
            const double r = std::hypot(s.first, s.second);
            if (r == 0.0) singular("source_sink");
            return {k * s.first / r, k * s.second / r};
        }
        case Kind::Spiral: {
            const double radius = 0.5 * std::hypot(s.first, s.second);
            const double scale = 1.0 / (t + 1.0);
            return {radius * std::cos(t) * scale, radius * std::sin(t) * scale};
        }
        default:
            return {table_lookup(*this, table_v1, s, t), table_lookup(*this, table_v2, s, t)};
    }
}

Jacobian2 FlowField::jacobian(Vec2 s, double t) const {
    Jacobian2 J;
    switch (kind) {
        case Kind::Constant:
            return J;
        case Kind::Stagnation:
            J.ds = {{{k, 0.0}, {0.0, -k}}};
            return J;
        case Kind::RigidRotation:
            J.ds = {{{0.0, -k}, {k, 0.0}}};
            return J;
        case Kind::Vortex: {
            const double r = std::hypot(s.first, s.second);
            if (r == 0.0) singular("vortex");
            const double r3 = r * r * r;
            J.ds = {{{k * s.first * s.second / r3, -k * s.first * s.first / r3},
                     {k * s.second * s.second / r3, -k * s.first * s.second / r3}}};
            return J;
        }
        case Kind::SourceSink: {
            const double r = std::hypot(s.first, s.second);
            if (r == 0.0) singular("source_sink");
            const double r3 = r * r * r;
            J.ds = {{{k * s.second * s.second / r3, -k * s.first * s.second / r3},
                     {-k * s.first * s.second / r3, k * s.first * s.first / r3}}};
            return J;
        }
        case Kind::Spiral: {
            const double r = std::hypot(s.first, s.second);
            if (r == 0.0) singular("spiral");
            const double c = std::cos(t), sn = std::sin(t);
            const double inv = 1.0 / (t + 1.0);
            // v = (||s||/2) * (cos t, sin t)/(t+1); grad ||s|| = s/||s||.
            J.ds = {{{0.5 * c * inv * s.first / r, 0.5 * c * inv * s.second / r},
                     {0.5 * sn * inv * s.first / r, 0.5 * sn * inv * s.second / r}}};
            const double radius = 0.5 * r;
            const double inv2 = inv * inv;
            J.dt = {radius * (-(t + 1.0) * sn - c) * inv2, radius * ((t + 1.0) * c - sn) * inv2};
            return J;
        }
        default: {
            const double eps = 1e-5;
            auto diff = [&](Vec2 a, Vec2 b) { return Vec2{(a.first - b.first) / (2 * eps), (a.second - b.second) / (2 * eps)}; };
            const Vec2 dx = diff(eval({s.first + eps, s.second}, t), eval({s.first - eps, s.second}, t));
            const Vec2 dy = diff(eval({s.first, s.second + eps}, t), eval({s.first, s.second - eps}, t));
            J.ds = {{{dx.first, dy.first}, {dx.second, dy.second}}};
            J.dt = diff(eval(s, t + eps), eval(s, t - eps));
            return J;
        }
    }
}

bool FlowField::singular_inside(Vec2 lo, Vec2 hi, double margin) const {
    if (!value_singular()) return false;
    return 0.0 >= lo.first - margin && 0.0 <= hi.first + margin && 0.0 >= lo.second - margin &&
           0.0 <= hi.second + margin;
}

std::pair<double, double> flow_divergence_curl(const FlowField& flow, Vec2 s, double t) {
    const Jacobian2 J = flow.jacobian(s, t);
    return {J.ds[0][0] + J.ds[1][1], J.ds[1][0] - J.ds[0][1]};
}

}  // namespace tfld
