#include "nsaudit/grid.hpp"

#include <stdexcept>

#include "nsaudit/errors.hpp"

namespace nsaudit {

std::string to_string(Boundary b) {
    return b == Boundary::periodic ? "periodic" : "clamped";
}

Boundary boundary_from_string(const std::string& s) {
    if (s == "periodic") return Boundary::periodic;
    if (s == "clamped") return Boundary::clamped;
    throw ConfigError("unknown boundary kind '" + s + "' (expected periodic or clamped)");
}

std::size_t GridSpec::node_count() const {
    std::size_t n = 1;
    for (int d : dims) n *= static_cast<std::size_t>(d);
    return n;
}

double GridSpec::extent(int axis) const {
    const int n = dims[axis];
    return boundary[axis] == Boundary::periodic ? n * spacing[axis] : (n - 1) * spacing[axis];
}

Vec3 GridSpec::position(int i, int j, int k) const {
    Vec3 p(coord(0, i), coord(1, j), 0.0);
    if (rank() == 3) p.z = coord(2, k);
    return p;
}

GridSpec GridSpec::refined() const {
    GridSpec g = *this;
    for (int a = 0; a < rank(); ++a) {
        g.dims[a] = boundary[a] == Boundary::periodic ? 2 * dims[a] : 2 * dims[a] - 1;
        g.spacing[a] = spacing[a] / 2.0;
    }
    return g;
}

void GridSpec::validate() const {
    const std::size_t r = dims.size();
    if (r != 2 && r != 3) throw std::invalid_argument("grid must be 2D or 3D");
    if (spacing.size() != r || origin.size() != r || boundary.size() != r)
        throw std::invalid_argument("grid per-axis arrays must all have the same length");
    for (std::size_t a = 0; a < r; ++a) {
        if (dims[a] < 4)
            throw std::invalid_argument("grid needs at least 4 nodes per axis, axis " +
                                        std::to_string(a) + " has " + std::to_string(dims[a]));
        if (!(spacing[a] > 0.0))
            throw std::invalid_argument("grid spacing must be positive on axis " +
                                        std::to_string(a));
    }
}

GridSpec periodic_square(int n, double length, double origin) {
    return periodic_box({n, n}, length, origin);
}

GridSpec periodic_box(const std::vector<int>& dims, double length, double origin) {
    GridSpec g;
    g.dims = dims;
    for (int n : dims) {
        g.spacing.push_back(length / n);
        g.origin.push_back(origin);
        g.boundary.push_back(Boundary::periodic);
    }
    g.validate();
    return g;
}

GridSpec clamped_box(const std::vector<int>& dims, const std::vector<double>& lengths,
                     const std::vector<double>& origin) {
    GridSpec g;
    g.dims = dims;
    g.origin = origin;
    for (std::size_t a = 0; a < dims.size(); ++a) {
        g.spacing.push_back(lengths[a] / (dims[a] - 1));
        g.boundary.push_back(Boundary::clamped);
    }
    g.validate();
    return g;
}

GridSpec channel_grid(int nx, int ny, double length_x, double half_height) {
    GridSpec g;
    g.dims = {nx, ny};
    g.spacing = {length_x / nx, 2.0 * half_height / (ny - 1)};
    g.origin = {0.0, -half_height};
    g.boundary = {Boundary::periodic, Boundary::clamped};
    g.validate();
    return g;
}

} // namespace nsaudit
