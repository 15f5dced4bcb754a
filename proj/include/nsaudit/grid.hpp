#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "nsaudit/vec.hpp"

namespace nsaudit {

enum class Boundary { periodic, clamped };

std::string to_string(Boundary b);
Boundary boundary_from_string(const std::string& s);

/// Uniform structured node grid, 2D or 3D.
///
/// `dims[a]` counts nodes along axis `a`. On a clamped axis the nodes span
/// [origin, origin + (n-1)h]; on a periodic axis they cover one period
/// [origin, origin + n*h) with node n wrapping back to node 0.
struct GridSpec {
    std::vector<int> dims;
    std::vector<double> spacing;
    std::vector<double> origin;
    std::vector<Boundary> boundary;

    int rank() const { return static_cast<int>(dims.size()); }
    std::size_t node_count() const;
    double extent(int axis) const;
    double coord(int axis, int index) const { return origin[axis] + spacing[axis] * index; }
    Vec3 position(int i, int j, int k = 0) const;

    std::size_t index(int i, int j, int k = 0) const {
        std::size_t idx = static_cast<std::size_t>(j) * dims[0] + i;
        if (rank() == 3) idx += static_cast<std::size_t>(k) * dims[0] * dims[1];
        return idx;
    }

    /// Same continuum domain at half the spacing. Periodic axes double the
    /// node count; clamped axes go n -> 2n-1 so the end nodes stay put.
    GridSpec refined() const;

    /// Throws std::invalid_argument on dims < 4, non-positive spacing, or
    /// inconsistent per-axis array lengths.
    void validate() const;

    bool operator==(const GridSpec& o) const = default;
};

/// n x n periodic grid covering [origin, origin+length) per axis.
GridSpec periodic_square(int n, double length, double origin = 0.0);

/// Periodic box with per-axis node counts, all covering the same length.
GridSpec periodic_box(const std::vector<int>& dims, double length, double origin = 0.0);

/// Clamped (bounded) grid; node 0 and node n-1 sit on the domain ends.
GridSpec clamped_box(const std::vector<int>& dims, const std::vector<double>& lengths,
                     const std::vector<double>& origin);

/// Channel grid: periodic along x, clamped along y (wall nodes at both
/// y ends).
GridSpec channel_grid(int nx, int ny, double length_x, double half_height);

} // namespace nsaudit
