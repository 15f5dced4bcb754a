#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "nsaudit/grid.hpp"
#include "nsaudit/vec.hpp"

namespace nsaudit {

/// Scalar samples on the nodes of a GridSpec. Storage is flat with x
/// fastest: index = (k*ny + j)*nx + i.
class ScalarField {
public:
    ScalarField() = default;
    ScalarField(GridSpec grid, std::string unit = "");

    const GridSpec& grid() const { return grid_; }
    const std::string& unit() const { return unit_; }
    void set_unit(std::string u) { unit_ = std::move(u); }

    double& at(int i, int j, int k = 0) { return data_[grid_.index(i, j, k)]; }
    double at(int i, int j, int k = 0) const { return data_[grid_.index(i, j, k)]; }
    double& operator[](std::size_t idx) { return data_[idx]; }
    double operator[](std::size_t idx) const { return data_[idx]; }
    std::size_t size() const { return data_.size(); }
    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    /// Multilinear interpolation at an arbitrary point. Periodic axes wrap;
    /// clamped axes throw GeometryError when the point leaves the domain by
    /// more than 1e-9 of a cell (and clamp inside that slack).
    double sample(const Vec3& p) const;

    void fill(double v);
    double min() const;
    double max() const;
    double max_abs() const;
    double mean() const;

    /// Throws FieldError naming the first offending node if any value is
    /// non-finite.
    void check_finite(const std::string& label) const;

private:
    GridSpec grid_;
    std::string unit_;
    std::vector<double> data_;
};

/// Vector samples on grid nodes, stored component-planar: all of u_x, then
/// all of u_y, then all of u_z when present. The component count defaults
/// to the grid rank but may be 3 on a 2D grid (e.g. the curl of an
/// in-plane field).
class VectorField {
public:
    VectorField() = default;
    VectorField(GridSpec grid, std::string unit = "");
    VectorField(GridSpec grid, int components, std::string unit = "");

    const GridSpec& grid() const { return grid_; }
    const std::string& unit() const { return unit_; }
    void set_unit(std::string u) { unit_ = std::move(u); }

    int components() const { return comps_; }
    std::size_t nodes() const { return nodes_; }

    double& at(int c, int i, int j, int k = 0) { return data_[plane(c) + grid_.index(i, j, k)]; }
    double at(int c, int i, int j, int k = 0) const { return data_[plane(c) + grid_.index(i, j, k)]; }
    double& comp(int c, std::size_t node) { return data_[plane(c) + node]; }
    double comp(int c, std::size_t node) const { return data_[plane(c) + node]; }

    Vec3 vec_at(int i, int j, int k = 0) const;
    Vec3 vec_at(std::size_t node) const;
    void set_vec(int i, int j, int k, const Vec3& v);
    void set_vec(std::size_t node, const Vec3& v);

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    /// Component-wise multilinear interpolation; same boundary rules as
    /// ScalarField::sample.
    Vec3 sample(const Vec3& p) const;

    void fill(const Vec3& v);
    double max_norm() const;

    void check_finite(const std::string& label) const;

private:
    std::size_t plane(int c) const { return static_cast<std::size_t>(c) * nodes_; }

    GridSpec grid_;
    std::string unit_;
    int comps_ = 0;
    std::size_t nodes_ = 0;
    std::vector<double> data_;
};

/// Fills a field by evaluating a function at every node position.
ScalarField sample_scalar(const GridSpec& grid, const std::function<double(const Vec3&)>& f,
                          std::string unit = "");
VectorField sample_vector(const GridSpec& grid, const std::function<Vec3(const Vec3&)>& f,
                          std::string unit = "");

/// Plain-text snapshot format, one value per line after a small header.
/// Values are printed with %.17g so a write/read round trip is bit-exact.
void write_snapshot(std::ostream& os, const ScalarField& f, const std::string& name);
void write_snapshot(std::ostream& os, const VectorField& f, const std::string& name);
void write_snapshot_file(const std::string& path, const ScalarField& f, const std::string& name);
void write_snapshot_file(const std::string& path, const VectorField& f, const std::string& name);

struct Snapshot {
    std::string name;
    bool is_vector = false;
    ScalarField scalar;
    VectorField vector;
};

/// Parses a snapshot written by write_snapshot. Throws ConfigError on
/// malformed headers and FieldError on bad value lines.
Snapshot read_snapshot(std::istream& is);
Snapshot read_snapshot_file(const std::string& path);

} // namespace nsaudit
