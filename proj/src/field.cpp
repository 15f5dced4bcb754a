#include "nsaudit/field.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "nsaudit/errors.hpp"

namespace nsaudit {

namespace {

// Slack (in index units) tolerated when a sample point sits marginally
// outside a clamped axis.
constexpr double kClampSlack = 1e-9;

std::string node_name(const GridSpec& g, std::size_t idx) {
    const int nx = g.dims[0];
    const int ny = g.dims[1];
    const int i = static_cast<int>(idx % nx);
    const int j = static_cast<int>((idx / nx) % ny);
    std::string s = "(" + std::to_string(i) + ", " + std::to_string(j);
    if (g.rank() == 3) s += ", " + std::to_string(static_cast<int>(idx / (static_cast<std::size_t>(nx) * ny)));
    return s + ")";
}

struct AxisSample {
    int i0 = 0;
    int i1 = 0;
    double w = 0.0; // weight of i1
};

AxisSample locate(const GridSpec& g, int axis, double x) {
    const int n = g.dims[axis];
    double t = (x - g.origin[axis]) / g.spacing[axis];
    AxisSample s;
    if (g.boundary[axis] == Boundary::periodic) {
        t -= n * std::floor(t / n);
        if (t >= n) t = 0.0; // guard the floor round-off edge
        s.i0 = static_cast<int>(t);
        if (s.i0 >= n) s.i0 = n - 1;
        s.i1 = (s.i0 + 1) % n;
        s.w = t - s.i0;
    } else {
        if (t < -kClampSlack || t > (n - 1) + kClampSlack)
            throw GeometryError("sample point outside clamped axis " + std::to_string(axis) +
                                ": index coordinate " + std::to_string(t) + " not in [0, " +
                                std::to_string(n - 1) + "]");
        t = std::clamp(t, 0.0, static_cast<double>(n - 1));
        s.i0 = std::min(static_cast<int>(t), n - 2);
        s.i1 = s.i0 + 1;
        s.w = t - s.i0;
    }
    return s;
}

// Multilinear interpolation over the 4 (2D) or 8 (3D) surrounding nodes.
double sample_plane(const GridSpec& g, const double* values, const Vec3& p) {
    const AxisSample ax = locate(g, 0, p.x);
    const AxisSample ay = locate(g, 1, p.y);
    const int nx = g.dims[0];
    auto at2 = [&](int i, int j) { return values[static_cast<std::size_t>(j) * nx + i]; };
    if (g.rank() == 2) {
        const double f0 = at2(ax.i0, ay.i0) * (1.0 - ax.w) + at2(ax.i1, ay.i0) * ax.w;
        const double f1 = at2(ax.i0, ay.i1) * (1.0 - ax.w) + at2(ax.i1, ay.i1) * ax.w;
        return f0 * (1.0 - ay.w) + f1 * ay.w;
    }
    const AxisSample az = locate(g, 2, p.z);
    const std::size_t plane = static_cast<std::size_t>(nx) * g.dims[1];
    auto at3 = [&](int i, int j, int k) {
        return values[k * plane + static_cast<std::size_t>(j) * nx + i];
    };
    auto bilinear = [&](int k) {
        const double f0 = at3(ax.i0, ay.i0, k) * (1.0 - ax.w) + at3(ax.i1, ay.i0, k) * ax.w;
        const double f1 = at3(ax.i0, ay.i1, k) * (1.0 - ax.w) + at3(ax.i1, ay.i1, k) * ax.w;
        return f0 * (1.0 - ay.w) + f1 * ay.w;
    };
    return bilinear(az.i0) * (1.0 - az.w) + bilinear(az.i1) * az.w;
}

void check_values_finite(const GridSpec& g, const std::vector<double>& v, std::size_t nodes,
                         const std::string& label) {
    for (std::size_t idx = 0; idx < v.size(); ++idx) {
        if (!std::isfinite(v[idx])) {
            const std::size_t node = idx % nodes;
            const std::size_t comp = idx / nodes;
            std::string msg = label + ": non-finite value " + std::to_string(v[idx]) +
                              " at node " + node_name(g, node);
            if (v.size() > nodes) msg += " component " + std::to_string(comp);
            throw FieldError(msg);
        }
    }
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

ScalarField::ScalarField(GridSpec grid, std::string unit)
    : grid_(std::move(grid)), unit_(std::move(unit)) {
    grid_.validate();
    data_.assign(grid_.node_count(), 0.0);
}

double ScalarField::sample(const Vec3& p) const { return sample_plane(grid_, data_.data(), p); }

void ScalarField::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

double ScalarField::min() const { return *std::min_element(data_.begin(), data_.end()); }

double ScalarField::max() const { return *std::max_element(data_.begin(), data_.end()); }

double ScalarField::max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

double ScalarField::mean() const {
    double s = 0.0;
    for (double v : data_) s += v;
    return s / static_cast<double>(data_.size());
}

void ScalarField::check_finite(const std::string& label) const {
    check_values_finite(grid_, data_, data_.size(), label);
}

VectorField::VectorField(GridSpec grid, std::string unit)
    : VectorField(std::move(grid), 0, std::move(unit)) {}

VectorField::VectorField(GridSpec grid, int components, std::string unit)
    : grid_(std::move(grid)), unit_(std::move(unit)) {
    grid_.validate();
    comps_ = components == 0 ? grid_.rank() : components;
    if (comps_ < grid_.rank() || comps_ > 3)
        throw std::invalid_argument("vector field needs rank..3 components");
    nodes_ = grid_.node_count();
    data_.assign(nodes_ * comps_, 0.0);
}

Vec3 VectorField::vec_at(int i, int j, int k) const { return vec_at(grid_.index(i, j, k)); }

Vec3 VectorField::vec_at(std::size_t node) const {
    Vec3 v(data_[node], data_[nodes_ + node], 0.0);
    if (comps_ == 3) v.z = data_[2 * nodes_ + node];
    return v;
}

void VectorField::set_vec(int i, int j, int k, const Vec3& v) { set_vec(grid_.index(i, j, k), v); }

void VectorField::set_vec(std::size_t node, const Vec3& v) {
    data_[node] = v.x;
    data_[nodes_ + node] = v.y;
    if (comps_ == 3) data_[2 * nodes_ + node] = v.z;
}

Vec3 VectorField::sample(const Vec3& p) const {
    Vec3 v(sample_plane(grid_, data_.data(), p), sample_plane(grid_, data_.data() + nodes_, p),
           0.0);
    if (comps_ == 3) v.z = sample_plane(grid_, data_.data() + 2 * nodes_, p);
    return v;
}

void VectorField::fill(const Vec3& v) {
    for (std::size_t n = 0; n < nodes_; ++n) set_vec(n, v);
}

double VectorField::max_norm() const {
    double m = 0.0;
    for (std::size_t n = 0; n < nodes_; ++n) m = std::max(m, vec_at(n).norm());
    return m;
}

void VectorField::check_finite(const std::string& label) const {
    check_values_finite(grid_, data_, nodes_, label);
}

ScalarField sample_scalar(const GridSpec& grid, const std::function<double(const Vec3&)>& f,
                          std::string unit) {
    ScalarField out(grid, std::move(unit));
    const int nx = grid.dims[0], ny = grid.dims[1];
    const int nz = grid.rank() == 3 ? grid.dims[2] : 1;
    for (int k = 0; k < nz; ++k)
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) out.at(i, j, k) = f(grid.position(i, j, k));
    return out;
}

VectorField sample_vector(const GridSpec& grid, const std::function<Vec3(const Vec3&)>& f,
                          std::string unit) {
    VectorField out(grid, std::move(unit));
    const int nx = grid.dims[0], ny = grid.dims[1];
    const int nz = grid.rank() == 3 ? grid.dims[2] : 1;
    for (int k = 0; k < nz; ++k)
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) out.set_vec(i, j, k, f(grid.position(i, j, k)));
    return out;
}

namespace {

void write_header(std::ostream& os, const GridSpec& g, const std::string& name,
                  const std::string& kind, const std::string& unit, int components,
                  std::size_t value_count) {
    os << "nsaudit-field 1\n";
    os << "name " << (name.empty() ? "-" : name) << "\n";
    os << "kind " << kind << "\n";
    os << "rank " << g.rank() << "\n";
    os << "dims";
    for (int d : g.dims) os << " " << d;
    os << "\nspacing";
    for (double h : g.spacing) os << " " << fmt17(h);
    os << "\norigin";
    for (double o : g.origin) os << " " << fmt17(o);
    os << "\nboundary";
    for (Boundary b : g.boundary) os << " " << to_string(b);
    os << "\ncomponents " << components << "\n";
    os << "unit " << (unit.empty() ? "-" : unit) << "\n";
    os << "values " << value_count << "\n";
}

void write_values(std::ostream& os, const std::vector<double>& v) {
    for (double x : v) os << fmt17(x) << "\n";
    os << "end\n";
}

} // namespace

void write_snapshot(std::ostream& os, const ScalarField& f, const std::string& name) {
    write_header(os, f.grid(), name, "scalar", f.unit(), 1, f.size());
    write_values(os, f.data());
}

void write_snapshot(std::ostream& os, const VectorField& f, const std::string& name) {
    write_header(os, f.grid(), name, "vector", f.unit(), f.components(), f.data().size());
    write_values(os, f.data());
}

namespace {

template <class Field>
void write_snapshot_path(const std::string& path, const Field& f, const std::string& name) {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot open '" + path + "' for writing");
    write_snapshot(os, f, name);
    if (!os) throw ConfigError("write to '" + path + "' failed");
}

} // namespace

void write_snapshot_file(const std::string& path, const ScalarField& f, const std::string& name) {
    write_snapshot_path(path, f, name);
}

void write_snapshot_file(const std::string& path, const VectorField& f, const std::string& name) {
    write_snapshot_path(path, f, name);
}

namespace {

std::string expect_line(std::istream& is, const std::string& context) {
    std::string line;
    if (!std::getline(is, line)) throw ConfigError("snapshot truncated while reading " + context);
    return line;
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream iss(s);
    std::vector<std::string> out;
    std::string tok;
    while (iss >> tok) out.push_back(tok);
    return out;
}

std::vector<std::string> expect_keyword(std::istream& is, const std::string& key, std::size_t min_args) {
    auto toks = split_ws(expect_line(is, "'" + key + "' line"));
    if (toks.empty() || toks[0] != key)
        throw ConfigError("snapshot header: expected '" + key + "' line");
    if (toks.size() - 1 < min_args)
        throw ConfigError("snapshot header: '" + key + "' needs at least " +
                          std::to_string(min_args) + " values");
    return {toks.begin() + 1, toks.end()};
}

} // namespace

Snapshot read_snapshot(std::istream& is) {
    const std::string magic = expect_line(is, "magic");
    if (magic != "nsaudit-field 1")
        throw ConfigError("not a field snapshot (bad magic line '" + magic + "')");

    Snapshot snap;
    snap.name = expect_keyword(is, "name", 1)[0];
    if (snap.name == "-") snap.name.clear();

    const std::string kind = expect_keyword(is, "kind", 1)[0];
    if (kind != "scalar" && kind != "vector")
        throw ConfigError("snapshot kind must be scalar or vector, got '" + kind + "'");
    snap.is_vector = kind == "vector";

    const int rank = std::stoi(expect_keyword(is, "rank", 1)[0]);
    if (rank != 2 && rank != 3) throw ConfigError("snapshot rank must be 2 or 3");

    GridSpec g;
    for (const auto& t : expect_keyword(is, "dims", rank)) g.dims.push_back(std::stoi(t));
    for (const auto& t : expect_keyword(is, "spacing", rank)) g.spacing.push_back(std::stod(t));
    for (const auto& t : expect_keyword(is, "origin", rank)) g.origin.push_back(std::stod(t));
    for (const auto& t : expect_keyword(is, "boundary", rank))
        g.boundary.push_back(boundary_from_string(t));
    if (static_cast<int>(g.dims.size()) != rank)
        throw ConfigError("snapshot dims count does not match rank");
    g.validate();

    const int components = std::stoi(expect_keyword(is, "components", 1)[0]);
    std::string unit = expect_keyword(is, "unit", 1)[0];
    if (unit == "-") unit.clear();
    const std::size_t count = std::stoull(expect_keyword(is, "values", 1)[0]);

    std::vector<double>* dest;
    if (snap.is_vector) {
        if (components < rank || components > 3)
            throw ConfigError("vector snapshot components must be rank..3");
        snap.vector = VectorField(g, components, unit);
        dest = &snap.vector.data();
    } else {
        if (components != 1) throw ConfigError("scalar snapshot must have 1 component");
        snap.scalar = ScalarField(g, unit);
        dest = &snap.scalar.data();
    }
    if (count != dest->size())
        throw ConfigError("snapshot value count " + std::to_string(count) +
                          " does not match grid (" + std::to_string(dest->size()) + ")");

    for (std::size_t idx = 0; idx < count; ++idx) {
        const std::string line = expect_line(is, "value " + std::to_string(idx));
        // strtod rather than std::stod: stod raises out_of_range on gradual
        // underflow (ERANGE with a perfectly valid subnormal result), which
        // would reject values the writer legitimately produced.
        const char* cs = line.c_str();
        char* end = nullptr;
        errno = 0;
        const double v = std::strtod(cs, &end);
        const bool overflow = errno == ERANGE && std::abs(v) == HUGE_VAL;
        while (end != nullptr && *end != '\0' &&
               std::isspace(static_cast<unsigned char>(*end)))
            ++end;
        if (end == cs || *end != '\0' || overflow)
            throw FieldError("snapshot value line " + std::to_string(idx) + " is not a number: '" +
                             line + "'");
        (*dest)[idx] = v;
    }
    if (expect_line(is, "trailer") != "end") throw ConfigError("snapshot missing 'end' trailer");
    return snap;
}

Snapshot read_snapshot_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open snapshot '" + path + "'");
    return read_snapshot(is);
}

} // namespace nsaudit
