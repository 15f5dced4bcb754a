#include "nsaudit/reference.hpp"

#include <stdexcept>

#include "stencils.hpp"

namespace nsaudit::reference {

// Serial counterparts of the parallel kernels. Same stencil helpers, same
// per-node expressions, plain loops — the pair must stay bit-identical.

namespace {

using detail::AxisInfo;

inline double comp_d1(const double* c, std::size_t idx, int ia, const AxisInfo& a) {
    if (c == nullptr) return 0.0;
    return detail::d1(c, idx, ia, a);
}

} // namespace

ScalarField derivative(const ScalarField& f, int axis) {
    f.check_finite("derivative input");
    if (axis < 0 || axis >= f.grid().rank())
        throw std::invalid_argument("derivative axis out of range");
    ScalarField out(f.grid());
    const AxisInfo a = detail::axis_info(f.grid(), axis);
    const double* src = f.data().data();
    double* dst = out.data().data();
    for (std::size_t idx = 0; idx < f.size(); ++idx)
        dst[idx] = detail::d1(src, idx, detail::axis_index(idx, a), a);
    return out;
}

ScalarField second_derivative(const ScalarField& f, int axis) {
    f.check_finite("second_derivative input");
    if (axis < 0 || axis >= f.grid().rank())
        throw std::invalid_argument("second_derivative axis out of range");
    ScalarField out(f.grid());
    const AxisInfo a = detail::axis_info(f.grid(), axis);
    const double* src = f.data().data();
    double* dst = out.data().data();
    for (std::size_t idx = 0; idx < f.size(); ++idx)
        dst[idx] = detail::d2(src, idx, detail::axis_index(idx, a), a);
    return out;
}

VectorField gradient(const ScalarField& s) {
    s.check_finite("gradient input");
    const GridSpec& g = s.grid();
    VectorField out(g, g.rank());
    const double* src = s.data().data();
    for (int axis = 0; axis < g.rank(); ++axis) {
        const AxisInfo a = detail::axis_info(g, axis);
        double* dst = out.data().data() + static_cast<std::size_t>(axis) * s.size();
        for (std::size_t idx = 0; idx < s.size(); ++idx)
            dst[idx] = detail::d1(src, idx, detail::axis_index(idx, a), a);
    }
    return out;
}

ScalarField divergence(const VectorField& v) {
    v.check_finite("divergence input");
    const GridSpec& g = v.grid();
    ScalarField out(g);
    const std::size_t nodes = v.nodes();
    const double* c0 = v.data().data();
    const double* c1 = c0 + nodes;
    const double* c2 = v.components() == 3 ? c0 + 2 * nodes : nullptr;
    const AxisInfo ax = detail::axis_info(g, 0);
    const AxisInfo ay = detail::axis_info(g, 1);
    const AxisInfo az = detail::axis_info(g, 2);
    double* dst = out.data().data();
    for (std::size_t idx = 0; idx < nodes; ++idx) {
        double s = detail::d1(c0, idx, detail::axis_index(idx, ax), ax) +
                   detail::d1(c1, idx, detail::axis_index(idx, ay), ay);
        if (c2 != nullptr && az.exists) s += detail::d1(c2, idx, detail::axis_index(idx, az), az);
        dst[idx] = s;
    }
    return out;
}

VectorField curl(const VectorField& v) {
    v.check_finite("curl input");
    const GridSpec& g = v.grid();
    VectorField out(g, 3);
    const std::size_t nodes = v.nodes();
    const double* c0 = v.data().data();
    const double* c1 = c0 + nodes;
    const double* c2 = v.components() == 3 ? c0 + 2 * nodes : nullptr;
    const AxisInfo a0 = detail::axis_info(g, 0);
    const AxisInfo a1 = detail::axis_info(g, 1);
    const AxisInfo a2 = detail::axis_info(g, 2);
    double* o0 = out.data().data();
    double* o1 = o0 + nodes;
    double* o2 = o0 + 2 * nodes;
    for (std::size_t idx = 0; idx < nodes; ++idx) {
        const int ix = detail::axis_index(idx, a0);
        const int iy = detail::axis_index(idx, a1);
        const int iz = a2.exists ? detail::axis_index(idx, a2) : 0;
        o0[idx] = comp_d1(c2, idx, iy, a1) - comp_d1(c1, idx, iz, a2);
        o1[idx] = comp_d1(c0, idx, iz, a2) - comp_d1(c2, idx, ix, a0);
        o2[idx] = comp_d1(c1, idx, ix, a0) - comp_d1(c0, idx, iy, a1);
    }
    return out;
}

ScalarField scalar_laplacian(const ScalarField& s) {
    s.check_finite("scalar_laplacian input");
    const GridSpec& g = s.grid();
    ScalarField out(g);
    const AxisInfo ax = detail::axis_info(g, 0);
    const AxisInfo ay = detail::axis_info(g, 1);
    const AxisInfo az = detail::axis_info(g, 2);
    const double* src = s.data().data();
    double* dst = out.data().data();
    for (std::size_t idx = 0; idx < s.size(); ++idx) {
        double r = detail::d2(src, idx, detail::axis_index(idx, ax), ax) +
                   detail::d2(src, idx, detail::axis_index(idx, ay), ay);
        if (az.exists) r += detail::d2(src, idx, detail::axis_index(idx, az), az);
        dst[idx] = r;
    }
    return out;
}

VectorField vector_laplacian(const VectorField& v) {
    v.check_finite("vector_laplacian input");
    const GridSpec& g = v.grid();
    VectorField out(g, v.components());
    const std::size_t nodes = v.nodes();
    const AxisInfo ax = detail::axis_info(g, 0);
    const AxisInfo ay = detail::axis_info(g, 1);
    const AxisInfo az = detail::axis_info(g, 2);
    for (int comp = 0; comp < v.components(); ++comp) {
        const double* src = v.data().data() + static_cast<std::size_t>(comp) * nodes;
        double* dst = out.data().data() + static_cast<std::size_t>(comp) * nodes;
        for (std::size_t idx = 0; idx < nodes; ++idx) {
            double r = detail::d2(src, idx, detail::axis_index(idx, ax), ax) +
                       detail::d2(src, idx, detail::axis_index(idx, ay), ay);
            if (az.exists) r += detail::d2(src, idx, detail::axis_index(idx, az), az);
            dst[idx] = r;
        }
    }
    return out;
}

VectorField advect(const VectorField& v) {
    v.check_finite("advect input");
    const GridSpec& g = v.grid();
    VectorField out(g, v.components());
    const std::size_t nodes = v.nodes();
    const double* c0 = v.data().data();
    const double* c1 = c0 + nodes;
    const double* c2 = v.components() == 3 ? c0 + 2 * nodes : nullptr;
    const AxisInfo ax = detail::axis_info(g, 0);
    const AxisInfo ay = detail::axis_info(g, 1);
    const AxisInfo az = detail::axis_info(g, 2);
    for (int comp = 0; comp < v.components(); ++comp) {
        const double* src = v.data().data() + static_cast<std::size_t>(comp) * nodes;
        double* dst = out.data().data() + static_cast<std::size_t>(comp) * nodes;
        for (std::size_t idx = 0; idx < nodes; ++idx) {
            double r = c0[idx] * detail::d1(src, idx, detail::axis_index(idx, ax), ax) +
                       c1[idx] * detail::d1(src, idx, detail::axis_index(idx, ay), ay);
            if (c2 != nullptr && az.exists)
                r += c2[idx] * detail::d1(src, idx, detail::axis_index(idx, az), az);
            dst[idx] = r;
        }
    }
    return out;
}

} // namespace nsaudit::reference
