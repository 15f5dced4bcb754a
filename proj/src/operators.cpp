#include "nsaudit/operators.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "stencils.hpp"

namespace nsaudit {

// The loops below parallelize over output nodes; every iteration writes
// exactly one slot, so results do not depend on the thread count. All
// reductions (stats) stay serial for the same reason.

namespace {

using detail::AxisInfo;

struct CompView {
    const double* data = nullptr; // nullptr = identically zero component
};

/// Per-node derivative of one (possibly absent) component.
inline double comp_d1(const CompView& c, std::size_t idx, int ia, const AxisInfo& a) {
    if (c.data == nullptr) return 0.0;
    return detail::d1(c.data, idx, ia, a);
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
    const std::ptrdiff_t total = static_cast<std::ptrdiff_t>(f.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t idx = 0; idx < total; ++idx)
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
    const std::ptrdiff_t total = static_cast<std::ptrdiff_t>(f.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t idx = 0; idx < total; ++idx)
        dst[idx] = detail::d2(src, idx, detail::axis_index(idx, a), a);
    return out;
}

VectorField gradient(const ScalarField& s) {
    s.check_finite("gradient input");
    const GridSpec& g = s.grid();
    VectorField out(g, g.rank());
    const double* src = s.data().data();
    const std::ptrdiff_t total = static_cast<std::ptrdiff_t>(s.size());
    for (int axis = 0; axis < g.rank(); ++axis) {
        const AxisInfo a = detail::axis_info(g, axis);
        double* dst = out.data().data() + static_cast<std::size_t>(axis) * s.size();
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t idx = 0; idx < total; ++idx)
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
    const std::ptrdiff_t total = static_cast<std::ptrdiff_t>(nodes);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t idx = 0; idx < total; ++idx) {
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
    CompView c[3];
    c[0].data = v.data().data();
    c[1].data = c[0].data + nodes;
    c[2].data = v.components() == 3 ? c[0].data + 2 * nodes : nullptr;
    const AxisInfo a[3] = {detail::axis_info(g, 0), detail::axis_info(g, 1),
                           detail::axis_info(g, 2)};
    double* o0 = out.data().data();
    double* o1 = o0 + nodes;
    double* o2 = o0 + 2 * nodes;
    const std::ptrdiff_t total = static_cast<std::ptrdiff_t>(nodes);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t idx = 0; idx < total; ++idx) {
        const int ix = detail::axis_index(idx, a[0]);
        const int iy = detail::axis_index(idx, a[1]);
        const int iz = a[2].exists ? detail::axis_index(idx, a[2]) : 0;
        o0[idx] = comp_d1(c[2], idx, iy, a[1]) - comp_d1(c[1], idx, iz, a[2]);
        o1[idx] = comp_d1(c[0], idx, iz, a[2]) - comp_d1(c[2], idx, ix, a[0]);
        o2[idx] = comp_d1(c[1], idx, ix, a[0]) - comp_d1(c[0], idx, iy, a[1]);
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
    const std::ptrdiff_t total = static_cast<std::ptrdiff_t>(s.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t idx = 0; idx < total; ++idx) {
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
    const std::ptrdiff_t total = static_cast<std::ptrdiff_t>(nodes);
    for (int comp = 0; comp < v.components(); ++comp) {
        const double* src = v.data().data() + static_cast<std::size_t>(comp) * nodes;
        double* dst = out.data().data() + static_cast<std::size_t>(comp) * nodes;
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t idx = 0; idx < total; ++idx) {
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
    const std::ptrdiff_t total = static_cast<std::ptrdiff_t>(nodes);
    for (int comp = 0; comp < v.components(); ++comp) {
        const double* src = v.data().data() + static_cast<std::size_t>(comp) * nodes;
        double* dst = out.data().data() + static_cast<std::size_t>(comp) * nodes;
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t idx = 0; idx < total; ++idx) {
            double r = c0[idx] * detail::d1(src, idx, detail::axis_index(idx, ax), ax) +
                       c1[idx] * detail::d1(src, idx, detail::axis_index(idx, ay), ay);
            if (c2 != nullptr && az.exists)
                r += c2[idx] * detail::d1(src, idx, detail::axis_index(idx, az), az);
            dst[idx] = r;
        }
    }
    return out;
}

ResidualStats residual_stats(const ScalarField& f) {
    ResidualStats st;
    st.nodes = f.size();
    double sum = 0.0;
    for (double v : f.data()) {
        st.max_abs = std::max(st.max_abs, std::abs(v));
        sum += v * v;
    }
    st.l2 = std::sqrt(sum / static_cast<double>(f.data().size()));
    return st;
}

ResidualStats residual_stats(const VectorField& f) {
    ResidualStats st;
    st.nodes = f.nodes();
    double sum = 0.0;
    for (double v : f.data()) {
        st.max_abs = std::max(st.max_abs, std::abs(v));
        sum += v * v;
    }
    st.l2 = std::sqrt(sum / static_cast<double>(f.data().size()));
    return st;
}

LaplacianIdentityResult check_laplacian_identity(const VectorField& v) {
    const VectorField lap = vector_laplacian(v);
    const VectorField gd = gradient(divergence(v));
    const VectorField cc = curl(curl(v));
    const std::size_t nodes = v.nodes();
    VectorField residual(v.grid(), v.components());
    for (int comp = 0; comp < v.components(); ++comp) {
        const double* l = lap.data().data() + static_cast<std::size_t>(comp) * nodes;
        const double* c = cc.data().data() + static_cast<std::size_t>(comp) * nodes;
        const double* gdp =
            comp < v.grid().rank() ? gd.data().data() + static_cast<std::size_t>(comp) * nodes
                                   : nullptr;
        double* dst = residual.data().data() + static_cast<std::size_t>(comp) * nodes;
        const std::ptrdiff_t total = static_cast<std::ptrdiff_t>(nodes);
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t idx = 0; idx < total; ++idx) {
            const double grad_div = gdp != nullptr ? gdp[idx] : 0.0;
            dst[idx] = l[idx] - (grad_div - c[idx]);
        }
    }
    LaplacianIdentityResult out{residual_stats(residual), std::move(residual)};
    return out;
}

double estimate_order(const std::vector<ConvergenceSample>& samples) {
    if (samples.size() < 2)
        throw std::invalid_argument("order estimate needs at least two samples");
    const ConvergenceSample& coarse = samples[samples.size() - 2];
    const ConvergenceSample& fine = samples.back();
    if (fine.error <= kRoundoffFloor) return std::numeric_limits<double>::infinity();
    if (!(coarse.error > 0.0) || !(coarse.h > fine.h))
        throw std::invalid_argument("order estimate needs decreasing h and positive errors");
    return std::log(coarse.error / fine.error) / std::log(coarse.h / fine.h);
}

} // namespace nsaudit
