#pragma once

#include <cstddef>

#include "nsaudit/grid.hpp"

namespace nsaudit::detail {

/// Everything needed to difference along one axis of a flat node array.
/// An axis beyond the grid rank reports exists = false and all stencils
/// along it evaluate to zero.
struct AxisInfo {
    int n = 1;
    std::ptrdiff_t stride = 1; // benign defaults so axis_index stays safe
    double h = 1.0;
    bool periodic = true;
    bool exists = false;
};

inline AxisInfo axis_info(const GridSpec& g, int axis) {
    AxisInfo a;
    if (axis >= g.rank()) return a;
    a.exists = true;
    a.n = g.dims[axis];
    std::ptrdiff_t s = 1;
    for (int b = 0; b < axis; ++b) s *= g.dims[b];
    a.stride = s;
    a.h = g.spacing[axis];
    a.periodic = g.boundary[axis] == Boundary::periodic;
    return a;
}

/// Index of node `idx` along the axis.
inline int axis_index(std::size_t idx, const AxisInfo& a) {
    return static_cast<int>((idx / a.stride) % a.n);
}

/// Second-order first derivative at node `idx` (axis position `ia`):
/// central in the interior and across periodic wraps, one-sided
/// three-point at clamped ends. The one-sided forms are exact on
/// quadratics, matching the interior order.
inline double d1(const double* f, std::size_t idx, int ia, const AxisInfo& a) {
    if (!a.exists) return 0.0;
    const std::ptrdiff_t s = a.stride;
    if (a.periodic) {
        const double fm = f[ia > 0 ? idx - s : idx + (a.n - 1) * s];
        const double fp = f[ia < a.n - 1 ? idx + s : idx - (a.n - 1) * s];
        return (fp - fm) / (2.0 * a.h);
    }
    if (ia == 0) return (-3.0 * f[idx] + 4.0 * f[idx + s] - f[idx + 2 * s]) / (2.0 * a.h);
    if (ia == a.n - 1) return (3.0 * f[idx] - 4.0 * f[idx - s] + f[idx - 2 * s]) / (2.0 * a.h);
    return (f[idx + s] - f[idx - s]) / (2.0 * a.h);
}

/// Second derivative, same conventions; clamped ends use the four-point
/// one-sided form, again exact on quadratics.
inline double d2(const double* f, std::size_t idx, int ia, const AxisInfo& a) {
    if (!a.exists) return 0.0;
    const std::ptrdiff_t s = a.stride;
    const double h2 = a.h * a.h;
    if (a.periodic) {
        const double fm = f[ia > 0 ? idx - s : idx + (a.n - 1) * s];
        const double fp = f[ia < a.n - 1 ? idx + s : idx - (a.n - 1) * s];
        return (fp - 2.0 * f[idx] + fm) / h2;
    }
    if (ia == 0)
        return (2.0 * f[idx] - 5.0 * f[idx + s] + 4.0 * f[idx + 2 * s] - f[idx + 3 * s]) / h2;
    if (ia == a.n - 1)
        return (2.0 * f[idx] - 5.0 * f[idx - s] + 4.0 * f[idx - 2 * s] - f[idx - 3 * s]) / h2;
    return (f[idx + s] - 2.0 * f[idx] + f[idx - s]) / h2;
}

} // namespace nsaudit::detail
