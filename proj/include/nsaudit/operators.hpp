#pragma once

#include <vector>

#include "nsaudit/field.hpp"

namespace nsaudit {

/// Second-order finite-difference operators on node grids. Interior nodes
/// use central differences; clamped edges fall back to one-sided stencils
/// of the same order; periodic axes wrap. All operators validate their
/// input for finiteness first and are pure (safe to call concurrently).
///
/// Exactness: first derivatives reproduce polynomials up to degree 2 per
/// axis; the one-sided second-derivative stencil is exact on quadratics,
/// so the Laplacian of a quadratic profile is exact to round-off.

/// d/dx_axis of a scalar field.
ScalarField derivative(const ScalarField& f, int axis);

/// d²/dx_axis² of a scalar field.
ScalarField second_derivative(const ScalarField& f, int axis);

VectorField gradient(const ScalarField& s);

ScalarField divergence(const VectorField& v);

/// Standard curl. 2D inputs are treated as (u,v,0) with no z-variation,
/// and the result is returned as a 3-component field on the same grid.
VectorField curl(const VectorField& v);

/// Component-wise 5/7-point Laplacian (compact second-derivative stencil).
VectorField vector_laplacian(const VectorField& v);
ScalarField scalar_laplacian(const ScalarField& s);

/// Advective term (v·grad)v.
VectorField advect(const VectorField& v);

/// Pointwise residual statistics for field comparisons.
struct ResidualStats {
    double max_abs = 0.0;
    double l2 = 0.0;        // sqrt(mean of squares) over all nodes/components
    std::size_t nodes = 0;
};

ResidualStats residual_stats(const ScalarField& f);
ResidualStats residual_stats(const VectorField& f);

/// Residual of the identity  lap v = grad(div v) - curl(curl v), which is
/// exact in the continuum. Returns the residual field so callers can
/// refine the grid and measure how fast it shrinks.
struct LaplacianIdentityResult {
    ResidualStats stats;
    VectorField residual;
};

LaplacianIdentityResult check_laplacian_identity(const VectorField& v);

/// Convergence-order bookkeeping: pairs (h, error) from a refinement
/// study, finest last.
struct ConvergenceSample {
    double h = 0.0;
    double error = 0.0;
};

/// Errors at or below this are treated as round-off ("exact"), not data
/// for an order fit.
inline constexpr double kRoundoffFloor = 1e-12;

/// Observed order from the last pair of samples: log2(e_coarse/e_fine)
/// for h halving. Returns +inf when the fine error sits at the round-off
/// floor (the stencil is exact on that input).
double estimate_order(const std::vector<ConvergenceSample>& samples);

} // namespace nsaudit
