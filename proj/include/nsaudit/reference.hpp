#pragma once

#include "nsaudit/field.hpp"

namespace nsaudit::reference {

/// Plain serial implementations of the differential operators, written as
/// straightforward nested loops. They are the ground truth the parallel
/// kernels are checked against — results must agree bit for bit — and the
/// baseline the kernel benchmark compares to. Keep them boring.

ScalarField derivative(const ScalarField& f, int axis);
ScalarField second_derivative(const ScalarField& f, int axis);
VectorField gradient(const ScalarField& s);
ScalarField divergence(const VectorField& v);
VectorField curl(const VectorField& v);
ScalarField scalar_laplacian(const ScalarField& s);
VectorField vector_laplacian(const VectorField& v);
VectorField advect(const VectorField& v);

} // namespace nsaudit::reference
