#pragma once

#include <variant>

#include "nsv/fields/field.hpp"

namespace nsv {

// Discrete differential operators and quadrature.
//
// Periodic torus: Fourier differentiation (the Nyquist bin is treated as a
// zero wavenumber so that laplacian == divergence(gradient) exactly).
// Bounded box: second-order central differences in the interior and
// second-order one-sided stencils at the first/last sample. Every operator
// acts on a single axis at a time, so derivatives along different axes commute
// exactly and curl(gradient) / divergence(curl) vanish to rounding.

ScalarField derivative(const ScalarField& s, int axis);
ScalarField second_derivative(const ScalarField& s, int axis);

VectorField gradient(const ScalarField& s);
// Staggered input: conservative face differencing, result at cell centres.
ScalarField divergence(const VectorField& v);
ScalarField laplacian(const ScalarField& s);
VectorField laplacian(const VectorField& v);

// 2D: scalar out-of-plane vorticity d1 v2 - d2 v1. 3D: vector curl.
using Vorticity = std::variant<ScalarField, VectorField>;
Vorticity curl(const VectorField& v);
// Integral of |curl v|^2.
double enstrophy(const Vorticity& w);
double max_abs(const Vorticity& w);

// Staggered input is interpolated to cell centres for the off-diagonal
// entries; diagonal entries use the same face differences as divergence so
// that trace() reproduces it exactly.
TensorField velocity_gradient(const VectorField& v);
// (v . grad) v, evaluated as velocity_gradient(v) applied to collocated(v).
VectorField convective_term(const VectorField& v);

// Trapezoid weights along node-centred bounded axes, midpoint weights along
// cell-centred axes, uniform weights on a torus.
double volume_integral(const ScalarField& s);
double energy(const VectorField& v);

struct SurfaceIntegral {
  double value = 0.0;
  bool no_boundary = false;  // periodic domain: the integral is empty
};

// Integral over the box boundary of v . n with the outward normal.
SurfaceIntegral boundary_flux(const VectorField& v);
// Integral over the box boundary of weight * (carrier . n). The weight must
// share the carrier component's centering on the tangential axes; a
// cell-centred weight is extrapolated (second order) onto the wall.
SurfaceIntegral boundary_weighted_flux(const ScalarField& weight, const VectorField& carrier);

// Max over samples of |(grad v) v| restricted to the part orthogonal to v,
// relative to |(grad v) v|. Zero iff (grad v) v = lambda v pointwise for some
// scalar lambda. Samples with |v| or |(grad v) v| below `floor` are skipped.
double eigen_collinearity_defect(const VectorField& v, double floor = 1e-12);

}  // namespace nsv
