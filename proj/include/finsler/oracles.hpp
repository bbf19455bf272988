#pragma once

// Reference values computed without the jet pipeline: finite differences of
// the Riemannian metric matrix, closed-form Christoffel symbols of round
// spheres, and the spray assembled from finite-difference partials of F^2.

#include <span>

#include "finsler/corpus.hpp"
#include "finsler/diffkit.hpp"
#include "finsler/tensor.hpp"

namespace finsler {

/// Gamma(i, j, k) = Gamma^i_jk of the Levi-Civita connection, from central
/// differences of the metric matrix.
Tensor3 levi_civita_fd(const MetricField& g, std::span<const double> x, const FDConfig& cfg = {});

/// Closed-form Christoffel symbols of r^2 (dx1^2 + sin^2 x1 dx2^2 + ...).
Tensor3 sphere_polar_christoffel(int n, double radius, std::span<const double> x);

/// Riemann tensor R(i, j, k, l) = R^i_jkl (R(X, Y)Z = R^i_jkl Z^j X^k Y^l)
/// from nested finite differences of the metric.
Tensor4 riemann_fd(const MetricField& g, std::span<const double> x, const FDConfig& cfg = {});

/// Sectional curvature of span(y, X) from riemann_fd.
double sectional_curvature_fd(const MetricField& g, std::span<const double> x, std::span<const double> y,
                              std::span<const double> X, const FDConfig& cfg = {});

/// G^i = 1/4 g^il (d^2 F^2 / dx^k dy^l y^k - dF^2 / dx^l), all partials by
/// finite differences.
Vector spray_fd(const FinslerStructure& F, const LineElement& le, const FDConfig& cfg = {});

/// The Funk metric's spray G^i = F y^i / 2 in closed form.
Vector funk_spray(const LineElement& le);

}  // namespace finsler
