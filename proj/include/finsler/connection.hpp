#pragma once

// First-order geometry of a Finsler structure at a line element: fundamental
// tensor, Cartan torsion, formal Christoffel symbols, spray, nonlinear
// connection, the horizontal derivative delta/delta x and the Cartan
// connection, plus Cartan h-covariant derivatives of covector fields.
//
// Index conventions: C(i, j, k) = C_ijk (all lower); gamma(i, j, k) and
// Gamma_star(i, j, k) carry the upper index first; NG(i, j) = G^i_j =
// dG^i / dy^j.

#include <functional>
#include <span>
#include <vector>

#include "finsler/chart.hpp"
#include "finsler/jet.hpp"
#include "finsler/tensor.hpp"

namespace finsler {

struct ConnectionBundle {
  LineElement le;
  Matrix g;
  Matrix g_inv;
  Tensor3 C;
  Tensor3 gamma;
  Vector G;
  Matrix NG;
  Tensor3 Gamma_star;
};

/// Condition number above which the fundamental tensor is rejected.
constexpr double kMaxConditionNumber = 1e12;

Matrix fundamental_tensor(const FinslerStructure& F, const LineElement& le);
Tensor3 cartan_torsion(const FinslerStructure& F, const LineElement& le);
Tensor3 formal_christoffel(const FinslerStructure& F, const LineElement& le);
Vector spray(const FinslerStructure& F, const LineElement& le);
Matrix nonlinear_connection(const FinslerStructure& F, const LineElement& le);

/// Cartan coefficients from delta-derivatives of g.
Tensor3 cartan_coefficients(const FinslerStructure& F, const LineElement& le);
/// The same coefficients assembled from gamma, C and the nonlinear connection.
Tensor3 cartan_coefficients_composed(const FinslerStructure& F, const LineElement& le);

ConnectionBundle connection_bundle(const FinslerStructure& F, const LineElement& le);

/// A function on TM evaluated over jets of (x, y).
using PhaseField = std::function<Jet(std::span<const Jet>, std::span<const Jet>)>;
/// A covector field omega_l(x, y) evaluated over jets.
using CovectorField = std::function<std::vector<Jet>(std::span<const Jet>, std::span<const Jet>)>;

double delta_x(const FinslerStructure& F, const PhaseField& field, const LineElement& le, int i);

/// M(k, l) = nabla^H_k omega_l = delta_k omega_l - Gamma*^j_{lk} omega_j.
Matrix h_covariant_covector(const FinslerStructure& F, const CovectorField& field, const LineElement& le);

/// nabla^H_k g_ij stored as T(i, j, k); vanishes for the Cartan connection.
Tensor3 h_covariant_metric(const FinslerStructure& F, const LineElement& le);

/// nabla^H_k rho_l - phi(x) g_kl, stored as M(k, l).
Matrix cfield_residual(const FinslerStructure& F, const ScalarField& rho, const ScalarField& phi,
                       const LineElement& le);

/// Gradient covector field of a scalar field, for h_covariant_covector.
CovectorField gradient_field(const ScalarField& rho);

/// Raise the first index of a rank-3 tensor with g^{-1}.
Tensor3 raise_first(const Tensor3& lower, const Matrix& g_inv);

double max_abs(std::span<const double> values);

namespace detail {

/// All first-order objects as jets in the 2n line-element variables
/// (x first, then y). The jet order of each object is `order` minus the
/// number of derivatives it contains: g and g_inv order-2, C, gamma, G
/// order-3, NG and Gamma order-4.
struct JetGeometry {
  int n = 0;
  int order = 0;
  std::vector<Jet> x;
  std::vector<Jet> y;
  Jet F2;
  SquareTensor<Jet, 2> g;
  SquareTensor<Jet, 2> g_inv;
  SquareTensor<Jet, 3> dg_dx;  // (i, j, k) = d g_ij / dx^k
  SquareTensor<Jet, 3> dg_dy;  // (i, j, k) = d g_ij / dy^k
  SquareTensor<Jet, 3> gamma;
  std::vector<Jet> G;
  SquareTensor<Jet, 2> NG;
  SquareTensor<Jet, 3> Gamma;
};

enum class Depth { Metric, Spray, Connection };

JetGeometry build_jet_geometry(const FinslerStructure& F, const LineElement& le, int order, Depth depth);

/// delta_k f = d f / dx^k - G^r_k d f / dy^r, one jet order below f.
Jet delta(const JetGeometry& geo, const Jet& f, int k);

template <int R>
SquareTensor<double, R> values(const SquareTensor<Jet, R>& t) {
  SquareTensor<double, R> out(t.dim());
  for (std::size_t i = 0; i < t.size(); ++i) out.flat()[i] = t.flat()[i].value();
  return out;
}

}  // namespace detail

}  // namespace finsler
