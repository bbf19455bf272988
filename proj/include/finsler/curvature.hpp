#pragma once

// h-curvature of the Cartan connection and flag curvature.
//
// Conventions: R_nl(i, j, k) = R^i_jk = delta_k G^i_j - delta_j G^i_k;
// K_tensor(i, h, j, k) = K^i_hjk = delta_k Gamma^i_hj - delta_j Gamma^i_hk
//   + Gamma^r_hj Gamma^i_rk - Gamma^r_hk Gamma^i_rj;
// R_h(i, h, j, k) = K^i_hjk + C^i_hr R^r_jk.
// With these conventions the flag curvature is
//   K(y, X) = g_il X^l R^i_hjk y^h y^j X^k / (g(X,X) g(y,y) - g(X,y)^2),
// which is +1 on the unit sphere.

#include <cstdint>
#include <string>
#include <vector>

#include "finsler/chart.hpp"
#include "finsler/tensor.hpp"

namespace finsler {

struct CurvatureBundle {
  LineElement le;
  Matrix g;
  Tensor3 R_nl;
  Tensor4 K_tensor;
  Tensor4 R_h;
};

CurvatureBundle curvature_bundle(const FinslerStructure& F, const LineElement& le);

Tensor3 nl_curvature(const FinslerStructure& F, const LineElement& le);
Tensor4 k_tensor(const FinslerStructure& F, const LineElement& le);
Tensor4 h_curvature(const FinslerStructure& F, const LineElement& le);

/// Relative threshold below which a flag counts as degenerate.
constexpr double kFlagDegeneracy = 1e-12;

double flag_curvature(const CurvatureBundle& cb, std::span<const double> X);
double flag_curvature(const FinslerStructure& F, const LineElement& le, std::span<const double> X);

struct FlagSample {
  LineElement le;
  Vector X;
  double K = 0.0;
};

struct ScanReport {
  std::string label;
  std::vector<FlagSample> samples;
  double mean = 0.0;
  double std = 0.0;
  double min = 0.0;
  double max = 0.0;
};

/// Flag curvature at `samples` random flags; deterministic for a given seed.
ScanReport constancy_scan(const FinslerStructure& F, int samples, std::uint64_t seed);

/// Largest violation of antisymmetry in the last index pair.
double antisymmetry_defect(const Tensor3& t);
double antisymmetry_defect(const Tensor4& t);

}  // namespace finsler
