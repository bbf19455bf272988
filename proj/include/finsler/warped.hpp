#pragma once

// Warped structures F^2 = s^2 + rho'(t)^2 Fbar^2(u, v) in adapted coordinates
// (t, u^2, ..., u^n), direction (s, v). Index 0 is the t-axis throughout.

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "finsler/chart.hpp"
#include "finsler/curvature.hpp"

namespace finsler {

struct WarpProfile {
  std::string name;
  std::function<Jet(const Jet&)> rho;
  std::function<Jet(const Jet&)> rho_prime;
  /// rho, rho', rho'', rho''' at a real t.
  std::function<std::array<double, 4>(double)> derivatives;
  /// Open interval on which rho' does not vanish.
  double t_min = 0.0;
  double t_max = 1.0;
  std::pair<double, double> sample_interval{0.0, 1.0};

  /// name in {linear, sin, sinh, t, cos_shift}; params: linear {a, b},
  /// cos_shift {K, a, b} (rho = a cos(K t) + b). Missing params take defaults
  /// a = 1, b = 0, K = 1; cos_shift defaults a to -1/K.
  static WarpProfile analytic(const std::string& name, const std::map<std::string, double>& params = {});
};

struct WarpedStructure {
  WarpProfile profile;
  FinslerStructure base;
  FinslerStructure total;
};

/// Throws CriticalPoint when rho' vanishes inside the profile's sample interval.
WarpedStructure build_warped(const WarpProfile& profile, const FinslerStructure& base);

/// Closed-form Cartan coefficients in adapted coordinates.
Tensor3 predicted_cartan(const WarpedStructure& ws, const LineElement& le);

/// Closed-form h-curvature in adapted coordinates. sigma multiplies the
/// explicit rho-terms; the base block comes from the base structure.
Tensor4 predicted_curvature(const WarpedStructure& ws, const LineElement& le, int sigma = 1);

struct ComponentError {
  std::string pattern;  // index pattern, t for the axis and b for base slots
  double max_error = 0.0;
};

struct VerifyReport {
  std::string label;
  int samples = 0;
  int sigma = 1;
  double max_error_cartan = 0.0;
  double max_error_curvature = 0.0;
  std::vector<ComponentError> cartan_components;
  std::vector<ComponentError> curvature_components;
  double tolerance = 1e-6;
  bool pass_cartan = false;
  bool pass_curvature = false;
};

/// Componentwise comparison of the generic pipeline with the closed forms.
/// Errors are absolute, divided by max(1, |predicted|) per component.
VerifyReport verify_adapted(const WarpedStructure& ws, int samples, std::uint64_t seed, int sigma = 1,
                            double tolerance = 1e-6);

struct SigmaResolution {
  int sigma = 1;
  double error_plus = 0.0;
  double error_minus = 0.0;
};

/// Fixes the global sign on rho' = sin t over a flat base of dimension 2.
SigmaResolution resolve_sigma(int samples = 20, std::uint64_t seed = 0);

struct SecondFundamentalForm {
  Matrix h_form;      // h_gb on the level t = const
  Matrix g_level;     // induced metric g_gb
  double h = 0.0;     // predicted umbilicity factor -rho''/|rho'|
  double umbilicity_defect = 0.0;
};

/// le must be tangent to its t-level (s = 0).
SecondFundamentalForm second_fundamental_form(const WarpedStructure& ws, const LineElement& le);

struct NormDecomposition {
  double total = 0.0;           // |R_h|^2_g from the generic pipeline
  double base_part = 0.0;       // rho'^-4 |Rbar - rho''^2 f^f|^2_f
  double axis_part = 0.0;       // 4 n (rho'''/rho')^2
  double axis_part_direct = 0.0;  // axis components of the generic tensor
  double axis_part_count = 0.0;   // 4 (n - 1) (rho'''/rho')^2
};

NormDecomposition curvature_norm_decomposition(const WarpedStructure& ws, const LineElement& le);

/// Total structure dt^2 + sin^2(K t) Kbar^2 gbar over a base of constant
/// curvature Kbar, on 0 < t < pi/K. Kbar is measured on the base with a
/// constancy scan; a one-dimensional base takes Kbar = 1/K^2.
struct SphereConstruction {
  WarpedStructure warped;
  double K = 1.0;
  double base_curvature = 0.0;
  double base_scale = 1.0;  // the factor Kbar^2
};

SphereConstruction build_sphere_metric(double K, const FinslerStructure& base, int base_samples = 200,
                                       std::uint64_t seed = 0);

/// g(X, Y) = X^T g Y and friends used by the warped checks.
double norm_squared(const Tensor4& R, const Matrix& g, const Matrix& g_inv);

}  // namespace finsler
