#pragma once

// Exact partial derivatives through jets, a finite-difference oracle kept
// independent of the jet engine, and extrapolation of limits along a
// direction in y-space.

#include <functional>
#include <span>
#include <vector>

#include "finsler/chart.hpp"
#include "finsler/jet.hpp"

namespace finsler {

using JetFunction = std::function<Jet(std::span<const Jet>)>;
using RealFunction = std::function<double(std::span<const double>)>;

/// Mixed partial d^|I| f / dz^I at `at`, exact up to rounding.
double partial(const JetFunction& f, std::span<const double> at, std::span<const int> multi_index);

/// Partial of F^2 in the 2n line-element variables (x first, then y).
double partial_f2(const FinslerStructure& F, const LineElement& le, std::span<const int> multi_index);

struct FDConfig {
  double step = 1e-5;  // relative to |argument|
  double floor = 1e-7;
  int richardson_levels = 2;
};

struct FDResult {
  double value = 0.0;
  double error = 0.0;
};

/// Central differences with Richardson extrapolation. At most two indices;
/// nest calls for higher orders. Throws Error(Config) on a bad configuration
/// or when the step underflows against the argument.
FDResult fd_partial(const RealFunction& f, std::span<const double> at, std::span<const int> multi_index,
                    const FDConfig& cfg = {});

FDResult fd_partial_f2(const FinslerStructure& F, const LineElement& le, std::span<const int> multi_index,
                       const FDConfig& cfg = {});

struct LimitResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = false;
  std::vector<double> sequence;
};

/// Default schedule 10^-2 ... 10^-8.
std::vector<double> default_limit_schedule();

/// Limit of f(x, y + eps * gap) as eps -> 0 by polynomial extrapolation in eps.
/// Throws Error(LimitDivergent) when the extrapolants do not settle.
LimitResult directional_limit(const std::function<double(const LineElement&)>& f, const LineElement& at,
                              std::span<const double> gap, std::span<const double> schedule = {},
                              double tolerance = 1e-6);

}  // namespace finsler
