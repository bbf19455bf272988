#pragma once

// The acceptance suite: twelve numbered checks, each reported as one
// PASS/FAIL line with the measured values, plus informational lines.

#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "finsler/chart.hpp"

namespace finsler {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string measured;
  std::vector<std::string> info;
};

struct AcceptanceOptions {
  std::uint64_t seed = 0;
  std::set<int> criteria;  // empty selects all
};

/// Runs the selected criteria in order; `on_result` (optional) sees each
/// result as soon as it is available.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options,
                                            const std::function<void(const CriterionResult&)>& on_result = {});

std::string format_result(const CriterionResult& r);

/// Largest violations of the connection-level identities at one line element,
/// each divided by max(1, magnitude of the compared quantity).
struct InvariantDefects {
  double inverse = 0.0;        // g g^-1 - I
  double euler_metric = 0.0;   // g(y, y) - F^2
  double cartan_symmetry = 0.0;
  double cartan_euler = 0.0;   // C_ijk y^k
  double gamma_contraction = 0.0;  // Gamma* y y - gamma y y
  double gamma_symmetry = 0.0;
  double spray_contraction = 0.0;  // G - 1/2 Gamma* y y
  double nonlinear_euler = 0.0;    // G^i_j y^j - 2 G^i
  double metric_compatibility = 0.0;
  double delta_f2 = 0.0;       // delta F^2 / delta x^i
  double composed = 0.0;       // delta-based vs composed Cartan coefficients
  double homogeneity = 0.0;    // degree checks under y -> 2y

  double max() const;
};

InvariantDefects connection_invariant_defects(const FinslerStructure& F, const LineElement& le);

}  // namespace finsler
