#pragma once

// Metric specifications (JSON, "schema": 1) and the built-in metric zoo.
//
//   {"schema": 1, "kind": "euclidean", "n": 2}
//   {"schema": 1, "kind": "riemannian", "n": 2, "metric": [["1", "0"], ["0", "sin(x1)^2"]],
//    "box": [[0.3, 2.8], [-3, 3]], "domain": {"x1": [0, 3.14159]}}
//   {"schema": 1, "kind": "sphere_polar", "n": 3, "radius": 1}
//   {"schema": 1, "kind": "randers", "n": 2, "alpha": [[1, 0], [0, 1]], "beta": [0.5, 0]}
//   {"schema": 1, "kind": "funk", "n": 2}
//   {"schema": 1, "kind": "warped", "profile": {"kind": "analytic", "name": "sin"}, "base": {...}}
//   {"schema": 1, "kind": "warped", "profile": {"kind": "ode", "phi": "-(rho - 0)", "rho0": -1,
//    "drho0": 0, "span": [0, 4]}, "base": {...}}
//   {"schema": 1, "kind": "sphere_construction", "K": 1, "base": {...}}
//
// Matrix and covector entries are numbers or expression strings in x1..xn.
// Nested base specs omit "schema".

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "finsler/chart.hpp"
#include "finsler/warped.hpp"

namespace finsler {

using Json = nlohmann::json;

constexpr int kSchemaVersion = 1;

struct InstantiateOptions {
  /// When false, metric invariants (|beta|_alpha < 1) are not enforced so that
  /// validation can report on structures that violate them.
  bool check_invariants = true;
  int construction_samples = 200;
};

/// Throws Error(Spec) naming the offending field.
FinslerStructure instantiate(const Json& spec, const InstantiateOptions& options = {});

/// For "warped" and "sphere_construction" specs.
WarpedStructure instantiate_warped(const Json& spec, const InstantiateOptions& options = {});
std::optional<SphereConstruction> instantiate_sphere(const Json& spec, const InstantiateOptions& options = {});

bool is_warped_spec(const Json& spec);

Json load_spec(const std::string& path);

/// Position-dependent matrix of a Riemannian spec (euclidean, riemannian,
/// sphere_polar), evaluated from the metric spec directly rather than through F.
using MetricField = std::function<Matrix(std::span<const double>)>;
std::optional<MetricField> riemannian_metric_field(const Json& spec);

struct BuiltinEntry {
  std::string name;
  std::string description;
  Json spec;
  std::optional<double> expected_curvature;
  std::string curvature_note;  // e.g. "constant (value measured)"
  std::string provenance;      // literature, closed-form, measured
};

const std::vector<BuiltinEntry>& list_builtins();
const BuiltinEntry& builtin(const std::string& name);

}  // namespace finsler
