#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "finsler/jet.hpp"
#include "finsler/tensor.hpp"

namespace finsler {

/// A single coordinate chart: dimension, an open domain predicate, and a box
/// the samplers draw from (points outside the predicate are rejected).
struct Chart {
  int dim = 2;
  std::string label;
  std::function<bool(std::span<const double>)> domain;
  std::vector<std::pair<double, double>> sample_box;

  bool contains(std::span<const double> x) const;
  static Chart euclidean(int dim, std::string label, double half_width = 1.0);
};

struct LineElement {
  Vector x;
  Vector y;
};

template <class S>
using PhaseFunction = std::function<S(std::span<const S>, std::span<const S>)>;

struct StructureInfo {
  std::string label;
  bool reversible = true;
  bool riemannian = false;
  /// Coordinate direction e_k whose line in y-space is a non-smooth locus of F^2.
  std::optional<int> nonsmooth_axis;
};

/// F(x, y) on one chart, stored as F^2 over doubles and over jets so every
/// derivative the geometry needs can be propagated exactly.
class FinslerStructure {
 public:
  FinslerStructure(Chart chart, PhaseFunction<Jet> f2_jet, PhaseFunction<double> f2_real, StructureInfo info);

  /// Build from a callable with a templated call operator
  /// `S operator()(std::span<const S> x, std::span<const S> y)` returning F^2.
  template <class Fn>
  static FinslerStructure from_squared(Chart chart, Fn f2, StructureInfo info) {
    PhaseFunction<Jet> j = [f2](std::span<const Jet> x, std::span<const Jet> y) { return f2(x, y); };
    PhaseFunction<double> r = [f2](std::span<const double> x, std::span<const double> y) { return f2(x, y); };
    return FinslerStructure(std::move(chart), std::move(j), std::move(r), std::move(info));
  }

  const Chart& chart() const { return chart_; }
  int dim() const { return chart_.dim; }
  const StructureInfo& info() const { return info_; }
  const std::string& label() const { return info_.label; }

  double F(std::span<const double> x, std::span<const double> y) const;
  double F2(std::span<const double> x, std::span<const double> y) const { return f2_real_(x, y); }
  Jet F2(std::span<const Jet> x, std::span<const Jet> y) const { return f2_jet_(x, y); }

  /// Throws InvalidArgument for a zero direction, a dimension mismatch or a
  /// base point outside the domain.
  void check(const LineElement& le) const;

  /// True when y lies within `half_angle` radians of the non-smooth axis.
  bool near_nonsmooth_axis(std::span<const double> y, double half_angle = 1e-3) const;

 private:
  Chart chart_;
  PhaseFunction<Jet> f2_jet_;
  PhaseFunction<double> f2_real_;
  StructureInfo info_;
};

/// A function of position only (used for rho and phi).
struct ScalarField {
  std::function<Jet(std::span<const Jet>)> jet;
  std::function<double(std::span<const double>)> real;

  template <class Fn>
  static ScalarField from_generic(Fn f) {
    return {[f](std::span<const Jet> x) { return f(x); }, [f](std::span<const double> x) { return f(x); }};
  }
  double operator()(std::span<const double> x) const { return real(x); }
};

/// u -> x(u) from an m-dimensional chart into an n-dimensional one.
struct Immersion {
  int source_dim = 1;
  int target_dim = 2;
  std::function<std::vector<Jet>(std::span<const Jet>)> map;
  std::vector<std::pair<double, double>> sample_box;
  std::function<bool(std::span<const double>)> domain;

  template <class Fn>
  static Immersion from_generic(int m, int n, Fn f, std::vector<std::pair<double, double>> box) {
    Immersion im;
    im.source_dim = m;
    im.target_dim = n;
    im.map = [f](std::span<const Jet> u) { return f(u); };
    im.sample_box = std::move(box);
    return im;
  }

  /// Jacobian B(k, a) = dx^k / du^a at a real point (n rows, m columns, row-major).
  std::vector<double> jacobian(std::span<const double> u) const;
  Vector point(std::span<const double> u) const;
};

struct ValidationSample {
  LineElement le;
  double value = 0.0;
  double homogeneity_error = 0.0;
  double euler_error = 0.0;
  double min_eigenvalue = 0.0;
  std::string failure;
};

struct ValidationReport {
  std::string label;
  std::vector<ValidationSample> samples;
  double max_homogeneity_error = 0.0;
  double max_euler_error = 0.0;
  double min_eigenvalue = 0.0;
  double homogeneity_tolerance = 1e-9;
  bool pass = false;
};

ValidationReport validate_structure(const FinslerStructure& F, int samples, std::uint64_t seed,
                                    double homogeneity_tolerance = 1e-9);

/// g(X, X) at the line element.
double f_squared_norm(const FinslerStructure& F, const LineElement& le, std::span<const double> X);

/// The induced structure F(x(u), B(u) v) on the source chart of `immersion`.
FinslerStructure restrict_to_hypersurface(const FinslerStructure& F, const Immersion& immersion);

}  // namespace finsler
