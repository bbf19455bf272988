#pragma once

#include <vector>

#include "finsler/chart.hpp"

namespace finsler {

struct GeodesicPath {
  std::vector<double> t;
  std::vector<Vector> x;
  std::vector<Vector> y;
  std::vector<double> speed;  // F(x, y) along the path
  bool left_domain = false;
  double max_speed_error = 0.0;
};

/// Integrates x'' + 2 G(x, x') = 0 with RK4 from (x0, y0), y0 rescaled so that
/// F(x0, y0) = 1. Stops early, with left_domain set, when a stage leaves the chart.
GeodesicPath trace_geodesic(const FinslerStructure& F, const Vector& x0, const Vector& y0, double t_span,
                            double step = 1e-2);

}  // namespace finsler
