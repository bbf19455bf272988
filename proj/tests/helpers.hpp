#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "finsler/corpus.hpp"
#include "finsler/error.hpp"
#include "finsler/sampling.hpp"

namespace finsler::test {

inline FinslerStructure metric(const std::string& name) { return instantiate(builtin(name).spec); }

inline FinslerStructure randers(double b) {
  return instantiate(Json{{"schema", 1}, {"kind", "randers"}, {"n", 2}, {"alpha", {{1, 0}, {0, 1}}}, {"beta", {b, 0}}});
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_abs(const std::vector<double>& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

inline Vector random_vector(SampleStream& rng, int n) {
  Vector v(static_cast<std::size_t>(n));
  for (double& c : v) c = rng.normal();
  return v;
}

}  // namespace finsler::test
