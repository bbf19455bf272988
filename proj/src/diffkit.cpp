#include "finsler/diffkit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "finsler/error.hpp"

namespace finsler {

double partial(const JetFunction& f, std::span<const double> at, std::span<const int> multi_index) {
  const int nvars = static_cast<int>(at.size());
  for (int v : multi_index) {
    if (v < 0 || v >= nvars) throw Error(ErrorKind::InvalidArgument, "partial: index out of range");
  }
  auto space = JetSpace::get(nvars, static_cast<int>(multi_index.size()));
  std::vector<Jet> z;
  for (int i = 0; i < nvars; ++i) z.push_back(Jet::variable(space, i, at[static_cast<std::size_t>(i)]));
  const Jet r = f(z);
  if (r.is_scalar()) return multi_index.empty() ? r.value() : 0.0;
  return r.partial(multi_index);
}

double partial_f2(const FinslerStructure& F, const LineElement& le, std::span<const int> multi_index) {
  F.check(le);
  const auto n = static_cast<std::size_t>(F.dim());
  Vector at = le.x;
  at.insert(at.end(), le.y.begin(), le.y.end());
  return partial(
      [&F, n](std::span<const Jet> z) { return F.F2(z.subspan(0, n), z.subspan(n, n)); }, at, multi_index);
}

namespace {

double step_for(double a, double rel, double floor) { return std::max(rel * std::abs(a), floor); }

}  // namespace

FDResult fd_partial(const RealFunction& f, std::span<const double> at, std::span<const int> multi_index,
                    const FDConfig& cfg) {
  if (!(cfg.step > 0.0) || !(cfg.floor > 0.0)) throw Error(ErrorKind::Config, "finite-difference step must be positive");
  if (cfg.richardson_levels < 1) throw Error(ErrorKind::Config, "richardson_levels must be at least 1");
  if (multi_index.empty() || multi_index.size() > 2) {
    throw Error(ErrorKind::InvalidArgument, "fd_partial handles first and second derivatives only");
  }
  for (int v : multi_index) {
    if (v < 0 || v >= static_cast<int>(at.size())) throw Error(ErrorKind::InvalidArgument, "fd_partial: index out of range");
  }
  const bool second = multi_index.size() == 2;
  const auto i = static_cast<std::size_t>(multi_index[0]);
  const auto j = static_cast<std::size_t>(second ? multi_index[1] : multi_index[0]);
  // Second differences divide by h^2, so they get the square root of the
  // relative step to balance truncation against rounding.
  const double rel = second ? std::sqrt(cfg.step) : cfg.step;
  const double flo = second ? std::sqrt(cfg.floor) : cfg.floor;
  const double hi0 = step_for(at[i], rel, flo);
  const double hj0 = step_for(at[j], rel, flo);
  // Ridders' scheme: steps shrink by kShrink from 16 h0, each row is
  // extrapolated up to richardson_levels columns, and the entry with the
  // smallest error estimate wins. Large steps suit smooth functions, small
  // ones functions with nearby singularities.
  constexpr double kShrink = 1.4;
  constexpr int kRows = 20;
  const double start = 16.0;
  const double smallest = start * std::pow(kShrink, -(kRows - 1));
  if (at[i] + hi0 * smallest == at[i] || at[j] + hj0 * smallest == at[j]) {
    throw Error(ErrorKind::Config, "finite-difference step underflows against the argument");
  }

  Vector z(at.begin(), at.end());
  auto eval = [&](double di, double dj) {
    z.assign(at.begin(), at.end());
    z[i] += di;
    z[j] += dj;
    return f(z);
  };
  const double f0 = f(at);
  auto stencil = [&](double scale) {
    const double hi = hi0 * scale;
    const double hj = hj0 * scale;
    if (!second) return (eval(hi, 0.0) - eval(-hi, 0.0)) / (2.0 * hi);
    if (i == j) return (eval(hi, 0.0) - 2.0 * f0 + eval(-hi, 0.0)) / (hi * hi);
    return (eval(hi, hj) - eval(hi, -hj) - eval(-hi, hj) + eval(-hi, -hj)) / (4.0 * hi * hj);
  };

  // Rounding noise of one stencil, amplified a little by extrapolation.
  const double eps = std::numeric_limits<double>::epsilon();
  auto noise = [&](double scale) {
    const double hi = hi0 * scale;
    const double hj = hj0 * scale;
    return 8.0 * eps * std::abs(f0) / (second ? hi * hj : hi);
  };

  const int levels = cfg.richardson_levels;
  const double fac = kShrink * kShrink;
  std::vector<double> prev;
  FDResult best{std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::infinity()};
  double scale = start;
  for (int r = 0; r < kRows; ++r, scale /= kShrink) {
    std::vector<double> row{stencil(scale)};
    double pow_fac = 1.0;
    for (int m = 1; m <= std::min(r, levels); ++m) {
      pow_fac *= fac;
      row.push_back((row[m - 1] * pow_fac - prev[m - 1]) / (pow_fac - 1.0));
      const double err = std::max({std::abs(row[m] - row[m - 1]), std::abs(row[m] - prev[m - 1]), noise(scale)});
      if (std::isfinite(row[m]) && err < best.error) best = {row[m], err};
    }
    prev = std::move(row);
  }
  return best;
}

FDResult fd_partial_f2(const FinslerStructure& F, const LineElement& le, std::span<const int> multi_index,
                       const FDConfig& cfg) {
  F.check(le);
  const auto n = static_cast<std::size_t>(F.dim());
  Vector at = le.x;
  at.insert(at.end(), le.y.begin(), le.y.end());
  return fd_partial(
      [&F, n](std::span<const double> z) {
        // Stencil points outside the domain yield NaN and drop out of the tableau.
        if (!F.chart().contains(z.subspan(0, n))) return std::numeric_limits<double>::quiet_NaN();
        return F.F2(z.subspan(0, n), z.subspan(n, n));
      },
      at, multi_index, cfg);
}

std::vector<double> default_limit_schedule() {
  std::vector<double> s;
  for (int k = 2; k <= 8; ++k) s.push_back(std::pow(10.0, -k));
  return s;
}

namespace {

// Neville tableau for the interpolating polynomial at eps = 0. The diagonal
// entry that moves least from its predecessor is the estimate.
std::pair<double, double> neville_estimate(std::span<const double> eps, std::span<const double> values) {
  const std::size_t m = eps.size();
  std::vector<double> p(values.begin(), values.end());
  std::vector<double> diagonal{p.back()};
  for (std::size_t level = 1; level < m; ++level) {
    for (std::size_t k = 0; k + level < m; ++k) {
      const double a = eps[k];
      const double b = eps[k + level];
      p[k] = (b * p[k] - a * p[k + 1]) / (b - a);
    }
    diagonal.push_back(p[m - 1 - level]);
  }
  if (diagonal.size() < 2) return {diagonal[0], std::numeric_limits<double>::infinity()};
  double best_err = std::abs(diagonal[1] - diagonal[0]);
  double best = diagonal[1];
  for (std::size_t k = 2; k < diagonal.size(); ++k) {
    const double err = std::abs(diagonal[k] - diagonal[k - 1]);
    if (err < best_err) {
      best_err = err;
      best = diagonal[k];
    }
  }
  return {best, best_err};
}

}  // namespace

LimitResult directional_limit(const std::function<double(const LineElement&)>& f, const LineElement& at,
                              std::span<const double> gap, std::span<const double> schedule, double tolerance) {
  std::vector<double> eps(schedule.begin(), schedule.end());
  if (eps.empty()) eps = default_limit_schedule();
  if (eps.size() < 3) throw Error(ErrorKind::InvalidArgument, "limit schedule needs at least three steps");
  for (std::size_t k = 0; k < eps.size(); ++k) {
    if (!(eps[k] > 0.0) || (k > 0 && !(eps[k] < eps[k - 1]))) {
      throw Error(ErrorKind::InvalidArgument, "limit schedule must be positive and decreasing");
    }
  }
  if (gap.size() != at.y.size()) throw Error(ErrorKind::InvalidArgument, "gap direction has the wrong dimension");

  LimitResult out;
  for (double e : eps) {
    LineElement le = at;
    for (std::size_t i = 0; i < le.y.size(); ++i) le.y[i] += e * gap[i];
    const double v = f(le);
    if (!std::isfinite(v)) throw Error(ErrorKind::LimitDivergent, "non-finite value along the limit sequence");
    out.sequence.push_back(v);
  }

  const auto [best, best_err] = neville_estimate(eps, out.sequence);
  // A divergent sequence keeps moving the estimate when the last step is
  // dropped, even when its relative spread looks small.
  const auto [coarse, coarse_err] = neville_estimate(std::span<const double>(eps).first(eps.size() - 1),
                                                     std::span<const double>(out.sequence).first(eps.size() - 1));
  const double spread = std::max(best_err, std::abs(best - coarse));
  out.value = best;
  out.error = spread;
  out.converged = spread <= tolerance * std::max(1.0, std::abs(best));
  if (!out.converged) {
    throw Error(ErrorKind::LimitDivergent, "extrapolants did not settle (spread " + std::to_string(spread) + ")");
  }
  return out;
}

}  // namespace finsler
