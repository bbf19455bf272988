#include "finsler/geodesic.hpp"

#include <algorithm>
#include <boost/numeric/odeint/stepper/runge_kutta4.hpp>
#include <cmath>

#include "finsler/connection.hpp"
#include "finsler/error.hpp"

namespace finsler {

namespace {

// Thrown from inside the right-hand side so the stepper aborts cleanly.
struct OutsideDomain {};

}  // namespace

GeodesicPath trace_geodesic(const FinslerStructure& F, const Vector& x0, const Vector& y0, double t_span,
                            double step) {
  if (!(step > 0.0) || !(t_span > 0.0)) throw Error(ErrorKind::InvalidArgument, "step and t_span must be positive");
  const auto n = static_cast<std::size_t>(F.dim());
  F.check({x0, y0});
  const double f0 = F.F(x0, y0);
  if (!(f0 > 0.0)) throw Error(ErrorKind::InvalidArgument, "initial direction has zero length");

  using State = std::vector<double>;
  State s(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    s[i] = x0[i];
    s[n + i] = y0[i] / f0;
  }
  auto rhs = [&F, n](const State& z, State& dz, double) {
    LineElement le{Vector(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(n)),
                   Vector(z.begin() + static_cast<std::ptrdiff_t>(n), z.end())};
    if (!F.chart().contains(le.x)) throw OutsideDomain{};
    const Vector G = spray(F, le);
    for (std::size_t i = 0; i < n; ++i) {
      dz[i] = z[n + i];
      dz[n + i] = -2.0 * G[i];
    }
  };

  GeodesicPath path;
  auto record = [&](double t, const State& z) {
    Vector x(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(n));
    Vector y(z.begin() + static_cast<std::ptrdiff_t>(n), z.end());
    const double speed = F.F(x, y);
    path.t.push_back(t);
    path.x.push_back(std::move(x));
    path.y.push_back(std::move(y));
    path.speed.push_back(speed);
    path.max_speed_error = std::max(path.max_speed_error, std::abs(speed - 1.0));
  };
  record(0.0, s);

  boost::numeric::odeint::runge_kutta4<State> stepper;
  const auto steps = static_cast<std::size_t>(std::ceil(t_span / step - 1e-9));
  double t = 0.0;
  for (std::size_t k = 1; k <= steps; ++k) {
    const double t_next = k == steps ? t_span : static_cast<double>(k) * step;
    State trial = s;
    try {
      stepper.do_step(rhs, trial, t, t_next - t);
    } catch (const OutsideDomain&) {
      path.left_domain = true;
      break;
    }
    if (!F.chart().contains(std::span<const double>(trial.data(), n))) {
      path.left_domain = true;
      break;
    }
    s = std::move(trial);
    t = t_next;
    record(t, s);
  }
  return path;
}

}  // namespace finsler
