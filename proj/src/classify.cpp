#include "finsler/classify.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint/stepper/runge_kutta4.hpp>
#include <cmath>
#include <memory>
#include <numbers>

namespace finsler {

namespace {

using State = std::array<double, 2>;
using Stepper = boost::numeric::odeint::runge_kutta4<State>;

State rk4_step(const ProfileRhs& phi, State x, double t, double h) {
  Stepper stepper;
  stepper.do_step([&phi](const State& s, State& ds, double) {
    ds[0] = s[1];
    ds[1] = phi.real(s[0]);
  }, x, t, h);
  return x;
}

double sign_of(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace

ProfileRhs ProfileRhs::from_expression(const Expression& e) {
  ProfileRhs r;
  r.real = [e](double rho) { return e.eval<double>(std::span<const double>(&rho, 1)); };
  r.jet = [e](const Jet& rho) { return e.eval<Jet>(std::span<const Jet>(&rho, 1)); };
  return r;
}

ProfileRhs ProfileRhs::constant(double c) {
  return {[c](double) { return c; }, [c](const Jet&) { return Jet(c); }};
}

std::array<double, 2> ProfileSolution::state(double t) const {
  if (grid.empty()) throw Error(ErrorKind::InvalidArgument, "empty profile solution");
  const double slack = 1e-12 * std::max(1.0, std::abs(t));
  if (t < grid.front() - slack || t > grid.back() + slack) {
    throw Error(ErrorKind::InvalidArgument, "t = " + std::to_string(t) + " outside the integrated span");
  }
  auto it = std::upper_bound(grid.begin(), grid.end(), t);
  const std::size_t k = it == grid.begin() ? 0 : static_cast<std::size_t>(it - grid.begin()) - 1;
  const State node{rho[k], rho_prime[k]};
  if (t == grid[k]) return node;
  return rk4_step(phi, node, grid[k], t - grid[k]);
}

ProfileSolution integrate_profile(const ProfileRhs& phi, double rho0, double rho_prime0, double t_begin,
                                  double t_end, double step) {
  if (!(step > 0.0)) throw Error(ErrorKind::InvalidArgument, "step must be positive");
  if (!(t_end > t_begin)) throw Error(ErrorKind::InvalidArgument, "empty integration span");
  ProfileSolution sol;
  sol.phi = phi;
  sol.step = step;
  sol.grid.push_back(t_begin);
  sol.rho.push_back(rho0);
  sol.rho_prime.push_back(rho_prime0);
  if (rho_prime0 == 0.0) sol.events.push_back({t_begin, CriticalKind::LeftEnd, phi.real(rho0)});

  const auto steps = static_cast<std::size_t>(std::ceil((t_end - t_begin) / step - 1e-9));
  State x{rho0, rho_prime0};
  for (std::size_t k = 1; k <= steps; ++k) {
    const double t_prev = sol.grid.back();
    const double t_next = k == steps ? t_end : t_begin + static_cast<double>(k) * step;
    const State prev = x;
    x = rk4_step(phi, x, t_prev, t_next - t_prev);
    if (!std::isfinite(x[0]) || !std::isfinite(x[1]) || std::abs(x[0]) > kBlowUp) {
      throw ProfileDivergence("profile blows up near t = " + std::to_string(t_next), sol);
    }
    sol.grid.push_back(t_next);
    sol.rho.push_back(x[0]);
    sol.rho_prime.push_back(x[1]);

    if (x[1] == 0.0) {
      sol.events.push_back({t_next, CriticalKind::Interior, phi.real(x[0])});
    } else if (prev[1] * x[1] < 0.0) {
      double lo = t_prev;
      double hi = t_next;
      while (hi - lo > kEventTolerance) {
        const double mid = 0.5 * (lo + hi);
        const double v = rk4_step(phi, prev, t_prev, mid - t_prev)[1];
        if (v == 0.0) {
          lo = hi = mid;
          break;
        }
        (sign_of(v) == sign_of(prev[1]) ? lo : hi) = mid;
      }
      double te = 0.5 * (lo + hi);
      const State s = rk4_step(phi, prev, t_prev, te - t_prev);
      const double curvature = phi.real(s[0]);
      if (curvature != 0.0) {
        const double newton = te - s[1] / curvature;
        if (newton >= t_prev && newton <= t_next) te = newton;
      }
      sol.events.push_back({te, CriticalKind::Interior, phi.real(rk4_step(phi, prev, t_prev, te - t_prev)[0])});
    }
  }
  return sol;
}

CriticalCount count_critical(const ProfileSolution& sol) {
  CriticalCount c;
  c.count = static_cast<int>(sol.events.size());
  c.points = sol.events;
  if (c.count > 2) {
    c.consistent = false;
    c.diagnostic = "not a solution: " + std::to_string(c.count) +
                   " critical points along one t-geodesic, at most two are possible";
  }
  return c;
}

std::string to_string(ConformalModel m) {
  switch (m) {
    case ConformalModel::Product: return "product";
    case ConformalModel::EuclideanBall: return "euclidean_ball";
    case ConformalModel::SpherePolar: return "sphere_polar";
  }
  return "unknown";
}

std::string to_string(CriticalKind k) { return k == CriticalKind::LeftEnd ? "left-end" : "interior"; }

namespace {

// Integral of ds / |rho'(s)| over [a, b]. Near each critical point t_c,
// |rho'| ~ c |s - t_c| with c = |phi(rho(t_c))|; those poles are subtracted
// and integrated analytically.
double inverse_speed_integral(const ProfileSolution& sol, double a, double b) {
  if (a == b) return 0.0;
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);
  struct Pole {
    double t;
    double c;
    double side;
  };
  std::vector<Pole> poles;
  double analytic = 0.0;
  for (const auto& e : sol.events) {
    if (e.t > lo && e.t < hi) {
      throw Error(ErrorKind::CriticalPoint, "integration range crosses the critical point t = " + std::to_string(e.t));
    }
    const double c = std::abs(e.rho_second);
    if (c == 0.0) continue;
    const double side = lo >= e.t ? 1.0 : -1.0;
    poles.push_back({e.t, c, side});
    if (lo == e.t || hi == e.t) continue;  // handled below
    analytic += side * (std::log(std::abs(hi - e.t)) - std::log(std::abs(lo - e.t))) / c;
  }
  for (const auto& p : poles) {
    if (lo == p.t || hi == p.t) {
      throw Error(ErrorKind::CriticalPoint, "integral of 1/rho' diverges at the critical point");
    }
  }
  auto integrand = [&](double s) {
    double v = 1.0 / std::abs(sol.state(s)[1]);
    for (const auto& p : poles) v -= 1.0 / (p.c * std::abs(s - p.t));
    return v;
  };
  double err = 0.0;
  const double smooth =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, lo, hi, 15, 1e-13, &err);
  const double total = smooth + analytic;
  return b >= a ? total : -total;
}

// Orientation of rho' just to the right of t_c (or at t when no events).
double orientation_after(const ProfileSolution& sol, double t) {
  const double probe = std::min(sol.t_end(), t + 0.5 * sol.step);
  return sign_of(sol.state(probe)[1]);
}

}  // namespace

ClassificationReport classify_profile(const ProfileSolution& sol) {
  const CriticalCount cc = count_critical(sol);
  if (!cc.consistent) throw Error(ErrorKind::NotASolution, cc.diagnostic);
  ClassificationReport r;
  r.solution = sol;
  r.critical_points = cc.count;
  r.points = cc.points;
  if (cc.count == 0) {
    r.case_tag = 'a';
    r.model = ConformalModel::Product;
    r.interval = {reparam_a(sol, sol.t_begin()), reparam_a(sol, sol.t_end())};
  } else if (cc.count == 1) {
    r.case_tag = 'b';
    r.model = ConformalModel::EuclideanBall;
    const double tc = cc.points[0].t;
    r.c_bar = std::abs(cc.points[0].rho_second);
    const bool right = sol.t_end() - tc >= tc - sol.t_begin();
    double t0 = 0.0;
    double t_far = 0.0;
    if (right) {
      t0 = tc + 1.0 < sol.t_end() ? tc + 1.0 : 0.5 * (tc + sol.t_end());
      t_far = sol.t_end();
    } else {
      t0 = tc - 1.0 > sol.t_begin() ? tc - 1.0 : 0.5 * (tc + sol.t_begin());
      t_far = sol.t_begin();
    }
    r.t0 = t0;
    r.interval = {0.0, reparam_b(sol, t_far, *r.c_bar, t0)};
    r.interval_closed_left = true;
  } else {
    r.case_tag = 'c';
    r.model = ConformalModel::SpherePolar;
    const double t1 = cc.points[0].t;
    const double t2 = cc.points[1].t;
    r.t0 = 0.5 * (t1 + t2);
    const bool forward = sol.state(*r.t0)[1] > 0.0;
    r.c_bar = std::abs(forward ? cc.points[0].rho_second : cc.points[1].rho_second);
    r.interval = {0.0, std::numbers::pi};
    r.interval_closed_left = true;
    r.interval_closed_right = true;
  }
  return r;
}

double reparam_a(const ProfileSolution& sol, double t) {
  if (!sol.events.empty()) throw Error(ErrorKind::CriticalPoint, "reparam_a needs a profile without critical points");
  const double t_ref = std::clamp(0.0, sol.t_begin(), sol.t_end());
  return inverse_speed_integral(sol, t_ref, t);
}

double reparam_b(const ProfileSolution& sol, double t, double c_bar, double t0) {
  if (sol.events.size() != 1) throw Error(ErrorKind::CriticalPoint, "reparam_b needs exactly one critical point");
  const double tc = sol.events[0].t;
  if (t == tc) return 0.0;
  if ((t - tc) * (t0 - tc) <= 0.0) throw Error(ErrorKind::InvalidArgument, "t and t0 must lie on the same side of o");
  const double dir = t0 > tc ? 1.0 : -1.0;
  return std::exp(c_bar * dir * inverse_speed_integral(sol, t0, t));
}

double reparam_c_theta(const ProfileSolution& sol, double t, double c_bar, double t0) {
  if (sol.events.size() != 2) throw Error(ErrorKind::CriticalPoint, "reparam_c_theta needs two critical points");
  const double t1 = sol.events[0].t;
  const double t2 = sol.events[1].t;
  const bool forward = orientation_after(sol, t1) > 0.0;
  if (t == t1) return forward ? 0.0 : std::numbers::pi;
  if (t == t2) return forward ? std::numbers::pi : 0.0;
  if (!(t > t1 && t < t2) || !(t0 > t1 && t0 < t2)) {
    throw Error(ErrorKind::InvalidArgument, "t and t0 must lie between the critical points");
  }
  const double dir = forward ? 1.0 : -1.0;
  const double I = t == t0 ? 0.0 : dir * inverse_speed_integral(sol, t0, t);
  return 2.0 * std::atan(std::exp(c_bar * I));
}

double conformal_factor(const ClassificationReport& report, double t) {
  const double rp = std::abs(report.solution.state(t)[1]);
  switch (report.case_tag) {
    case 'a': return rp * rp;
    case 'b': {
      const double r = reparam_b(report.solution, t, *report.c_bar, *report.t0);
      const double f = rp / (r * *report.c_bar);
      return f * f;
    }
    case 'c': {
      const double th = reparam_c_theta(report.solution, t, *report.c_bar, *report.t0);
      const double f = rp / (*report.c_bar * std::sin(th));
      return f * f;
    }
  }
  throw Error(ErrorKind::InvalidArgument, "unknown classification case");
}

WarpProfile profile_from_ode(const ProfileRhs& phi, double rho0, double rho_prime0, double t_begin, double t_end,
                             double step) {
  auto sol = std::make_shared<const ProfileSolution>(integrate_profile(phi, rho0, rho_prime0, t_begin, t_end, step));
  std::vector<double> cuts{sol->t_begin()};
  for (const auto& e : sol->events) cuts.push_back(e.t);
  cuts.push_back(sol->t_end());
  double lo = cuts[0];
  double hi = cuts[1];
  for (std::size_t i = 1; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] - cuts[i] > hi - lo) {
      lo = cuts[i];
      hi = cuts[i + 1];
    }
  }
  if (!(hi > lo)) throw Error(ErrorKind::CriticalPoint, "profile has no interval free of critical points");

  // Taylor coefficients of rho at sol-state(t0) from the recursion
  // (k+2)(k+1) a_{k+2} = [phi(rho)]_k.
  auto taylor = [sol](double t0, int order) {
    const auto s = sol->state(t0);
    std::vector<double> a(static_cast<std::size_t>(order + 2), 0.0);
    a[0] = s[0];
    a[1] = s[1];
    auto space = JetSpace::get(1, order + 1);
    for (int k = 0; k < order; ++k) {
      Jet r = Jet::constant(space, 0.0);
      for (int i = 0; i <= k + 1; ++i) r.coefficients()[static_cast<std::size_t>(i)] = a[static_cast<std::size_t>(i)];
      const Jet f = sol->phi.jet(r);
      const double fk = f.is_scalar() ? (k == 0 ? f.value() : 0.0) : f.coefficients()[static_cast<std::size_t>(k)];
      a[static_cast<std::size_t>(k + 2)] = fk / ((k + 2.0) * (k + 1.0));
    }
    return a;
  };
  auto expand = [](const std::vector<double>& coeffs, const Jet& t) {
    auto space = JetSpace::get(1, static_cast<int>(coeffs.size()) - 1);
    Jet poly = Jet::constant(space, 0.0);
    for (std::size_t i = 0; i < coeffs.size(); ++i) poly.coefficients()[i] = coeffs[i];
    const Jet disp = t - t.value();
    return compose(poly, std::span<const Jet>(&disp, 1));
  };

  WarpProfile p;
  p.name = "ode";
  p.rho = [taylor, expand](const Jet& t) {
    if (t.is_scalar()) return Jet(taylor(t.value(), 0)[0]);
    auto a = taylor(t.value(), t.order());
    a.resize(static_cast<std::size_t>(t.order() + 1));
    return expand(a, t);
  };
  p.rho_prime = [taylor, expand](const Jet& t) {
    if (t.is_scalar()) return Jet(taylor(t.value(), 0)[1]);
    const auto a = taylor(t.value(), t.order());
    std::vector<double> b(static_cast<std::size_t>(t.order() + 1));
    for (std::size_t i = 0; i < b.size(); ++i) b[i] = static_cast<double>(i + 1) * a[i + 1];
    return expand(b, t);
  };
  p.derivatives = [sol](double t) {
    const auto s = sol->state(t);
    auto space = JetSpace::get(1, 1);
    const Jet f = sol->phi.jet(Jet::variable(space, 0, s[0]));
    const double dphi = f.is_scalar() ? 0.0 : f.coefficients()[1];
    return std::array<double, 4>{s[0], s[1], f.value(), dphi * s[1]};
  };
  p.t_min = lo;
  p.t_max = hi;
  const double inset = 0.05 * (hi - lo);
  p.sample_interval = {lo + inset, hi - inset};
  return p;
}

}  // namespace finsler
