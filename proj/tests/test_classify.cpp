#include <doctest.h>

#include "finsler/error.hpp"

#include <cmath>
#include <numbers>

#include "finsler/classify.hpp"
#include "finsler/geodesic.hpp"
#include "helpers.hpp"

using namespace finsler;

namespace {

constexpr double pi = std::numbers::pi;

ProfileRhs rhs(const char* text) { return ProfileRhs::from_expression(Expression::parse(text, {"rho"})); }

}  // namespace

TEST_SUITE("classify") {
  TEST_CASE("integrating the three model profiles") {
    const auto a = integrate_profile(ProfileRhs::constant(0.0), 0.5, 1.0, 0.0, 3.0);
    CHECK(a.events.empty());
    for (double t : {0.0, 1.234, 3.0}) CHECK(a.state(t)[0] == doctest::Approx(0.5 + t).epsilon(1e-13));

    const auto b = integrate_profile(ProfileRhs::constant(1.0), 0.0, 0.0, 0.0, 3.0);
    REQUIRE(b.events.size() == 1);
    CHECK(b.events[0].t == 0.0);
    CHECK(b.events[0].kind == CriticalKind::LeftEnd);
    CHECK(b.state(2.5)[1] == doctest::Approx(2.5).epsilon(1e-12));

    const auto c = integrate_profile(rhs("-(rho - 0)"), -1.0, 0.0, 0.0, 4.0);
    REQUIRE(c.events.size() == 2);
    CHECK(std::abs(c.events[1].t - pi) <= 1e-9);
    CHECK(c.events[1].kind == CriticalKind::Interior);

    CHECK(count_critical(a).count == 0);
    CHECK(count_critical(b).count == 1);
    CHECK(count_critical(c).count == 2);
  }

  TEST_CASE("classification cases") {
    const auto a = classify_profile(integrate_profile(ProfileRhs::constant(0.0), 0.0, 1.0, 0.0, 3.0));
    CHECK(a.case_tag == 'a');
    CHECK(a.model == ConformalModel::Product);
    const auto b = classify_profile(integrate_profile(ProfileRhs::constant(1.0), 0.0, 0.0, 0.0, 3.0));
    CHECK(b.case_tag == 'b');
    CHECK(b.model == ConformalModel::EuclideanBall);
    const auto c = classify_profile(integrate_profile(rhs("-(rho - 0)"), -1.0, 0.0, 0.0, 4.0));
    CHECK(c.case_tag == 'c');
    CHECK(c.model == ConformalModel::SpherePolar);
    REQUIRE(c.t0.has_value());
    CHECK(std::abs(*c.t0 - pi / 2) <= 1e-9);
  }

  TEST_CASE("interior events are located symmetrically") {
    const auto sol = integrate_profile(rhs("-rho"), -std::cos(-1.0), std::sin(-1.0), -1.0, 4.0);
    REQUIRE(sol.events.size() == 2);
    CHECK(std::abs(sol.events[0].t) <= 1e-9);
    CHECK(std::abs(sol.events[1].t - pi) <= 1e-9);
    CHECK(sol.events[0].rho_second == doctest::Approx(-sol.events[1].rho_second).epsilon(1e-8));
  }

  TEST_CASE("fourth-order convergence") {
    auto err = [](double h) {
      const auto sol = integrate_profile(rhs("-rho"), -1.0, 0.0, 0.0, 2.0, h);
      return std::abs(sol.state(2.0)[0] + std::cos(2.0));
    };
    const double ratio = err(0.1) / err(0.05);
    CHECK(ratio > 12.0);
    CHECK(ratio < 20.0);
  }

  TEST_CASE("divergence keeps the partial solution") {
    try {
      integrate_profile(rhs("rho^2"), 1.0, 1.0, 0.0, 10.0);
      FAIL("expected divergence");
    } catch (const ProfileDivergence& e) {
      CHECK(e.kind() == ErrorKind::Divergence);
      CHECK(!e.partial().grid.empty());
      CHECK(e.partial().t_end() < 3.0);
    }
  }

  TEST_CASE("more than two critical points is not a solution") {
    const auto sol = integrate_profile(rhs("-rho"), -1.0, 0.0, 0.0, 10.0);
    const auto cc = count_critical(sol);
    CHECK_FALSE(cc.consistent);
    CHECK(cc.count > 2);
    try {
      classify_profile(sol);
      FAIL("expected not-a-solution");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NotASolution);
    }
  }

  TEST_CASE("reparametrizations") {
    const auto unit = integrate_profile(ProfileRhs::constant(0.0), 0.0, 1.0, 0.0, 3.0);
    CHECK(reparam_a(unit, 2.0) == doctest::Approx(2.0).epsilon(1e-12));
    const auto e = integrate_profile(rhs("rho"), 1.0, 1.0, 0.0, 3.0);
    CHECK(reparam_a(e, 2.0) == doctest::Approx(1.0 - std::exp(-2.0)).epsilon(1e-8));

    const auto lin = integrate_profile(ProfileRhs::constant(1.0), 0.0, 0.0, 0.0, 3.0);
    for (double t : {0.3, 1.0, 2.7}) CHECK(reparam_b(lin, t, 1.0, 1.0) == doctest::Approx(t).epsilon(1e-9));

    const auto s = integrate_profile(rhs("-rho"), -1.0, 0.0, 0.0, 4.0);
    CHECK(reparam_b(integrate_profile(rhs("-rho"), -1.0, 0.0, 0.0, 3.0), 1e-8, 1.0, pi / 2) <= 1e-7);
    CHECK(reparam_c_theta(s, pi / 2, 1.0, pi / 2) == pi / 2);
    for (double t : {0.2, 1.0, 2.0, 3.0}) CHECK(std::abs(reparam_c_theta(s, t, 1.0, pi / 2) - t) <= 1e-8);
    CHECK(reparam_c_theta(s, 1e-8, 1.0, pi / 2) <= 1e-7);
  }

  TEST_CASE("conformal factors of the models") {
    const auto a = classify_profile(integrate_profile(ProfileRhs::constant(0.0), 0.0, 1.0, 0.0, 3.0));
    CHECK(conformal_factor(a, 1.5) == doctest::Approx(1.0));
    const auto b = classify_profile(integrate_profile(ProfileRhs::constant(1.0), 0.0, 0.0, 0.0, 3.0));
    for (double t : {0.1, 1.0, 2.5}) CHECK(conformal_factor(b, t) == doctest::Approx(1.0).epsilon(1e-8));
    const auto c = classify_profile(integrate_profile(rhs("-rho"), -1.0, 0.0, 0.0, 4.0));
    for (double t : {0.1, 1.0, 3.0}) CHECK(conformal_factor(c, t) == doctest::Approx(1.0).epsilon(1e-7));
  }

  TEST_CASE("distance from a critical point on Euclidean space") {
    const auto sol = integrate_profile(ProfileRhs::constant(1.0), 0.0, 0.0, 0.0, 3.0);
    const Vector u{0.6, 0.8};
    for (double t : {0.5, 1.7, 2.9}) {
      const double half_square = 0.5 * (t * u[0] * t * u[0] + t * u[1] * t * u[1]);
      CHECK(sol.state(t)[0] == doctest::Approx(half_square).epsilon(1e-12));
    }
  }

  TEST_CASE("ode-backed warp profiles") {
    const auto p = profile_from_ode(rhs("-rho"), -1.0, 0.0, 0.0, 4.0);
    CHECK(p.t_min == doctest::Approx(0.0));
    CHECK(p.t_max == doctest::Approx(pi).epsilon(1e-9));
    CHECK(p.derivatives(1.0)[1] == doctest::Approx(std::sin(1.0)).epsilon(1e-9));
  }
}

TEST_SUITE("classify") {
  TEST_CASE("geodesics") {
    const auto eu = trace_geodesic(test::metric("euclidean2"), {0.0, 0.0}, {1.0, 0.5}, 2.0);
    const double nrm = std::hypot(1.0, 0.5);
    CHECK(std::abs(eu.x.back()[0] - 2.0 / nrm) <= 1e-12);
    CHECK(std::abs(eu.x.back()[1] - 1.0 / nrm) <= 1e-12);

    const auto s2 = trace_geodesic(test::metric("sphere_polar2"), {pi / 2, 0.0}, {-1.0, 1.0}, 2 * pi, 2 * pi / 1000);
    REQUIRE_FALSE(s2.left_domain);
    CHECK(std::abs(s2.x.back()[0] - pi / 2) <= 1e-5);
    CHECK(std::abs(std::remainder(s2.x.back()[1], 2 * pi)) <= 1e-5);

    const auto wt = trace_geodesic(test::metric("warped_sin_s2"), {1.0, 1.2, 0.4}, {1.0, 0.0, 0.0}, 1.5);
    for (std::size_t i = 0; i < wt.t.size(); ++i) {
      CHECK(std::abs(wt.x[i][0] - 1.0 - wt.t[i]) <= 1e-12);
      CHECK(std::abs(wt.x[i][1] - 1.2) <= 1e-12);
      CHECK(std::abs(wt.x[i][2] - 0.4) <= 1e-12);
    }

    const auto fk = trace_geodesic(test::metric("funk2"), {0.1, 0.2}, {1.0, -0.3}, 1.0);
    CHECK(fk.max_speed_error <= 1e-8);
  }
}
