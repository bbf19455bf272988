#include <doctest.h>

#include "finsler/error.hpp"

#include <cmath>
#include <numbers>

#include "finsler/connection.hpp"
#include "finsler/diffkit.hpp"
#include "finsler/warped.hpp"
#include "helpers.hpp"

using namespace finsler;

namespace {

constexpr double pi = std::numbers::pi;

FinslerStructure circle() {
  return FinslerStructure::from_squared(
      Chart::euclidean(1, "circle", 3.0), []<class S>(std::span<const S>, std::span<const S> y) { return S(y[0] * y[0]); },
      StructureInfo{"circle", true, true, std::nullopt});
}

double component(const VerifyReport& r, const std::string& pattern) {
  for (const auto& c : r.cartan_components) {
    if (c.pattern == pattern) return c.max_error;
  }
  return -1.0;
}

}  // namespace

TEST_SUITE("warped") {
  TEST_CASE("a linear profile over a flat base is flat") {
    const auto ws = build_warped(WarpProfile::analytic("linear"), test::metric("euclidean2"));
    SampleStream rng(1, 0);
    const LineElement le = sample_line_element(ws.total, rng);
    const Matrix g = fundamental_tensor(ws.total, le);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) CHECK(std::abs(g(i, j) - (i == j ? 1.0 : 0.0)) <= 1e-14);
    }
    CHECK(test::max_abs(predicted_cartan(ws, le).flat()) == 0.0);
    CHECK(test::max_abs(predicted_curvature(ws, le).flat()) == 0.0);
    CHECK(verify_adapted(ws, 10, 0).pass_curvature);
  }

  TEST_CASE("polar and spherical builds") {
    const auto polar = build_warped(WarpProfile::analytic("t"), test::metric("sphere_polar2"));
    CHECK(std::abs(constancy_scan(polar.total, 30, 0).mean) <= 1e-6);
    const auto s3 = build_warped(WarpProfile::analytic("sin"), test::metric("sphere_polar2"));
    const auto scan = constancy_scan(s3.total, 30, 0);
    CHECK(std::abs(scan.mean - 1.0) <= 1e-6);
    CHECK(scan.std <= 1e-6);
  }

  TEST_CASE("critical points inside the sample interval are rejected") {
    auto p = WarpProfile::analytic("sin");
    p.sample_interval = {0.5, 3.5};
    p.t_max = 4.0;
    try {
      build_warped(p, test::metric("euclidean2"));
      FAIL("expected critical-point");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::CriticalPoint);
    }
  }

  TEST_CASE("predicted Cartan coefficients at t = pi/3") {
    const auto ws = build_warped(WarpProfile::analytic("sin"), test::metric("euclidean2"));
    const LineElement le{{pi / 3, 0.1, 0.2}, {0.5, 1.0, -0.3}};
    const Tensor3 P = predicted_cartan(ws, le);
    for (int a = 1; a < 3; ++a) {
      for (int b = 1; b < 3; ++b) {
        CHECK(P(a, 0, b) == doctest::Approx(a == b ? 0.57735 : 0.0).epsilon(1e-5));
        CHECK(P(0, a, b) == doctest::Approx(a == b ? -0.43301 : 0.0).epsilon(1e-5));
      }
    }
    CHECK(P(0, 0, 0) == 0.0);
  }

  TEST_CASE("predicted curvature axis components for rho' = sin") {
    const auto ws = build_warped(WarpProfile::analytic("sin"), test::metric("euclidean2"));
    const LineElement le{{1.0, 0.1, 0.2}, {0.5, 1.0, -0.3}};
    const Tensor4 R = predicted_curvature(ws, le, 1);
    for (int a = 1; a < 3; ++a) {
      CHECK(std::abs(std::abs(R(a, 0, a, 0)) - 1.0) <= 1e-12);
      CHECK(R(a, 0, a, 0) == doctest::Approx(-R(a, 0, 0, a)));
    }
  }

  TEST_CASE("adapted coordinates on Riemannian bases") {
    for (const char* profile : {"t", "sin", "sinh"}) {
      for (const char* base : {"euclidean2", "sphere_polar2"}) {
        const auto ws = build_warped(WarpProfile::analytic(profile), test::metric(base));
        const auto r = verify_adapted(ws, 20, 0);
        INFO(profile, " over ", base, ": cartan ", r.max_error_cartan, " curvature ", r.max_error_curvature);
        CHECK(r.pass_cartan);
        CHECK(r.pass_curvature);
      }
    }
  }

  TEST_CASE("adapted coordinates on a Randers base") {
    const auto ws = build_warped(WarpProfile::analytic("sinh"), test::randers(0.3));
    const auto r = verify_adapted(ws, 20, 0);
    CHECK(r.pass_curvature);
    CHECK_FALSE(r.pass_cartan);
    for (const auto& c : r.cartan_components) {
      INFO(c.pattern, " ", c.max_error);
      if (c.pattern != "Gamma^b_bb") CHECK(c.max_error <= 1e-9);
    }
    CHECK(component(r, "Gamma^b_bb") > 1e-3);
  }

  TEST_CASE("the sign of the explicit curvature terms") {
    const auto s = resolve_sigma(10, 0);
    CHECK(s.sigma == 1);
    CHECK(s.error_plus <= 1e-9);
    CHECK(s.error_minus > 0.1);
  }

  TEST_CASE("second fundamental form of the t-levels") {
    const auto product = build_warped(WarpProfile::analytic("linear"), test::metric("euclidean2"));
    const auto sp = second_fundamental_form(product, {{1.0, 0.1, 0.2}, {0.0, 1.0, 0.5}});
    CHECK(sp.h == 0.0);
    CHECK(test::max_abs(sp.h_form.flat()) <= 1e-14);

    const auto ws = build_warped(WarpProfile::analytic("sin"), test::metric("sphere_polar2"));
    const auto eq = second_fundamental_form(ws, {{pi / 2, 1.0, 0.5}, {0.0, 0.3, -1.0}});
    CHECK(std::abs(eq.h) <= 1e-15);
    CHECK(test::max_abs(eq.h_form.flat()) <= 1e-12);

    const auto q = second_fundamental_form(ws, {{pi / 4, 1.0, 0.5}, {0.0, 0.3, -1.0}});
    CHECK(q.h == doctest::Approx(-1.0).epsilon(1e-14));
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) CHECK(std::abs(q.h_form(a, b) + q.g_level(a, b)) <= 1e-7);
    }

    const auto rws = build_warped(WarpProfile::analytic("sinh"), test::randers(0.3));
    CHECK(second_fundamental_form(rws, {{0.7, 0.1, 0.2}, {0.0, 1.0, 0.4}}).umbilicity_defect <= 1e-7);
    CHECK_THROWS_AS(second_fundamental_form(ws, {{1.0, 1.0, 0.5}, {0.2, 0.3, -1.0}}), Error);
  }

  TEST_CASE("sphere construction") {
    const auto s2 = build_sphere_metric(1.0, circle());
    CHECK(s2.base_curvature == 1.0);
    const auto scan = constancy_scan(s2.warped.total, 50, 0);
    CHECK(std::abs(scan.mean - 1.0) <= 1e-6);

    const auto k2 = build_sphere_metric(2.0, test::metric("sphere_polar2"), 50);
    CHECK(k2.base_curvature == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(k2.warped.total.chart().contains(Vector{1.0, 1.0, 0.5}));
    CHECK_FALSE(k2.warped.total.chart().contains(Vector{pi / 2 + 0.01, 1.0, 0.5}));
    CHECK(k2.warped.profile.derivatives(0.4)[1] == doctest::Approx(std::sin(0.8)).epsilon(1e-14));

    try {
      build_sphere_metric(1.0, test::metric("randers_var2"), 50);
      FAIL("expected construction-precondition");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::ConstructionPrecondition);
    }
  }

  TEST_CASE("curvature norm splits into base and axis parts") {
    const auto ws = build_warped(WarpProfile::analytic("sin"), test::metric("sphere_polar2"));
    for (std::uint64_t s = 0; s < 5; ++s) {
      SampleStream rng(3, s);
      const auto d = curvature_norm_decomposition(ws, sample_line_element(ws.total, rng));
      const double tol = 1e-9 * std::max(1.0, d.total);
      CHECK(std::abs(d.axis_part_direct - d.axis_part_count) <= tol);
      CHECK(std::abs(d.total - d.base_part - d.axis_part_direct) <= tol);
    }
  }

  TEST_CASE("nonlinear curvature along the t-axis") {
    // Flat product: the limit vanishes.
    const auto flat = build_warped(WarpProfile::analytic("linear"), test::metric("euclidean2"));
    const LineElement at{{1.0, 0.2, 0.4}, {1.0, 0.0, 0.0}};
    const double gap[3] = {0.0, 0.6, 0.8};
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        for (int k = 0; k < 3; ++k) {
          auto f = [&flat, i, j, k](const LineElement& le) { return nl_curvature(flat.total, le)(i, j, k); };
          CHECK(std::abs(directional_limit(f, at, gap).value) <= 1e-8);
        }
      }
    }

    // Round S^3: the limit is K^i_0jk, which does not vanish.
    const auto ws = build_warped(WarpProfile::analytic("sin"), test::metric("sphere_polar2"));
    const LineElement s3{{1.0, 1.2, 0.4}, {1.0, 0.0, 0.0}};
    const Tensor4 K = k_tensor(ws.total, s3);
    double largest = 0.0;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        for (int k = 0; k < 3; ++k) {
          auto f = [&ws, i, j, k](const LineElement& le) { return nl_curvature(ws.total, le)(i, j, k); };
          const double lim = directional_limit(f, s3, gap).value;
          CHECK(std::abs(lim - K(i, 0, j, k)) <= 1e-7);
          largest = std::max(largest, std::abs(lim));
        }
      }
    }
    CHECK(largest == doctest::Approx(1.0).epsilon(1e-7));
  }

  TEST_CASE("block form of the warped metric") {
    for (const char* name : {"warped_sin_s2", "warped_sinh_randers", "sphere_construction"}) {
      const auto F = test::metric(name);
      for (std::uint64_t s = 0; s < 20; ++s) {
        SampleStream rng(4, s);
        const Matrix g = fundamental_tensor(F, sample_line_element(F, rng));
        INFO(name);
        CHECK(std::abs(g(0, 0) - 1.0) <= 1e-10);
        for (int b = 1; b < F.dim(); ++b) CHECK(std::abs(g(0, b)) <= 1e-10);
      }
    }
  }
}
