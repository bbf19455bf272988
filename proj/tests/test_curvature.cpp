#include <doctest.h>

#include "finsler/error.hpp"

#include <cmath>

#include "finsler/curvature.hpp"
#include "finsler/oracles.hpp"
#include "helpers.hpp"

using namespace finsler;

namespace {

Vector random_flag(SampleStream& rng, int n) { return test::random_vector(rng, n); }

}  // namespace

TEST_SUITE("curvature") {
  TEST_CASE("flag curvature of the model spaces") {
    struct Case {
      const char* name;
      double K;
      double tol;
    };
    for (const Case& c : {Case{"euclidean3", 0.0, 1e-12}, Case{"sphere_polar2", 1.0, 1e-6},
                          Case{"sphere_polar3", 1.0, 1e-6}, Case{"sphere_polar3_r2", 0.25, 1e-6},
                          Case{"hyperbolic2", -1.0, 1e-6}, Case{"funk2", -0.25, 1e-5}}) {
      const auto F = test::metric(c.name);
      for (std::uint64_t s = 0; s < 10; ++s) {
        SampleStream rng(1, s);
        const LineElement le = sample_line_element(F, rng);
        INFO(c.name, " sample ", s);
        CHECK(std::abs(flag_curvature(F, le, random_flag(rng, F.dim())) - c.K) <= c.tol);
      }
    }
    const auto funk = test::metric("funk2");
    SampleStream rng(2, 0);
    for (int i = 0; i < 10; ++i) {
      const LineElement le{{0.2, 0.1}, random_flag(rng, 2)};
      CHECK(std::abs(flag_curvature(funk, le, random_flag(rng, 2)) + 0.25) <= 1e-5);
    }
  }

  TEST_CASE("Euclidean curvature tensors vanish") {
    const auto F = test::metric("euclidean2");
    const auto cb = curvature_bundle(F, {{0.3, 0.1}, {1.0, -2.0}});
    CHECK(test::max_abs(cb.R_nl.flat()) == 0.0);
    CHECK(test::max_abs(cb.K_tensor.flat()) == 0.0);
    CHECK(test::max_abs(cb.R_h.flat()) == 0.0);
  }

  TEST_CASE("antisymmetry in the last index pair") {
    for (const auto& e : list_builtins()) {
      const auto F = instantiate(e.spec);
      SampleStream rng(3, 0);
      const auto cb = curvature_bundle(F, sample_line_element(F, rng));
      const double scale = std::max(1.0, test::max_abs(cb.R_h.flat()));
      INFO(e.name);
      CHECK(antisymmetry_defect(cb.R_nl) <= 1e-9 * scale);
      CHECK(antisymmetry_defect(cb.K_tensor) <= 1e-9 * scale);
      CHECK(antisymmetry_defect(cb.R_h) <= 1e-9 * scale);
    }
  }

  TEST_CASE("flag curvature is projectively invariant and of degree zero") {
    for (const char* name : {"randers_var2", "funk3", "warped_sinh_randers"}) {
      const auto F = test::metric(name);
      for (std::uint64_t s = 0; s < 5; ++s) {
        SampleStream rng(4, s);
        const LineElement le = sample_line_element(F, rng);
        const Vector X = random_flag(rng, F.dim());
        const double K = flag_curvature(F, le, X);
        Vector X2(X.size());
        for (std::size_t i = 0; i < X.size(); ++i) X2[i] = 3.0 * X[i] + 2.0 * le.y[i];
        LineElement scaled = le;
        for (double& v : scaled.y) v *= 2.5;
        const double tol = 1e-9 * std::max(1.0, std::abs(K));
        INFO(name, " sample ", s);
        CHECK(std::abs(flag_curvature(F, le, X2) - K) <= tol);
        CHECK(std::abs(flag_curvature(F, scaled, X) - K) <= tol);
      }
    }
  }

  TEST_CASE("Riemannian flag curvature matches the sectional curvature oracle") {
    const auto& e = builtin("hyperbolic2");
    const Json conformal{{"schema", 1},
                         {"kind", "riemannian"},
                         {"n", 2},
                         {"metric", {{"exp(x1*x2)", 0}, {0, "1 + x1^2"}}}};
    for (const Json& spec : {e.spec, conformal}) {
      const auto F = instantiate(spec);
      const auto field = *riemannian_metric_field(spec);
      for (std::uint64_t s = 0; s < 5; ++s) {
        SampleStream rng(5, s);
        const LineElement le = sample_line_element(F, rng);
        const Vector X = random_flag(rng, 2);
        const double K = flag_curvature(F, le, X);
        CHECK(std::abs(K - sectional_curvature_fd(field, le.x, le.y, X)) <= 1e-5 * std::max(1.0, std::abs(K)));
      }
    }
  }

  TEST_CASE("h-curvature equals the K tensor on Riemannian metrics") {
    for (const char* name : {"sphere_polar3", "hyperbolic2"}) {
      const auto F = test::metric(name);
      SampleStream rng(6, 0);
      const auto cb = curvature_bundle(F, sample_line_element(F, rng));
      CHECK(test::max_abs_diff(cb.R_h.flat(), cb.K_tensor.flat()) <= 1e-12);
    }
  }

  TEST_CASE("constancy scans") {
    const auto eu = constancy_scan(test::metric("euclidean2"), 50, 0);
    CHECK(std::abs(eu.mean) <= 1e-9);
    CHECK(eu.std <= 1e-9);
    const auto s2 = constancy_scan(test::metric("sphere_polar2"), 50, 0);
    CHECK(std::abs(s2.mean - 1.0) <= 1e-6);
    CHECK(s2.std <= 1e-6);

    const auto a = constancy_scan(test::metric("randers_var2"), 30, 7);
    const auto b = constancy_scan(test::metric("randers_var2"), 30, 7);
    REQUIRE(a.samples.size() == b.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i) CHECK(a.samples[i].K == b.samples[i].K);
    CHECK(a.std > 1e-3);
  }

  TEST_CASE("degenerate flags are rejected") {
    const auto F = test::metric("sphere_polar2");
    const LineElement le{{1.0, 0.5}, {0.3, 0.4}};
    try {
      flag_curvature(F, le, le.y);
      FAIL("expected flag-degenerate");
    } catch (const Error& err) {
      CHECK(err.kind() == ErrorKind::FlagDegenerate);
    }
  }
}
