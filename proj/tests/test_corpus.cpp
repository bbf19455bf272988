#include <doctest.h>

#include "finsler/error.hpp"

#include <cmath>
#include <string>

#include "finsler/curvature.hpp"
#include "helpers.hpp"

using namespace finsler;

namespace {

std::string spec_message(const Json& spec) {
  try {
    instantiate(spec);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Spec);
    return e.what();
  }
  return "";
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_SUITE("corpus") {
  TEST_CASE("every builtin validates") {
    for (const auto& e : list_builtins()) {
      const auto r = validate_structure(instantiate(e.spec), 200, 0);
      INFO(e.name, " homogeneity ", r.max_homogeneity_error, " min eigenvalue ", r.min_eigenvalue);
      CHECK(r.pass);
      CHECK(r.max_homogeneity_error <= 1e-9);
    }
  }

  TEST_CASE("annotated curvatures match scans") {
    for (const auto& e : list_builtins()) {
      const auto F = instantiate(e.spec);
      const auto s = constancy_scan(F, 40, 0);
      INFO(e.name, " mean ", s.mean, " std ", s.std);
      if (e.expected_curvature) {
        CHECK(std::abs(s.mean - *e.expected_curvature) <= 1e-5);
        CHECK(s.std <= 1e-5);
      } else if (contains(e.curvature_note, "measured")) {
        CHECK(s.std <= 1e-4 * std::abs(s.mean));
      } else {
        CHECK(s.std > 1e-4);
      }
    }
  }

  TEST_CASE("catalog contents") {
    CHECK(builtin("funk2").expected_curvature == -0.25);
    CHECK(builtin("euclidean2").expected_curvature == 0.0);
    CHECK(builtin("sphere_construction").curvature_note == "constant (value measured)");
    CHECK(builtin("funk2").provenance == "literature");
    CHECK_THROWS_AS(builtin("no_such_metric"), Error);
    const auto& a = list_builtins();
    const auto& b = list_builtins();
    CHECK(&a == &b);
  }

  TEST_CASE("Euclidean spec gives the norm") {
    const auto F = instantiate(Json{{"schema", 1}, {"kind", "euclidean"}, {"n", 2}});
    const double x[2] = {0.0, 0.0};
    const double y[2] = {3.0, 4.0};
    CHECK(F.F(x, y) == doctest::Approx(5.0));
  }

  TEST_CASE("errors name the offending field") {
    CHECK(contains(spec_message(Json{{"kind", "funk"}, {"n", 2}}), "schema"));
    CHECK(contains(spec_message(Json{{"schema", 2}, {"kind", "funk"}, {"n", 2}}), "schema"));
    CHECK(contains(spec_message(Json{{"schema", 1}, {"kind", "torus"}, {"n", 2}}), "kind"));
    CHECK(contains(spec_message(Json{{"schema", 1}, {"kind", "funk"}, {"n", 40}}), "n:"));
    CHECK(contains(spec_message(Json{{"schema", 1}, {"kind", "riemannian"}, {"n", 2}, {"metric", {{1, 0}, {0}}}}),
                   "metric[1]"));
    CHECK(contains(spec_message(Json{{"schema", 1}, {"kind", "riemannian"}, {"n", 2}, {"metric", {{1, 0}, {0, "1 +"}}}}),
                   "metric[1][1]"));
    CHECK(contains(
        spec_message(Json{{"schema", 1}, {"kind", "randers"}, {"n", 2}, {"alpha", {{1, 0}, {0, 1}}}, {"beta", {1.2, 0}}}),
        "beta"));
    CHECK(contains(spec_message(Json{{"schema", 1},
                                     {"kind", "warped"},
                                     {"profile", {{"kind", "analytic"}, {"name", "cube"}}},
                                     {"base", {{"kind", "euclidean"}, {"n", 2}}}}),
                   "profile"));
    CHECK(contains(spec_message(Json{{"schema", 1},
                                     {"kind", "warped"},
                                     {"profile", {{"kind", "analytic"}, {"name", "sin"}}},
                                     {"base", {{"kind", "euclidean"}}}}),
                   "base.n"));
  }

  TEST_CASE("spec files") {
    const std::string dir = FINSLER_DATA_DIR;
    CHECK(instantiate(load_spec(dir + "/funk2.json")).dim() == 2);
    CHECK(is_warped_spec(load_spec(dir + "/warped-sin-s2.json")));
    const auto ws = instantiate_warped(load_spec(dir + "/warped-ode-randers.json"));
    CHECK(ws.total.dim() == 3);
    CHECK(ws.profile.derivatives(1.0)[1] == doctest::Approx(std::sin(1.0)).epsilon(1e-9));
    CHECK_THROWS_AS(load_spec(dir + "/missing.json"), Error);
  }

  TEST_CASE("Riemannian metric fields") {
    const auto field = riemannian_metric_field(builtin("sphere_polar2").spec);
    REQUIRE(field.has_value());
    const double x[2] = {1.0, 0.3};
    const Matrix g = (*field)(x);
    CHECK(g(1, 1) == doctest::Approx(std::pow(std::sin(1.0), 2)));
    CHECK_FALSE(riemannian_metric_field(builtin("funk2").spec).has_value());
  }
}
