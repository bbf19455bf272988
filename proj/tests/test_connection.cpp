#include <doctest.h>

#include "finsler/error.hpp"

#include <cmath>

#include "finsler/acceptance.hpp"
#include "finsler/connection.hpp"
#include "finsler/oracles.hpp"
#include "helpers.hpp"

using namespace finsler;

namespace {

ScalarField half_square() {
  return ScalarField::from_generic([]<class T>(std::span<const T> x) {
    T s = x[0] * x[0];
    for (std::size_t i = 1; i < x.size(); ++i) s = s + x[i] * x[i];
    return T(s * 0.5);
  });
}

ScalarField constant_field(double c) {
  return ScalarField::from_generic([c]<class T>(std::span<const T> x) { return T(x[0] * 0.0 + c); });
}

}  // namespace

TEST_SUITE("connection") {
  TEST_CASE("Euclidean connection vanishes") {
    const auto F = test::metric("euclidean3");
    const LineElement le{{0.1, -0.4, 0.2}, {0.3, 1.0, -0.5}};
    const auto b = connection_bundle(F, le);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) CHECK(b.g(i, j) == doctest::Approx(i == j ? 1.0 : 0.0));
    }
    CHECK(test::max_abs(b.C.flat()) == 0.0);
    CHECK(test::max_abs(b.gamma.flat()) == 0.0);
    CHECK(test::max_abs(b.G) == 0.0);
    CHECK(test::max_abs(b.NG.flat()) == 0.0);
    CHECK(test::max_abs(b.Gamma_star.flat()) == 0.0);
  }

  TEST_CASE("constant quadratic form") {
    const auto F = instantiate(Json{{"schema", 1}, {"kind", "riemannian"}, {"n", 2}, {"metric", {{2, 0}, {0, 1}}}});
    for (std::uint64_t s = 0; s < 10; ++s) {
      SampleStream rng(1, s);
      const auto b = connection_bundle(F, sample_line_element(F, rng));
      CHECK(b.g(0, 0) == doctest::Approx(2.0).epsilon(1e-14));
      CHECK(b.g(1, 1) == doctest::Approx(1.0).epsilon(1e-14));
      CHECK(std::abs(b.g(0, 1)) <= 1e-14);
      CHECK(test::max_abs(b.C.flat()) <= 1e-13);
      CHECK(test::max_abs(b.gamma.flat()) <= 1e-13);
    }
  }

  TEST_CASE("Riemannian Cartan coefficients are the Levi-Civita symbols") {
    for (const char* name : {"sphere_polar2", "sphere_polar3", "sphere_polar3_r2", "hyperbolic2"}) {
      const auto& e = builtin(name);
      const auto F = instantiate(e.spec);
      const auto field = *riemannian_metric_field(e.spec);
      for (std::uint64_t s = 0; s < 10; ++s) {
        SampleStream rng(2, s);
        const LineElement le = sample_line_element(F, rng);
        const auto b = connection_bundle(F, le);
        INFO(name, " sample ", s);
        CHECK(test::max_abs(b.C.flat()) <= 1e-12);
        CHECK(test::max_abs_diff(b.Gamma_star.flat(), b.gamma.flat()) <= 1e-12);
        CHECK(test::max_abs_diff(b.Gamma_star.flat(), levi_civita_fd(field, le.x).flat()) <= 1e-8);
        for (int i = 0; i < F.dim(); ++i) {
          for (int j = 0; j < F.dim(); ++j) {
            double gy = 0.0;
            for (int k = 0; k < F.dim(); ++k) gy += b.gamma(i, j, k) * le.y[static_cast<std::size_t>(k)];
            CHECK(std::abs(b.NG(i, j) - gy) <= 1e-12);
          }
        }
      }
    }
    const auto F = test::metric("sphere_polar3");
    const LineElement le{{1.1, 0.7, -2.0}, {0.3, -0.4, 1.0}};
    CHECK(test::max_abs_diff(connection_bundle(F, le).Gamma_star.flat(),
                             sphere_polar_christoffel(3, 1.0, le.x).flat()) <= 1e-13);
  }

  TEST_CASE("connection identities hold across the corpus") {
    for (const auto& e : list_builtins()) {
      const auto F = instantiate(e.spec);
      for (std::uint64_t s = 0; s < 10; ++s) {
        SampleStream rng(4, s);
        const auto d = connection_invariant_defects(F, sample_line_element(F, rng));
        INFO(e.name, " sample ", s);
        CHECK(d.max() <= 1e-8);
      }
    }
  }

  TEST_CASE("composition with the raised index in the right slot") {
    const auto F = test::metric("randers_var2");
    double literal_gap = 0.0;
    for (std::uint64_t s = 0; s < 10; ++s) {
      SampleStream rng(6, s);
      const LineElement le = sample_line_element(F, rng);
      const auto b = connection_bundle(F, le);
      const Tensor3 composed = cartan_coefficients_composed(F, le);
      CHECK(test::max_abs_diff(composed.flat(), b.Gamma_star.flat()) <= 1e-9);

      // Replacing g^ih C_jkm N^m_h by C^r_jk N^i_r gives a different object.
      const Tensor3 Cup = raise_first(b.C, b.g_inv);
      const int n = F.dim();
      Tensor3 literal(n);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          for (int k = 0; k < n; ++k) {
            double v = b.gamma(i, j, k);
            for (int m = 0; m < n; ++m) {
              v -= Cup(i, j, m) * b.NG(m, k) + Cup(i, k, m) * b.NG(m, j);
              v += Cup(m, j, k) * b.NG(i, m);
            }
            literal(i, j, k) = v;
          }
        }
      }
      literal_gap = std::max(literal_gap, test::max_abs_diff(literal.flat(), b.Gamma_star.flat()));
    }
    CHECK(literal_gap > 1e-3);
  }

  TEST_CASE("Funk spray matches the closed form and the finite-difference oracle") {
    const auto F = test::metric("funk2");
    for (std::uint64_t s = 0; s < 10; ++s) {
      SampleStream rng(8, s);
      const LineElement le = sample_line_element(F, rng);
      const Vector G = spray(F, le);
      const Vector closed = funk_spray(le);
      const double scale = std::max(1.0, test::max_abs(closed));
      CHECK(test::max_abs_diff(G, closed) <= 1e-12 * scale);
      CHECK(test::max_abs_diff(G, spray_fd(F, le)) <= 1e-6 * scale);
    }
  }

  TEST_CASE("delta_x of a y-independent field is the ordinary partial") {
    const auto F = test::metric("funk2");
    const LineElement le{{0.2, -0.1}, {0.5, 0.7}};
    PhaseField f = [](std::span<const Jet> x, std::span<const Jet>) { return sin(x[0]) * x[1]; };
    CHECK(delta_x(F, f, le, 0) == doctest::Approx(std::cos(0.2) * -0.1).epsilon(1e-13));
    CHECK(delta_x(F, f, le, 1) == doctest::Approx(std::sin(0.2)).epsilon(1e-13));
    PhaseField f2 = [&F](std::span<const Jet> x, std::span<const Jet> y) { return F.F2(x, y); };
    CHECK(std::abs(delta_x(F, f2, le, 0)) <= 1e-12);
  }

  TEST_CASE("h-covariant derivatives on Euclidean space") {
    const auto F = test::metric("euclidean2");
    const LineElement le{{0.4, -0.3}, {1.0, 2.0}};
    const Matrix M = h_covariant_covector(F, gradient_field(half_square()), le);
    CHECK(M(0, 0) == doctest::Approx(1.0));
    CHECK(M(1, 1) == doctest::Approx(1.0));
    CHECK(std::abs(M(0, 1)) <= 1e-14);
    CovectorField constant = [](std::span<const Jet> x, std::span<const Jet>) {
      return std::vector<Jet>{x[0] * 0.0 + 2.0, x[0] * 0.0 - 1.0};
    };
    CHECK(test::max_abs(h_covariant_covector(F, constant, le).flat()) <= 1e-14);

    CHECK(test::max_abs(cfield_residual(F, half_square(), constant_field(1.0), le).flat()) <= 1e-14);
    const auto x1 = ScalarField::from_generic([]<class T>(std::span<const T> x) { return T(x[0]); });
    CHECK(test::max_abs(cfield_residual(F, x1, constant_field(0.0), le).flat()) <= 1e-14);
  }

  TEST_CASE("the Cartan connection is metric") {
    for (const char* name : {"randers2", "randers_var2", "funk2", "warped_sinh_randers"}) {
      const auto F = test::metric(name);
      SampleStream rng(10, 0);
      const LineElement le = sample_line_element(F, rng);
      const auto b = connection_bundle(F, le);
      const double scale = std::max(1.0, test::max_abs(b.g.flat()) * test::max_abs(b.Gamma_star.flat()));
      INFO(name);
      CHECK(test::max_abs(h_covariant_metric(F, le).flat()) <= 1e-9 * scale);
    }
  }
}
