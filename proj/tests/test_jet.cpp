#include <doctest.h>

#include "finsler/error.hpp"

#include <cmath>

#include "finsler/diffkit.hpp"
#include "finsler/jet.hpp"
#include "finsler/sampling.hpp"
#include "helpers.hpp"

using namespace finsler;

TEST_SUITE("jet") {
  TEST_CASE("product rule holds on random polynomial pairs") {
    auto space = JetSpace::get(2, 4);
    for (std::uint64_t s = 0; s < 20; ++s) {
      SampleStream rng(7, s);
      const double x0 = rng.uniform(-1, 1), y0 = rng.uniform(-1, 1);
      const Jet x = Jet::variable(space, 0, x0);
      const Jet y = Jet::variable(space, 1, y0);
      double c[6];
      for (double& v : c) v = rng.uniform(-2, 2);
      const Jet f = c[0] + c[1] * x * x + c[2] * x * y;
      const Jet g = c[3] * y + c[4] * x * y * y + c[5];
      const Jet fg = f * g;
      for (int var = 0; var < 2; ++var) {
        const Jet lhs = fg.derivative(var);
        const Jet rhs = f.derivative(var) * g.truncated(3) + f.truncated(3) * g.derivative(var);
        for (std::size_t k = 0; k < lhs.coefficients().size(); ++k) {
          CHECK(lhs.coefficients()[k] == doctest::Approx(rhs.coefficients()[k]).epsilon(1e-13));
        }
      }
      CHECK((f + g).value() == doctest::Approx(f.value() + g.value()));
    }
  }

  TEST_CASE("partials of |y|^2 and |y|") {
    JetFunction sq = [](std::span<const Jet> y) { return y[0] * y[0] + y[1] * y[1]; };
    JetFunction norm = [](std::span<const Jet> y) { return sqrt(y[0] * y[0] + y[1] * y[1]); };
    const double at[2] = {3.0, 4.0};
    const int yy[2] = {0, 0};
    const int y1[1] = {0};
    CHECK(partial(sq, at, yy) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(partial(norm, at, y1) == doctest::Approx(0.6).epsilon(1e-15));
  }

  TEST_CASE("Randers b=0.5 second y-derivative of F^2") {
    const auto F = test::randers(0.5);
    const int mi[2] = {2, 2};
    CHECK(partial_f2(F, {{0.1, 0.2}, {1.0, 0.0}}, mi) == doctest::Approx(4.5).epsilon(1e-14));
  }

  TEST_CASE("sqrt and division at zero are hard errors") {
    auto space = JetSpace::get(1, 2);
    const Jet z = Jet::variable(space, 0, 0.0);
    CHECK_THROWS_AS(sqrt(z), Error);
    CHECK_THROWS_AS(Jet(1.0) / z, Error);
    try {
      (void)sqrt(z);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NonSmoothLocus);
    }
  }

  TEST_CASE("elementary functions match their derivatives") {
    auto space = JetSpace::get(1, 4);
    const Jet t = Jet::variable(space, 0, 0.7);
    const Jet s = sin(t);
    const int d3[3] = {0, 0, 0};
    CHECK(s.partial(d3) == doctest::Approx(-std::cos(0.7)).epsilon(1e-15));
    const Jet e = exp(t) * log(t + 1.0);
    const int d1[1] = {0};
    CHECK(e.partial(d1) == doctest::Approx(std::exp(0.7) * (std::log(1.7) + 1.0 / 1.7)).epsilon(1e-14));
  }
}
