#include <doctest.h>

#include "finsler/error.hpp"

#include <cmath>
#include <numbers>

#include "finsler/connection.hpp"
#include "finsler/diffkit.hpp"
#include "finsler/warped.hpp"
#include "helpers.hpp"

using namespace finsler;

TEST_SUITE("diffkit") {
  TEST_CASE("fd_partial on elementary functions") {
    RealFunction s = [](std::span<const double> z) { return std::sin(z[0]); };
    const double at[1] = {std::numbers::pi / 3};
    const int d1[1] = {0};
    const auto r = fd_partial(s, at, d1);
    CHECK(std::abs(r.value - 0.5) <= 1e-10);

    RealFunction sq = [](std::span<const double> z) { return z[0] * z[0] + z[1] * z[1]; };
    JetFunction sqj = [](std::span<const Jet> z) { return z[0] * z[0] + z[1] * z[1]; };
    const double p[2] = {0.3, -1.2};
    for (const auto& mi : std::vector<std::vector<int>>{{0}, {1}, {0, 0}, {0, 1}, {1, 1}}) {
      CHECK(std::abs(fd_partial(sq, p, mi).value - partial(sqj, p, mi)) <= 1e-10);
    }
  }

  TEST_CASE("fd_partial rejects bad configurations") {
    RealFunction f = [](std::span<const double> z) { return z[0]; };
    const double at[1] = {1.0};
    const int d1[1] = {0};
    FDConfig bad;
    bad.step = -1.0;
    CHECK_THROWS_AS(fd_partial(f, at, d1, bad), Error);
    FDConfig tiny;
    tiny.step = 1e-30;
    tiny.floor = 1e-300;
    try {
      fd_partial(f, at, d1, tiny);
      FAIL("expected an underflow error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Config);
    }
  }

  TEST_CASE("jet and finite-difference partials of F^2 agree on the corpus") {
    for (const auto& e : list_builtins()) {
      const FinslerStructure F = instantiate(e.spec);
      const int vars = 2 * F.dim();
      for (std::uint64_t s = 0; s < 10; ++s) {
        SampleStream rng(11, s);
        const LineElement le = sample_line_element(F, rng);
        for (int a = 0; a < vars; ++a) {
          for (int b = -1; b < vars; ++b) {
            if (b >= 0 && b < a) continue;
            const std::vector<int> mi = b < 0 ? std::vector<int>{a} : std::vector<int>{a, b};
            const double exact = partial_f2(F, le, mi);
            const double fd = fd_partial_f2(F, le, mi).value;
            INFO(e.name, " sample ", s, " index ", a, ",", b);
            CHECK(std::abs(exact - fd) <= std::max(1e-6 * std::abs(exact), 1e-8));
          }
        }
      }
    }
  }

  TEST_CASE("Funk mixed x-y partial matches the oracle") {
    const auto F = test::metric("funk2");
    const LineElement le{{0.3, -0.2}, {0.6, 0.8}};
    const int mi[2] = {0, 3};
    const double exact = partial_f2(F, le, mi);
    CHECK(std::abs(fd_partial_f2(F, le, mi).value - exact) <= 1e-6 * std::abs(exact));
  }

  TEST_CASE("directional_limit of a continuous function is its value") {
    const LineElement at{{0.0, 0.0}, {1.0, 2.0}};
    const double gap[2] = {0.0, 1.0};
    auto f = [](const LineElement& le) { return std::cos(le.y[0]) * le.y[1]; };
    const auto r = directional_limit(f, at, gap);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(std::cos(1.0) * 2.0).epsilon(1e-10));
  }

  TEST_CASE("directional_limit of eps log eps") {
    const LineElement at{{0.0}, {0.0}};
    const double gap[1] = {1.0};
    auto f = [](const LineElement& le) { return le.y[0] * std::log(le.y[0]); };
    const auto r = directional_limit(f, at, gap);
    CHECK(std::abs(r.value) <= 1e-6);
  }

  TEST_CASE("directional_limit reports divergence") {
    const LineElement at{{0.0}, {0.0}};
    const double gap[1] = {1.0};
    auto f = [](const LineElement& le) { return 1.0 / le.y[0]; };
    CHECK_THROWS_AS(directional_limit(f, at, gap), Error);
  }

  TEST_CASE("spray of a Riemannian warped product along the t-axis vanishes in the limit") {
    const auto ws = build_warped(WarpProfile::analytic("sin"), test::metric("sphere_polar2"));
    const LineElement at{{1.0, 1.2, 0.4}, {1.0, 0.0, 0.0}};
    const double gap[3] = {0.0, 0.6, 0.8};
    for (int i = 0; i < 3; ++i) {
      auto Gi = [&ws, i](const LineElement& le) { return spray(ws.total, le)[static_cast<std::size_t>(i)]; };
      CHECK(std::abs(directional_limit(Gi, at, gap).value) <= 1e-9);
    }
  }
}
