#include "kzc/quadrature.hpp"

#include <doctest.h>

#include <cmath>

using namespace kzc;

TEST_SUITE("quadrature") {
  TEST_CASE("Gauss-Legendre rules integrate polynomials exactly") {
    for (int n : {1, 2, 5, 10, 20}) {
      const auto& r = gaussLegendre(n);
      REQUIRE(r.nodes.size() == static_cast<std::size_t>(n));
      double wsum = 0;
      for (double w : r.weights) wsum += w;
      CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
      for (int deg = 0; deg <= 2 * n - 1; ++deg) {
        double s = 0;
        for (int i = 0; i < n; ++i) s += r.weights[i] * std::pow(r.nodes[i], deg);
        double exact = deg % 2 ? 0.0 : 2.0 / (deg + 1);
        CHECK(s == doctest::Approx(exact).epsilon(1e-13));
      }
    }
    CHECK_THROWS(gaussLegendre(0));
  }

  TEST_CASE("adaptive integration of smooth and kinked integrands") {
    QuadratureConfig cfg;
    auto poly = [](double x, std::vector<std::complex<double>>& acc) {
      acc[0] += 3 * x * x;
      acc[1] += std::complex<double>(0, 1) * x;
    };
    auto r = integrateAdaptive(poly, 2, 0, 2, {}, cfg);
    CHECK(r.converged);
    CHECK(std::abs(r.value[0] - 8.0) < 1e-12);
    CHECK(std::abs(r.value[1] - std::complex<double>(0, 2)) < 1e-12);

    auto kink = [](double x, std::vector<std::complex<double>>& acc) { acc[0] += std::abs(x - 0.3); };
    auto withBreak = integrateAdaptive(kink, 1, 0, 1, {0.3}, cfg);
    CHECK(std::abs(withBreak.value[0] - (0.045 + 0.245)) < 1e-13);
    auto without = integrateAdaptive(kink, 1, 0, 1, {}, cfg);
    CHECK(std::abs(without.value[0] - 0.29) < 1e-8);
    CHECK(without.evaluations > withBreak.evaluations);

    auto logSing = [](double x, std::vector<std::complex<double>>& acc) { acc[0] += std::log(x); };
    auto l = integrateAdaptive(logSing, 1, 0, 1, {}, cfg);
    CHECK(std::abs(l.value[0] + 1.0) < 1e-6);
  }

  TEST_CASE("vanishing integrals converge through the absolute floor") {
    QuadratureConfig cfg;
    auto odd = [](double x, std::vector<std::complex<double>>& acc) { acc[0] += std::sin(7 * x) * x * x; };
    auto r = integrateAdaptive(odd, 1, -1, 1, {}, cfg);
    CHECK(r.converged);
    CHECK(std::abs(r.value[0]) < 1e-12);
  }

  TEST_CASE("configuration JSON") {
    QuadratureConfig cfg;
    cfg.order = 12;
    cfg.tol = 1e-7;
    auto back = QuadratureConfig::fromJson(cfg.toJson());
    CHECK(back.order == 12);
    CHECK(back.tol == 1e-7);
    CHECK(back.absTol == cfg.absTol);
    CHECK_THROWS_AS(QuadratureConfig::fromJson({{"order", 0}}), std::invalid_argument);
    CHECK_THROWS_AS(QuadratureConfig::fromJson({{"tol", -1.0}}), std::invalid_argument);
  }
}
