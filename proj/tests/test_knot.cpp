#include "kzc/knot.hpp"
#include "kzc/vassiliev.hpp"

#include <doctest.h>

#include <cmath>

using namespace kzc;

namespace {

MorseKnot fixtureKnot(const std::string& name) { return loadKnot(fixtureDirectory() + "/knots/" + name + ".json"); }

}  // namespace

TEST_SUITE("knot") {
  TEST_CASE("critical point counts of the fixtures") {
    CHECK(fixtureKnot("line").criticalCount() == 0);
    CHECK(fixtureKnot("hump").criticalCount() == 2);
    CHECK(fixtureKnot("trefoilA").criticalCount() == 4);
    CHECK(fixtureKnot("trefoilB").criticalCount() == 4);
    CHECK(straightLineKnot().criticalCount() == 0);
  }

  TEST_CASE("branches of the hump") {
    auto k = fixtureKnot("hump");
    REQUIRE(k.branches().size() == 3);
    CHECK(k.branches()[0].direction == 1);
    CHECK(k.branches()[1].direction == -1);
    CHECK(k.branches()[2].direction == 1);
    CHECK(k.strandsAt(0.0) == std::vector<int>{0, 1, 2});
    CHECK(k.strandsAt(2.0) == std::vector<int>{2});
    CHECK(k.strandsAt(-1.5) == std::vector<int>{0});
    // On the descending branch, halfway between (0,0,1) and (1,0.3,-1).
    auto z = k.position(1, 0.0);
    CHECK(z.real() == doctest::Approx(0.5));
    CHECK(z.imag() == doctest::Approx(0.15));
    CHECK(k.slope(1, 0.0).real() == doctest::Approx(-0.5));
    CHECK(k.breakpoints() == std::vector<double>{-2, -1, 1, 3});
  }

  TEST_CASE("validation errors") {
    CHECK_THROWS_AS(MorseKnot({{0, 0, 0}, {1, 0, 0}, {0, 0, 1}}), NotMorse);
    CHECK_THROWS_AS(MorseKnot({{0, 0, 0}, {1, 0, 3}, {2, 0, 1}, {3, 0, 4}, {4, 0, 3}, {0, 0, 5}}), NotMorse);
    CHECK_THROWS_AS(MorseKnot({{1, 0, 0}, {0, 0, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(MorseKnot({{0, 0, 0}, {0, 0, NAN}}), std::invalid_argument);
    // The descending branch passes through the first segment at the origin.
    CHECK_THROWS_AS(MorseKnot({{0, 0, -2}, {0, 0, 2}, {1, 0, 1}, {-1, 0, -1}, {0, 0, 3}}), SelfIntersection);
    CHECK_THROWS_AS(knotFromJson(nlohmann::json{{"type", "spline"}}), std::invalid_argument);
    CHECK_THROWS_AS(loadKnot("/nonexistent.json"), std::invalid_argument);
  }

  TEST_CASE("JSON round trip") {
    auto k = fixtureKnot("trefoilA");
    auto back = knotFromJson(toJson(k));
    REQUIRE(back.vertices().size() == k.vertices().size());
    for (std::size_t i = 0; i < k.vertices().size(); ++i) {
      CHECK(back.vertices()[i].x == k.vertices()[i].x);
      CHECK(back.vertices()[i].t == k.vertices()[i].t);
    }
  }

  TEST_CASE("rotation path") {
    auto k = fixtureKnot("hump");
    auto p = KnotPath::rotation(k);
    CHECK(p.kind() == KnotPath::Kind::Rotation);
    CHECK(p.a() == 0);
    CHECK(p.b() == doctest::Approx(2 * M_PI));
    auto s = p.at(M_PI / 2);
    // Rotation by a quarter turn sends x + iy to i(x + iy).
    CHECK(s.knot.vertices()[2].x == doctest::Approx(-0.3));
    CHECK(s.knot.vertices()[2].y == doctest::Approx(1.0));
    CHECK(std::abs(s.dz[2] - Complex(0, 1) * Complex(-0.3, 1.0)) < 1e-12);
    CHECK(s.dt[2] == 0);
  }

  TEST_CASE("keyframe paths") {
    auto a = fixtureKnot("trefoilA"), b = fixtureKnot("trefoilB");
    auto p = KnotPath::keyframes({a, b}, 0, 1);
    auto mid = p.at(0.5);
    CHECK(mid.knot.vertices()[5].x == doctest::Approx((a.vertices()[5].x + b.vertices()[5].x) / 2));
    CHECK(mid.dz[5].real() == doctest::Approx(b.vertices()[5].x - a.vertices()[5].x));
    auto inv = p.inverse();
    CHECK(inv.at(0.25).knot.vertices()[5].x == doctest::Approx(p.at(0.75).knot.vertices()[5].x));
    auto loop = p.then(KnotPath::keyframes({b, a}, 1, 2));
    CHECK(loop.breakpoints() == std::vector<double>{0, 1, 2});
    CHECK_THROWS_AS(KnotPath::keyframes({a}, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(KnotPath::keyframes({a, b}, 1, 1), std::invalid_argument);
  }

  TEST_CASE("perestroikas are rejected") {
    auto line = MorseKnot({{0, 0, -1}, {0.5, 0, 0}, {1, 0, 1}, {0, 0, 2}});
    auto humped = MorseKnot({{0, 0, -1}, {0.5, 0, 0.6}, {1, 0, 0.4}, {0, 0, 2}});
    CHECK(line.criticalCount() == 0);
    CHECK(humped.criticalCount() == 2);
    CHECK_THROWS_AS(KnotPath::keyframes({line, humped}, 0, 1), NotMorse);
  }

  TEST_CASE("path JSON") {
    auto p = pathFromJson({{"type", "rotation"}, {"knot", toJson(fixtureKnot("hump"))}});
    CHECK(p.kind() == KnotPath::Kind::Rotation);
    CHECK_THROWS_AS(pathFromJson({{"type", "spiral"}}), std::invalid_argument);
  }
}
