#include "kzc/kzforms.hpp"
#include "kzc/vassiliev.hpp"

#include <doctest.h>

#include <algorithm>

using namespace kzc;

TEST_SUITE("vassiliev") {
  TEST_CASE("cycle edge removals") {
    auto tri = cycleEdgeRemovals({{1, 2}, {1, 3}, {2, 3}});
    CHECK(tri.size() == 3);
    CHECK(tri[0].second == 1);
    CHECK(tri[1].second == -1);
    CHECK(tri[2].second == 1);
    auto square = cycleEdgeRemovals({{1, 2}, {2, 3}, {3, 4}, {1, 4}});
    CHECK(square.size() == 4);
    // A pendant edge is never removed.
    auto lollipop = cycleEdgeRemovals({{1, 2}, {1, 3}, {2, 3}, {3, 4}});
    CHECK(lollipop.size() == 3);
    for (const auto& [rest, sign] : lollipop) CHECK(std::find(rest.begin(), rest.end(), std::pair{3, 4}) != rest.end());
  }

  TEST_CASE("graphs with four edges") {
    auto graphs = enumerate4EdgeGraphs();
    CHECK(graphs.size() == 15);
    for (const auto& g : graphs) CHECK(g.kind() == DiagramKind::D2TildeGraph4);
  }

  TEST_CASE("tree configuration matrices") {
    auto t = buildTreeConfigMatrices();
    CHECK(t.m1.rows() == 16);
    CHECK(t.m1.cols() == 15);
    CHECK(t.mright.cols() == 72);
    CHECK(rank(t.m1) == 10);
    CHECK(kernelBasis(t.m1).size() == 5);
    CHECK(transposeKernelBasis(t.m1).size() == 6);
    auto five = fiveEdgeBoundaries();
    CHECK(five.size() == 6);
    for (const auto& v : five)
      for (const auto& x : multiply(t.m1, v)) CHECK(isZero(x));
    CHECK(rank(matrixFromVectors(five, 15)) == 5);
  }

  TEST_CASE("two-triple matrices") {
    auto m = buildTwoTripleMatrices();
    CHECK(m.l.rows() == 9);
    CHECK(m.l.cols() == 6);
    CHECK(m.r.cols() == 36);
    CHECK(kernelBasis(m.l).size() == 1);
    CHECK(transposeKernelBasis(m.l).size() == 4);
    for (const auto& x : multiply(m.l, twoTriangleBoundary(m))) CHECK(isZero(x));
    CHECK_THROWS_AS(buildTwoTripleMatrices({1, 2, 3}, {3, 4, 5}), std::invalid_argument);
  }

  TEST_CASE("sign calibration") {
    auto curv = curvatureMatrix();
    auto flips = solveEpsilonZeta(curv);
    CHECK(flips.size() == 3);
    auto m2 = derivedM2(buildTreeConfigMatrices(), flips);
    CHECK(rowSpaceEqual(m2, curv));
    CHECK_THROWS_AS(solveEpsilonZeta(curv, SignReading::Literal), std::runtime_error);
  }

  TEST_CASE("tree calibration combinations lie in the left kernel") {
    const auto& cal = treeCalibration();
    auto t = buildTreeConfigMatrices();
    CHECK(cal.combinations.size() == 6);
    // The combinations carry the calibrated row signs.
    auto flipped = flipRows(t.m1, cal.flips);
    for (const auto& x : cal.combinations)
      for (const auto& y : leftMultiply(x, flipped)) CHECK(isZero(y));
  }

  TEST_CASE("printed tables reproduce") {
    auto fx = loadAppendixFixtures(fixtureDirectory());
    auto rep = verifyAppendixC(fx);
    CHECK(rep.pass());
    CHECK(rep.rankM1 == 10);
    CHECK(rep.m1Matches > 0);
    CHECK(rep.perturbationDetected);
  }

  TEST_CASE("a corrupted table is rejected") {
    auto fx = loadAppendixFixtures(fixtureDirectory());
    auto [r, c, v] = fx.m1.entries().front();
    fx.m1.set(r, c, -v);
    auto rep = verifyAppendixC(fx);
    CHECK_FALSE(rep.pass());
    CHECK(rep.m1Matches == 0);
  }

  TEST_CASE("missing fixtures raise") {
    CHECK_THROWS_AS(loadAppendixFixtures("/nonexistent/dir"), std::runtime_error);
  }
}
