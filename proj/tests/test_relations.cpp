#include "kzc/relations.hpp"
#include "kzc/vassiliev.hpp"
#include "oracles/four_term.hpp"

#include <doctest.h>

#include <algorithm>
#include <map>

using namespace kzc;

namespace {

Diagram treeDiagram(std::vector<std::pair<int, int>> edges) {
  Diagram d;
  d.q = 4;
  d.tree = PointGraph{{1, 2, 3, 4}, std::move(edges)};
  return d;
}

RationalVector asVector(const FormalSum& w, const std::vector<Diagram>& basis) {
  std::map<Diagram, int> index;
  for (std::size_t i = 0; i < basis.size(); ++i) index[basis[i]] = static_cast<int>(i);
  RationalVector v(basis.size());
  for (const auto& [d, c] : w.terms()) v[index.at(d)] = c;
  return v;
}

}  // namespace

TEST_SUITE("relations") {
  TEST_CASE("tree desingularisation term counts") {
    auto star = treeDiagram({{1, 2}, {1, 3}, {1, 4}});
    auto path = treeDiagram({{1, 2}, {2, 3}, {3, 4}});
    CHECK(treeSplitTerms(star).size() == 6);
    CHECK(treeSplitTerms(path).size() == 4);
    for (const auto& t : treeSplitTerms(star)) {
      CHECK(abs(t.coefficient) == 1);
      CHECK(t.diagram.kind() == DiagramKind::D1);
      CHECK(t.diagram.q == 5);
    }
    // A leaf cannot be split into a V and a chord.
    CHECK_THROWS_AS(splitTreeVertex(star, 2, {1, 2}, SplitOrder::LoneBefore), std::invalid_argument);
  }

  TEST_CASE("slotted expansion keeps configurations apart") {
    CHECK(treeConfigBasis().size() == 72);
    CHECK(treeConfigRows().size() == 16);
    std::size_t raw = 0;
    for (const auto& t : treeConfigRows()) raw += treeSplitTerms(t).size();
    CHECK(raw == 4 * 6 + 12 * 4);
  }

  TEST_CASE("two-V expansion") {
    Diagram d;
    d.q = 6;
    d.vees = {Vee{2, 1, 3}, Vee{5, 4, 6}};
    auto terms = twoVeeSplitTerms(d);
    CHECK(terms.size() == 4);
    for (const auto& t : terms) CHECK(abs(t.coefficient) == 1);
    Rational total = 0;
    auto expanded = expandTwoVee(d);
    for (const auto& [k, c] : expanded.terms()) total += abs(c);
    CHECK(total <= 4);
  }

  TEST_CASE("1T and 2T relators") {
    CHECK(relatorSet(Family::OneT, 2).relators.empty());
    auto one = relatorSet(Family::OneT, 3);
    REQUIRE_FALSE(one.relators.empty());
    for (const auto& r : one.relators) {
      REQUIRE(r.size() == 1);
      CHECK(hasIsolatedChord(r.terms().begin()->first));
    }
    auto two = relatorSet(Family::TwoT, 2);
    REQUIRE_FALSE(two.relators.empty());
    for (const auto& r : two.relators) {
      CHECK(r.size() <= 2);
      for (const auto& [d, c] : r.terms()) CHECK(d.kind() == DiagramKind::D1);
    }
    CHECK(relatorSet(Family::SixteenT, 2).relators.empty());
    CHECK(relatorSet(Family::FourByFourT, 3).relators.empty());
    CHECK_THROWS_AS(relatorSet(Family::TwoT, 5), std::invalid_argument);
  }

  TEST_CASE("4x4T relators on two triples") {
    std::vector<int> counts;
    auto rels = relators4x4T({1, 2, 3}, {4, 5, 6}, {}, 6, &counts);
    CHECK(rels.size() == 4);
    CHECK(counts == std::vector<int>{16, 16, 16, 16});
    CHECK_THROWS_AS(relators4x4T({1, 2, 3}, {3, 4, 5}, {}, 6), std::invalid_argument);
  }

  TEST_CASE("16T and 28T relators on four points") {
    std::vector<int> counts;
    auto rels = relators16T28T({1, 2, 3, 4}, {}, 4, &counts);
    REQUIRE(rels.size() == 6);
    const auto& fam = treeCalibration().families;
    REQUIRE(fam.size() == 6);
    CHECK(std::count(fam.begin(), fam.end(), Family::SixteenT) == 3);
    CHECK(std::count(fam.begin(), fam.end(), Family::TwentyEightT) == 3);
    for (std::size_t i = 0; i < 6; ++i) CHECK(counts[i] == (fam[i] == Family::SixteenT ? 16 : 28));
  }

  TEST_CASE("4T agrees with the infinitesimal braid oracle") {
    const std::size_t expectedRank[] = {0, 0, 1, 12, 99};
    for (int m = 2; m <= 4; ++m) {
      auto rs = relatorSet(Family::FourT, m);
      auto mine = rs.matrix();
      auto theirs = oracle::asMatrix(oracle::fourTermRelators(m), rs.basis);
      CHECK(rowSpaceEqual(mine, theirs));
      CHECK(rank(mine) == expectedRank[m]);
    }
  }

  TEST_CASE("relation matrix ranks and weight systems") {
    const std::size_t expectedRank[] = {0, 0, 2, 19};
    const std::size_t expectedDim[] = {0, 0, 1, 11};
    for (int m = 2; m <= 3; ++m) {
      auto rm = relationMatrix(m);
      CHECK(rank(rm.matrix) == expectedRank[m]);
      auto ws = weightSystemBasis(m);
      CHECK(ws.size() == expectedDim[m]);
      CHECK(rank(rm.matrix) + ws.size() == rm.basis.size());
      for (const auto& w : ws) {
        for (const auto& x : multiply(rm.matrix, asVector(w, rm.basis))) CHECK(isZero(x));
        CHECK(isWeightSystem(w, m).ok);
      }
    }
  }

  TEST_CASE("weight system check names the violated relator") {
    CHECK(isWeightSystem(FormalSum{}, 3).ok);
    auto basis = enumerateDiagrams(DiagramKind::D1, 3);
    auto it = std::find_if(basis.begin(), basis.end(), [](const Diagram& d) { return hasIsolatedChord(d); });
    REQUIRE(it != basis.end());
    auto check = isWeightSystem(FormalSum(*it, Rational(1)), 3);
    CHECK_FALSE(check.ok);
    CHECK(check.violated.rfind("1T", 0) == 0);
  }

  TEST_CASE("family names round trip") {
    for (Family f : {Family::OneT, Family::TwoT, Family::FourT, Family::SixteenT, Family::TwentyEightT,
                     Family::FourByFourT})
      CHECK(familyFromName(familyName(f)) == f);
    CHECK_THROWS_AS(familyFromName("5T"), std::invalid_argument);
  }
}
