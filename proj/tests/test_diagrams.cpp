#include "kzc/diagram.hpp"
#include "kzc/series.hpp"

#include <doctest.h>

#include <random>

using namespace kzc;

namespace {

Diagram chordDiagram(int q, std::vector<std::pair<int, int>> chords) {
  Diagram d;
  d.q = q;
  d.chords = std::move(chords);
  return d;
}

Diagram veeDiagram(int q, Vee v, std::vector<std::pair<int, int>> chords = {}) {
  Diagram d = chordDiagram(q, std::move(chords));
  d.vees = {v};
  return d;
}

// A random V-diagram or chord diagram of the given degree.
Diagram randomDiagram(std::mt19937& rng, DiagramKind kind, int degree) {
  auto all = enumerateDiagrams(kind, degree);
  std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
  return all[pick(rng)];
}

}  // namespace

TEST_SUITE("diagrams") {
  TEST_CASE("canonicalize replaces labels by ranks") {
    RawDiagram r;
    r.chords = {{10, 30}, {20, 40}};
    Diagram d = canonicalize(r);
    CHECK(d.q == 4);
    CHECK(d.chords == std::vector<std::pair<int, int>>{{1, 3}, {2, 4}});
    CHECK(canonicalize(toRaw(d)) == d);
  }

  TEST_CASE("canonicalize keeps the roles of a V") {
    RawDiagram r;
    r.vees = {{5, 1, 9}};
    r.chords = {{2, 3}};
    Diagram d = canonicalize(r);
    CHECK(d.q == 5);
    REQUIRE(d.vees.size() == 1);
    CHECK(d.vees[0] == Vee{4, 1, 5});
    CHECK(d.chords == std::vector<std::pair<int, int>>{{2, 3}});
  }

  TEST_CASE("canonicalize rejects malformed input") {
    RawDiagram dup;
    dup.chords = {{1, 2}, {2, 3}};
    CHECK_THROWS_AS(canonicalize(dup), std::invalid_argument);
    RawDiagram overlap;
    overlap.vees = {{1, 2, 3}};
    overlap.chords = {{3, 4}};
    CHECK_THROWS_AS(canonicalize(overlap), std::invalid_argument);
    RawDiagram tree;
    tree.tree = std::make_pair(std::vector<double>{1, 2, 3, 4}, std::vector<std::pair<double, double>>{{1, 2}, {2, 3}, {1, 3}});
    CHECK_THROWS_AS(canonicalize(tree), std::invalid_argument);
  }

  TEST_CASE("canonical form is invariant under increasing relabeling") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(0.1, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
      Diagram d = randomDiagram(rng, DiagramKind::D1, 3);
      RawDiagram r = toRaw(d);
      // x -> x^3 + a x + b with a > 0 is strictly increasing.
      double a = u(rng), b = u(rng);
      auto f = [&](double x) { return x * x * x + a * x + b; };
      for (auto& [p, q] : r.chords) p = f(p), q = f(q);
      for (auto& v : r.vees)
        for (auto& x : v) x = f(x);
      CHECK(canonicalize(r) == d);
    }
  }

  TEST_CASE("lk counts points strictly inside the pair") {
    CHECK(lk({2, 4}, {1, 3}) == -1);
    CHECK(lk({5, 6}, {1, 2}) == 1);
    CHECK(lk({1, 3, 5}, {2, 6}) == 1);
    CHECK_THROWS_AS(lk({1, 2}, {2, 3}), std::invalid_argument);
  }

  TEST_CASE("lk is unchanged by reflecting the line") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(0, 10);
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> p{u(rng), u(rng), u(rng)};
      std::pair<double, double> q{u(rng), u(rng)};
      std::vector<double> rp;
      for (double x : p) rp.push_back(20 - x);
      CHECK(lk(p, q) == lk(rp, {20 - q.second, 20 - q.first}));
    }
  }

  TEST_CASE("sign S(D) under the count reading") {
    CHECK(sigmaSign(veeDiagram(5, {2, 1, 3}, {{4, 5}})) == 1);
    CHECK(sigmaSign(veeDiagram(5, {3, 1, 5}, {{2, 4}})) == -1);
    // V on {1,3,5} with chord (2,6): the chord interval holds 3 and 5.
    RawDiagram r;
    r.vees = {{3, 1, 5}};
    r.chords = {{2, 6}};
    CHECK(sigmaSign(canonicalize(r)) == 1);
    CHECK_THROWS_AS(sigmaSign(chordDiagram(2, {{1, 2}})), std::invalid_argument);
  }

  TEST_CASE("sigma is an involution") {
    for (int m = 2; m <= 4; ++m)
      for (const auto& d : enumerateDiagrams(DiagramKind::D1, m)) {
        FormalSum s(d, Rational(1));
        CHECK(sigma(sigma(s)) == s);
      }
  }

  TEST_CASE("concatenation and products") {
    Diagram v = veeDiagram(3, {2, 1, 3});
    FormalSum one(Diagram{}, Rational(1));
    CHECK(concat(one, FormalSum(v, 1), one) == FormalSum(v, 1));
    Diagram c = chordDiagram(2, {{1, 2}});
    FormalSum p = product(FormalSum(c, 1), FormalSum(c, 1));
    CHECK(p == FormalSum(chordDiagram(4, {{1, 2}, {3, 4}}), 1));
    CHECK_THROWS_AS(concat(FormalSum(v, 1), FormalSum(v, 1), one), std::invalid_argument);

    std::mt19937 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
      Diagram a = randomDiagram(rng, DiagramKind::D0, 1 + trial % 2);
      Diagram m = randomDiagram(rng, DiagramKind::D1, 2 + trial % 2);
      Diagram b = randomDiagram(rng, DiagramKind::D0, 1 + trial % 3);
      FormalSum s = concat(FormalSum(a, 1), FormalSum(m, 1), FormalSum(b, 1));
      CHECK(homogeneousDegree(s) == a.degree() + m.degree() + b.degree());
      CHECK(concatDiagrams({concatDiagrams({a, m}), b}) == concatDiagrams({a, concatDiagrams({m, b})}));
    }
  }

  TEST_CASE("enumeration counts") {
    CHECK(enumerateDiagrams(DiagramKind::D0, 2).size() == 3);
    CHECK(enumerateDiagrams(DiagramKind::D1, 2).size() == 3);
    CHECK(spanningTrees4().size() == 16);
    CHECK(enumerateDiagrams(DiagramKind::D0, 3).size() == 15);
    auto ds = enumerateDiagrams(DiagramKind::D1, 3);
    CHECK(std::is_sorted(ds.begin(), ds.end()));
    CHECK(std::adjacent_find(ds.begin(), ds.end()) == ds.end());
  }

  TEST_CASE("degree counts chords, V's as two, trees as three") {
    Diagram t;
    t.q = 4;
    t.tree = PointGraph{{1, 2, 3, 4}, {{1, 2}, {1, 3}, {1, 4}}};
    CHECK(t.degree() == 3);
    CHECK(t.kind() == DiagramKind::D2Tree);
    CHECK(veeDiagram(5, {2, 1, 3}, {{4, 5}}).degree() == 3);
  }

  TEST_CASE("JSON round trip") {
    for (const auto& d : enumerateDiagrams(DiagramKind::D1, 3)) CHECK(diagramFromJson(toJson(d)) == d);
    nlohmann::json raw = {{"q", 4}, {"chords", {{4, 2}, {3, 1}}}};
    CHECK(diagramFromJson(raw) == chordDiagram(4, {{1, 3}, {2, 4}}));
  }

  TEST_CASE("series inverse of 1 + cD") {
    Diagram c = chordDiagram(2, {{1, 2}});
    Series<Rational> a = Series<Rational>::one(2);
    Rational k(3, 7);
    a.add(c, k);
    Series<Rational> inv = seriesInv(a, 2);
    CHECK(inv.constant() == 1);
    CHECK(inv[1].coefficient(c) == -k);
    CHECK(inv[2].coefficient(concatDiagrams({c, c})) == k * k);
    CHECK(inv[2].size() == 1);
  }

  TEST_CASE("series identities") {
    std::mt19937 rng(5);
    Series<Rational> a = Series<Rational>::one(3);
    a.add(Diagram{}, Rational(1, 2));
    for (int deg = 1; deg <= 3; ++deg)
      for (int i = 0; i < 3; ++i) a.add(randomDiagram(rng, DiagramKind::D0, deg), Rational(static_cast<int>(rng() % 7) - 3, 1 + deg));
    Series<Rational> one = Series<Rational>::one(3);
    CHECK(seriesMul(one, a, 3) == a);
    CHECK(seriesMul(a, seriesInv(a, 3), 3) == one);
    CHECK(seriesMul(seriesInv(a, 3), a, 3) == one);
    Series<Rational> zero(3);
    CHECK_THROWS_AS(seriesInv(zero, 3), std::domain_error);
  }
}
