#include "kzc/integrator.hpp"
#include "kzc/relations.hpp"
#include "oracles/conway.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace kzc;
using support::fixtureKnot;

namespace {

constexpr double kTol = 1e-6;

double crossed(const NumericVector& v) { return v.coefficient(crossedChordDiagram()).value.real(); }

double maxAbs(const NumericVector& v) {
  double m = 0;
  for (const auto& [d, t] : v.terms) m = std::max(m, std::abs(t.value));
  return m;
}

double maxErr(const NumericVector& v) {
  double m = 0;
  for (const auto& [d, t] : v.terms) m = std::max(m, t.error);
  return m;
}

}  // namespace

TEST_SUITE("integrator") {
  TEST_CASE("reduced classes") {
    const auto& c2 = ReducedClasses::get(DiagramKind::D0, 2);
    CHECK(c2.classCount() == 1);
    CHECK(c2.representatives().front() == crossedChordDiagram());
    for (const auto& d : c2.basis()) {
      auto [cls, sign] = c2.classOf(d);
      CHECK((cls == -1) == hasIsolatedChord(d));
    }
    const auto& v2 = ReducedClasses::get(DiagramKind::D1, 2);
    for (const auto& r : relatorSet(Family::TwoT, 2).relators) {
      if (r.size() != 2) continue;
      auto it = r.terms().begin();
      auto [ca, sa] = v2.classOf(it->first);
      auto [cb, sb] = v2.classOf(std::next(it)->first);
      // X + c Y = 0 puts X and Y in one class with opposite relative sign times c.
      CHECK(ca == cb);
      if (ca >= 0) CHECK(sa * sb * sgn(it->second) * sgn(std::next(it)->second) == -1);
    }
    CHECK_THROWS_AS(ReducedClasses(DiagramKind::D2Tree, 3), std::invalid_argument);
  }

  TEST_CASE("a knot without critical points has trivial Z") {
    MorseKnot wiggle({{0, 0, 0}, {1, 0.5, 1}, {-0.5, 0.2, 1.7}, {0, 0, 2}});
    auto z = kontsevichZ(wiggle, 2);
    CHECK(z.coefficient(Diagram{}).value == std::complex<double>(1, 0));
    CHECK(maxAbs(z) == doctest::Approx(1.0));
    CHECK(std::abs(crossed(z)) < kTol);
    CHECK_THROWS_AS(kontsevichZ(wiggle, 3), std::invalid_argument);
  }

  TEST_CASE("the hump") {
    auto hump = fixtureKnot("hump");
    auto z = kontsevichZ(hump, 2);
    auto c = z.coefficient(crossedChordDiagram());
    CHECK(std::abs(c.value.imag()) <= std::max(kTol, 10 * c.error));
    CHECK(c.value.real() == doctest::Approx(1.0 / 24).epsilon(1e-6));
    auto zh = zHat(hump, hump, 2);
    CHECK(std::abs(crossed(zh)) < 1e-12);
  }

  TEST_CASE("normalized degree-two coefficient equals the Conway coefficient") {
    auto hump = fixtureKnot("hump");
    for (const char* name : {"trefoilA", "trefoilB"}) {
      auto k = fixtureKnot(name);
      CHECK(crossed(zHat(k, hump, 2)) == doctest::Approx(oracle::v2(support::rawVertices(k))).epsilon(1e-6));
    }
    MorseKnot t5(support::torusVertices(5));
    CHECK(oracle::v2(support::rawVertices(t5)) == 3);
    CHECK(crossed(zHat(t5, hump, 2)) == doctest::Approx(3.0).epsilon(1e-6));
  }

  TEST_CASE("Z1 vanishes on a constant path") {
    auto a = fixtureKnot("trefoilA");
    auto z = z1(KnotPath::keyframes({a, a}, 0, 1), 3);
    for (const auto& [d, t] : z.terms) CHECK(t.value == std::complex<double>(0, 0));
  }

  TEST_CASE("Z1 changes sign under path reversal") {
    auto p = KnotPath::keyframes({fixtureKnot("trefoilA"), fixtureKnot("trefoilB")}, 0, 1);
    auto f = z1(p, 3), b = z1(p.inverse(), 3);
    auto sum = f + b;
    CHECK(maxAbs(f) > 1e-3);
    CHECK(maxAbs(sum) <= 10 * (maxErr(f) + maxErr(b)) + 1e-12);
  }

  TEST_CASE("rotation of the straight line and degree two of any rotation") {
    auto z = z1(gramain(straightLineKnot()), 3);
    CHECK(maxAbs(z) == 0);
    auto h = z1(gramain(fixtureKnot("hump")), 2);
    CHECK(maxAbs(h) < kTol);
  }

  TEST_CASE("Z1 is additive under path composition") {
    auto a = fixtureKnot("trefoilA"), b = fixtureKnot("trefoilB");
    std::vector<KnotVertex> mid = a.vertices();
    for (std::size_t i = 1; i + 1 < mid.size(); ++i) {
      mid[i].x = 0.5 * (a.vertices()[i].x + b.vertices()[i].x) + 0.03 * std::sin(1.1 * i);
      mid[i].y = 0.5 * (a.vertices()[i].y + b.vertices()[i].y);
      mid[i].t = 0.5 * (a.vertices()[i].t + b.vertices()[i].t);
    }
    MorseKnot c(mid);
    auto first = KnotPath::keyframes({a, c}, 0, 1), second = KnotPath::keyframes({c, b}, 1, 2);
    auto whole = z1(first.then(second), 2);
    auto parts = z1(first, 2) + z1(second, 2);
    for (const auto& [d, t] : whole.terms) {
      auto p = parts.coefficient(d);
      CHECK(std::abs(t.value - p.value) <= 10 * (t.error + p.error) + 1e-12);
    }
  }

  TEST_CASE("2T partners diverge alone and converge together") {
    // Near the maximum of the hump two strands merge. Each 2T partner grows
    // like log(1/eps)/(2 pi) as the window approaches the merging altitude;
    // the grouped class stays put.
    auto path = gramain(fixtureKnot("hump"));
    auto at = [&](double eps, std::optional<Diagram> single) {
      Z1Options o;
      o.window = std::pair{0.0, 1.0 - eps};
      o.single = single;
      return z1(path, 2, {}, o);
    };
    Diagram partner;
    partner.q = 3;
    partner.vees = {Vee{1, 2, 3}};
    Diagram far = partner;
    far.vees = {Vee{3, 1, 2}};
    double step = std::log(10.0) / (2 * M_PI);
    for (double eps : {1e-2, 1e-3, 1e-4}) {
      auto grow = at(eps / 10, partner).coefficient(partner).value - at(eps, partner).coefficient(partner).value;
      CHECK(std::abs(grow) == doctest::Approx(step).epsilon(0.01));
      auto settle = at(eps / 10, far).coefficient(far).value - at(eps, far).coefficient(far).value;
      CHECK(std::abs(settle) < 0.01 * step);
      auto g0 = at(eps, std::nullopt), g1 = at(eps / 10, std::nullopt);
      for (const auto& [d, t] : g1.terms) CHECK(std::abs(t.value - g0.coefficient(d).value) < 1e-9);
    }
    CHECK_THROWS_AS(z1(path, 3, {}, Z1Options{std::nullopt, partner}), std::invalid_argument);
  }

  TEST_CASE("braid slabs") {
    auto path = gramain(fixtureKnot("trefoilA"));
    auto slab = braidSlab(path, 0.05, 2.95);
    CHECK(slab.strands == 3);
    CHECK(slab.directions == std::vector<int>{1, -1, 1});
    CHECK_THROWS_AS(braidSlab(path, -1, 1), std::invalid_argument);
    CHECK_THROWS_AS(braidSlab(path, 1, 0.5), std::invalid_argument);
    // A single strand carries no chords.
    auto one = braidSlab(path, 4.05, 4.2);
    CHECK(one.strands == 1);
    CHECK(maxAbs(z1Braid(one, 3)) == 0);
  }

  TEST_CASE("a braid that does not move contributes nothing") {
    BraidSlab s;
    s.strands = 3;
    s.phiMin = 0;
    s.phiMax = 1;
    s.tMin = 0;
    s.tMax = 1;
    s.directions = {1, -1, 1};
    s.eval = [](double, double t, int i, std::complex<double>& z, std::complex<double>& dphi,
                std::complex<double>& dt) {
      z = {double(i), 0.3 * t * i};
      dphi = 0;
      dt = {0, 0.3 * i};
    };
    auto z = z1Braid(s, 3);
    CHECK(maxAbs(z) < 1e-14);
  }

  TEST_CASE("functionals") {
    NumericVector v;
    v.kind = DiagramKind::D0;
    v.maxDegree = 2;
    v.add(crossedChordDiagram(), {0.5, 0}, 1e-3);
    CHECK(evalFunctional(FormalSum(crossedChordDiagram(), Rational(1)), v) == std::complex<double>(0.5, 0));
    CHECK(evalFunctional(FormalSum(crossedChordDiagram(), Rational(-4)), v) == std::complex<double>(-2, 0));
    CHECK(evalError(FormalSum(crossedChordDiagram(), Rational(-4)), v) == doctest::Approx(4e-3));
    auto w = weightSystemBasis(2).front();
    CHECK_THROWS_AS(evalFunctional(w, v), std::invalid_argument);
    auto back = NumericVector::fromJson(v.toJson());
    CHECK(back.coefficient(crossedChordDiagram()).value == v.coefficient(crossedChordDiagram()).value);
  }

  TEST_CASE("agreement of numerical values") {
    CHECK(valuesAgree({1.0, 0}, 1e-9, {1.001, 0}, 1e-9, 0.005));
    CHECK_FALSE(valuesAgree({1.0, 0}, 1e-9, {1.1, 0}, 1e-9, 0.005));
    CHECK(valuesAgree({1e-10, 0}, 1e-9, {-2e-10, 0}, 1e-9, 0.005));
    CHECK_FALSE(valuesAgree({1e-3, 0}, 1e-9, {0, 0}, 1e-9, 0.005));
  }
}
