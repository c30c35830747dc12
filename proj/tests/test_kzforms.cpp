#include "kzc/kzforms.hpp"
#include "kzc/relations.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace kzc;

namespace {

// Determinant by Gaussian elimination with partial pivoting (small integer matrices).
double det(std::vector<std::vector<double>> a) {
  const std::size_t n = a.size();
  double d = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    if (std::abs(a[piv][c]) < 1e-12) return 0;
    if (piv != c) std::swap(a[piv], a[c]), d = -d;
    d *= a[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return d;
}

// Coefficient of dz_1..(omit i)..dz_p in the wedge of (dz_a - dz_b) over the edges.
double minorCoefficient(int p, const std::vector<std::pair<int, int>>& edges, int omit) {
  std::vector<std::vector<double>> m;
  for (const auto& [a, b] : edges) {
    std::vector<double> row;
    for (int j = 1; j <= p; ++j)
      if (j != omit) row.push_back((j == a) - (j == b));
    m.push_back(row);
  }
  return det(m);
}

}  // namespace

TEST_SUITE("kzforms") {
  TEST_CASE("connection and 2-form sizes") {
    CHECK(omegaKZ(2).terms.size() == 1);
    CHECK(omegaKZ(3).terms.size() == 3);
    CHECK(omegaKZ(4).terms.size() == 6);
    CHECK(lambdaKZ(3).terms.size() == 3);
    CHECK(lambdaKZ(4).terms.size() == 12);
    CHECK(omegaKZ(3).formDegree == 1);
    CHECK(lambdaKZ(3).formDegree == 2);
  }

  TEST_CASE("dlog forms square to zero and satisfy Arnold") {
    for (int p = 3; p <= 5; ++p)
      for (int i = 1; i <= p; ++i)
        for (int j = 1; j <= p; ++j)
          for (int k = 1; k <= p; ++k) {
            if (i == j || j == k || i == k) continue;
            auto wij = RationalForm::dlog(p, i, j), wjk = RationalForm::dlog(p, j, k), wki = RationalForm::dlog(p, k, i);
            auto wik = RationalForm::dlog(p, i, k);
            CHECK(wedge(wij, wij).isZero());
            CHECK(wik == wki);
            CHECK((wedge(wij, wjk) + wedge(wjk, wki) + wedge(wki, wij)).isZero());
            CHECK_FALSE(wedge(wij, wjk).isZero());
            // 2T grouping: the small denominator z_i - z_j disappears.
            auto grouped = wedge(wij, wjk - wik);
            CHECK(grouped == wedge(wik, wjk));
            CHECK(grouped.reduced().denominator().count({std::min(i, j), std::max(i, j)}) == 0);
          }
  }

  TEST_CASE("reduction cancels common factors") {
    auto w = RationalForm::dlog(3, 1, 2).timesDifference(1, 2);
    auto r = w.reduced();
    CHECK(r.denominator().empty());
    CHECK(r == RationalForm::constantOneForm(3, {Rational(1), Rational(-1), Rational(0)}));
  }

  TEST_CASE("curvature matrix") {
    auto c = curvatureMatrix();
    CHECK(c.rows() == 16);
    CHECK(c.cols() == 72);
    CHECK(rank(c) == 6);
    CHECK(curvatureCubeRows().nonZeros() == 0);
    auto monos = curvatureMonomials();
    CHECK(monos.size() == 20);
    std::set<std::vector<int>> distinct(monos.begin(), monos.end());
    CHECK(distinct.size() == 20);
    for (const auto& e : monos) CHECK(e[0] + e[1] + e[2] + e[3] == 3);
  }

  TEST_CASE("tree form signs") {
    CHECK(treeFormSign(2, {{1, 2}}) == 1);
    CHECK(treeFormSign(3, {{1, 2}, {2, 3}}) == -1);
    CHECK_THROWS_AS(treeFormSign(3, {{1, 2}, {1, 2}}), std::invalid_argument);
    for (int p = 2; p <= 6; ++p) {
      auto trees = allTrees(p);
      CHECK(trees.size() == static_cast<std::size_t>(std::pow(p, p - 2) + 0.5));
      for (const auto& t : trees) {
        int eps = treeFormSign(p, t);
        for (int i = 1; i <= p; ++i) {
          double expected = (i % 2 == 0 ? 1 : -1) * eps;
          CHECK(minorCoefficient(p, t, i) == doctest::Approx(expected));
        }
      }
    }
  }

  TEST_CASE("strand diagrams close into slotted line diagrams") {
    StrandDiagram s;
    s.p = 3;
    s.levels = {{{1, 2}}, {{2, 3}}};
    auto closed = s.closeUp();
    CHECK(closed.slotSizes == std::vector<int>{1, 2, 1});
    CHECK(closed.d.chords.size() == 2);
    CHECK(s.strandsUsed() == std::vector<int>{1, 2, 3});
  }
}
