#include "kzc/ratlinalg.hpp"

#include <doctest.h>

#include <random>

using namespace kzc;

namespace {

SparseRationalMatrix fromInts(const std::vector<std::vector<long>>& rows) {
  std::vector<RationalVector> d;
  for (const auto& r : rows) {
    RationalVector v;
    for (long x : r) v.emplace_back(x);
    d.push_back(v);
  }
  return SparseRationalMatrix::fromDense(d, rows.empty() ? 0 : static_cast<int>(rows[0].size()));
}

SparseRationalMatrix randomMatrix(std::mt19937& rng, int r, int c, int density) {
  SparseRationalMatrix m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j)
      if (static_cast<int>(rng() % 10) < density) m.set(i, j, makeRational(static_cast<long>(rng() % 7) - 3, 1 + static_cast<long>(rng() % 3)));
  return m;
}

}  // namespace

TEST_SUITE("ratlinalg") {
  TEST_CASE("rationals stay canonical") {
    Rational a = makeRational(6, -4);
    CHECK(a.get_num() == -3);
    CHECK(a.get_den() == 2);
    CHECK(toString(a) == "-3/2");
    CHECK(parseRational("10/4") == Rational(5, 2));
    CHECK(parseRational("-7") == Rational(-7));
  }

  TEST_CASE("identity and rank-one examples") {
    std::vector<std::vector<long>> id(5, std::vector<long>(5, 0));
    for (int i = 0; i < 5; ++i) id[i][i] = 1;
    auto I = fromInts(id);
    CHECK(rank(I) == 5);
    CHECK(kernelBasis(I).empty());

    auto m = fromInts({{1, 2}, {2, 4}});
    CHECK(rank(m) == 1);
    auto k = kernelBasis(m);
    REQUIRE(k.size() == 1);
    // Proportional to (2, -1).
    CHECK(k[0][0] * Rational(-1) == k[0][1] * Rational(2));
  }

  TEST_CASE("rank-nullity and exact kernels on random matrices") {
    std::mt19937 rng(17);
    for (int trial = 0; trial < 40; ++trial) {
      int r = 1 + static_cast<int>(rng() % 8), c = 1 + static_cast<int>(rng() % 9);
      auto m = randomMatrix(rng, r, c, 4);
      CHECK(rank(m) == rank(m.transpose()));
      auto k = kernelBasis(m);
      CHECK(rank(m) + k.size() == static_cast<std::size_t>(c));
      for (const auto& v : k)
        for (const auto& x : multiply(m, v)) CHECK(isZero(x));
      for (const auto& v : transposeKernelBasis(m))
        for (const auto& x : leftMultiply(v, m)) CHECK(isZero(x));
    }
  }

  TEST_CASE("row space comparison") {
    auto a = fromInts({{1, 0, 2}, {0, 1, -1}});
    auto b = fromInts({{0, 3, -3}, {2, 1, 3}});
    CHECK(rowSpaceEqual(a, b));
    auto c = SparseRationalMatrix::vstack(a, fromInts({{0, 0, 1}}));
    CHECK_FALSE(rowSpaceEqual(a, c));
    CHECK_THROWS_AS(rowSpaceEqual(a, fromInts({{1, 2}})), std::invalid_argument);
    CHECK(inRowSpace(a, {Rational(1), Rational(1), Rational(1)}));
    CHECK_FALSE(inRowSpace(a, {Rational(0), Rational(0), Rational(1)}));
  }

  TEST_CASE("left elimination") {
    auto m = fromInts({{1, 5}, {1, 7}});
    auto e = eliminateLeft(m, 1);
    REQUIRE(e.rows.size() == 1);
    // The combination is a multiple of (1, -1); scale the induced row to it.
    Rational s = e.combinations[0][0];
    CHECK(e.combinations[0][1] == -s);
    CHECK(e.rows[0][0] == Rational(-2) * s);
  }

  TEST_CASE("left elimination rows are independent and extend to the full kernel") {
    std::mt19937 rng(29);
    for (int trial = 0; trial < 20; ++trial) {
      auto m = randomMatrix(rng, 7, 9, 5);
      auto e = eliminateLeft(m, 4);
      auto left = m.columnBlock(0, 4);
      CHECK(e.combinations.size() == transposeKernelBasis(left).size());
      if (!e.rows.empty()) {
        auto rows = matrixFromVectors(e.rows, 5);
        auto combos = matrixFromVectors(e.combinations, 7);
        CHECK(rank(combos) == e.combinations.size());
        CHECK(rank(rows) + transposeKernelBasis(m).size() == e.combinations.size());
      }
    }
  }

  TEST_CASE("matrix JSON round trip") {
    auto m = fromInts({{1, 0, -2}, {0, 0, 3}});
    m.set(0, 1, makeRational(1, 3));
    auto j = toJson(m);
    CHECK(j.at("rows") == 2);
    CHECK(matrixFromJson(j) == m);
  }
}
