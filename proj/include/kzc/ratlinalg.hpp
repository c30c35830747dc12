#pragma once
// Sparse exact linear algebra over Q.
//
// Elimination always picks the pivot in the smallest available column, so
// results (echelon forms, kernel bases) are deterministic and comparable
// across runs.

#include "kzc/rational.hpp"

#include <json.hpp>

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

namespace kzc {

/// Sorted (column, value) pairs without zeros.
using SparseRow = std::vector<std::pair<int, Rational>>;

class SparseRationalMatrix {
 public:
  SparseRationalMatrix() = default;
  SparseRationalMatrix(int rows, int cols);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  /// Overwrites a cell; storing zero erases it.
  void set(int r, int c, const Rational& v);
  /// Accumulates into a cell; a cell that cancels to zero is erased.
  void add(int r, int c, const Rational& v);
  Rational get(int r, int c) const;

  std::size_t nonZeros() const { return cells_.size(); }
  /// Entries in row-major order.
  std::vector<std::tuple<int, int, Rational>> entries() const;

  SparseRow row(int r) const;
  std::vector<SparseRow> rowList() const;
  std::vector<int> rowSupport(int r) const;
  std::vector<int> colSupport(int c) const;

  SparseRationalMatrix transpose() const;
  SparseRationalMatrix columnBlock(int first, int count) const;
  std::vector<RationalVector> dense() const;

  static SparseRationalMatrix fromDense(const std::vector<RationalVector>& d, int cols = -1);
  static SparseRationalMatrix fromRows(const std::vector<SparseRow>& rows, int cols);
  static SparseRationalMatrix vstack(const SparseRationalMatrix& a, const SparseRationalMatrix& b);

  bool operator==(const SparseRationalMatrix& o) const;

 private:
  void check(int r, int c) const;
  int rows_ = 0;
  int cols_ = 0;
  std::map<std::pair<int, int>, Rational> cells_;
};

/// Reduced row echelon form of the row space.
struct EchelonForm {
  std::vector<SparseRow> rows;  // leading coefficient 1, fully reduced
  std::vector<int> pivots;      // pivot column of each row, increasing
  int cols = 0;
};

EchelonForm rref(const std::vector<SparseRow>& rows, int cols);
EchelonForm rref(const SparseRationalMatrix& m);

std::size_t rank(const SparseRationalMatrix& m);

/// Basis of {v : M v = 0}. One vector per free column, with a 1 in that
/// column and zeros in the other free columns.
std::vector<RationalVector> kernelBasis(const SparseRationalMatrix& m);
std::vector<RationalVector> transposeKernelBasis(const SparseRationalMatrix& m);

/// Throws std::invalid_argument when column counts differ.
bool rowSpaceEqual(const SparseRationalMatrix& a, const SparseRationalMatrix& b);

/// True when v lies in the row space of m.
bool inRowSpace(const SparseRationalMatrix& m, const RationalVector& v);

struct LeftElimination {
  std::vector<RationalVector> combinations;  // x with x^T * left = 0
  std::vector<RationalVector> rows;          // x^T * right
};

/// Row combinations killing the first `leftWidth` columns.
LeftElimination eliminateLeft(const SparseRationalMatrix& m, int leftWidth);

/// Dense helpers.
RationalVector multiply(const SparseRationalMatrix& m, const RationalVector& v);
RationalVector leftMultiply(const RationalVector& x, const SparseRationalMatrix& m);
SparseRationalMatrix matrixFromVectors(const std::vector<RationalVector>& vs, int cols);

nlohmann::json toJson(const SparseRationalMatrix& m);
SparseRationalMatrix matrixFromJson(const nlohmann::json& j);

}  // namespace kzc
