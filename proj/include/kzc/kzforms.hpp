#pragma once
// Diagram-valued differential forms on p vertical strands: the KZ connection
// Omega_p, the 2-form Lambda_p, their wedge products, and the curvature
// identity that yields the sixteen four-strand equations.

#include "kzc/diagram.hpp"
#include "kzc/polynomial.hpp"
#include "kzc/ratlinalg.hpp"

#include <map>
#include <utility>
#include <vector>

namespace kzc {

/// Exterior form with coefficients N_S / prod (z_a - z_b)^k. The
/// denominator is shared by all coefficients; S runs over increasing index
/// lists of dz_1..dz_p.
class RationalForm {
 public:
  using Subset = std::vector<int>;
  using Denominator = std::map<std::pair<int, int>, int>;  // (a<b) -> exponent

  RationalForm(int p = 0, int degree = 0) : p_(p), degree_(degree) {}

  /// omega_ij = d log(z_i - z_j), symmetric in i, j.
  static RationalForm dlog(int p, int i, int j);
  /// A constant 1-form sum c_i dz_i.
  static RationalForm constantOneForm(int p, const std::vector<Rational>& c);
  /// omega_p = sum_i (-1)^i dz_1 ^ .. (omit i) .. ^ dz_p.
  static RationalForm omegaTop(int p);

  int strands() const { return p_; }
  int degree() const { return degree_; }
  const std::map<Subset, Polynomial>& numerators() const { return num_; }
  const Denominator& denominator() const { return den_; }

  RationalForm operator+(const RationalForm& o) const;
  RationalForm operator-(const RationalForm& o) const;
  RationalForm operator*(const Rational& c) const;
  /// Multiplies by the polynomial z_a - z_b (cancelling a denominator factor first).
  RationalForm timesDifference(int a, int b) const;

  /// Exact zero test after bringing to the common denominator.
  bool isZero() const;
  bool operator==(const RationalForm& o) const { return (*this - o).isZero(); }

  /// Cancels factors (z_a - z_b) that divide every numerator.
  RationalForm reduced() const;

  friend RationalForm wedge(const RationalForm& f, const RationalForm& g);

 private:
  RationalForm withDenominator(const Denominator& target) const;
  int p_;
  int degree_;
  std::map<Subset, Polynomial> num_;
  Denominator den_;
};

RationalForm wedge(const RationalForm& f, const RationalForm& g);

/// Stacked diagram on p strands. Each level is a chord {i,j} or a same-
/// altitude pair {i,j},{j,k} (lexicographically ordered); levels go upward.
struct StrandDiagram {
  int p = 0;
  std::vector<std::vector<std::pair<int, int>>> levels;
  auto operator<=>(const StrandDiagram&) const = default;

  /// Strands touched by some chord.
  std::vector<int> strandsUsed() const;
  /// Close strands 1..p into a line (points on a strand ordered by level);
  /// each strand becomes a slot. Empty strands are skipped.
  SlottedDiagram closeUp() const;
};

/// A sum of (strand diagram, form); prefactor k stands for (2 i pi)^(-k).
struct DiagramValuedForm {
  int p = 0;
  int formDegree = 0;
  int prefactor = 0;
  std::map<StrandDiagram, RationalForm> terms;

  void add(const StrandDiagram& d, const RationalForm& f);
  DiagramValuedForm operator-(const DiagramValuedForm& o) const;
};

DiagramValuedForm omegaKZ(int p);
DiagramValuedForm lambdaKZ(int p);
/// F's levels below G's; forms multiplied with the wedge product.
DiagramValuedForm wedge(const DiagramValuedForm& f, const DiagramValuedForm& g);

/// Omega ^ Lambda - Lambda ^ Omega restricted to terms that touch exactly
/// `strandCount` strands, closed into a line and collected.
std::map<SlottedDiagram, RationalForm> closedCurvature(int p, int strandCount);

/// The 16 x 72 matrix: rows are the degree-3 monomials in z_1..z_4 other
/// than the cubes, columns the tree configuration basis.
SparseRationalMatrix curvatureMatrix(int p = 4);
/// Exponent vectors of the 20 degree-3 monomials in the row order used by
/// curvatureMatrix, with the four cubes last.
std::vector<std::vector<int>> curvatureMonomials();
/// The four cube rows; must vanish identically.
SparseRationalMatrix curvatureCubeRows();

/// Sign eps with wedge of (dz_a - dz_b) over the tree's edges (sorted)
/// equal to eps * omega_p. Throws std::invalid_argument if the edges are
/// not a tree and std::runtime_error if the form is not proportional.
int treeFormSign(int p, const std::vector<std::pair<int, int>>& edges);

/// All labelled trees on p vertices via Pruefer sequences (p >= 2).
std::vector<std::vector<std::pair<int, int>>> allTrees(int p);

}  // namespace kzc
