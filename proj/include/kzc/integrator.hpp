#pragma once
// Numerical evaluation of the Kontsevich integral in low degree, of the
// 1-cocycle integral Z^1 on paths of Morse knots (general formula and the
// braid-slab formula), of the rotation loop, and of the hump corrections.

#include "kzc/diagram.hpp"
#include "kzc/knot.hpp"
#include "kzc/quadrature.hpp"
#include "kzc/series.hpp"

#include <json.hpp>

#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace kzc {

/// Diagrams of one kind and degree modulo the local 1T relation and (for
/// V-diagrams) the 2T relation. Every diagram is either killed or equal to
/// +-1 times the least diagram of its class.
class ReducedClasses {
 public:
  ReducedClasses(DiagramKind kind, int degree);

  DiagramKind kind() const { return kind_; }
  int degree() const { return degree_; }
  const std::vector<Diagram>& basis() const { return basis_; }
  const std::vector<Diagram>& representatives() const { return reps_; }
  int classCount() const { return static_cast<int>(reps_.size()); }

  /// (class index, sign) of a diagram; class index -1 when killed.
  std::pair<int, int> classOf(const Diagram& d) const;
  /// Same for a diagram given by the knot-order ranks of its points: for
  /// V-diagrams (mid, tipA, tipB, chord ends...), for chord diagrams the
  /// chord ends in pairs. Ranks are 1-based.
  std::pair<int, int> classOfRanks(const std::vector<int>& structureRanks) const;

  /// Shared instance per (kind, degree), built on first use.
  static const ReducedClasses& get(DiagramKind kind, int degree);

 private:
  DiagramKind kind_;
  int degree_;
  std::vector<Diagram> basis_;
  std::vector<Diagram> reps_;
  std::map<Diagram, std::pair<int, int>> lookup_;
  std::vector<std::pair<int, int>> byKey_;
};

struct NumericTerm {
  std::complex<double> value;
  double error = 0;
};

/// Complex coefficients on canonical diagrams, with quadrature error
/// estimates. For V-diagrams the keys are class representatives.
struct NumericVector {
  DiagramKind kind = DiagramKind::D0;
  int maxDegree = 0;
  std::map<Diagram, NumericTerm> terms;

  void add(const Diagram& d, std::complex<double> v, double err);
  NumericTerm coefficient(const Diagram& d) const;
  NumericVector operator+(const NumericVector& o) const;
  NumericVector scaled(double s) const;
  nlohmann::json toJson() const;
  static NumericVector fromJson(const nlohmann::json& j);
};

/// Degree-by-degree Kontsevich integral (degrees 0..maxDeg, maxDeg <= 2)
/// modulo 1T. Throws std::invalid_argument for maxDeg out of range and
/// std::runtime_error on quadrature failure.
NumericVector kontsevichZ(const MorseKnot& k, int maxDeg, const QuadratureConfig& q = {});

/// The degree-2 coefficient of the crossed chord diagram (1,3)(2,4).
Diagram crossedChordDiagram();

struct Z1Options {
  /// Restricts every level to this altitude window when set.
  std::optional<std::pair<double, double>> window;
  /// A degree-2 V-diagram. When set, only the configurations that close up
  /// to exactly this diagram are integrated (maxDeg must be 2), so the 2T
  /// partners are not merged and no cancellation happens between them.
  std::optional<Diagram> single;
};

/// Z^1 on a path, degrees 2..maxDeg (maxDeg in {2, 3}).
NumericVector z1(const KnotPath& path, int maxDeg, const QuadratureConfig& q = {}, const Z1Options& opt = {});

/// A braid on p strands over [phiMin, phiMax] x [tMin, tMax]. Strands are
/// listed in the order they are met along the knot; each carries the
/// direction of its branch (+1 up, -1 down).
struct BraidSlab {
  int strands = 0;
  double phiMin = 0, phiMax = 0, tMin = 0, tMax = 0;
  std::vector<int> directions;
  /// Altitudes inside (tMin, tMax) where the strands have corners.
  std::vector<double> tBreakpoints;
  /// (phi, t, strand) -> position, d/dphi, d/dt.
  std::function<void(double, double, int, std::complex<double>&, std::complex<double>&, std::complex<double>&)> eval;
};

/// The part of a path between two altitudes with no critical points in
/// between. Throws std::invalid_argument if a critical altitude of some knot
/// of the path falls inside the window.
BraidSlab braidSlab(const KnotPath& path, double tMin, double tMax);

/// Braid formula with Omega_p and Lambda_p, tensor Gauss-Legendre on
/// phi x {t_1 < t_2}; errors from comparing order n with order 2n.
NumericVector z1Braid(const BraidSlab& slab, int maxDeg, const QuadratureConfig& q = {});

/// Rotation of a knot once around its axis.
KnotPath gramain(const MorseKnot& k);

/// Z^1 of the rotation loop computed with the phi integral done first and
/// the integrals in the opposite altitude order from z1().
NumericVector reducedGramainOracle(const MorseKnot& k, int maxDeg, const QuadratureConfig& q = {});

/// Z(K) Z(hump)^(-c/2) for a knot with c critical points (c even).
NumericVector zHat(const MorseKnot& k, const MorseKnot& hump, int maxDeg, const QuadratureConfig& q = {});
/// Z(hump)^(-c/2) Z^1(path), c read from the path's knots; D1 terms reduced
/// modulo 1T and 2T.
NumericVector zHat1(const KnotPath& path, const MorseKnot& hump, int maxDeg, const QuadratureConfig& q = {});

/// Sum over diagrams of w(D) v(D). Throws std::invalid_argument when w has
/// terms of another kind.
std::complex<double> evalFunctional(const FormalSum& w, const NumericVector& v);
/// Quadrature error bound for evalFunctional: sum of |w(D)| err(D).
double evalError(const FormalSum& w, const NumericVector& v);

/// Relative agreement of two numerical values. Two values that are both
/// below ten times their own error estimates count as agreeing (both zero).
bool valuesAgree(std::complex<double> a, double errA, std::complex<double> b, double errB, double relTol);

struct FunctionalComparison {
  int degree = 0;
  int index = 0;  // position in weightSystemBasis(degree)
  std::complex<double> first, second;
  double firstError = 0, secondError = 0;
  bool agree = false;
};

/// Every weight-system basis functional of degrees 2 and 3 evaluated on
/// z1 of the rotation loop and on the rotation oracle.
std::vector<FunctionalComparison> gramainConsistency(const MorseKnot& k, double relTol, const QuadratureConfig& q = {});

/// Weight-system basis functionals of degrees 2..maxDeg evaluated on two
/// vectors.
std::vector<FunctionalComparison> compareOnWeightSystems(const NumericVector& a, const NumericVector& b, int maxDeg,
                                                         double relTol);

nlohmann::json toJson(const FunctionalComparison& c);

}  // namespace kzc
