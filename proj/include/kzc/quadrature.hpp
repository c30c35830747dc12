#pragma once
// Gauss-Legendre rules and adaptive composite integration of vector-valued
// functions of one real variable.

#include <json.hpp>

#include <complex>
#include <functional>
#include <vector>

namespace kzc {

struct QuadratureConfig {
  int order = 10;      // Gauss-Legendre points per cell
  int maxRefine = 14;  // maximal dyadic depth per initial cell
  double tol = 1e-9;   // requested error per unit length, relative to the integral of |f|
  double absTol = 1e-12;  // absolute floor on the same budget (roundoff on vanishing integrals)

  nlohmann::json toJson() const;
  static QuadratureConfig fromJson(const nlohmann::json& j);
};

struct GaussRule {
  std::vector<double> nodes;    // in [-1, 1], increasing
  std::vector<double> weights;
};

/// The n-point rule (cached; n between 1 and 200).
const GaussRule& gaussLegendre(int n);

struct QuadratureResult {
  std::vector<std::complex<double>> value;
  std::vector<double> error;  // per component
  long evaluations = 0;
  bool converged = true;
};

/// f(x, acc) adds the integrand at x into acc (acc has `dim` entries).
using VectorIntegrand = std::function<void(double, std::vector<std::complex<double>>&)>;

/// Integral over [a, b] split first at the given breakpoints, then refined
/// by bisection until the whole-versus-halves difference of every cell is
/// small. The error estimate is the sum of those differences. Cells are
/// visited in increasing order so results are reproducible.
QuadratureResult integrateAdaptive(const VectorIntegrand& f, int dim, double a, double b,
                                   const std::vector<double>& breakpoints, const QuadratureConfig& cfg);

}  // namespace kzc
