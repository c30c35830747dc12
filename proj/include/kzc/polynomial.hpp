#pragma once
// Multivariate polynomials over Q in variables z_1..z_n.

#include "kzc/rational.hpp"

#include <map>
#include <string>
#include <vector>

namespace kzc {

class Polynomial {
 public:
  using Exponents = std::vector<int>;

  explicit Polynomial(int nVars = 0) : n_(nVars) {}
  static Polynomial constant(int nVars, const Rational& c);
  /// z_i (1-based).
  static Polynomial variable(int nVars, int i);
  /// z_a - z_b.
  static Polynomial difference(int nVars, int a, int b);

  int nVars() const { return n_; }
  const std::map<Exponents, Rational>& terms() const { return terms_; }
  bool isZero() const { return terms_.empty(); }
  Rational coefficient(const Exponents& e) const;
  int totalDegree() const;

  void addTerm(const Exponents& e, const Rational& c);

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(const Rational& c) const;
  bool operator==(const Polynomial& o) const { return n_ == o.n_ && terms_ == o.terms_; }

  /// Exact quotient by z_a - z_b when it divides; false otherwise.
  bool divideByDifference(int a, int b, Polynomial& quotient) const;

  std::string str() const;

 private:
  int n_;
  std::map<Exponents, Rational> terms_;
};

}  // namespace kzc
