#include "kzc/polynomial.hpp"

#include <numeric>
#include <sstream>
#include <stdexcept>

namespace kzc {

Polynomial Polynomial::constant(int nVars, const Rational& c) {
  Polynomial p(nVars);
  p.addTerm(Exponents(nVars, 0), c);
  return p;
}

Polynomial Polynomial::variable(int nVars, int i) {
  if (i < 1 || i > nVars) throw std::out_of_range("polynomial variable index");
  Exponents e(nVars, 0);
  e[i - 1] = 1;
  Polynomial p(nVars);
  p.addTerm(e, 1);
  return p;
}

Polynomial Polynomial::difference(int nVars, int a, int b) { return variable(nVars, a) - variable(nVars, b); }

Rational Polynomial::coefficient(const Exponents& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Rational(0) : it->second;
}

int Polynomial::totalDegree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, std::accumulate(e.begin(), e.end(), 0));
  return d;
}

void Polynomial::addTerm(const Exponents& e, const Rational& c) {
  if (static_cast<int>(e.size()) != n_) throw std::invalid_argument("exponent length mismatch");
  if (kzc::isZero(c)) return;
  auto [it, fresh] = terms_.try_emplace(e, c);
  if (!fresh) {
    it->second += c;
    if (kzc::isZero(it->second)) terms_.erase(it);
  }
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  if (n_ != o.n_) throw std::invalid_argument("polynomial variable count mismatch");
  Polynomial r = *this;
  for (const auto& [e, c] : o.terms_) r.addTerm(e, c);
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + o * Rational(-1); }

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (n_ != o.n_) throw std::invalid_argument("polynomial variable count mismatch");
  Polynomial r(n_);
  for (const auto& [e1, c1] : terms_)
    for (const auto& [e2, c2] : o.terms_) {
      Exponents e(n_);
      for (int i = 0; i < n_; ++i) e[i] = e1[i] + e2[i];
      r.addTerm(e, c1 * c2);
    }
  return r;
}

Polynomial Polynomial::operator*(const Rational& c) const {
  Polynomial r(n_);
  for (const auto& [e, v] : terms_) r.addTerm(e, v * c);
  return r;
}

bool Polynomial::divideByDifference(int a, int b, Polynomial& quotient) const {
  // Long division in z_a: each term c z_a^k m (k >= 1) is traded for
  // c z_a^(k-1) m (z_a - z_b) plus c z_a^(k-1) z_b m.
  Polynomial rem = *this;
  Polynomial q(n_);
  while (true) {
    const Exponents* top = nullptr;
    for (const auto& [e, c] : rem.terms_)
      if (e[a - 1] > 0 && (!top || e[a - 1] > (*top)[a - 1])) top = &e;
    if (!top) break;
    Exponents e = *top;
    Rational c = rem.terms_.at(e);
    Exponents lower = e;
    --lower[a - 1];
    q.addTerm(lower, c);
    rem.addTerm(e, -c);
    Exponents shifted = lower;
    ++shifted[b - 1];
    rem.addTerm(shifted, c);
  }
  if (!rem.isZero()) return false;
  quotient = q;
  return true;
}

std::string Polynomial::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    os << (first ? "" : " + ") << toString(c);
    for (int i = 0; i < n_; ++i)
      if (e[i]) os << "*z" << i + 1 << (e[i] > 1 ? "^" + std::to_string(e[i]) : "");
    first = false;
  }
  return os.str();
}

}  // namespace kzc
