#pragma once
// Linear combinations of diagrams and graded truncated series.

#include "kzc/diagram.hpp"
#include "kzc/rational.hpp"

#include <complex>
#include <map>
#include <stdexcept>
#include <vector>

namespace kzc {

template <class C>
bool coefficientIsZero(const C& c) {
  return c == C(0);
}
template <>
inline bool coefficientIsZero<Rational>(const Rational& c) {
  return isZero(c);
}

/// Finite sum of keys with coefficients; zero coefficients are never stored.
template <class Key, class Coeff>
class LinearCombination {
 public:
  using Terms = std::map<Key, Coeff>;

  LinearCombination() = default;
  LinearCombination(const Key& k, const Coeff& c) { add(k, c); }

  void add(const Key& k, const Coeff& c) {
    if (coefficientIsZero(c)) return;
    auto [it, fresh] = terms_.try_emplace(k, c);
    if (!fresh) {
      it->second += c;
      if (coefficientIsZero(it->second)) terms_.erase(it);
    }
  }
  void add(const LinearCombination& o, const Coeff& scale = Coeff(1)) {
    for (const auto& [k, c] : o.terms_) add(k, scale * c);
  }
  Coeff coefficient(const Key& k) const {
    auto it = terms_.find(k);
    return it == terms_.end() ? Coeff(0) : it->second;
  }

  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  LinearCombination operator+(const LinearCombination& o) const {
    LinearCombination r = *this;
    r.add(o);
    return r;
  }
  LinearCombination operator-(const LinearCombination& o) const {
    LinearCombination r = *this;
    r.add(o, Coeff(-1));
    return r;
  }
  LinearCombination operator*(const Coeff& s) const {
    LinearCombination r;
    r.add(*this, s);
    return r;
  }
  bool operator==(const LinearCombination& o) const { return terms_ == o.terms_; }

 private:
  Terms terms_;
};

using FormalSum = LinearCombination<Diagram, Rational>;

/// Degree of every term; throws if the sum mixes degrees.
int homogeneousDegree(const FormalSum& s);

/// sigma extended linearly: each V-diagram D goes to S(D) D.
FormalSum sigma(const FormalSum& s, SignReading reading = SignReading::Count);

/// Left, middle and right parts placed side by side (bilinear).
/// Throws std::invalid_argument unless left, right are chord diagrams and mid
/// is a V-diagram sum.
FormalSum concat(const FormalSum& left, const FormalSum& mid, const FormalSum& right);
/// Product of chord-diagram sums.
FormalSum product(const FormalSum& a, const FormalSum& b);

/// Graded series truncated at degree maxDegree. Component k holds the
/// degree-k part; the degree-0 part is a multiple of the empty diagram.
template <class Coeff>
class Series {
 public:
  using Component = LinearCombination<Diagram, Coeff>;

  explicit Series(int maxDegree = 0) : comps_(maxDegree + 1) {}

  static Series one(int maxDegree) {
    Series s(maxDegree);
    s.comps_[0].add(Diagram{}, Coeff(1));
    return s;
  }

  int maxDegree() const { return static_cast<int>(comps_.size()) - 1; }
  const Component& operator[](int k) const { return comps_.at(k); }

  /// Adds c*d to the component of d's degree (dropped beyond truncation).
  void add(const Diagram& d, const Coeff& c) {
    if (d.degree() <= maxDegree()) comps_[d.degree()].add(d, c);
  }
  Coeff constant() const { return comps_[0].coefficient(Diagram{}); }

  bool operator==(const Series& o) const { return comps_ == o.comps_; }

 private:
  std::vector<Component> comps_;
};

template <class Coeff>
Series<Coeff> seriesMul(const Series<Coeff>& a, const Series<Coeff>& b, int n) {
  Series<Coeff> out(n);
  for (int i = 0; i <= std::min(n, a.maxDegree()); ++i)
    for (int j = 0; i + j <= n && j <= b.maxDegree(); ++j)
      for (const auto& [da, ca] : a[i].terms())
        for (const auto& [db, cb] : b[j].terms()) out.add(concatDiagrams({da, db}), ca * cb);
  return out;
}

/// Inverse up to degree n; throws std::domain_error when the constant
/// term vanishes.
template <class Coeff>
Series<Coeff> seriesInv(const Series<Coeff>& a, int n) {
  Coeff c0 = a.constant();
  if (coefficientIsZero(c0)) throw std::domain_error("series inverse: zero constant term");
  // x = c0^{-1} sum_k (-u)^k with u = c0^{-1} (a - c0).
  Series<Coeff> u(n);
  for (int k = 1; k <= std::min(n, a.maxDegree()); ++k)
    for (const auto& [d, c] : a[k].terms()) u.add(d, -c / c0);
  Series<Coeff> result = Series<Coeff>::one(n);
  Series<Coeff> power = Series<Coeff>::one(n);
  for (int k = 1; k <= n; ++k) {
    power = seriesMul(power, u, n);
    for (int deg = 0; deg <= n; ++deg)
      for (const auto& [d, c] : power[deg].terms()) result.add(d, c);
  }
  Series<Coeff> scaled(n);
  for (int deg = 0; deg <= n; ++deg)
    for (const auto& [d, c] : result[deg].terms()) scaled.add(d, c / c0);
  return scaled;
}

/// a^e for a non-negative integer e, truncated at degree n.
template <class Coeff>
Series<Coeff> seriesPow(const Series<Coeff>& a, int e, int n) {
  if (e < 0) return seriesPow(seriesInv(a, n), -e, n);
  Series<Coeff> r = Series<Coeff>::one(n);
  for (int i = 0; i < e; ++i) r = seriesMul(r, a, n);
  return r;
}

}  // namespace kzc
