#include "kzc/series.hpp"

namespace kzc {

int homogeneousDegree(const FormalSum& s) {
  int deg = -1;
  for (const auto& [d, c] : s.terms()) {
    if (deg >= 0 && d.degree() != deg) throw std::invalid_argument("formal sum is not homogeneous");
    deg = d.degree();
  }
  return deg;
}

FormalSum sigma(const FormalSum& s, SignReading reading) {
  FormalSum out;
  for (const auto& [d, c] : s.terms()) out.add(d, c * sigmaSign(d, reading));
  return out;
}

namespace {

void requireKind(const FormalSum& s, DiagramKind k, const char* what) {
  for (const auto& [d, c] : s.terms())
    if (d.kind() != k) throw std::invalid_argument(std::string(what) + ": expected " + kindName(k));
}

}  // namespace

FormalSum concat(const FormalSum& left, const FormalSum& mid, const FormalSum& right) {
  requireKind(left, DiagramKind::D0, "concat left");
  requireKind(mid, DiagramKind::D1, "concat mid");
  requireKind(right, DiagramKind::D0, "concat right");
  FormalSum out;
  for (const auto& [a, ca] : left.terms())
    for (const auto& [b, cb] : mid.terms())
      for (const auto& [c, cc] : right.terms()) out.add(concatDiagrams({a, b, c}), ca * cb * cc);
  return out;
}

FormalSum product(const FormalSum& a, const FormalSum& b) {
  requireKind(a, DiagramKind::D0, "product");
  requireKind(b, DiagramKind::D0, "product");
  FormalSum out;
  for (const auto& [x, cx] : a.terms())
    for (const auto& [y, cy] : b.terms()) out.add(concatDiagrams({x, y}), cx * cy);
  return out;
}

}  // namespace kzc
