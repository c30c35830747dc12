#pragma once
// Knots shared by the unit tests and the acceptance binary.

#include "kzc/knot.hpp"
#include "kzc/vassiliev.hpp"

#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace support {

inline kzc::MorseKnot fixtureKnot(const std::string& name) {
  return kzc::loadKnot(kzc::fixtureDirectory() + "/knots/" + name + ".json");
}

/// Long (2, n) torus knot for odd n: two strands make n half twists between
/// altitudes 0 and n, a cap on the right closes them, and a small hump sits
/// on the upper ray so that the knot has four critical points.
inline std::vector<kzc::KnotVertex> torusVertices(int n) {
  std::vector<kzc::KnotVertex> v;
  auto twist = [&](double s, int k) {
    // One half twist from x = s at altitude k to x = -s at altitude k + 1.
    v.push_back({0.2 * s, -0.3 * s, k + 0.4});
    v.push_back({-0.2 * s, -0.3 * s, k + 0.6});
    v.push_back({-s, 0, k + 1.0});
  };
  v.push_back({0, 0, -2});
  v.push_back({-1, 0, 0});
  for (int k = 0; k < n; ++k) twist(k % 2 == 0 ? -1 : 1, k);
  v.push_back({2, 0, n + 0.6});
  v.push_back({3, 0, n / 2.0});
  v.push_back({2, 0, -0.6});
  v.push_back({1, 0, 0});
  for (int k = 0; k < n; ++k) twist(k % 2 == 0 ? 1 : -1, k);
  v.push_back({0, 0, n + 1.0});
  v.push_back({0.3, 0.1, n + 2.0});
  v.push_back({1, 0.2, n + 1.3});
  v.push_back({0, 0, n + 3.0});
  return v;
}

inline std::vector<std::array<double, 3>> rawVertices(const kzc::MorseKnot& k) {
  std::vector<std::array<double, 3>> out;
  for (const auto& p : k.vertices()) out.push_back({p.x, p.y, p.t});
  return out;
}

}  // namespace support
