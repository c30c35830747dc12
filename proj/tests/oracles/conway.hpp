#pragma once
// Conway polynomial of a long PL knot by skein recursion on its planar
// diagram. The knot is projected to the (x, t) plane, the long ends are
// closed by a wide arc on the left, over/under is read from y, and the
// descending-diagram algorithm drives the recursion
//   C(L+) - C(L-) = z C(L0).
// Written independently of the integrator; it only consumes raw vertices.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

namespace oracle {

using Poly = std::vector<long>;  // coefficients of z^0, z^1, ...

inline void addScaled(Poly& a, const Poly& b, long s, int shift) {
  if (a.size() < b.size() + shift) a.resize(b.size() + shift, 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] += s * b[i];
}

struct Passage {
  int crossing;
  bool over;
};
using Component = std::vector<Passage>;

struct LinkDiagram {
  std::vector<Component> comps;
  std::map<int, int> sign;
};

inline Poly conwayOf(const LinkDiagram& L) {
  // Find the first crossing met from below along the traversal order.
  std::map<int, bool> seen;
  for (std::size_t ci = 0; ci < L.comps.size(); ++ci)
    for (std::size_t pi = 0; pi < L.comps[ci].size(); ++pi) {
      const Passage& p = L.comps[ci][pi];
      if (seen.count(p.crossing)) continue;
      seen[p.crossing] = true;
      if (p.over) continue;
      const int c = p.crossing;
      // Switched diagram.
      LinkDiagram sw = L;
      for (auto& comp : sw.comps)
        for (auto& q : comp)
          if (q.crossing == c) q.over = !q.over;
      sw.sign[c] = -L.sign.at(c);
      // Oriented smoothing.
      LinkDiagram sm;
      sm.sign = L.sign;
      sm.sign.erase(c);
      std::vector<std::pair<std::size_t, std::size_t>> at;
      for (std::size_t a = 0; a < L.comps.size(); ++a)
        for (std::size_t b = 0; b < L.comps[a].size(); ++b)
          if (L.comps[a][b].crossing == c) at.emplace_back(a, b);
      auto rotated = [&](std::size_t comp, std::size_t from) {
        Component out;
        const auto& src = L.comps[comp];
        for (std::size_t k = 1; k < src.size(); ++k) out.push_back(src[(from + k) % src.size()]);
        return out;  // everything after the passage, cyclically, without it
      };
      for (std::size_t a = 0; a < L.comps.size(); ++a)
        if (a != at[0].first && a != at[1].first) sm.comps.push_back(L.comps[a]);
      if (at[0].first == at[1].first) {
        Component r = rotated(at[0].first, at[0].second);
        // r = A..., P2, B...
        std::size_t k = 0;
        while (r[k].crossing != c) ++k;
        sm.comps.emplace_back(r.begin(), r.begin() + static_cast<long>(k));
        sm.comps.emplace_back(r.begin() + static_cast<long>(k) + 1, r.end());
      } else {
        Component a = rotated(at[0].first, at[0].second);
        Component b = rotated(at[1].first, at[1].second);
        a.insert(a.end(), b.begin(), b.end());
        sm.comps.push_back(a);
      }
      Poly result = conwayOf(sw);
      addScaled(result, conwayOf(sm), L.sign.at(c), 1);
      return result;
    }
  return Poly{L.comps.size() == 1 ? 1L : 0L};
}

/// Vertices (x, y, t) of a long knot whose first and last vertices lie on
/// the t axis.
inline Poly conwayPolynomial(const std::vector<std::array<double, 3>>& verts) {
  if (verts.empty()) return Poly{1};
  double tmin = verts[0][2], tmax = tmin, xmax = 0;
  for (const auto& v : verts) {
    tmin = std::min(tmin, v[2]);
    tmax = std::max(tmax, v[2]);
    xmax = std::max(xmax, std::abs(v[0]));
  }
  std::vector<std::array<double, 3>> poly;
  poly.push_back({0, 0, tmin - 1});
  for (const auto& v : verts) poly.push_back(v);
  poly.push_back({0, 0, tmax + 1});
  poly.push_back({-(xmax + 1), 0, tmax + 1});
  poly.push_back({-(xmax + 1), 0, tmin - 1});
  const std::size_t n = poly.size();  // closed: segment i joins i and i+1 mod n

  struct Hit {
    double where;  // segment index + fraction
    int crossing;
    bool over;
  };
  std::vector<Hit> hits;
  std::map<int, int> sign;
  int next = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      const auto &a0 = poly[i], &a1 = poly[(i + 1) % n], &b0 = poly[j], &b1 = poly[(j + 1) % n];
      double dax = a1[0] - a0[0], dat = a1[2] - a0[2], dbx = b1[0] - b0[0], dbt = b1[2] - b0[2];
      double den = dax * dbt - dat * dbx;
      if (std::abs(den) < 1e-14) continue;
      double ex = b0[0] - a0[0], et = b0[2] - a0[2];
      double s = (ex * dbt - et * dbx) / den;
      double u = (ex * dat - et * dax) / den;
      if (s <= 0 || s >= 1 || u <= 0 || u >= 1) continue;
      if (s < 1e-9 || s > 1 - 1e-9 || u < 1e-9 || u > 1 - 1e-9) throw std::runtime_error("non-generic projection");
      double ya = a0[1] + s * (a1[1] - a0[1]), yb = b0[1] + u * (b1[1] - b0[1]);
      if (std::abs(ya - yb) < 1e-12) throw std::runtime_error("projection crossing is a real intersection");
      bool aOver = ya > yb;
      // Positive crossing: cross(over direction, under direction) > 0.
      double cr = aOver ? dax * dbt - dat * dbx : dbx * dat - dbt * dax;
      int c = next++;
      sign[c] = cr > 0 ? 1 : -1;
      hits.push_back({i + s, c, aOver});
      hits.push_back({j + u, c, !aOver});
    }
  std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) { return a.where < b.where; });
  LinkDiagram L;
  L.sign = sign;
  Component comp;
  for (const auto& h : hits) comp.push_back({h.crossing, h.over});
  L.comps.push_back(comp);
  return conwayOf(L);
}

/// Coefficient of z^2: the degree-two Vassiliev invariant.
inline long v2(const std::vector<std::array<double, 3>>& verts) {
  Poly p = conwayPolynomial(verts);
  return p.size() > 2 ? p[2] : 0;
}

}  // namespace oracle
