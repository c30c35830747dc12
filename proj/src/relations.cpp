#include "kzc/relations.hpp"

#include "kzc/vassiliev.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <set>
#include <stdexcept>

namespace kzc {

namespace {

constexpr double kHalfGap = 0.25;

std::vector<int> unitSlots(int q, int split) {
  std::vector<int> s(q, 1);
  s.at(split - 1) = 2;
  return s;
}

std::vector<std::pair<double, double>> rawChords(const Diagram& d) {
  std::vector<std::pair<double, double>> c;
  for (const auto& [a, b] : d.chords) c.emplace_back(a, b);
  return c;
}

int signOf(int exponent) { return exponent % 2 ? -1 : 1; }

}  // namespace

SignedTerm splitTreeVertex(const Diagram& d, int vertex, std::pair<int, int> loneEdge, SplitOrder order) {
  if (d.kind() != DiagramKind::D2Tree) throw std::invalid_argument("splitTreeVertex: expected a tree diagram");
  const PointGraph& t = *d.tree;
  if (vertex < 1 || vertex > 4) throw std::invalid_argument("splitTreeVertex: vertex label out of range");
  auto [la, lb] = std::minmax(loneEdge.first, loneEdge.second);
  if (la != vertex && lb != vertex) throw std::invalid_argument("splitTreeVertex: lone edge not incident to vertex");
  std::vector<std::pair<int, int>> labelled;
  for (const auto& [a, b] : t.edges) labelled.emplace_back(t.label(a), t.label(b));
  if (std::find(labelled.begin(), labelled.end(), std::make_pair(la, lb)) == labelled.end())
    throw std::invalid_argument("splitTreeVertex: lone edge not in tree");
  std::array<int, 5> deg{};
  for (const auto& [a, b] : labelled) ++deg[a], ++deg[b];
  int other = la == vertex ? lb : la;
  if (deg[vertex] < 2) throw std::invalid_argument("splitTreeVertex: vertex of degree one cannot be split");
  if (deg[other] != 1) throw std::invalid_argument("splitTreeVertex: lone edge would not become an ordinary chord");

  double p = t.points[vertex - 1];
  double pLone = order == SplitOrder::LoneBefore ? p - kHalfGap : p + kHalfGap;
  double pRest = order == SplitOrder::LoneBefore ? p + kHalfGap : p - kHalfGap;
  auto pos = [&](int label) { return label == vertex ? pRest : double(t.points[label - 1]); };

  std::map<int, int> restDeg;
  for (const auto& e : labelled) {
    if (e == std::make_pair(la, lb)) continue;
    ++restDeg[e.first], ++restDeg[e.second];
  }
  int mid = 0;
  std::vector<int> tips;
  for (const auto& [v, k] : restDeg) {
    if (k == 2) mid = v;
    else tips.push_back(v);
  }
  if (mid == 0 || tips.size() != 2) throw std::invalid_argument("splitTreeVertex: remaining edges do not form a V");

  RawDiagram r;
  r.chords = rawChords(d);
  std::pair<double, double> lone(double(t.points[other - 1]), pLone);
  r.chords.push_back(lone);
  std::array<double, 3> vee{pos(mid), pos(tips[0]), pos(tips[1])};
  r.vees.push_back(vee);
  int sign = signOf(vertex) * lk({vee[0], vee[1], vee[2]}, lone);
  return {Rational(sign), canonicalize(r), unitSlots(d.q, static_cast<int>(p))};
}

std::vector<SignedTerm> treeSplitTerms(const Diagram& d) {
  if (d.kind() != DiagramKind::D2Tree) throw std::invalid_argument("expandTree: expected a tree diagram");
  const PointGraph& t = *d.tree;
  std::vector<SignedTerm> out;
  for (int k = 1; k <= 4; ++k) {
    for (const auto& [a, b] : t.edges) {
      int la = t.label(a), lb = t.label(b);
      if (la != k && lb != k) continue;
      for (SplitOrder o : {SplitOrder::LoneBefore, SplitOrder::LoneAfter}) {
        try {
          out.push_back(splitTreeVertex(d, k, {la, lb}, o));
        } catch (const std::invalid_argument&) {
          break;  // invalid for both orders
        }
      }
    }
  }
  return out;
}

FormalSum expandTree(const Diagram& d) {
  FormalSum s;
  for (const auto& t : treeSplitTerms(d)) s.add(t.diagram, t.coefficient);
  return s;
}

SlottedSum expandTreeSlotted(const Diagram& d) {
  SlottedSum s;
  for (const auto& t : treeSplitTerms(d)) s.add(t.slotted(), t.coefficient);
  return s;
}

std::vector<std::pair<int, int>> twoTripleLabels(const Diagram& d) {
  if (d.vees.size() != 2) throw std::invalid_argument("expected two V's");
  std::vector<std::vector<int>> triples;
  for (const auto& v : d.vees) {
    std::vector<int> t{v.mid, v.tipA, v.tipB};
    std::sort(t.begin(), t.end());
    triples.push_back(t);
  }
  if (triples[1][0] < triples[0][0]) std::swap(triples[0], triples[1]);
  std::vector<std::pair<int, int>> labels;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j) labels.emplace_back(triples[i][j], 3 * i + j + 1);
  return labels;
}

std::vector<SignedTerm> twoVeeSplitTerms(const Diagram& d) {
  if (d.kind() != DiagramKind::D2TwoVee) throw std::invalid_argument("expandTwoVee: expected two V's");
  auto labels = twoTripleLabels(d);
  auto labelOf = [&](int pos) {
    for (const auto& [p, l] : labels)
      if (p == pos) return l;
    throw std::logic_error("unlabelled position");
  };
  std::vector<SignedTerm> out;
  for (int which = 0; which < 2; ++which) {
    const Vee& v = d.vees[which];
    const Vee& keep = d.vees[1 - which];
    for (int flip = 0; flip < 2; ++flip) {
      double lo = v.mid - kHalfGap, hi = v.mid + kHalfGap;
      std::pair<double, double> c1(v.tipA, flip ? hi : lo), c2(v.tipB, flip ? lo : hi);
      RawDiagram r;
      r.chords = rawChords(d);
      r.chords.push_back(c1);
      r.chords.push_back(c2);
      r.vees.push_back({double(keep.mid), double(keep.tipA), double(keep.tipB)});
      int sign = signOf(labelOf(v.mid)) * lk({c1.first, c1.second}, c2);
      out.push_back({Rational(sign), canonicalize(r), unitSlots(d.q, v.mid)});
    }
  }
  return out;
}

FormalSum expandTwoVee(const Diagram& d) {
  FormalSum s;
  for (const auto& t : twoVeeSplitTerms(d)) s.add(t.diagram, t.coefficient);
  return s;
}

SlottedSum expandTwoVeeSlotted(const Diagram& d) {
  SlottedSum s;
  for (const auto& t : twoVeeSplitTerms(d)) s.add(t.slotted(), t.coefficient);
  return s;
}

FormalSum compactOneVee(const Diagram& d) {
  if (d.kind() != DiagramKind::D1) throw std::invalid_argument("compactOneVee: expected a V-diagram");
  const Vee& v = d.vees.front();
  std::vector<int> triple{v.mid, v.tipA, v.tipB};
  std::sort(triple.begin(), triple.end());
  int label = static_cast<int>(std::find(triple.begin(), triple.end(), v.mid) - triple.begin()) + 1;
  FormalSum s;
  for (int flip = 0; flip < 2; ++flip) {
    double lo = v.mid - kHalfGap, hi = v.mid + kHalfGap;
    std::pair<double, double> c1(v.tipA, flip ? hi : lo), c2(v.tipB, flip ? lo : hi);
    RawDiagram r;
    r.chords = rawChords(d);
    r.chords.push_back(c1);
    r.chords.push_back(c2);
    s.add(canonicalize(r), Rational(signOf(label) * lk({c1.first, c1.second}, c2)));
  }
  return s;
}

std::vector<Diagram> treeConfigRows() {
  std::vector<Diagram> rows;
  for (const auto& edges : spanningTrees4()) {
    Diagram d;
    d.q = 4;
    d.tree = PointGraph{{1, 2, 3, 4}, edges};
    rows.push_back(d);
  }
  return rows;
}

const std::vector<SlottedDiagram>& treeConfigBasis() {
  static const std::vector<SlottedDiagram> basis = [] {
    std::vector<SlottedDiagram> b;
    std::set<SlottedDiagram> seen;
    for (const auto& row : treeConfigRows())
      for (const auto& t : treeSplitTerms(row))
        if (seen.insert(t.slotted()).second) b.push_back(t.slotted());
    return b;
  }();
  return basis;
}

std::string familyName(Family f) {
  switch (f) {
    case Family::OneT: return "1T";
    case Family::TwoT: return "2T";
    case Family::FourT: return "4T";
    case Family::SixteenT: return "16T";
    case Family::TwentyEightT: return "28T";
    case Family::FourByFourT: return "4x4T";
  }
  throw std::logic_error("unknown family");
}

Family familyFromName(const std::string& s) {
  for (Family f : {Family::OneT, Family::TwoT, Family::FourT, Family::SixteenT, Family::TwentyEightT,
                   Family::FourByFourT})
    if (familyName(f) == s) return f;
  throw std::invalid_argument("unknown relation family: " + s);
}

SparseRationalMatrix RelatorSet::matrix() const {
  std::map<Diagram, int> index;
  for (std::size_t i = 0; i < basis.size(); ++i) index[basis[i]] = static_cast<int>(i);
  SparseRationalMatrix m(static_cast<int>(relators.size()), static_cast<int>(basis.size()));
  for (std::size_t r = 0; r < relators.size(); ++r)
    for (const auto& [d, c] : relators[r].terms()) m.add(static_cast<int>(r), index.at(d), c);
  return m;
}

nlohmann::json RelatorSet::toJson() const {
  nlohmann::json j;
  j["degree"] = degree;
  j["family"] = familyName(family);
  j["basis"] = nlohmann::json::array();
  for (const auto& d : basis) j["basis"].push_back(kzc::toJson(d));
  j["rows"] = nlohmann::json::array();
  SparseRationalMatrix m = matrix();
  for (const auto& row : m.rowList()) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& [c, v] : row) r.push_back({c, toString(v)});
    j["rows"].push_back(r);
  }
  j["rawTermCounts"] = rawTermCounts;
  return j;
}

namespace {

// Calls f(chosen, rest) for every k-subset of {1..q}.
template <class F>
void subsetsOf(int q, int k, F f) {
  for (int mask = 0; mask < (1 << q); ++mask) {
    if (__builtin_popcount(mask) != k) continue;
    std::vector<int> chosen, rest;
    for (int i = 0; i < q; ++i) (mask >> i & 1 ? chosen : rest).push_back(i + 1);
    f(chosen, rest);
  }
}

// Keeps the first of each relator up to sign.
struct RelatorCollector {
  std::set<FormalSum::Terms> seen;
  std::vector<FormalSum> relators;
  std::vector<int> counts;
  void add(const FormalSum& r, int rawCount) {
    if (r.empty()) return;
    FormalSum neg = r * Rational(-1);
    if (seen.count(r.terms()) || seen.count(neg.terms())) return;
    seen.insert(r.terms());
    relators.push_back(r);
    counts.push_back(rawCount);
  }
};

void checkDegree(int m) {
  if (m < 1 || m > 4) throw std::invalid_argument("relations: degree must be between 1 and 4");
}

}  // namespace

std::vector<FormalSum> relators4x4T(const std::vector<int>& tripleA, const std::vector<int>& tripleB,
                                    const std::vector<std::pair<int, int>>& ambient, int q,
                                    std::vector<int>* rawTermCounts) {
  std::set<int> used;
  for (int p : tripleA) used.insert(p);
  for (int p : tripleB) used.insert(p);
  for (const auto& [a, b] : ambient) used.insert(a), used.insert(b);
  if (tripleA.size() != 3 || tripleB.size() != 3 || used.size() != 6 + 2 * ambient.size())
    throw std::invalid_argument("relators4x4T: overlapping triples");
  std::vector<int> a(tripleA), b(tripleB);
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (b[0] < a[0]) std::swap(a, b);
  auto vee = [](const std::vector<int>& t, int mid) {
    std::vector<int> tips;
    for (int p : t)
      if (p != t[mid]) tips.push_back(p);
    return Vee{t[mid], tips[0], tips[1]};
  };
  // The two usual 4T relators on a triple, as coefficients of the mids.
  const int couples[2][3] = {{1, 1, 0}, {0, 1, 1}};
  std::vector<FormalSum> out;
  for (const auto& ca : couples)
    for (const auto& cb : couples) {
      FormalSum rel;
      int raw = 0;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          if (!ca[i] || !cb[j]) continue;
          Diagram d;
          d.q = q;
          d.chords = ambient;
          std::sort(d.chords.begin(), d.chords.end());
          d.vees = {vee(a, i), vee(b, j)};
          std::sort(d.vees.begin(), d.vees.end());
          for (const auto& t : twoVeeSplitTerms(d)) {
            rel.add(t.diagram, t.coefficient * ca[i] * cb[j]);
            ++raw;
          }
        }
      out.push_back(rel);
      if (rawTermCounts) rawTermCounts->push_back(raw);
    }
  return out;
}

std::vector<FormalSum> relators16T28T(const std::vector<int>& points,
                                      const std::vector<std::pair<int, int>>& ambient, int q,
                                      std::vector<int>* rawTermCounts) {
  if (points.size() != 4) throw std::invalid_argument("relators16T28T: need four points");
  std::vector<int> pts(points);
  std::sort(pts.begin(), pts.end());
  const TreeCalibration& cal = treeCalibration();
  auto trees = spanningTrees4();
  std::vector<FormalSum> out;
  for (const auto& combo : cal.combinations) {
    FormalSum rel;
    int raw = 0;
    for (std::size_t r = 0; r < trees.size(); ++r) {
      if (isZero(combo[r])) continue;
      Diagram d;
      d.q = q;
      d.chords = ambient;
      std::sort(d.chords.begin(), d.chords.end());
      PointGraph g{pts, {}};
      for (const auto& [x, y] : trees[r]) g.edges.emplace_back(pts[x - 1], pts[y - 1]);
      std::sort(g.edges.begin(), g.edges.end());
      d.tree = g;
      for (const auto& t : treeSplitTerms(d)) {
        rel.add(t.diagram, t.coefficient * combo[r]);
        ++raw;
      }
    }
    out.push_back(rel);
    if (rawTermCounts) rawTermCounts->push_back(raw);
  }
  return out;
}

RelatorSet relatorSet(Family family, int m) {
  checkDegree(m);
  RelatorSet rs;
  rs.degree = m;
  rs.family = family;
  RelatorCollector col;
  if (family == Family::FourT) {
    rs.basis = enumerateDiagrams(DiagramKind::D0, m);
    if (m >= 2) {
      int q = 2 * m - 1;
      subsetsOf(q, 3, [&](const std::vector<int>& t, const std::vector<int>& rest) {
        for (const auto& amb : perfectMatchings(rest)) {
          auto g = [&](int mid) {
            Diagram d;
            d.q = q;
            d.chords = amb;
            std::vector<int> tips;
            for (int p : t)
              if (p != t[mid]) tips.push_back(p);
            d.vees = {Vee{t[mid], tips[0], tips[1]}};
            return compactOneVee(d);
          };
          col.add(g(0) + g(1), 4);
          col.add(g(1) + g(2), 4);
        }
      });
    }
  } else {
    rs.basis = enumerateDiagrams(DiagramKind::D1, m);
    int q = 2 * m - 1;
    switch (family) {
      case Family::OneT:
        for (const auto& d : rs.basis)
          if (hasIsolatedChord(d)) col.add(FormalSum(d, 1), 1);
        break;
      case Family::TwoT:
        for (const auto& d : rs.basis) {
          const Vee& v = d.vees.front();
          for (auto [tip, other] : {std::pair{v.tipA, v.tipB}, std::pair{v.tipB, v.tipA}}) {
            if (std::abs(tip - v.mid) != 1) continue;
            Diagram e = d;
            e.vees = {Vee{tip, std::min(v.mid, other), std::max(v.mid, other)}};
            FormalSum r(d, 1);
            r.add(e, 1);
            col.add(r, 2);
          }
        }
        break;
      case Family::SixteenT:
      case Family::TwentyEightT:
        if (m >= 3) {
          subsetsOf(q - 1, 4, [&](const std::vector<int>& four, const std::vector<int>& rest) {
            for (const auto& amb : perfectMatchings(rest)) {
              std::vector<int> counts;
              auto rels = relators16T28T(four, amb, q - 1, &counts);
              const auto& fam = treeCalibration().families;
              for (std::size_t i = 0; i < rels.size(); ++i)
                if (fam[i] == family) col.add(rels[i], counts[i]);
            }
          });
        }
        break;
      case Family::FourByFourT:
        if (m >= 4) {
          int qq = 2 * m - 2;
          subsetsOf(qq, 6, [&](const std::vector<int>& six, const std::vector<int>& rest) {
            subsetsOf(6, 3, [&](const std::vector<int>& ia, const std::vector<int>& ib) {
              if (ia[0] != 1) return;
              std::vector<int> a, b;
              for (int i : ia) a.push_back(six[i - 1]);
              for (int i : ib) b.push_back(six[i - 1]);
              for (const auto& amb : perfectMatchings(rest)) {
                std::vector<int> counts;
                auto rels = relators4x4T(a, b, amb, qq, &counts);
                for (std::size_t i = 0; i < rels.size(); ++i) col.add(rels[i], counts[i]);
              }
            });
          });
        }
        break;
      default: break;
    }
  }
  rs.relators = std::move(col.relators);
  rs.rawTermCounts = std::move(col.counts);
  return rs;
}

RelationMatrix relationMatrix(int m) {
  checkDegree(m);
  RelationMatrix out;
  out.basis = enumerateDiagrams(DiagramKind::D1, m);
  std::vector<SparseRow> rows;
  for (Family f : {Family::OneT, Family::TwoT, Family::SixteenT, Family::TwentyEightT, Family::FourByFourT}) {
    RelatorSet rs = relatorSet(f, m);
    auto mat = rs.matrix();
    auto list = mat.rowList();
    for (std::size_t i = 0; i < list.size(); ++i) {
      rows.push_back(list[i]);
      out.rowNames.push_back(familyName(f) + "#" + std::to_string(i));
    }
  }
  out.matrix = SparseRationalMatrix::fromRows(rows, static_cast<int>(out.basis.size()));
  return out;
}

WeightCheck isWeightSystem(const FormalSum& w, int m) {
  RelationMatrix rm = relationMatrix(m);
  std::map<Diagram, int> index;
  for (std::size_t i = 0; i < rm.basis.size(); ++i) index[rm.basis[i]] = static_cast<int>(i);
  RationalVector v(rm.basis.size());
  for (const auto& [d, c] : w.terms()) {
    auto it = index.find(d);
    if (it == index.end()) throw std::invalid_argument("isWeightSystem: diagram outside the degree-m basis");
    v[it->second] = c;
  }
  RationalVector image = multiply(rm.matrix, v);
  for (std::size_t r = 0; r < image.size(); ++r)
    if (!isZero(image[r])) return {false, rm.rowNames[r]};
  return {true, ""};
}

std::vector<FormalSum> weightSystemBasis(int m) {
  RelationMatrix rm = relationMatrix(m);
  std::vector<FormalSum> out;
  for (const auto& v : kernelBasis(rm.matrix)) {
    FormalSum w;
    for (std::size_t i = 0; i < v.size(); ++i) w.add(rm.basis[i], v[i]);
    out.push_back(w);
  }
  return out;
}

}  // namespace kzc
