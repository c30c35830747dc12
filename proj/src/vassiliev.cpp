#include "kzc/vassiliev.hpp"

#include "kzc/kzforms.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#ifndef KZC_FIXTURE_DIR_DEFAULT
#define KZC_FIXTURE_DIR_DEFAULT "fixtures"
#endif

namespace kzc {

namespace {

bool connectedThrough(const std::vector<std::pair<int, int>>& edges, int a, int b) {
  std::map<int, std::vector<int>> adj;
  for (const auto& [x, y] : edges) adj[x].push_back(y), adj[y].push_back(x);
  std::set<int> seen{a};
  std::vector<int> stack{a};
  while (!stack.empty()) {
    int x = stack.back();
    stack.pop_back();
    for (int y : adj[x])
      if (seen.insert(y).second) stack.push_back(y);
  }
  return seen.count(b) > 0;
}

bool subspaceEqual(const std::vector<RationalVector>& a, const std::vector<RationalVector>& b, int cols) {
  return rowSpaceEqual(matrixFromVectors(a, cols), matrixFromVectors(b, cols));
}

}  // namespace

std::vector<std::pair<std::vector<std::pair<int, int>>, int>> cycleEdgeRemovals(
    std::vector<std::pair<int, int>> edges) {
  for (auto& e : edges) if (e.first > e.second) std::swap(e.first, e.second);
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
    throw std::invalid_argument("removal: repeated edge");
  std::vector<std::pair<std::vector<std::pair<int, int>>, int>> out;
  for (std::size_t j = 0; j < edges.size(); ++j) {
    std::vector<std::pair<int, int>> rest;
    for (std::size_t k = 0; k < edges.size(); ++k)
      if (k != j) rest.push_back(edges[k]);
    if (connectedThrough(rest, edges[j].first, edges[j].second)) out.emplace_back(rest, j % 2 ? -1 : 1);
  }
  return out;
}

std::vector<Diagram> enumerate4EdgeGraphs() { return enumerateDiagrams(DiagramKind::D2TildeGraph4, 4); }

FormalSum removalBoundary(const Diagram& g) {
  if (g.kind() != DiagramKind::D2TildeGraph4) throw std::invalid_argument("removalBoundary: expected a 4-edge graph");
  const PointGraph& pg = *g.graph4;
  std::vector<std::pair<int, int>> labelled;
  for (const auto& [a, b] : pg.edges) labelled.emplace_back(pg.label(a), pg.label(b));
  std::vector<int> all{1, 2, 3, 4};
  for (int v : all)
    if (!connectedThrough(labelled, 1, v)) throw std::invalid_argument("removalBoundary: disconnected graph");
  FormalSum s;
  for (const auto& [rest, sign] : cycleEdgeRemovals(labelled)) {
    Diagram t;
    t.q = g.q;
    t.chords = g.chords;
    PointGraph tree{pg.points, {}};
    for (const auto& [a, b] : rest) tree.edges.emplace_back(pg.points[a - 1], pg.points[b - 1]);
    std::sort(tree.edges.begin(), tree.edges.end());
    t.tree = tree;
    s.add(t, sign);
  }
  return s;
}

TreeConfigMatrices buildTreeConfigMatrices(SignReading reading) {
  TreeConfigMatrices t;
  t.rows = treeConfigRows();
  t.graphs = enumerate4EdgeGraphs();
  std::map<Diagram, int> rowIndex;
  for (std::size_t i = 0; i < t.rows.size(); ++i) rowIndex[t.rows[i]] = static_cast<int>(i);
  t.m1 = SparseRationalMatrix(16, static_cast<int>(t.graphs.size()));
  for (std::size_t c = 0; c < t.graphs.size(); ++c) {
    FormalSum boundary = removalBoundary(t.graphs[c]);
    for (const auto& [tree, sign] : boundary.terms()) t.m1.add(rowIndex.at(tree), static_cast<int>(c), sign);
  }
  const auto& basis = treeConfigBasis();
  std::map<SlottedDiagram, int> col;
  for (std::size_t i = 0; i < basis.size(); ++i) col[basis[i]] = static_cast<int>(i);
  t.mright = SparseRationalMatrix(16, static_cast<int>(basis.size()));
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const PointGraph& g = *t.rows[r].tree;
    for (const auto& term : treeSplitTerms(t.rows[r])) {
      // Recover the split vertex from the slot of size two.
      int k = static_cast<int>(std::find(term.slotSizes.begin(), term.slotSizes.end(), 2) - term.slotSizes.begin()) + 1;
      int vertexLabel = g.label(k);
      Rational literal = vertexLabel % 2 ? -1 : 1;
      t.mright.add(static_cast<int>(r), col.at(term.slotted()), literal * sigmaSign(term.diagram, reading));
    }
  }
  return t;
}

std::vector<RationalVector> fiveEdgeBoundaries() {
  std::vector<Diagram> graphs = enumerate4EdgeGraphs();
  std::map<std::vector<std::pair<int, int>>, int> col;
  for (std::size_t i = 0; i < graphs.size(); ++i) col[graphs[i].graph4->edges] = static_cast<int>(i);
  std::vector<std::pair<int, int>> k4;
  for (int a = 1; a <= 4; ++a)
    for (int b = a + 1; b <= 4; ++b) k4.emplace_back(a, b);
  std::vector<RationalVector> out;
  for (std::size_t skip = 0; skip < k4.size(); ++skip) {
    std::vector<std::pair<int, int>> e;
    for (std::size_t i = 0; i < k4.size(); ++i)
      if (i != skip) e.push_back(k4[i]);
    RationalVector v(graphs.size());
    for (const auto& [rest, sign] : cycleEdgeRemovals(e)) v[col.at(rest)] += sign;
    out.push_back(v);
  }
  return out;
}

TwoTripleMatrices buildTwoTripleMatrices(std::vector<int> tripleA, std::vector<int> tripleB) {
  std::set<int> all(tripleA.begin(), tripleA.end());
  all.insert(tripleB.begin(), tripleB.end());
  if (tripleA.size() != 3 || tripleB.size() != 3 || all.size() != 6 || *all.begin() != 1 || *all.rbegin() != 6)
    throw std::invalid_argument("two triples must partition positions 1..6");
  std::sort(tripleA.begin(), tripleA.end());
  std::sort(tripleB.begin(), tripleB.end());
  if (tripleB[0] < tripleA[0]) std::swap(tripleA, tripleB);
  TwoTripleMatrices m;
  m.tripleA = tripleA;
  m.tripleB = tripleB;
  auto vee = [](const std::vector<int>& t, int mid) {
    std::vector<int> tips;
    for (int p : t)
      if (p != t[mid]) tips.push_back(p);
    return Vee{t[mid], tips[0], tips[1]};
  };
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Diagram d;
      d.q = 6;
      d.vees = {vee(tripleA, i), vee(tripleB, j)};
      std::sort(d.vees.begin(), d.vees.end());
      m.rows.push_back(d);
    }
  // Columns: V on A with a triangle on B, then triangle on A with V on B.
  for (int side = 0; side < 2; ++side)
    for (int i = 0; i < 3; ++i) {
      Diagram d;
      d.q = 6;
      const auto& vt = side == 0 ? tripleA : tripleB;
      const auto& tt = side == 0 ? tripleB : tripleA;
      d.triangleVee = TriangleVee{tt, vee(vt, i)};
      m.columns.push_back(d);
    }
  std::map<int, int> label;
  for (int i = 0; i < 3; ++i) label[tripleA[i]] = i + 1, label[tripleB[i]] = i + 4;
  std::map<Diagram, int> rowIndex;
  for (std::size_t i = 0; i < m.rows.size(); ++i) rowIndex[m.rows[i]] = static_cast<int>(i);

  m.l = SparseRationalMatrix(9, 6);
  for (std::size_t c = 0; c < m.columns.size(); ++c) {
    const TriangleVee& tv = *m.columns[c].triangleVee;
    std::vector<std::pair<int, int>> edges{{label[tv.triangle[0]], label[tv.triangle[1]]},
                                           {label[tv.triangle[0]], label[tv.triangle[2]]},
                                           {label[tv.triangle[1]], label[tv.triangle[2]]},
                                           {label[tv.vee.mid], label[tv.vee.tipA]},
                                           {label[tv.vee.mid], label[tv.vee.tipB]}};
    for (const auto& [rest, sign] : cycleEdgeRemovals(edges)) {
      // The two remaining triangle edges share the new mid.
      std::map<int, int> deg;
      for (const auto& [a, b] : rest) {
        bool inTriangle = std::count(tv.triangle.begin(), tv.triangle.end(), a > 3 ? tripleB[a - 4] : tripleA[a - 1]) &&
                          std::count(tv.triangle.begin(), tv.triangle.end(), b > 3 ? tripleB[b - 4] : tripleA[b - 1]);
        if (inTriangle) ++deg[a], ++deg[b];
      }
      int midLabel = 0;
      for (const auto& [v, k] : deg)
        if (k == 2) midLabel = v;
      int midPos = midLabel > 3 ? tripleB[midLabel - 4] : tripleA[midLabel - 1];
      std::vector<int> tips;
      for (int p : tv.triangle)
        if (p != midPos) tips.push_back(p);
      Diagram d;
      d.q = 6;
      d.vees = {tv.vee, Vee{midPos, tips[0], tips[1]}};
      std::sort(d.vees.begin(), d.vees.end());
      m.l.add(rowIndex.at(d), static_cast<int>(c), sign);
    }
  }

  std::map<SlottedDiagram, int> col;
  std::vector<std::vector<std::pair<int, Rational>>> rows(9);
  for (std::size_t r = 0; r < m.rows.size(); ++r)
    for (const auto& t : twoVeeSplitTerms(m.rows[r])) {
      auto [it, fresh] = col.try_emplace(t.slotted(), static_cast<int>(m.rightBasis.size()));
      if (fresh) m.rightBasis.push_back(t.slotted());
      rows[r].emplace_back(it->second, t.coefficient);
    }
  m.r = SparseRationalMatrix::fromRows(rows, static_cast<int>(m.rightBasis.size()));
  return m;
}

RationalVector twoTriangleBoundary(const TwoTripleMatrices& m) {
  if (m.columns.size() != 6) throw std::invalid_argument("twoTriangleBoundary: expected six columns");
  // Labels 1..3 on A and 4..6 on B, so the edges below are already sorted.
  std::vector<std::pair<int, int>> edges{{1, 2}, {1, 3}, {2, 3}, {4, 5}, {4, 6}, {5, 6}};
  RationalVector v(6);
  for (const auto& [rest, sign] : cycleEdgeRemovals(edges)) {
    // Exactly one triple lost an edge; it becomes a V whose mid is the
    // vertex meeting both remaining edges of that triple.
    bool onA = std::count_if(rest.begin(), rest.end(), [](const auto& e) { return e.first <= 3; }) == 2;
    std::map<int, int> deg;
    for (const auto& [a, b] : rest)
      if ((a <= 3) == onA) ++deg[a], ++deg[b];
    int mid = 0;
    for (const auto& [x, k] : deg)
      if (k == 2) mid = x;
    int column = onA ? mid - 1 : 3 + (mid - 4);
    v[column] += sign;
  }
  return v;
}

SparseRationalMatrix flipRows(const SparseRationalMatrix& m, const std::vector<int>& rows) {
  SparseRationalMatrix out = m;
  for (int r : rows)
    for (const auto& [c, v] : m.row(r)) out.set(r, c, -v);
  return out;
}

SparseRationalMatrix derivedM2(const TreeConfigMatrices& t, const std::vector<int>& flips) {
  auto x = transposeKernelBasis(t.m1);
  SparseRationalMatrix flipped = flipRows(t.mright, flips);
  std::vector<RationalVector> rows;
  for (const auto& v : x) rows.push_back(leftMultiply(v, flipped));
  return matrixFromVectors(rows, t.mright.cols());
}

std::vector<int> solveEpsilonZeta(const SparseRationalMatrix& curvature, SignReading reading) {
  TreeConfigMatrices t = buildTreeConfigMatrices(reading);
  if (curvature.cols() != t.mright.cols()) throw std::invalid_argument("solveEpsilonZeta: column mismatch");
  auto x = transposeKernelBasis(t.m1);
  const int n = t.mright.rows();
  for (int size = 0; size <= 3; ++size) {
    std::vector<int> idx(size);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
      std::vector<RationalVector> rows;
      SparseRationalMatrix flipped = flipRows(t.mright, idx);
      for (const auto& v : x) rows.push_back(leftMultiply(v, flipped));
      if (rowSpaceEqual(matrixFromVectors(rows, t.mright.cols()), curvature)) return idx;
      int i = size - 1;
      while (i >= 0 && idx[i] == n - size + i) --i;
      if (i < 0) break;
      ++idx[i];
      for (int j = i + 1; j < size; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  throw std::runtime_error("solveEpsilonZeta: no admissible sign flip set of size at most 3");
}

std::vector<RationalVector> leftKernelCircuits(const SparseRationalMatrix& m, int maxSize) {
  const int n = m.rows();
  std::vector<std::vector<int>> supports;
  std::vector<RationalVector> out;
  for (int size = 1; size <= maxSize; ++size) {
    std::vector<int> idx(size);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
      bool containsCircuit = std::any_of(supports.begin(), supports.end(), [&](const std::vector<int>& s) {
        return std::includes(idx.begin(), idx.end(), s.begin(), s.end());
      });
      if (!containsCircuit) {
        std::vector<SparseRow> sub;
        for (int r : idx) sub.push_back(m.row(r));
        SparseRationalMatrix s = SparseRationalMatrix::fromRows(sub, m.cols());
        auto k = transposeKernelBasis(s);
        if (k.size() == 1 && std::none_of(k[0].begin(), k[0].end(), [](const Rational& v) { return isZero(v); })) {
          RationalVector full(n);
          Rational lead = k[0][0];
          for (int i = 0; i < size; ++i) full[idx[i]] = k[0][i] / lead;
          supports.push_back(idx);
          out.push_back(full);
        }
      }
      int i = size - 1;
      while (i >= 0 && idx[i] == n - size + i) --i;
      if (i < 0) break;
      ++idx[i];
      for (int j = i + 1; j < size; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return out;
}

const TreeCalibration& treeCalibration() {
  static const TreeCalibration cal = [] {
    TreeCalibration c;
    TreeConfigMatrices t = buildTreeConfigMatrices();
    c.flips = solveEpsilonZeta(curvatureMatrix(4));
    std::vector<RationalVector> chosen;
    std::size_t target = transposeKernelBasis(t.m1).size();
    for (const auto& circuit : leftKernelCircuits(t.m1, 6)) {
      std::vector<RationalVector> trial = chosen;
      trial.push_back(circuit);
      if (rank(matrixFromVectors(trial, 16)) == trial.size()) chosen = trial;
      if (chosen.size() == target) break;
    }
    for (auto v : chosen) {
      bool touchesStar = false;
      for (int r = 0; r < 4; ++r) touchesStar = touchesStar || !isZero(v[r]);
      for (int f : c.flips) v[f] = -v[f];
      c.combinations.push_back(v);
      c.families.push_back(touchesStar ? Family::TwentyEightT : Family::SixteenT);
    }
    return c;
  }();
  return cal;
}

std::string fixtureDirectory() {
  const char* env = std::getenv("KZC_FIXTURE_DIR");
  return env && *env ? std::string(env) : std::string(KZC_FIXTURE_DIR_DEFAULT);
}

AppendixFixtures loadAppendixFixtures(const std::string& dir) {
  auto load = [&](const std::string& name) {
    std::string path = dir + "/appendixC/" + name;
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open fixture " + path);
    try {
      return nlohmann::json::parse(in);
    } catch (const std::exception& e) {
      throw std::runtime_error("cannot parse fixture " + path + ": " + e.what());
    }
  };
  AppendixFixtures f;
  try {
    f.m1 = matrixFromJson(load("M1.json"));
    f.l = matrixFromJson(load("L.json"));
    f.kernelM1T = matrixFromJson(load("kernelM1T.json"));
    f.kernelLT = matrixFromJson(load("kernelLT.json"));
    f.epsilonZetaColumns = load("epsilonZeta.json").at("columns").get<std::vector<int>>();
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("malformed fixture: ") + e.what());
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("malformed fixture: ") + e.what());
  }
  if (f.m1.rows() != 16 || f.m1.cols() != 15 || f.l.rows() != 9 || f.l.cols() != 6 || f.kernelM1T.cols() != 16 ||
      f.kernelLT.cols() != 9)
    throw std::runtime_error("fixture dimensions do not match the two configurations");
  return f;
}

StructuredMatch matchUpToStructure(const SparseRationalMatrix& printed, const SparseRationalMatrix& computed,
                                   int starRows) {
  if (printed.rows() != computed.rows() || printed.cols() != computed.cols())
    throw std::invalid_argument("matchUpToStructure: dimension mismatch");
  const int R = printed.rows(), C = printed.cols();
  std::vector<std::vector<std::pair<int, int>>> pcol(C), ccol(C);  // (row, sign)
  for (const auto& [r, c, v] : printed.entries()) pcol[c].emplace_back(r, sgn(v));
  for (const auto& [r, c, v] : computed.entries()) ccol[c].emplace_back(r, sgn(v));
  auto isStar = [&](int r) { return r < starRows; };

  StructuredMatch result;
  std::vector<int> rowMap(R, -1), colMap(C, -1), colSign(C, 0);
  std::vector<bool> rowUsed(R, false), colUsed(C, false);
  std::set<std::tuple<std::vector<int>, std::vector<int>, std::vector<int>>> found;

  std::function<void(int)> assignColumn = [&](int c) {
    if (c == C) {
      if (std::find(rowMap.begin(), rowMap.end(), -1) != rowMap.end()) return;
      found.insert({rowMap, colMap, colSign});
      return;
    }
    for (int cc = 0; cc < C; ++cc) {
      if (colUsed[cc] || ccol[cc].size() != pcol[c].size()) continue;
      for (int s : {1, -1}) {
        std::map<int, int> target;  // computed row -> sign
        for (const auto& [r, v] : ccol[cc]) target[r] = v;
        std::vector<std::pair<int, int>> freeRows;
        bool ok = true;
        for (const auto& [r, v] : pcol[c]) {
          if (rowMap[r] >= 0) {
            auto it = target.find(rowMap[r]);
            if (it == target.end() || it->second != s * v) ok = false;
            else target.erase(it);
          } else {
            freeRows.emplace_back(r, v);
          }
        }
        if (!ok) continue;
        std::vector<int> freeTargets;
        for (const auto& [r, v] : target) {
          if (rowUsed[r]) ok = false;
          freeTargets.push_back(r);
        }
        if (!ok || freeTargets.size() != freeRows.size()) continue;
        std::sort(freeTargets.begin(), freeTargets.end());
        do {
          bool fits = true;
          for (std::size_t i = 0; i < freeRows.size() && fits; ++i) {
            int pr = freeRows[i].first, cr = freeTargets[i];
            fits = isStar(pr) == isStar(cr) && target[cr] == s * freeRows[i].second;
          }
          if (!fits) continue;
          for (std::size_t i = 0; i < freeRows.size(); ++i) rowMap[freeRows[i].first] = freeTargets[i], rowUsed[freeTargets[i]] = true;
          colMap[c] = cc, colSign[c] = s, colUsed[cc] = true;
          assignColumn(c + 1);
          colUsed[cc] = false, colMap[c] = -1, colSign[c] = 0;
          for (std::size_t i = 0; i < freeRows.size(); ++i) rowMap[freeRows[i].first] = -1, rowUsed[freeTargets[i]] = false;
        } while (std::next_permutation(freeTargets.begin(), freeTargets.end()));
      }
    }
  };
  assignColumn(0);
  result.count = static_cast<int>(found.size());
  if (!found.empty()) {
    const auto& [rp, cp, cs] = *found.begin();
    result.rowPerm = rp;
    result.colPerm = cp;
    result.colSign = cs;
  }
  for (const auto& [rp, cp, cs] : found) result.allRowPerms.push_back(rp);
  return result;
}

bool AppendixReport::pass() const {
  return rankM1 == 10 && kernelM1 == 5 && kernelM1T == 6 && kernelL == 1 && kernelLT == 4 && kernelM1FromBoundaries &&
         m1Matches > 0 && sixVectorsSpan && lMatchesPrinted && fourVectorsSpan && kernelLIsTwoTriangle &&
         fourByFourAgrees && epsilonZeta.size() == 3 && curvatureAgrees && perturbationDetected;
}

nlohmann::json AppendixReport::toJson() const {
  nlohmann::json j;
  j["ranks"] = {{"rankM1", rankM1},   {"kernelM1", kernelM1}, {"kernelM1T", kernelM1T},
                {"kernelL", kernelL}, {"kernelLT", kernelLT}, {"curvatureRank", curvatureRank}};
  j["kernelM1FromFiveEdgeBoundaries"] = kernelM1FromBoundaries;
  j["m1"] = {{"structuredMatches", m1Matches}, {"rowPerm", rowPerm}, {"colPerm", colPerm}, {"colSign", colSign},
             {"sixVectorsSpanTransposeKernel", sixVectorsSpan}};
  j["twoTriple"] = {{"lMatchesPrinted", lMatchesPrinted},
                    {"fourVectorsSpanTransposeKernel", fourVectorsSpan},
                    {"kernelIsTwoTriangleBoundary", kernelLIsTwoTriangle},
                    {"eliminationMatches4x4T", fourByFourAgrees}};
  j["epsilonZeta"] = {{"flipRows", epsilonZeta},
                      {"curvatureRowSpaceAgrees", curvatureAgrees},
                      {"printedColumnsMapped", printedFlipsMapped},
                      {"printedColumnsAgree", printedFlipsAgree}};
  j["negativeControl"] = {{"perturbedMatches", perturbedMatches}, {"perturbationDetected", perturbationDetected}};
  j["verdict"] = pass() ? "pass" : "fail";
  return j;
}

AppendixReport verifyAppendixC(const AppendixFixtures& fx) {
  AppendixReport rep;
  TreeConfigMatrices t = buildTreeConfigMatrices();
  rep.rankM1 = static_cast<int>(rank(t.m1));
  auto kerM1 = kernelBasis(t.m1);
  auto kerM1T = transposeKernelBasis(t.m1);
  rep.kernelM1 = static_cast<int>(kerM1.size());
  rep.kernelM1T = static_cast<int>(kerM1T.size());
  rep.kernelM1FromBoundaries = subspaceEqual(kerM1, fiveEdgeBoundaries(), 15);

  StructuredMatch match = matchUpToStructure(fx.m1, t.m1, 4);
  rep.m1Matches = match.count;
  rep.rowPerm = match.rowPerm;
  rep.colPerm = match.colPerm;
  rep.colSign = match.colSign;
  if (match.count > 0) {
    std::vector<RationalVector> moved;
    for (const auto& row : fx.kernelM1T.dense()) {
      RationalVector v(16);
      for (int r = 0; r < 16; ++r) v[match.rowPerm[r]] = row[r];
      moved.push_back(v);
    }
    rep.sixVectorsSpan = subspaceEqual(moved, kerM1T, 16);
  }

  TwoTripleMatrices tt = buildTwoTripleMatrices();
  auto kerL = kernelBasis(tt.l);
  auto kerLT = transposeKernelBasis(tt.l);
  rep.kernelL = static_cast<int>(kerL.size());
  rep.kernelLT = static_cast<int>(kerLT.size());
  rep.lMatchesPrinted = tt.l == fx.l;
  rep.fourVectorsSpan = subspaceEqual(fx.kernelLT.dense(), kerLT, 9);
  rep.kernelLIsTwoTriangle = subspaceEqual(kerL, {twoTriangleBoundary(tt)}, 6);

  // Elimination rows against the 4x4T relators, compared as line diagrams.
  SparseRationalMatrix full(9, 6 + tt.r.cols());
  for (const auto& [r, c, v] : tt.l.entries()) full.set(r, c, v);
  for (const auto& [r, c, v] : tt.r.entries()) full.set(r, 6 + c, v);
  LeftElimination elim = eliminateLeft(full, 6);
  std::vector<FormalSum> derived;
  for (const auto& row : elim.rows) {
    FormalSum s;
    for (std::size_t c = 0; c < row.size(); ++c) s.add(tt.rightBasis[c].d, row[c]);
    derived.push_back(s);
  }
  std::vector<FormalSum> direct = relators4x4T(tt.tripleA, tt.tripleB, {}, 6);
  std::map<Diagram, int> idx;
  for (const auto* list : {&derived, &direct})
    for (const auto& s : *list)
      for (const auto& [d, c] : s.terms()) idx.try_emplace(d, static_cast<int>(idx.size()));
  auto toVectors = [&](const std::vector<FormalSum>& list) {
    std::vector<RationalVector> out;
    for (const auto& s : list) {
      RationalVector v(idx.size());
      for (const auto& [d, c] : s.terms()) v[idx.at(d)] = c;
      out.push_back(v);
    }
    return out;
  };
  rep.fourByFourAgrees = elim.rows.size() == 4 &&
                         subspaceEqual(toVectors(derived), toVectors(direct), static_cast<int>(idx.size()));

  SparseRationalMatrix curvature = curvatureMatrix(4);
  rep.curvatureRank = static_cast<int>(rank(curvature));
  rep.epsilonZeta = solveEpsilonZeta(curvature);
  rep.curvatureAgrees = rowSpaceEqual(derivedM2(t, rep.epsilonZeta), curvature);
  for (const auto& rp : match.allRowPerms) {
    std::vector<int> mapped;
    for (int c : fx.epsilonZetaColumns) mapped.push_back(rp.at(c - 1));
    std::sort(mapped.begin(), mapped.end());
    rep.printedFlipsMapped.push_back(mapped);
    rep.printedFlipsAgree.push_back(rowSpaceEqual(derivedM2(t, mapped), curvature));
  }

  // Negative control: one flipped printed entry must break the match.
  SparseRationalMatrix perturbed = fx.m1;
  auto entries = perturbed.entries();
  if (!entries.empty()) {
    const auto& [r, c, v] = entries[entries.size() / 2];
    perturbed.set(r, c, -v);
  }
  rep.perturbedMatches = matchUpToStructure(perturbed, t.m1, 4).count;
  rep.perturbationDetected = rep.perturbedMatches == 0;
  return rep;
}

}  // namespace kzc
