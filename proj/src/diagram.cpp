#include "kzc/diagram.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace kzc {

std::string kindName(DiagramKind k) {
  switch (k) {
    case DiagramKind::D0: return "D0";
    case DiagramKind::D1: return "D1";
    case DiagramKind::D2TwoVee: return "D2-twoVee";
    case DiagramKind::D2Tree: return "D2-tree";
    case DiagramKind::D2TildeGraph4: return "D2tilde-graph4";
    case DiagramKind::D2TildeTriVee: return "D2tilde-triVee";
  }
  throw std::logic_error("unknown diagram kind");
}

DiagramKind kindFromName(const std::string& s) {
  for (auto k : {DiagramKind::D0, DiagramKind::D1, DiagramKind::D2TwoVee, DiagramKind::D2Tree,
                 DiagramKind::D2TildeGraph4, DiagramKind::D2TildeTriVee})
    if (kindName(k) == s) return k;
  throw std::invalid_argument("unknown diagram kind: " + s);
}

int PointGraph::label(int position) const {
  auto it = std::find(points.begin(), points.end(), position);
  if (it == points.end()) throw std::invalid_argument("position not in graph");
  return static_cast<int>(it - points.begin()) + 1;
}

DiagramKind Diagram::kind() const {
  if (tree) return DiagramKind::D2Tree;
  if (graph4) return DiagramKind::D2TildeGraph4;
  if (triangleVee) return DiagramKind::D2TildeTriVee;
  if (vees.size() == 2) return DiagramKind::D2TwoVee;
  if (vees.size() == 1) return DiagramKind::D1;
  return DiagramKind::D0;
}

int Diagram::degree() const {
  int d = static_cast<int>(chords.size() + 2 * vees.size());
  if (tree) d += 3;
  if (graph4) d += 4;
  if (triangleVee) d += 5;
  return d;
}

std::vector<int> Diagram::encoding() const {
  std::vector<int> e{static_cast<int>(kind()), q, static_cast<int>(chords.size())};
  for (const auto& [a, b] : chords) e.insert(e.end(), {a, b});
  e.push_back(static_cast<int>(vees.size()));
  for (const auto& v : vees) e.insert(e.end(), {v.mid, v.tipA, v.tipB});
  for (const auto* g : {&tree, &graph4}) {
    if (!*g) continue;
    e.insert(e.end(), (*g)->points.begin(), (*g)->points.end());
    for (const auto& [a, b] : (*g)->edges) e.insert(e.end(), {a, b});
  }
  if (triangleVee) {
    e.insert(e.end(), triangleVee->triangle.begin(), triangleVee->triangle.end());
    e.insert(e.end(), {triangleVee->vee.mid, triangleVee->vee.tipA, triangleVee->vee.tipB});
  }
  return e;
}

std::vector<std::vector<int>> Diagram::structures() const {
  std::vector<std::vector<int>> s;
  for (const auto& [a, b] : chords) s.push_back({a, b});
  for (const auto& v : vees) s.push_back({v.mid, v.tipA, v.tipB});
  if (tree) s.push_back(tree->points);
  if (graph4) s.push_back(graph4->points);
  if (triangleVee) {
    s.push_back(triangleVee->triangle);
    s.push_back({triangleVee->vee.mid, triangleVee->vee.tipA, triangleVee->vee.tipB});
  }
  return s;
}

std::string Diagram::str() const {
  std::ostringstream os;
  os << "q=" << q;
  for (const auto& [a, b] : chords) os << " C(" << a << "," << b << ")";
  for (const auto& v : vees) os << " V(" << v.mid << ";" << v.tipA << "," << v.tipB << ")";
  auto graph = [&](const char* name, const PointGraph& g) {
    os << " " << name << "{";
    for (std::size_t i = 0; i < g.edges.size(); ++i)
      os << (i ? "," : "") << g.edges[i].first << "-" << g.edges[i].second;
    os << "}";
  };
  if (tree) graph("T", *tree);
  if (graph4) graph("G", *graph4);
  if (triangleVee) {
    const auto& t = *triangleVee;
    os << " Tri(" << t.triangle[0] << "," << t.triangle[1] << "," << t.triangle[2] << ") V("
       << t.vee.mid << ";" << t.vee.tipA << "," << t.vee.tipB << ")";
  }
  return os.str();
}

namespace {

bool graphConnected(const std::vector<int>& pts, const std::vector<std::pair<int, int>>& edges) {
  std::map<int, int> parent;
  for (int p : pts) parent[p] = p;
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (const auto& [a, b] : edges) parent[find(a)] = find(b);
  std::set<int> roots;
  for (int p : pts) roots.insert(find(p));
  return roots.size() == 1;
}

}  // namespace

Diagram canonicalize(const RawDiagram& raw) {
  int extras = (raw.tree ? 1 : 0) + (raw.graph4 ? 1 : 0) + (raw.triangleVee ? 1 : 0);
  if (extras > 1 || (extras == 1 && !raw.vees.empty()) || raw.vees.size() > 2)
    throw std::invalid_argument("unsupported combination of structures");

  // Each structure contributes its own point set; within a structure repeats
  // are "duplicate position", across structures "overlapping structures".
  std::vector<std::vector<double>> groups;
  for (const auto& [a, b] : raw.chords) groups.push_back({a, b});
  for (const auto& v : raw.vees) groups.push_back({v[0], v[1], v[2]});
  auto checkGraph = [&](const auto& g, std::size_t nEdges) {
    const auto& [pts, edges] = g;
    if (pts.size() != 4 || edges.size() != nEdges) throw std::invalid_argument("tree not spanning");
    std::set<std::pair<double, double>> seen;
    for (auto [a, b] : edges) {
      if (a > b) std::swap(a, b);
      if (a == b || std::find(pts.begin(), pts.end(), a) == pts.end() ||
          std::find(pts.begin(), pts.end(), b) == pts.end() || !seen.insert({a, b}).second)
        throw std::invalid_argument("tree not spanning");
    }
    groups.push_back(pts);
  };
  if (raw.tree) checkGraph(*raw.tree, 3);
  if (raw.graph4) checkGraph(*raw.graph4, 4);
  if (raw.triangleVee) {
    const auto& [tri, v] = *raw.triangleVee;
    groups.push_back({tri.begin(), tri.end()});
    groups.push_back({v.begin(), v.end()});
  }
  for (const auto& g : groups) {
    std::set<double> s(g.begin(), g.end());
    if (s.size() != g.size()) throw std::invalid_argument("duplicate position");
  }
  std::vector<double> all;
  for (const auto& g : groups) all.insert(all.end(), g.begin(), g.end());
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end())
    throw std::invalid_argument("overlapping structures");
  auto rankOf = [&](double x) {
    return static_cast<int>(std::lower_bound(all.begin(), all.end(), x) - all.begin()) + 1;
  };

  Diagram d;
  d.q = static_cast<int>(all.size());
  for (const auto& [a, b] : raw.chords) d.chords.emplace_back(std::minmax(rankOf(a), rankOf(b)));
  std::sort(d.chords.begin(), d.chords.end());
  auto makeVee = [&](const std::array<double, 3>& v) {
    int ta = rankOf(v[1]), tb = rankOf(v[2]);
    if (ta > tb) std::swap(ta, tb);
    return Vee{rankOf(v[0]), ta, tb};
  };
  for (const auto& v : raw.vees) d.vees.push_back(makeVee(v));
  std::sort(d.vees.begin(), d.vees.end());
  auto makeGraph = [&](const auto& g) {
    PointGraph out;
    for (double p : g.first) out.points.push_back(rankOf(p));
    std::sort(out.points.begin(), out.points.end());
    for (const auto& [a, b] : g.second) out.edges.emplace_back(std::minmax(rankOf(a), rankOf(b)));
    std::sort(out.edges.begin(), out.edges.end());
    if (!graphConnected(out.points, out.edges)) throw std::invalid_argument("tree not spanning");
    return out;
  };
  if (raw.tree) d.tree = makeGraph(*raw.tree);
  if (raw.graph4) d.graph4 = makeGraph(*raw.graph4);
  if (raw.triangleVee) {
    TriangleVee tv;
    for (double p : raw.triangleVee->first) tv.triangle.push_back(rankOf(p));
    std::sort(tv.triangle.begin(), tv.triangle.end());
    tv.vee = makeVee(raw.triangleVee->second);
    d.triangleVee = tv;
  }
  return d;
}

RawDiagram toRaw(const Diagram& d) {
  RawDiagram r;
  for (const auto& [a, b] : d.chords) r.chords.emplace_back(a, b);
  for (const auto& v : d.vees) r.vees.push_back({double(v.mid), double(v.tipA), double(v.tipB)});
  auto graph = [](const PointGraph& g) {
    std::pair<std::vector<double>, std::vector<std::pair<double, double>>> out;
    for (int p : g.points) out.first.push_back(p);
    for (const auto& [a, b] : g.edges) out.second.emplace_back(a, b);
    return out;
  };
  if (d.tree) r.tree = graph(*d.tree);
  if (d.graph4) r.graph4 = graph(*d.graph4);
  if (d.triangleVee) {
    const auto& t = *d.triangleVee;
    r.triangleVee = {{double(t.triangle[0]), double(t.triangle[1]), double(t.triangle[2])},
                     {double(t.vee.mid), double(t.vee.tipA), double(t.vee.tipB)}};
  }
  return r;
}

int lk(const std::vector<double>& p, const std::pair<double, double>& q) {
  auto [a, b] = std::minmax(q.first, q.second);
  if (a == b) throw std::invalid_argument("lk: second set must have two points");
  int inside = 0;
  for (double x : p) {
    if (x == a || x == b) throw std::invalid_argument("lk: sets are not disjoint");
    if (a < x && x < b) ++inside;
  }
  return inside % 2 ? -1 : 1;
}

bool hasIsolatedChord(const Diagram& d) {
  return std::any_of(d.chords.begin(), d.chords.end(), [](const auto& c) { return c.second == c.first + 1; });
}

int sigmaSign(const Diagram& d, SignReading reading) {
  if (d.kind() != DiagramKind::D1) throw std::invalid_argument("sigma: expected a V-diagram");
  std::vector<int> lks;
  const Vee& v = d.vees.front();
  std::vector<double> triple{double(v.mid), double(v.tipA), double(v.tipB)};
  for (std::size_t i = 0; i < d.chords.size(); ++i) {
    std::pair<double, double> ci(d.chords[i].first, d.chords[i].second);
    lks.push_back(lk(triple, ci));
    for (std::size_t j = i + 1; j < d.chords.size(); ++j)
      lks.push_back(lk({double(d.chords[j].first), double(d.chords[j].second)}, ci));
  }
  int exponent = 0;
  for (int l : lks) exponent += reading == SignReading::Count ? (l == -1) : l;
  return exponent % 2 ? -1 : 1;
}

Diagram concatDiagrams(const std::vector<Diagram>& parts) {
  RawDiagram r;
  double shift = 0;
  for (const auto& p : parts) {
    RawDiagram pr = toRaw(p);
    auto s = [&](double x) { return x + shift; };
    for (const auto& [a, b] : pr.chords) r.chords.emplace_back(s(a), s(b));
    for (const auto& v : pr.vees) r.vees.push_back({s(v[0]), s(v[1]), s(v[2])});
    auto shiftGraph = [&](auto g) {
      for (auto& x : g.first) x = s(x);
      for (auto& [a, b] : g.second) a = s(a), b = s(b);
      return g;
    };
    if (pr.tree) {
      if (r.tree || r.graph4 || r.triangleVee) throw std::invalid_argument("concat: too many singular parts");
      r.tree = shiftGraph(*pr.tree);
    }
    if (pr.graph4) {
      if (r.tree || r.graph4 || r.triangleVee) throw std::invalid_argument("concat: too many singular parts");
      r.graph4 = shiftGraph(*pr.graph4);
    }
    if (pr.triangleVee) {
      if (r.tree || r.graph4 || r.triangleVee) throw std::invalid_argument("concat: too many singular parts");
      auto tv = *pr.triangleVee;
      for (auto& x : tv.first) x = s(x);
      for (auto& x : tv.second) x = s(x);
      r.triangleVee = tv;
    }
    shift += p.q;
  }
  return canonicalize(r);
}

std::vector<std::vector<std::pair<int, int>>> perfectMatchings(const std::vector<int>& points) {
  std::vector<std::vector<std::pair<int, int>>> out;
  if (points.size() % 2) return out;
  std::vector<int> pts(points);
  std::sort(pts.begin(), pts.end());
  std::vector<std::pair<int, int>> cur;
  std::vector<bool> used(pts.size(), false);
  std::function<void()> rec = [&]() {
    std::size_t first = 0;
    while (first < pts.size() && used[first]) ++first;
    if (first == pts.size()) {
      out.push_back(cur);
      return;
    }
    used[first] = true;
    for (std::size_t j = first + 1; j < pts.size(); ++j) {
      if (used[j]) continue;
      used[j] = true;
      cur.emplace_back(pts[first], pts[j]);
      rec();
      cur.pop_back();
      used[j] = false;
    }
    used[first] = false;
  };
  rec();
  return out;
}

std::vector<std::vector<std::pair<int, int>>> spanningTrees4() {
  std::vector<std::pair<int, int>> pairs;
  for (int a = 1; a <= 4; ++a)
    for (int b = a + 1; b <= 4; ++b) pairs.emplace_back(a, b);
  std::vector<std::vector<std::pair<int, int>>> stars, paths;
  for (int mask = 0; mask < 64; ++mask) {
    if (__builtin_popcount(mask) != 3) continue;
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < 6; ++i)
      if (mask >> i & 1) e.push_back(pairs[i]);
    if (!graphConnected({1, 2, 3, 4}, e)) continue;
    std::array<int, 5> deg{};
    for (const auto& [a, b] : e) ++deg[a], ++deg[b];
    (*std::max_element(deg.begin(), deg.end()) == 3 ? stars : paths).push_back(e);
  }
  auto center = [](const std::vector<std::pair<int, int>>& e) {
    std::array<int, 5> deg{};
    for (const auto& [a, b] : e) ++deg[a], ++deg[b];
    return static_cast<int>(std::max_element(deg.begin(), deg.end()) - deg.begin());
  };
  std::sort(stars.begin(), stars.end(), [&](const auto& a, const auto& b) { return center(a) < center(b); });
  std::sort(paths.begin(), paths.end());
  stars.insert(stars.end(), paths.begin(), paths.end());
  return stars;
}

namespace {

// Calls f(chosen, rest) for every k-subset of pts (in lexicographic order).
void forSubsets(const std::vector<int>& pts, int k,
                const std::function<void(const std::vector<int>&, const std::vector<int>&)>& f) {
  int n = static_cast<int>(pts.size());
  std::vector<int> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  if (k > n) return;
  while (true) {
    std::vector<int> chosen, rest;
    std::vector<bool> in(n, false);
    for (int i : idx) in[i] = true;
    for (int i = 0; i < n; ++i) (in[i] ? chosen : rest).push_back(pts[i]);
    f(chosen, rest);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

void addGraphs(int nEdges, const std::vector<int>& pts, const std::vector<std::pair<int, int>>& chords,
               bool asTree, std::vector<Diagram>& out, int q) {
  std::vector<std::pair<int, int>> pairs;
  for (std::size_t a = 0; a < pts.size(); ++a)
    for (std::size_t b = a + 1; b < pts.size(); ++b) pairs.emplace_back(pts[a], pts[b]);
  for (int mask = 0; mask < 64; ++mask) {
    if (__builtin_popcount(mask) != nEdges) continue;
    PointGraph g{pts, {}};
    for (int i = 0; i < 6; ++i)
      if (mask >> i & 1) g.edges.push_back(pairs[i]);
    if (!graphConnected(pts, g.edges)) continue;
    Diagram d;
    d.q = q;
    d.chords = chords;
    (asTree ? d.tree : d.graph4) = g;
    out.push_back(d);
  }
}

}  // namespace

std::vector<Diagram> enumerateDiagrams(DiagramKind kind, int degree) {
  int base = 0, basePoints = 0;
  switch (kind) {
    case DiagramKind::D0: break;
    case DiagramKind::D1: base = 2, basePoints = 3; break;
    case DiagramKind::D2TwoVee: base = 4, basePoints = 6; break;
    case DiagramKind::D2Tree: base = 3, basePoints = 4; break;
    case DiagramKind::D2TildeGraph4: base = 4, basePoints = 4; break;
    case DiagramKind::D2TildeTriVee: base = 5, basePoints = 6; break;
  }
  if (degree < base) return {};
  int q = basePoints + 2 * (degree - base);
  if (q > 10) throw std::invalid_argument("enumerate: unsupported size (more than 10 points)");
  std::vector<int> all(q);
  std::iota(all.begin(), all.end(), 1);
  std::vector<Diagram> out;
  auto withChords = [&](const std::vector<int>& rest, const std::function<void(const std::vector<std::pair<int, int>>&)>& f) {
    for (const auto& m : perfectMatchings(rest)) f(m);
  };
  auto veesOn = [](const std::vector<int>& t) {
    return std::vector<Vee>{{t[0], t[1], t[2]}, {t[1], t[0], t[2]}, {t[2], t[0], t[1]}};
  };
  switch (kind) {
    case DiagramKind::D0:
      withChords(all, [&](const auto& m) {
        Diagram d;
        d.q = q;
        d.chords = m;
        out.push_back(d);
      });
      break;
    case DiagramKind::D1:
      forSubsets(all, 3, [&](const auto& t, const auto& rest) {
        withChords(rest, [&](const auto& m) {
          for (const Vee& v : veesOn(t)) {
            Diagram d;
            d.q = q;
            d.chords = m;
            d.vees = {v};
            out.push_back(d);
          }
        });
      });
      break;
    case DiagramKind::D2TwoVee:
      forSubsets(all, 6, [&](const auto& six, const auto& rest) {
        forSubsets(six, 3, [&](const auto& t1, const auto& t2) {
          if (t1[0] != six[0]) return;  // each unordered pair of triples once
          withChords(rest, [&](const auto& m) {
            for (const Vee& v1 : veesOn(t1))
              for (const Vee& v2 : veesOn(t2)) {
                Diagram d;
                d.q = q;
                d.chords = m;
                d.vees = {v1, v2};
                std::sort(d.vees.begin(), d.vees.end());
                out.push_back(d);
              }
          });
        });
      });
      break;
    case DiagramKind::D2Tree:
    case DiagramKind::D2TildeGraph4:
      forSubsets(all, 4, [&](const auto& four, const auto& rest) {
        withChords(rest, [&](const auto& m) {
          addGraphs(kind == DiagramKind::D2Tree ? 3 : 4, four, m, kind == DiagramKind::D2Tree, out, q);
        });
      });
      break;
    case DiagramKind::D2TildeTriVee:
      forSubsets(all, 3, [&](const auto& tri, const auto& rest0) {
        forSubsets(rest0, 3, [&](const auto& t, const auto& rest) {
          withChords(rest, [&](const auto& m) {
            for (const Vee& v : veesOn(t)) {
              Diagram d;
              d.q = q;
              d.chords = m;
              d.triangleVee = TriangleVee{tri, v};
              out.push_back(d);
            }
          });
        });
      });
      break;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

nlohmann::json toJson(const Diagram& d) {
  nlohmann::json j;
  j["q"] = d.q;
  j["chords"] = nlohmann::json::array();
  for (const auto& [a, b] : d.chords) j["chords"].push_back({a, b});
  j["vees"] = nlohmann::json::array();
  for (const auto& v : d.vees) j["vees"].push_back({v.mid, v.tipA, v.tipB});
  auto graph = [](const PointGraph& g) {
    nlohmann::json e = nlohmann::json::array();
    for (const auto& [a, b] : g.edges) e.push_back({a, b});
    return nlohmann::json{{"points", g.points}, {"edges", e}};
  };
  if (d.tree) j["tree"] = graph(*d.tree);
  if (d.graph4) j["graph4"] = graph(*d.graph4);
  if (d.triangleVee)
    j["triangleVee"] = {{"triangle", d.triangleVee->triangle},
                        {"vee", {d.triangleVee->vee.mid, d.triangleVee->vee.tipA, d.triangleVee->vee.tipB}}};
  return j;
}

Diagram diagramFromJson(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("diagram JSON must be an object");
  RawDiagram r;
  if (j.contains("chords"))
    for (const auto& c : j.at("chords")) {
      if (c.size() != 2) throw std::invalid_argument("chord needs two positions");
      r.chords.emplace_back(c[0].get<double>(), c[1].get<double>());
    }
  if (j.contains("vees"))
    for (const auto& v : j.at("vees")) {
      if (v.size() != 3) throw std::invalid_argument("V needs three positions");
      r.vees.push_back({v[0].get<double>(), v[1].get<double>(), v[2].get<double>()});
    }
  auto graph = [](const nlohmann::json& g) {
    std::pair<std::vector<double>, std::vector<std::pair<double, double>>> out;
    out.first = g.at("points").get<std::vector<double>>();
    for (const auto& e : g.at("edges")) out.second.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
    return out;
  };
  if (j.contains("tree")) r.tree = graph(j.at("tree"));
  if (j.contains("graph4")) r.graph4 = graph(j.at("graph4"));
  if (j.contains("triangleVee")) {
    const auto& t = j.at("triangleVee");
    auto tri = t.at("triangle").get<std::vector<double>>();
    auto v = t.at("vee").get<std::vector<double>>();
    if (tri.size() != 3 || v.size() != 3) throw std::invalid_argument("triangleVee needs 3+3 positions");
    r.triangleVee = {{tri[0], tri[1], tri[2]}, {v[0], v[1], v[2]}};
  }
  Diagram d = canonicalize(r);
  if (j.contains("q") && j.at("q").get<int>() != d.q) throw std::invalid_argument("q does not match the point count");
  return d;
}

}  // namespace kzc
