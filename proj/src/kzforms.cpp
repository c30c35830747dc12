#include "kzc/kzforms.hpp"

#include "kzc/relations.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <stdexcept>

namespace kzc {

RationalForm RationalForm::dlog(int p, int i, int j) {
  if (i == j || i < 1 || j < 1 || i > p || j > p) throw std::invalid_argument("dlog: bad strand pair");
  auto [a, b] = std::minmax(i, j);
  RationalForm f(p, 1);
  f.num_[{a}] = Polynomial::constant(p, 1);
  f.num_[{b}] = Polynomial::constant(p, -1);
  f.den_[{a, b}] = 1;
  return f;
}

RationalForm RationalForm::constantOneForm(int p, const std::vector<Rational>& c) {
  if (static_cast<int>(c.size()) != p) throw std::invalid_argument("constantOneForm: size mismatch");
  RationalForm f(p, 1);
  for (int i = 0; i < p; ++i)
    if (!kzc::isZero(c[i])) f.num_[{i + 1}] = Polynomial::constant(p, c[i]);
  return f;
}

RationalForm RationalForm::omegaTop(int p) {
  RationalForm f(p, p - 1);
  for (int i = 1; i <= p; ++i) {
    Subset s;
    for (int k = 1; k <= p; ++k)
      if (k != i) s.push_back(k);
    f.num_[s] = Polynomial::constant(p, i % 2 ? -1 : 1);
  }
  return f;
}

RationalForm RationalForm::withDenominator(const Denominator& target) const {
  RationalForm r = *this;
  for (const auto& [ab, k] : target) {
    auto it = den_.find(ab);
    int have = it == den_.end() ? 0 : it->second;
    if (have > k) throw std::logic_error("withDenominator: target too small");
    Polynomial factor = Polynomial::constant(p_, 1);
    for (int e = have; e < k; ++e) factor = factor * Polynomial::difference(p_, ab.first, ab.second);
    for (auto& [s, n] : r.num_) n = n * factor;
  }
  r.den_ = target;
  return r;
}

RationalForm RationalForm::operator+(const RationalForm& o) const {
  if (p_ != o.p_ || (degree_ != o.degree_ && !num_.empty() && !o.num_.empty()))
    throw std::invalid_argument("adding incompatible forms");
  Denominator target = den_;
  for (const auto& [ab, k] : o.den_) target[ab] = std::max(target[ab], k);
  RationalForm a = withDenominator(target), b = o.withDenominator(target);
  if (num_.empty()) a.degree_ = o.degree_;
  for (const auto& [s, n] : b.num_) {
    auto it = a.num_.find(s);
    if (it == a.num_.end())
      a.num_[s] = n;
    else
      it->second = it->second + n;
  }
  for (auto it = a.num_.begin(); it != a.num_.end();) it = it->second.isZero() ? a.num_.erase(it) : std::next(it);
  return a;
}

RationalForm RationalForm::operator-(const RationalForm& o) const { return *this + o * Rational(-1); }

RationalForm RationalForm::operator*(const Rational& c) const {
  RationalForm r = *this;
  for (auto& [s, n] : r.num_) n = n * c;
  for (auto it = r.num_.begin(); it != r.num_.end();) it = it->second.isZero() ? r.num_.erase(it) : std::next(it);
  return r;
}

RationalForm RationalForm::timesDifference(int a, int b) const {
  Rational sign = a < b ? 1 : -1;
  auto key = std::minmax(a, b);
  RationalForm r = *this;
  auto it = r.den_.find({key.first, key.second});
  if (it != r.den_.end() && it->second > 0) {
    if (--it->second == 0) r.den_.erase(it);
    return r * sign;
  }
  Polynomial f = Polynomial::difference(p_, key.first, key.second) * sign;
  for (auto& [s, n] : r.num_) n = n * f;
  return r;
}

bool RationalForm::isZero() const {
  return std::all_of(num_.begin(), num_.end(), [](const auto& e) { return e.second.isZero(); });
}

RationalForm RationalForm::reduced() const {
  RationalForm r = *this;
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto& [ab, k] : r.den_) {
      if (k == 0) continue;
      std::map<Subset, Polynomial> q;
      bool ok = true;
      for (const auto& [s, n] : r.num_) {
        Polynomial quotient;
        if (!n.divideByDifference(ab.first, ab.second, quotient)) {
          ok = false;
          break;
        }
        q[s] = quotient;
      }
      if (!ok) continue;
      r.num_ = q;
      --k;
      changed = true;
    }
    for (auto it = r.den_.begin(); it != r.den_.end();) it = it->second == 0 ? r.den_.erase(it) : std::next(it);
  }
  return r;
}

RationalForm wedge(const RationalForm& f, const RationalForm& g) {
  if (f.p_ != g.p_) throw std::invalid_argument("wedge: strand mismatch");
  RationalForm r(f.p_, f.degree_ + g.degree_);
  r.den_ = f.den_;
  for (const auto& [ab, k] : g.den_) r.den_[ab] += k;
  for (const auto& [s, ns] : f.num_)
    for (const auto& [t, nt] : g.num_) {
      int inversions = 0;
      bool disjoint = true;
      for (int x : s)
        for (int y : t) {
          if (x == y) disjoint = false;
          if (x > y) ++inversions;
        }
      if (!disjoint) continue;
      RationalForm::Subset u(s);
      u.insert(u.end(), t.begin(), t.end());
      std::sort(u.begin(), u.end());
      Polynomial prod = ns * nt * Rational(inversions % 2 ? -1 : 1);
      auto it = r.num_.find(u);
      if (it == r.num_.end())
        r.num_[u] = prod;
      else
        it->second = it->second + prod;
    }
  for (auto it = r.num_.begin(); it != r.num_.end();) it = it->second.isZero() ? r.num_.erase(it) : std::next(it);
  return r;
}

std::vector<int> StrandDiagram::strandsUsed() const {
  std::set<int> s;
  for (const auto& level : levels)
    for (const auto& [a, b] : level) s.insert(a), s.insert(b);
  return {s.begin(), s.end()};
}

SlottedDiagram StrandDiagram::closeUp() const {
  // Position of (strand, level) after closing strands 1..p in order.
  std::map<std::pair<int, int>, double> pos;
  std::vector<int> slots;
  double next = 1;
  for (int s = 1; s <= p; ++s) {
    int count = 0;
    for (std::size_t l = 0; l < levels.size(); ++l) {
      bool touches = false;
      for (const auto& [a, b] : levels[l]) touches = touches || a == s || b == s;
      if (touches) {
        pos[{s, static_cast<int>(l)}] = next++;
        ++count;
      }
    }
    if (count) slots.push_back(count);
  }
  RawDiagram r;
  for (std::size_t l = 0; l < levels.size(); ++l) {
    const auto& lev = levels[l];
    int li = static_cast<int>(l);
    if (lev.size() == 1) {
      r.chords.emplace_back(pos[{lev[0].first, li}], pos[{lev[0].second, li}]);
    } else if (lev.size() == 2) {
      std::set<int> a{lev[0].first, lev[0].second}, b{lev[1].first, lev[1].second};
      int mid = 0;
      std::vector<int> tips;
      for (int x : a)
        if (b.count(x)) mid = x;
      for (int x : a)
        if (x != mid) tips.push_back(x);
      for (int x : b)
        if (x != mid) tips.push_back(x);
      if (!mid || tips.size() != 2) throw std::invalid_argument("closeUp: level pair does not share one strand");
      r.vees.push_back({pos[{mid, li}], pos[{tips[0], li}], pos[{tips[1], li}]});
    } else {
      throw std::invalid_argument("closeUp: malformed level");
    }
  }
  return {canonicalize(r), slots};
}

void DiagramValuedForm::add(const StrandDiagram& d, const RationalForm& f) {
  auto it = terms.find(d);
  if (it == terms.end()) {
    if (!f.isZero()) terms.emplace(d, f);
    return;
  }
  it->second = it->second + f;
  if (it->second.isZero()) terms.erase(it);
}

DiagramValuedForm DiagramValuedForm::operator-(const DiagramValuedForm& o) const {
  if (p != o.p || formDegree != o.formDegree || prefactor != o.prefactor)
    throw std::invalid_argument("subtracting incompatible diagram-valued forms");
  DiagramValuedForm r = *this;
  for (const auto& [d, f] : o.terms) r.add(d, f * Rational(-1));
  return r;
}

DiagramValuedForm omegaKZ(int p) {
  if (p < 2) throw std::invalid_argument("omegaKZ: need at least 2 strands");
  DiagramValuedForm w{p, 1, 1, {}};
  for (int i = 1; i <= p; ++i)
    for (int j = i + 1; j <= p; ++j) w.add(StrandDiagram{p, {{{i, j}}}}, RationalForm::dlog(p, i, j));
  return w;
}

DiagramValuedForm lambdaKZ(int p) {
  if (p < 3) throw std::invalid_argument("lambdaKZ: need at least 3 strands");
  DiagramValuedForm w{p, 2, 2, {}};
  std::vector<std::pair<int, int>> chords;
  for (int i = 1; i <= p; ++i)
    for (int j = i + 1; j <= p; ++j) chords.emplace_back(i, j);
  for (std::size_t x = 0; x < chords.size(); ++x)
    for (std::size_t y = x + 1; y < chords.size(); ++y) {
      auto [a, b] = chords[x];
      auto [c, d] = chords[y];
      int shared = (a == c) + (a == d) + (b == c) + (b == d);
      if (shared != 1) continue;
      w.add(StrandDiagram{p, {{chords[x], chords[y]}}},
            wedge(RationalForm::dlog(p, a, b), RationalForm::dlog(p, c, d)));
    }
  return w;
}

DiagramValuedForm wedge(const DiagramValuedForm& f, const DiagramValuedForm& g) {
  if (f.p != g.p) throw std::invalid_argument("wedge: strand mismatch");
  DiagramValuedForm r{f.p, f.formDegree + g.formDegree, f.prefactor + g.prefactor, {}};
  for (const auto& [df, ff] : f.terms)
    for (const auto& [dg, fg] : g.terms) {
      StrandDiagram d{f.p, df.levels};
      d.levels.insert(d.levels.end(), dg.levels.begin(), dg.levels.end());
      r.add(d, wedge(ff, fg));
    }
  return r;
}

std::map<SlottedDiagram, RationalForm> closedCurvature(int p, int strandCount) {
  DiagramValuedForm omega = omegaKZ(p), lambda = lambdaKZ(p);
  DiagramValuedForm curv = wedge(omega, lambda) - wedge(lambda, omega);
  std::map<SlottedDiagram, RationalForm> out;
  for (const auto& [d, f] : curv.terms) {
    if (static_cast<int>(d.strandsUsed().size()) != strandCount) continue;
    SlottedDiagram key = d.closeUp();
    auto it = out.find(key);
    if (it == out.end())
      out.emplace(key, f);
    else
      it->second = it->second + f;
  }
  for (auto it = out.begin(); it != out.end();) it = it->second.isZero() ? out.erase(it) : std::next(it);
  return out;
}

std::vector<std::vector<int>> curvatureMonomials() {
  std::vector<std::vector<int>> mixed, cubes;
  for (int a = 0; a < 4; ++a)
    for (int b = a; b < 4; ++b)
      for (int c = b; c < 4; ++c) {
        std::vector<int> e(4, 0);
        ++e[a], ++e[b], ++e[c];
        (a == c ? cubes : mixed).push_back(e);
      }
  mixed.insert(mixed.end(), cubes.begin(), cubes.end());
  return mixed;
}

namespace {

// Full 20 x 72 coefficient matrix of the four-strand curvature.
SparseRationalMatrix curvatureAllMonomials() {
  const int p = 4;
  const auto& basis = treeConfigBasis();
  std::map<SlottedDiagram, int> col;
  for (std::size_t i = 0; i < basis.size(); ++i) col[basis[i]] = static_cast<int>(i);
  auto monos = curvatureMonomials();
  std::map<std::vector<int>, int> row;
  for (std::size_t i = 0; i < monos.size(); ++i) row[monos[i]] = static_cast<int>(i);
  SparseRationalMatrix m(static_cast<int>(monos.size()), static_cast<int>(basis.size()));
  RationalForm top = RationalForm::omegaTop(p);
  for (const auto& [key, form] : closedCurvature(p, 4)) {
    RationalForm f = form;
    for (int a = 1; a <= p; ++a)
      for (int b = a + 1; b <= p; ++b) f = f.timesDifference(a, b);
    f = f.reduced();
    if (!f.denominator().empty()) throw std::runtime_error("curvature: denominator does not clear");
    // f = P * omega_top; read P off any component and check the others.
    std::optional<Polynomial> factor;
    for (const auto& [s, unit] : top.numerators()) {
      auto it = f.numerators().find(s);
      Polynomial ps = it == f.numerators().end() ? Polynomial(p) : it->second;
      Polynomial candidate = ps * unit.coefficient(std::vector<int>(p, 0));  // unit is +-1
      if (!factor)
        factor = candidate;
      else if (!(*factor == candidate))
        throw std::runtime_error("curvature: four-strand term is not a multiple of omega_4");
    }
    auto c = col.find(key);
    if (c == col.end()) throw std::runtime_error("curvature: diagram outside the tree configuration basis");
    for (const auto& [e, v] : factor->terms()) {
      auto r = row.find(e);
      if (r == row.end()) throw std::runtime_error("curvature: coefficient is not cubic");
      m.add(r->second, c->second, v);
    }
  }
  return m;
}

}  // namespace

SparseRationalMatrix curvatureMatrix(int p) {
  if (p != 4) throw std::invalid_argument("curvatureMatrix: only four strands are supported");
  SparseRationalMatrix all = curvatureAllMonomials();
  return all.transpose().columnBlock(0, 16).transpose();
}

SparseRationalMatrix curvatureCubeRows() {
  SparseRationalMatrix all = curvatureAllMonomials();
  return all.transpose().columnBlock(16, 4).transpose();
}

int treeFormSign(int p, const std::vector<std::pair<int, int>>& edges) {
  if (p < 2 || static_cast<int>(edges.size()) != p - 1) throw std::invalid_argument("treeFormSign: not a tree");
  std::vector<int> parent(p + 1);
  for (int i = 1; i <= p; ++i) parent[i] = i;
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& [a, b] : edges) {
    if (a < 1 || b < 1 || a > p || b > p || find(a) == find(b)) throw std::invalid_argument("treeFormSign: not a tree");
    parent[find(a)] = find(b);
  }
  std::vector<std::pair<int, int>> sorted(edges);
  for (auto& e : sorted) if (e.first > e.second) std::swap(e.first, e.second);
  std::sort(sorted.begin(), sorted.end());
  RationalForm w;
  bool first = true;
  for (const auto& [a, b] : sorted) {
    std::vector<Rational> c(p, 0);
    c[a - 1] = 1;
    c[b - 1] = -1;
    RationalForm e = RationalForm::constantOneForm(p, c);
    w = first ? e : wedge(w, e);
    first = false;
  }
  RationalForm top = RationalForm::omegaTop(p);
  for (int eps : {1, -1})
    if ((w - top * Rational(eps)).isZero()) return eps;
  throw std::runtime_error("treeFormSign: tree form is not proportional to omega_p");
}

std::vector<std::vector<std::pair<int, int>>> allTrees(int p) {
  if (p < 2) throw std::invalid_argument("allTrees: need p >= 2");
  std::vector<std::vector<std::pair<int, int>>> out;
  int len = p - 2;
  std::vector<int> seq(len, 1);
  while (true) {
    std::vector<int> degree(p + 1, 1);
    for (int x : seq) ++degree[x];
    std::vector<std::pair<int, int>> edges;
    for (int x : seq) {
      int leaf = 1;
      while (degree[leaf] != 1) ++leaf;
      edges.emplace_back(std::minmax(leaf, x));
      --degree[leaf];
      --degree[x];
    }
    std::vector<int> last;
    for (int v = 1; v <= p; ++v)
      if (degree[v] == 1) last.push_back(v);
    edges.emplace_back(last[0], last[1]);
    std::sort(edges.begin(), edges.end());
    out.push_back(edges);
    int i = len - 1;
    while (i >= 0 && seq[i] == p) seq[i--] = 1;
    if (i < 0) break;
    ++seq[i];
  }
  return out;
}

}  // namespace kzc
