#include "kzc/integrator.hpp"

#include "kzc/relations.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace kzc {

using Cx = std::complex<double>;

// ---------------------------------------------------------------- classes

namespace {

// Flattened, normalized structure ranks: V first (mid, tips sorted), then
// the chords, each sorted, in increasing order.
std::vector<int> normalizeRanks(bool hasVee, std::vector<int> r) {
  std::size_t start = 0;
  if (hasVee) {
    if (r[1] > r[2]) std::swap(r[1], r[2]);
    start = 3;
  }
  std::vector<std::pair<int, int>> chords;
  for (std::size_t i = start; i + 1 < r.size(); i += 2) chords.emplace_back(std::min(r[i], r[i + 1]), std::max(r[i], r[i + 1]));
  std::sort(chords.begin(), chords.end());
  for (std::size_t i = 0; i < chords.size(); ++i) {
    r[start + 2 * i] = chords[i].first;
    r[start + 2 * i + 1] = chords[i].second;
  }
  return r;
}

std::vector<int> structureRanksOf(const Diagram& d) {
  std::vector<int> r;
  for (const auto& v : d.vees) r.insert(r.end(), {v.mid, v.tipA, v.tipB});
  for (const auto& [a, b] : d.chords) r.insert(r.end(), {a, b});
  return r;
}

int keyOf(const std::vector<int>& r, int base) {
  int k = 0;
  for (int x : r) k = k * base + x;
  return k;
}

}  // namespace

ReducedClasses::ReducedClasses(DiagramKind kind, int degree) : kind_(kind), degree_(degree) {
  if (kind != DiagramKind::D0 && kind != DiagramKind::D1)
    throw std::invalid_argument("reduced classes exist for chord diagrams and V-diagrams only");
  basis_ = enumerateDiagrams(kind, degree);
  const int n = static_cast<int>(basis_.size());
  std::map<Diagram, int> index;
  for (int i = 0; i < n; ++i) index[basis_[i]] = i;

  // Union-find with the sign relating each element to its parent.
  std::vector<int> parent(n), rel(n, 1);
  std::vector<bool> killed(n, false);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::pair<int, int>(int)> find = [&](int x) -> std::pair<int, int> {
    if (parent[x] == x) return {x, 1};
    auto [root, s] = find(parent[x]);
    parent[x] = root;
    rel[x] *= s;
    return {root, rel[x]};
  };
  auto killRoot = [&](int x) { killed[find(x).first] = true; };

  for (int i = 0; i < n; ++i)
    if (hasIsolatedChord(basis_[i])) killRoot(i);
  if (kind == DiagramKind::D1) {
    for (const auto& r : relatorSet(Family::TwoT, degree).relators) {
      const auto& t = r.terms();
      if (t.size() == 1) {
        killRoot(index.at(t.begin()->first));
        continue;
      }
      if (t.size() != 2) throw std::logic_error("2T relator with more than two terms");
      auto it = t.begin();
      int x = index.at(it->first);
      Rational cx = it->second;
      ++it;
      int y = index.at(it->first);
      Rational cy = it->second;
      // cx X + cy Y = 0, so X = s Y with s = -cy/cx.
      int s = sgn(Rational(-cy / cx));
      auto [rx, sx] = find(x);
      auto [ry, sy] = find(y);
      if (rx == ry) {
        if (sx != s * sy) killed[rx] = true;
        continue;
      }
      // X = sx Rx, Y = sy Ry, X = s Y  =>  Rx = sx s sy Ry.
      parent[rx] = ry;
      rel[rx] = sx * s * sy;
      killed[ry] = killed[ry] || killed[rx];
    }
  }

  std::map<int, int> classOfRoot;
  std::vector<std::pair<int, int>> assignment(n, {-1, 0});
  // Representatives are the least diagrams of their classes (basis is sorted).
  std::vector<int> repIndex;
  for (int i = 0; i < n; ++i) {
    auto [root, s] = find(i);
    if (killed[root]) continue;
    auto it = classOfRoot.find(root);
    if (it == classOfRoot.end()) {
      it = classOfRoot.emplace(root, static_cast<int>(reps_.size())).first;
      reps_.push_back(basis_[i]);
      repIndex.push_back(i);
    }
    int cls = it->second;
    int repSign = find(repIndex[cls]).second;
    assignment[i] = {cls, s * repSign};
  }
  const bool vee = kind == DiagramKind::D1;
  const int q = basis_.empty() ? 0 : basis_.front().q;
  const int base = q + 1;
  int maxKey = 1;
  for (int i = 0; i < q; ++i) maxKey *= base;
  byKey_.assign(maxKey, {-1, 0});
  for (int i = 0; i < n; ++i) {
    lookup_[basis_[i]] = assignment[i];
    byKey_[keyOf(normalizeRanks(vee, structureRanksOf(basis_[i])), base)] = assignment[i];
  }
}

std::pair<int, int> ReducedClasses::classOf(const Diagram& d) const {
  auto it = lookup_.find(d);
  if (it == lookup_.end()) throw std::invalid_argument("diagram outside the reduced basis: " + d.str());
  return it->second;
}

std::pair<int, int> ReducedClasses::classOfRanks(const std::vector<int>& r) const {
  const bool vee = kind_ == DiagramKind::D1;
  const int q = basis_.empty() ? 0 : basis_.front().q;
  return byKey_.at(keyOf(normalizeRanks(vee, r), q + 1));
}

const ReducedClasses& ReducedClasses::get(DiagramKind kind, int degree) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<ReducedClasses>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(static_cast<int>(kind), degree);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, std::make_unique<ReducedClasses>(kind, degree)).first;
  return *it->second;
}

// ----------------------------------------------------------- NumericVector

void NumericVector::add(const Diagram& d, std::complex<double> v, double err) {
  auto& t = terms[d];
  t.value += v;
  t.error += err;
}

NumericTerm NumericVector::coefficient(const Diagram& d) const {
  auto it = terms.find(d);
  return it == terms.end() ? NumericTerm{} : it->second;
}

NumericVector NumericVector::operator+(const NumericVector& o) const {
  if (!terms.empty() && !o.terms.empty() && kind != o.kind) throw std::invalid_argument("adding vectors of different kinds");
  NumericVector r = *this;
  if (terms.empty()) r.kind = o.kind;
  r.maxDegree = std::max(maxDegree, o.maxDegree);
  for (const auto& [d, t] : o.terms) r.add(d, t.value, t.error);
  return r;
}

NumericVector NumericVector::scaled(double s) const {
  NumericVector r = *this;
  for (auto& [d, t] : r.terms) {
    t.value *= s;
    t.error *= std::abs(s);
  }
  return r;
}

nlohmann::json NumericVector::toJson() const {
  nlohmann::json ts = nlohmann::json::array();
  for (const auto& [d, t] : terms)
    ts.push_back({{"diagram", kzc::toJson(d)}, {"re", t.value.real()}, {"im", t.value.imag()}, {"err", t.error}});
  return {{"degree", maxDegree}, {"kind", kindName(kind)}, {"terms", ts}};
}

NumericVector NumericVector::fromJson(const nlohmann::json& j) {
  NumericVector v;
  v.maxDegree = j.at("degree").get<int>();
  v.kind = kindFromName(j.value("kind", std::string("D1")));
  for (const auto& t : j.at("terms"))
    v.add(diagramFromJson(t.at("diagram")), {t.at("re").get<double>(), t.at("im").get<double>()}, t.value("err", 0.0));
  return v;
}

// ------------------------------------------------------------ geometry

namespace {

const Cx kTwoPiI(0, 2 * M_PI);

struct KPoint {
  int branch;
  double key;  // altitude times branch direction: increasing along the knot
};

KPoint kpoint(const MorseKnot& k, int branch, double t) { return {branch, k.branches()[branch].direction * t}; }

// 1-based ranks of points in knot order.
template <std::size_t N>
std::array<int, N> ranksOf(const std::array<KPoint, N>& pts) {
  std::array<int, N> idx;
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (pts[a].branch != pts[b].branch) return pts[a].branch < pts[b].branch;
    return pts[a].key < pts[b].key;
  });
  std::array<int, N> r;
  for (std::size_t i = 0; i < N; ++i) r[idx[i]] = static_cast<int>(i) + 1;
  return r;
}

int downSign(const MorseKnot& k, std::initializer_list<int> branches) {
  int s = 1;
  for (int b : branches)
    if (k.branches()[b].direction < 0) s = -s;
  return s;
}

// Continuous logarithms of z_a - z_b (a < b) along the common altitude range
// of two branches, for one knot.
class PairLogs {
 public:
  explicit PairLogs(const MorseKnot& k) : k_(&k) {
    const int nb = static_cast<int>(k.branches().size());
    nb_ = nb;
    pairs_.resize(nb * nb);
    std::vector<double> vt;
    for (const auto& v : k.vertices()) vt.push_back(v.t);
    for (int a = 0; a < nb; ++a)
      for (int b = a + 1; b < nb; ++b) {
        Entry& e = pairs_[a * nb + b];
        const auto& ba = k.branches()[a];
        const auto& bb = k.branches()[b];
        e.lo = std::max(ba.tLow, bb.tLow);
        e.hi = std::min(ba.tHigh, bb.tHigh);
        if (!(e.lo < e.hi)) continue;
        e.valid = true;
        for (double t : vt)
          if (t > e.lo && t < e.hi) e.nodes.push_back(t);
        std::sort(e.nodes.begin(), e.nodes.end());
        e.nodes.erase(std::unique(e.nodes.begin(), e.nodes.end()), e.nodes.end());
        if (e.nodes.empty()) e.nodes.push_back(0.5 * (e.lo + e.hi));
        e.w.resize(e.nodes.size());
        e.L.resize(e.nodes.size());
        for (std::size_t i = 0; i < e.nodes.size(); ++i) e.w[i] = diff(a, b, e.nodes[i]);
        e.L[0] = std::log(e.w[0]);
        for (std::size_t i = 1; i < e.nodes.size(); ++i) e.L[i] = e.L[i - 1] + std::log(e.w[i] / e.w[i - 1]);
      }
  }

  bool overlap(int a, int b, double& lo, double& hi) const {
    if (a > b) std::swap(a, b);
    const Entry& e = pairs_[a * nb_ + b];
    lo = e.lo;
    hi = e.hi;
    return e.valid;
  }

  // log(z_a - z_b) up to a constant depending only on the unordered pair.
  Cx L(int a, int b, double t) const {
    if (a > b) std::swap(a, b);
    const Entry& e = pairs_[a * nb_ + b];
    auto it = std::upper_bound(e.nodes.begin(), e.nodes.end(), t);
    std::size_t j = it == e.nodes.begin() ? 0 : static_cast<std::size_t>(it - e.nodes.begin()) - 1;
    Cx w = diff(a, b, t);
    if (w == Cx(0)) throw std::runtime_error("divergent logarithm at a merging pair of strands");
    return e.L[j] + std::log(w / e.w[j]);
  }

  Cx increment(int a, int b, double t0, double t1) const { return L(a, b, t1) - L(a, b, t0); }

 private:
  struct Entry {
    bool valid = false;
    double lo = 0, hi = 0;
    std::vector<double> nodes;
    std::vector<Cx> w, L;
  };
  Cx diff(int a, int b, double t) const { return k_->position(a, t) - k_->position(b, t); }
  const MorseKnot* k_;
  int nb_ = 0;
  std::vector<Entry> pairs_;
};

// d/dt and d/dphi of log(z_a - z_b).
struct LogDerivs {
  Cx t, phi;
};
LogDerivs logDerivs(const KnotState& s, int a, int b, double t) {
  Cx w = s.knot.position(a, t) - s.knot.position(b, t);
  return {(s.knot.slope(a, t) - s.knot.slope(b, t)) / w, (s.velocity(a, t) - s.velocity(b, t)) / w};
}

struct VeeChoice {
  int mid, tip1, tip2;  // tip1 before tip2 along the knot
};

// V configurations on the strands present at one altitude.
std::vector<VeeChoice> veesAt(const std::vector<int>& strands) {
  std::vector<VeeChoice> out;
  for (int m : strands)
    for (std::size_t i = 0; i < strands.size(); ++i)
      for (std::size_t j = i + 1; j < strands.size(); ++j) {
        int a = strands[i], b = strands[j];
        if (a == m || b == m) continue;
        out.push_back({m, a, b});
      }
  return out;
}

struct Window {
  double lo, hi;
};

Window windowFor(const MorseKnot& k, const std::optional<std::pair<double, double>>& w) {
  Window r{k.tMin(), k.tMax()};
  if (w) {
    r.lo = std::max(r.lo, w->first);
    r.hi = std::min(r.hi, w->second);
  }
  return r;
}

std::vector<double> breakpointsIn(const MorseKnot& k) { return k.breakpoints(); }

// Degree-2 density: sum over V pairings at altitude t.
void addVeeDensity(const KnotState& s, double t, const ReducedClasses& cls, std::vector<Cx>& acc) {
  const MorseKnot& k = s.knot;
  auto strands = k.strandsAt(t);
  for (const auto& v : veesAt(strands)) {
    std::array<KPoint, 3> pts{kpoint(k, v.mid, t), kpoint(k, v.tip1, t), kpoint(k, v.tip2, t)};
    auto r = ranksOf(pts);
    auto [c, sg] = cls.classOfRanks({r[0], r[1], r[2]});
    if (c < 0) continue;
    LogDerivs A = logDerivs(s, v.mid, v.tip1, t);
    LogDerivs B = logDerivs(s, v.mid, v.tip2, t);
    Cx dens = A.phi * B.t - A.t * B.phi;
    acc[c] += static_cast<double>(sg * downSign(k, {v.mid, v.tip1, v.tip2})) * dens;
  }
}

// Degree-2 density restricted to one V-diagram, 2T partners kept apart.
void addSingleVeeDensity(const KnotState& s, double t, const Diagram& target, std::vector<Cx>& acc) {
  const MorseKnot& k = s.knot;
  for (const auto& v : veesAt(k.strandsAt(t))) {
    std::array<KPoint, 3> pts{kpoint(k, v.mid, t), kpoint(k, v.tip1, t), kpoint(k, v.tip2, t)};
    auto r = ranksOf(pts);
    Diagram d;
    d.q = 3;
    d.vees = {Vee{r[0], std::min(r[1], r[2]), std::max(r[1], r[2])}};
    if (!(d == target)) continue;
    LogDerivs A = logDerivs(s, v.mid, v.tip1, t);
    LogDerivs B = logDerivs(s, v.mid, v.tip2, t);
    acc[0] += static_cast<double>(downSign(k, {v.mid, v.tip1, v.tip2})) * (A.phi * B.t - A.t * B.phi);
  }
}

// Degree-3 density in the V altitude: V density times the chord integral
// over all chord altitudes (both faces), at fixed phi.
void addVeeChordDensity(const KnotState& s, const PairLogs& logs, double tV, const Window& win,
                        const ReducedClasses& cls, std::vector<Cx>& acc) {
  const MorseKnot& k = s.knot;
  auto strands = k.strandsAt(tV);
  const int nb = static_cast<int>(k.branches().size());
  for (const auto& v : veesAt(strands)) {
    LogDerivs A = logDerivs(s, v.mid, v.tip1, tV);
    LogDerivs B = logDerivs(s, v.mid, v.tip2, tV);
    Cx dens = A.phi * B.t - A.t * B.phi;
    int sv = downSign(k, {v.mid, v.tip1, v.tip2});
    for (int c1 = 0; c1 < nb; ++c1)
      for (int c2 = c1 + 1; c2 < nb; ++c2) {
        double lo, hi;
        if (!logs.overlap(c1, c2, lo, hi)) continue;
        lo = std::max(lo, win.lo);
        hi = std::min(hi, win.hi);
        if (!(lo < hi)) continue;
        double cuts[3] = {lo, tV, hi};
        int np = (tV > lo && tV < hi) ? 2 : 1;
        for (int p = 0; p < np; ++p) {
          double u0 = np == 2 ? cuts[p] : lo;
          double u1 = np == 2 ? cuts[p + 1] : hi;
          double tc = 0.5 * (u0 + u1);
          std::array<KPoint, 5> pts{kpoint(k, v.mid, tV), kpoint(k, v.tip1, tV), kpoint(k, v.tip2, tV),
                                    kpoint(k, c1, tc), kpoint(k, c2, tc)};
          auto r = ranksOf(pts);
          auto [c, sg] = cls.classOfRanks({r[0], r[1], r[2], r[3], r[4]});
          if (c < 0) continue;
          int sc = downSign(k, {c1, c2});
          acc[c] += static_cast<double>(sg * sv * sc) * dens * logs.increment(c1, c2, u0, u1);
        }
      }
  }
}

void requireConverged(const QuadratureResult& r, const char* what) {
  if (!r.converged) {
    double e = 0;
    for (double x : r.error) e = std::max(e, x);
    double v = 0;
    for (const auto& x : r.value) v = std::max(v, std::abs(x));
    // Accept a non-converged result only if the estimate is still tiny.
    if (e > 1e-6 * std::max(1.0, v)) throw std::runtime_error(std::string("quadrature did not converge: ") + what);
  }
}

}  // namespace

Diagram crossedChordDiagram() {
  Diagram d;
  d.q = 4;
  d.chords = {{1, 3}, {2, 4}};
  return d;
}

// -------------------------------------------------------------- Z (knots)

NumericVector kontsevichZ(const MorseKnot& k, int maxDeg, const QuadratureConfig& q) {
  if (maxDeg < 0 || maxDeg > 2) throw std::invalid_argument("kontsevichZ supports degrees 0..2");
  NumericVector out;
  out.kind = DiagramKind::D0;
  out.maxDegree = maxDeg;
  out.add(Diagram{}, 1.0, 0.0);
  // Degree 1: the single chord is isolated, hence zero modulo 1T.
  if (maxDeg < 2) return out;
  const ReducedClasses& cls = ReducedClasses::get(DiagramKind::D0, 2);
  PairLogs logs(k);
  const int nb = static_cast<int>(k.branches().size());
  KnotState st{k, std::vector<Cx>(k.vertices().size()), std::vector<double>(k.vertices().size())};
  auto f = [&](double t2, std::vector<Cx>& acc) {
    auto strands = k.strandsAt(t2);
    for (std::size_t i = 0; i < strands.size(); ++i)
      for (std::size_t j = i + 1; j < strands.size(); ++j) {
        int c = strands[i], d = strands[j];
        Cx ct = logDerivs(st, c, d, t2).t;
        int s2 = downSign(k, {c, d});
        for (int a = 0; a < nb; ++a)
          for (int b = a + 1; b < nb; ++b) {
            double lo, hi;
            if (!logs.overlap(a, b, lo, hi)) continue;
            hi = std::min(hi, t2);
            if (!(lo < hi)) continue;
            double t1 = 0.5 * (lo + hi);
            std::array<KPoint, 4> pts{kpoint(k, a, t1), kpoint(k, b, t1), kpoint(k, c, t2), kpoint(k, d, t2)};
            auto r = ranksOf(pts);
            auto [cl, sg] = cls.classOfRanks({r[0], r[1], r[2], r[3]});
            if (cl < 0) continue;
            acc[cl] += static_cast<double>(sg * s2 * downSign(k, {a, b})) * ct * logs.increment(a, b, lo, hi);
          }
      }
  };
  auto res = integrateAdaptive(f, cls.classCount(), k.tMin(), k.tMax(), breakpointsIn(k), q);
  requireConverged(res, "Kontsevich integral, degree 2");
  Cx norm = 1.0 / (kTwoPiI * kTwoPiI);
  for (int c = 0; c < cls.classCount(); ++c) out.add(cls.representatives()[c], norm * res.value[c], std::abs(norm) * res.error[c]);
  return out;
}

// ------------------------------------------------------------------- Z^1

namespace {

NumericVector z1Single(const KnotPath& path, const Diagram& target, int maxDeg, const QuadratureConfig& q,
                       const std::optional<std::pair<double, double>>& window) {
  if (maxDeg != 2 || target.kind() != DiagramKind::D1 || target.degree() != 2)
    throw std::invalid_argument("a single-diagram z1 needs a degree-2 V-diagram and maxDeg 2");
  auto outer = [&](double phi, std::vector<Cx>& acc) {
    KnotState st = path.at(phi);
    Window win = windowFor(st.knot, window);
    if (!(win.lo < win.hi)) return;
    auto f = [&](double t, std::vector<Cx>& a) {
      if (t > win.lo && t < win.hi) addSingleVeeDensity(st, t, target, a);
    };
    auto r = integrateAdaptive(f, 1, win.lo, win.hi, breakpointsIn(st.knot), q);
    requireConverged(r, "single-diagram z1 (altitude)");
    acc[0] += r.value[0];
    acc[1] += r.error[0];
  };
  auto res = integrateAdaptive(outer, 2, path.a(), path.b(), path.breakpoints(), q);
  requireConverged(res, "single-diagram z1 (path parameter)");
  NumericVector out;
  out.kind = DiagramKind::D1;
  out.maxDegree = 2;
  Cx norm = 1.0 / (kTwoPiI * kTwoPiI);
  out.add(target, norm * res.value[0], std::abs(norm) * (res.error[0] + std::abs(res.value[1])));
  return out;
}

}  // namespace

NumericVector z1(const KnotPath& path, int maxDeg, const QuadratureConfig& q, const Z1Options& opt) {
  if (maxDeg < 2 || maxDeg > 3) throw std::invalid_argument("z1 supports maximal degree 2 or 3");
  if (opt.single) return z1Single(path, *opt.single, maxDeg, q, opt.window);
  const ReducedClasses& c2 = ReducedClasses::get(DiagramKind::D1, 2);
  const ReducedClasses* c3 = maxDeg >= 3 ? &ReducedClasses::get(DiagramKind::D1, 3) : nullptr;
  const int n2 = c2.classCount();
  const int n3 = c3 ? c3->classCount() : 0;
  const int n = n2 + n3;

  auto outer = [&](double phi, std::vector<Cx>& acc) {
    KnotState st = path.at(phi);
    Window win = windowFor(st.knot, opt.window);
    if (!(win.lo < win.hi)) return;
    auto bps = breakpointsIn(st.knot);
    auto f2 = [&](double t, std::vector<Cx>& a) {
      if (t > win.lo && t < win.hi) addVeeDensity(st, t, c2, a);
    };
    auto r2 = integrateAdaptive(f2, n2, win.lo, win.hi, bps, q);
    requireConverged(r2, "z1 degree 2 (altitude)");
    for (int i = 0; i < n2; ++i) {
      acc[i] += r2.value[i];
      acc[n + i] += r2.error[i];
    }
    if (!c3) return;
    PairLogs logs(st.knot);
    auto f3 = [&](double t, std::vector<Cx>& a) { addVeeChordDensity(st, logs, t, win, *c3, a); };
    auto r3 = integrateAdaptive(f3, n3, win.lo, win.hi, bps, q);
    requireConverged(r3, "z1 degree 3 (altitude)");
    for (int i = 0; i < n3; ++i) {
      acc[n2 + i] += r3.value[i];
      acc[n + n2 + i] += r3.error[i];
    }
  };
  auto res = integrateAdaptive(outer, 2 * n, path.a(), path.b(), path.breakpoints(), q);
  requireConverged(res, "z1 (path parameter)");

  NumericVector out;
  out.kind = DiagramKind::D1;
  out.maxDegree = maxDeg;
  Cx norm2 = 1.0 / (kTwoPiI * kTwoPiI);
  Cx norm3 = norm2 / kTwoPiI;
  for (int i = 0; i < n2; ++i)
    out.add(c2.representatives()[i], norm2 * res.value[i], std::abs(norm2) * (res.error[i] + std::abs(res.value[n + i])));
  for (int i = 0; i < n3; ++i)
    out.add(c3->representatives()[i], norm3 * res.value[n2 + i],
            std::abs(norm3) * (res.error[n2 + i] + std::abs(res.value[n + n2 + i])));
  return out;
}

// ------------------------------------------------------------ braid slab

BraidSlab braidSlab(const KnotPath& path, double tMin, double tMax) {
  if (!(tMin < tMax)) throw std::invalid_argument("braid window must satisfy tMin < tMax");
  auto check = [&](const MorseKnot& k) {
    for (const auto& c : k.criticalPoints())
      if (c.altitude >= tMin && c.altitude <= tMax)
        throw std::invalid_argument("braid window contains a critical altitude");
  };
  std::vector<double> probes;
  for (double phi : path.breakpoints()) probes.push_back(phi);
  for (int i = 0; i < 64; ++i) probes.push_back(path.a() + (path.b() - path.a()) * (i + 0.5) / 64);
  for (double phi : probes) check(path.at(phi).knot);

  KnotState s0 = path.at(path.a());
  auto strands = s0.knot.strandsAt(0.5 * (tMin + tMax));
  BraidSlab slab;
  slab.strands = static_cast<int>(strands.size());
  slab.phiMin = path.a();
  slab.phiMax = path.b();
  slab.tMin = tMin;
  slab.tMax = tMax;
  for (int b : strands) slab.directions.push_back(s0.knot.branches()[b].direction);
  if (path.kind() == KnotPath::Kind::Rotation)
    for (double t : s0.knot.breakpoints())
      if (t > tMin && t < tMax) slab.tBreakpoints.push_back(t);
  auto cache = std::make_shared<std::pair<double, std::optional<KnotState>>>();
  slab.eval = [path, strands, cache](double phi, double t, int i, Cx& z, Cx& dphi, Cx& dt) {
    if (!cache->second || cache->first != phi) {
      cache->first = phi;
      cache->second = path.at(phi);
    }
    const KnotState& s = *cache->second;
    int b = strands.at(i);
    z = s.knot.position(b, t);
    dphi = s.velocity(b, t);
    dt = s.knot.slope(b, t);
  };
  return slab;
}

namespace {

struct LambdaTerm {
  int mid, first, second;  // chords {mid,first} < {mid,second} lexicographically
};

std::vector<LambdaTerm> lambdaTerms(int p) {
  std::vector<LambdaTerm> out;
  for (int j = 0; j < p; ++j)
    for (int i = 0; i < p; ++i)
      for (int k = i + 1; k < p; ++k) {
        if (i == j || k == j) continue;
        std::pair<int, int> e1{std::min(i, j), std::max(i, j)}, e2{std::min(j, k), std::max(j, k)};
        if (e1 < e2) out.push_back({j, i, k});
        else out.push_back({j, k, i});
      }
  return out;
}

struct SlabSample {
  std::vector<Cx> z, zphi, zt;
};

}  // namespace

NumericVector z1Braid(const BraidSlab& slab, int maxDeg, const QuadratureConfig& q) {
  if (maxDeg < 2 || maxDeg > 3) throw std::invalid_argument("z1Braid supports maximal degree 2 or 3");
  const int p = slab.strands;
  if (p < 0 || static_cast<int>(slab.directions.size()) != p) throw std::invalid_argument("braid strand data mismatch");
  if (!slab.eval) throw std::invalid_argument("braid slab without evaluator");
  const ReducedClasses& c2 = ReducedClasses::get(DiagramKind::D1, 2);
  const ReducedClasses* c3 = maxDeg >= 3 ? &ReducedClasses::get(DiagramKind::D1, 3) : nullptr;
  const int n2 = c2.classCount(), n3 = c3 ? c3->classCount() : 0;
  auto lam = lambdaTerms(p);

  auto sample = [&](double phi, double t) {
    SlabSample s;
    s.z.resize(p);
    s.zphi.resize(p);
    s.zt.resize(p);
    for (int i = 0; i < p; ++i) slab.eval(phi, t, i, s.z[i], s.zphi[i], s.zt[i]);
    for (int i = 0; i < p; ++i)
      for (int j = i + 1; j < p; ++j)
        if (std::abs(s.z[i] - s.z[j]) == 0) throw std::runtime_error("braid strands collide");
    return s;
  };
  auto kp = [&](int strand, double t) { return KPoint{strand, slab.directions[strand] * t}; };
  auto down = [&](std::initializer_list<int> ss) {
    int r = 1;
    for (int x : ss)
      if (slab.directions[x] < 0) r = -r;
    return r;
  };
  // Lambda at one level: (2-form coefficient of dphi ^ dt) per term.
  auto lambdaDensity = [&](const SlabSample& s, const LambdaTerm& l) {
    Cx wa = s.z[l.mid] - s.z[l.first], wb = s.z[l.mid] - s.z[l.second];
    Cx at = (s.zt[l.mid] - s.zt[l.first]) / wa, ap = (s.zphi[l.mid] - s.zphi[l.first]) / wa;
    Cx bt = (s.zt[l.mid] - s.zt[l.second]) / wb, bp = (s.zphi[l.mid] - s.zphi[l.second]) / wb;
    return ap * bt - at * bp;
  };
  auto omegaT = [&](const SlabSample& s, int i, int j) { return (s.zt[i] - s.zt[j]) / (s.z[i] - s.z[j]); };

  std::vector<double> cuts{slab.tMin};
  for (double t : slab.tBreakpoints)
    if (t > slab.tMin && t < slab.tMax) cuts.push_back(t);
  cuts.push_back(slab.tMax);
  std::sort(cuts.begin(), cuts.end());

  auto run = [&](int order, std::vector<Cx>& v2, std::vector<Cx>& v3) {
    v2.assign(n2, 0.0);
    v3.assign(n3, 0.0);
    const GaussRule& g = gaussLegendre(order);
    const double hp = 0.5 * (slab.phiMax - slab.phiMin), cp = 0.5 * (slab.phiMax + slab.phiMin);
    for (int ip = 0; ip < order; ++ip) {
      double phi = cp + hp * g.nodes[ip];
      double wphi = hp * g.weights[ip];
      // Degree 2: one level.
      for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
        double h = 0.5 * (cuts[c + 1] - cuts[c]), m = 0.5 * (cuts[c + 1] + cuts[c]);
        for (int it = 0; it < order; ++it) {
          double t = m + h * g.nodes[it];
          SlabSample s = sample(phi, t);
          for (const auto& l : lam) {
            std::array<KPoint, 3> pts{kp(l.mid, t), kp(l.first, t), kp(l.second, t)};
            auto r = ranksOf(pts);
            auto [cl, sg] = c2.classOfRanks({r[0], r[1], r[2]});
            if (cl < 0) continue;
            v2[cl] += wphi * h * g.weights[it] * static_cast<double>(sg * down({l.mid, l.first, l.second})) * lambdaDensity(s, l);
          }
        }
      }
      if (!c3) continue;
      // Degree 3: Lambda(t1) Omega_t(t2) + Omega_t(t1) Lambda(t2), t1 < t2.
      auto addPair = [&](double t1, double t2, double w, const SlabSample& s1, const SlabSample& s2) {
        for (int face = 0; face < 2; ++face) {
          const SlabSample& sv = face == 0 ? s1 : s2;
          const SlabSample& sc = face == 0 ? s2 : s1;
          double tv = face == 0 ? t1 : t2, tc = face == 0 ? t2 : t1;
          for (const auto& l : lam) {
            Cx lv = lambdaDensity(sv, l);
            for (int i = 0; i < p; ++i)
              for (int j = i + 1; j < p; ++j) {
                std::array<KPoint, 5> pts{kp(l.mid, tv), kp(l.first, tv), kp(l.second, tv), kp(i, tc), kp(j, tc)};
                auto r = ranksOf(pts);
                auto [cl, sg] = c3->classOfRanks({r[0], r[1], r[2], r[3], r[4]});
                if (cl < 0) continue;
                int sgn = sg * down({l.mid, l.first, l.second}) * down({i, j});
                v3[cl] += w * static_cast<double>(sgn) * lv * omegaT(sc, i, j);
              }
          }
        }
      };
      for (std::size_t a = 0; a + 1 < cuts.size(); ++a)
        for (std::size_t b = a; b + 1 < cuts.size(); ++b) {
          double ha = cuts[a + 1] - cuts[a];
          for (int i1 = 0; i1 < order; ++i1)
            for (int i2 = 0; i2 < order; ++i2) {
              double u = 0.5 * (1 + g.nodes[i1]), v = 0.5 * (1 + g.nodes[i2]);
              double wu = 0.5 * g.weights[i1], wv = 0.5 * g.weights[i2];
              double t1, t2, jac;
              if (a == b) {
                // Collapsed square onto the triangle t1 < t2 inside one cell.
                t1 = cuts[a] + ha * u;
                t2 = t1 + (cuts[a + 1] - t1) * v;
                jac = ha * (cuts[a + 1] - t1);
              } else {
                double hb = cuts[b + 1] - cuts[b];
                t1 = cuts[a] + ha * u;
                t2 = cuts[b] + hb * v;
                jac = ha * hb;
              }
              SlabSample s1 = sample(phi, t1), s2 = sample(phi, t2);
              addPair(t1, t2, wphi * wu * wv * jac, s1, s2);
            }
        }
    }
  };
  std::vector<Cx> a2, a3, b2, b3;
  run(q.order, a2, a3);
  run(2 * q.order, b2, b3);

  NumericVector out;
  out.kind = DiagramKind::D1;
  out.maxDegree = maxDeg;
  Cx norm2 = 1.0 / (kTwoPiI * kTwoPiI), norm3 = norm2 / kTwoPiI;
  for (int i = 0; i < n2; ++i) out.add(c2.representatives()[i], norm2 * b2[i], std::abs(norm2) * std::abs(b2[i] - a2[i]));
  for (int i = 0; i < n3; ++i)
    out.add(c3->representatives()[i], norm3 * b3[i], std::abs(norm3) * std::abs(b3[i] - a3[i]));
  return out;
}

// --------------------------------------------------------------- Gramain

KnotPath gramain(const MorseKnot& k) { return KnotPath::rotation(k); }

namespace {

// Integer combination of pair logarithms at given altitudes, per class.
struct EndpointKey {
  int cls, a, b;
  double t;
  auto operator<=>(const EndpointKey&) const = default;
};

void addVeeIntegral(std::map<EndpointKey, long>& acc, int cls, int sign, const VeeChoice& v, double u0, double u1) {
  // i (B - A) over [u0, u1], A = log(z_mid - z_tip1), B = log(z_mid - z_tip2);
  // the factor i is applied by the caller.
  auto pk = [](int x, int y) { return std::make_pair(std::min(x, y), std::max(x, y)); };
  auto [a1, b1] = pk(v.mid, v.tip1);
  auto [a2, b2] = pk(v.mid, v.tip2);
  acc[{cls, a2, b2, u1}] += sign;
  acc[{cls, a2, b2, u0}] -= sign;
  acc[{cls, a1, b1, u1}] -= sign;
  acc[{cls, a1, b1, u0}] += sign;
}

void evaluateEndpoints(const std::map<EndpointKey, long>& acc, const PairLogs& logs, Cx factor, std::vector<Cx>& out) {
  for (const auto& [key, c] : acc) {
    if (c == 0) continue;
    out[key.cls] += factor * static_cast<double>(c) * logs.L(key.a, key.b, key.t);
  }
}

// Common altitude range of three branches.
bool tripleRange(const MorseKnot& k, const VeeChoice& v, double& lo, double& hi) {
  const auto& bs = k.branches();
  lo = std::max({bs[v.mid].tLow, bs[v.tip1].tLow, bs[v.tip2].tLow});
  hi = std::min({bs[v.mid].tHigh, bs[v.tip1].tHigh, bs[v.tip2].tHigh});
  return lo < hi;
}

std::vector<VeeChoice> allVees(const MorseKnot& k) {
  std::vector<int> all(k.branches().size());
  std::iota(all.begin(), all.end(), 0);
  std::vector<VeeChoice> out;
  for (const auto& v : veesAt(all)) {
    double lo, hi;
    if (tripleRange(k, v, lo, hi)) out.push_back(v);
  }
  return out;
}

}  // namespace

NumericVector reducedGramainOracle(const MorseKnot& k, int maxDeg, const QuadratureConfig& q) {
  if (maxDeg < 2 || maxDeg > 3) throw std::invalid_argument("reducedGramainOracle supports maximal degree 2 or 3");
  const ReducedClasses& c2 = ReducedClasses::get(DiagramKind::D1, 2);
  const ReducedClasses* c3 = maxDeg >= 3 ? &ReducedClasses::get(DiagramKind::D1, 3) : nullptr;
  PairLogs logs(k);
  const Cx I(0, 1);
  const auto vees = allVees(k);

  NumericVector out;
  out.kind = DiagramKind::D1;
  out.maxDegree = maxDeg;
  // The phi integral contributes 2 pi; the V density is i (B_t - A_t).
  const Cx norm2 = 2 * M_PI * I / (kTwoPiI * kTwoPiI);

  // Degree 2: the altitude integral is exact.
  {
    std::map<EndpointKey, long> acc;
    for (const auto& v : vees) {
      double lo, hi;
      tripleRange(k, v, lo, hi);
      double t = 0.5 * (lo + hi);
      std::array<KPoint, 3> pts{kpoint(k, v.mid, t), kpoint(k, v.tip1, t), kpoint(k, v.tip2, t)};
      auto r = ranksOf(pts);
      auto [cl, sg] = c2.classOfRanks({r[0], r[1], r[2]});
      if (cl < 0) continue;
      addVeeIntegral(acc, cl, sg * downSign(k, {v.mid, v.tip1, v.tip2}), v, lo, hi);
    }
    std::vector<Cx> vals(c2.classCount());
    evaluateEndpoints(acc, logs, 1.0, vals);
    for (int i = 0; i < c2.classCount(); ++i) out.add(c2.representatives()[i], norm2 * vals[i], 1e-14 * std::abs(norm2 * vals[i]));
  }
  if (!c3) return out;

  // Degree 3: outer integral over the chord altitude, inner V integrals exact.
  const int nb = static_cast<int>(k.branches().size());
  auto f = [&](double tc, std::vector<Cx>& a) {
    auto strands = k.strandsAt(tc);
    KnotState st{k, std::vector<Cx>(k.vertices().size()), std::vector<double>(k.vertices().size())};
    for (std::size_t i = 0; i < strands.size(); ++i)
      for (std::size_t j = i + 1; j < strands.size(); ++j) {
        int x = strands[i], y = strands[j];
        Cx ct = logDerivs(st, x, y, tc).t;
        int sc = downSign(k, {x, y});
        std::map<EndpointKey, long> acc;
        for (const auto& v : vees) {
          double lo, hi;
          tripleRange(k, v, lo, hi);
          double cuts[3] = {lo, tc, hi};
          int np = (tc > lo && tc < hi) ? 2 : 1;
          for (int p = 0; p < np; ++p) {
            double u0 = np == 2 ? cuts[p] : lo;
            double u1 = np == 2 ? cuts[p + 1] : hi;
            double tv = 0.5 * (u0 + u1);
            std::array<KPoint, 5> pts{kpoint(k, v.mid, tv), kpoint(k, v.tip1, tv), kpoint(k, v.tip2, tv),
                                      kpoint(k, x, tc), kpoint(k, y, tc)};
            auto r = ranksOf(pts);
            auto [cl, sg] = c3->classOfRanks({r[0], r[1], r[2], r[3], r[4]});
            if (cl < 0) continue;
            addVeeIntegral(acc, cl, sg * sc * downSign(k, {v.mid, v.tip1, v.tip2}), v, u0, u1);
          }
        }
        evaluateEndpoints(acc, logs, ct, a);
      }
    (void)nb;
  };
  auto res = integrateAdaptive(f, c3->classCount(), k.tMin(), k.tMax(), k.breakpoints(), q);
  requireConverged(res, "rotation oracle, degree 3");
  const Cx norm3 = 2 * M_PI * I / (kTwoPiI * kTwoPiI * kTwoPiI);
  for (int i = 0; i < c3->classCount(); ++i)
    out.add(c3->representatives()[i], norm3 * res.value[i], std::abs(norm3) * res.error[i]);
  return out;
}

// ------------------------------------------------------------ corrections

namespace {

Series<Cx> toSeries(const NumericVector& v, int maxDeg) {
  Series<Cx> s(maxDeg);
  for (const auto& [d, t] : v.terms) s.add(d, t.value);
  return s;
}

NumericVector reduceSeries(const Series<Cx>& s, DiagramKind kind, int minDeg, int maxDeg, const NumericVector& errors) {
  NumericVector out;
  out.kind = kind;
  out.maxDegree = maxDeg;
  for (int deg = minDeg; deg <= maxDeg; ++deg) {
    if (deg == 0) {
      out.add(Diagram{}, s.constant(), 0.0);
      continue;
    }
    if (kind == DiagramKind::D1 && deg < 2) continue;
    const ReducedClasses& cls = ReducedClasses::get(kind, deg);
    for (const auto& [d, c] : s[deg].terms()) {
      auto [cl, sg] = cls.classOf(d);
      if (cl < 0) continue;
      out.add(cls.representatives()[cl], static_cast<double>(sg) * c, 0.0);
    }
  }
  for (auto& [d, t] : out.terms) t.error = errors.coefficient(d).error;
  return out;
}

Series<Cx> humpCorrection(const MorseKnot& hump, int c, int maxDeg, const QuadratureConfig& q, double& err) {
  if (hump.criticalCount() != 2) throw std::invalid_argument("the hump must have exactly two critical points");
  if (c % 2 != 0) throw std::invalid_argument("critical-point count must be even");
  NumericVector zh = kontsevichZ(hump, std::min(maxDeg, 2), q);
  err = 0;
  for (const auto& [d, t] : zh.terms) err += t.error;
  Series<Cx> s = toSeries(zh, maxDeg);
  return seriesPow(s, -c / 2, maxDeg);
}

}  // namespace

NumericVector zHat(const MorseKnot& k, const MorseKnot& hump, int maxDeg, const QuadratureConfig& q) {
  if (maxDeg < 0 || maxDeg > 2) throw std::invalid_argument("zHat supports degrees 0..2");
  NumericVector zk = kontsevichZ(k, maxDeg, q);
  double herr = 0;
  Series<Cx> corr = humpCorrection(hump, k.criticalCount(), maxDeg, q, herr);
  Series<Cx> prod = seriesMul(corr, toSeries(zk, maxDeg), maxDeg);
  NumericVector out = reduceSeries(prod, DiagramKind::D0, 0, maxDeg, zk);
  for (auto& [d, t] : out.terms)
    if (d.degree() > 0) t.error += 0.5 * k.criticalCount() * herr;
  return out;
}

NumericVector zHat1(const KnotPath& path, const MorseKnot& hump, int maxDeg, const QuadratureConfig& q) {
  NumericVector z = z1(path, maxDeg, q);
  int c = path.at(path.a()).knot.criticalCount();
  double herr = 0;
  Series<Cx> corr = humpCorrection(hump, c, maxDeg, q, herr);
  Series<Cx> prod = seriesMul(corr, toSeries(z, maxDeg), maxDeg);
  return reduceSeries(prod, DiagramKind::D1, 2, maxDeg, z);
}

// ------------------------------------------------------------ functionals

std::complex<double> evalFunctional(const FormalSum& w, const NumericVector& v) {
  Cx s = 0;
  for (const auto& [d, c] : w.terms()) {
    if (d.kind() != v.kind) throw std::invalid_argument("functional and vector have different diagram kinds");
    auto it = v.terms.find(d);
    if (it != v.terms.end()) s += c.get_d() * it->second.value;
  }
  return s;
}

double evalError(const FormalSum& w, const NumericVector& v) {
  double e = 0;
  for (const auto& [d, c] : w.terms()) {
    auto it = v.terms.find(d);
    if (it != v.terms.end()) e += std::abs(c.get_d()) * it->second.error;
  }
  return e;
}

// ------------------------------------------------------------- comparisons

bool valuesAgree(Cx a, double errA, Cx b, double errB, double relTol) {
  if (std::abs(a) <= 10 * errA && std::abs(b) <= 10 * errB) return true;
  return std::abs(a - b) <= relTol * std::max(std::abs(a), std::abs(b));
}

std::vector<FunctionalComparison> compareOnWeightSystems(const NumericVector& a, const NumericVector& b, int maxDeg,
                                                         double relTol) {
  std::vector<FunctionalComparison> out;
  for (int m = 2; m <= maxDeg; ++m) {
    auto ws = weightSystemBasis(m);
    for (std::size_t i = 0; i < ws.size(); ++i) {
      FunctionalComparison c;
      c.degree = m;
      c.index = static_cast<int>(i);
      c.first = evalFunctional(ws[i], a);
      c.second = evalFunctional(ws[i], b);
      c.firstError = evalError(ws[i], a);
      c.secondError = evalError(ws[i], b);
      c.agree = valuesAgree(c.first, c.firstError, c.second, c.secondError, relTol);
      out.push_back(c);
    }
  }
  return out;
}

std::vector<FunctionalComparison> gramainConsistency(const MorseKnot& k, double relTol, const QuadratureConfig& q) {
  return compareOnWeightSystems(z1(gramain(k), 3, q), reducedGramainOracle(k, 3, q), 3, relTol);
}

nlohmann::json toJson(const FunctionalComparison& c) {
  return {{"degree", c.degree},
          {"index", c.index},
          {"first", {{"re", c.first.real()}, {"im", c.first.imag()}, {"err", c.firstError}}},
          {"second", {{"re", c.second.real()}, {"im", c.second.imag()}, {"err", c.secondError}}},
          {"agree", c.agree}};
}

}  // namespace kzc
