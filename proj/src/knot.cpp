#include "kzc/knot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace kzc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Vec3 {
  double x, y, z;
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
};

Vec3 toVec(const KnotVertex& v) { return {v.x, v.y, v.t}; }

// Distance between segments [p0,p1] and [q0,q1].
double segmentDistance(const Vec3& p0, const Vec3& p1, const Vec3& q0, const Vec3& q1) {
  Vec3 d1 = p1 - p0, d2 = q1 - q0, r = p0 - q0;
  double a = d1.dot(d1), e = d2.dot(d2), f = d2.dot(r);
  double s = 0, t = 0;
  double c = d1.dot(r);
  double b = d1.dot(d2);
  double denom = a * e - b * b;
  if (denom > 1e-14 * a * e) s = std::clamp((b * f - c * e) / denom, 0.0, 1.0);
  t = (b * s + f) / e;
  if (t < 0) {
    t = 0;
    s = std::clamp(-c / a, 0.0, 1.0);
  } else if (t > 1) {
    t = 1;
    s = std::clamp((b - c) / a, 0.0, 1.0);
  }
  Vec3 diff = (p0 + d1 * s) - (q0 + d2 * t);
  return std::sqrt(diff.dot(diff));
}

int sign(double v) { return v > 0 ? 1 : -1; }

}  // namespace

MorseKnot::MorseKnot(std::vector<KnotVertex> vertices, bool checkEmbedding) : vertices_(std::move(vertices)) {
  const int n = static_cast<int>(vertices_.size());
  if (n == 0) throw std::invalid_argument("knot needs at least one vertex");
  for (const auto& v : vertices_)
    if (!std::isfinite(v.x) || !std::isfinite(v.y) || !std::isfinite(v.t))
      throw std::invalid_argument("non-finite vertex coordinate");
  if (vertices_.front().x != 0 || vertices_.front().y != 0 || vertices_.back().x != 0 || vertices_.back().y != 0)
    throw std::invalid_argument("first and last vertices must lie on the axis x = y = 0");

  // Direction of segment k (from vertex k to k+1); the rays point upward.
  std::vector<int> dir(n + 1, 1);
  for (int k = 0; k + 1 < n; ++k) {
    double dt = vertices_[k + 1].t - vertices_[k].t;
    if (dt == 0) {
      std::ostringstream os;
      os << "horizontal segment between vertices " << k << " and " << k + 1;
      throw NotMorse(os.str());
    }
    dir[k + 1] = sign(dt);
  }
  // dir[k] is the direction of the segment arriving at vertex k, dir[k+1]
  // the one leaving it.
  for (int k = 0; k < n; ++k)
    if (dir[k] != dir[k + 1]) critical_.push_back({k, vertices_[k].t, dir[k] > 0});
  for (std::size_t i = 0; i < critical_.size(); ++i)
    for (std::size_t j = i + 1; j < critical_.size(); ++j)
      if (std::abs(critical_[i].altitude - critical_[j].altitude) < 1e-12) {
        std::ostringstream os;
        os << "critical vertices " << critical_[i].vertex << " and " << critical_[j].vertex << " share an altitude";
        throw NotMorse(os.str());
      }

  int start = -1;
  for (int k = 0; k <= n; ++k) {
    bool ends = (k == n) || (k < n && dir[k] != dir[k + 1]);
    if (!ends) continue;
    Branch b;
    b.firstVertex = start;
    b.lastVertex = k;
    b.direction = dir[k];
    double t0 = start < 0 ? -kInf : vertices_[start].t;
    double t1 = k >= n ? kInf : vertices_[k].t;
    b.tLow = std::min(t0, t1);
    b.tHigh = std::max(t0, t1);
    branches_.push_back(b);
    start = k;
  }

  if (!checkEmbedding) return;
  double lo = tMin() - 1, hi = tMax() + 1;
  std::vector<std::pair<Vec3, Vec3>> segs;
  segs.push_back({{0, 0, lo}, toVec(vertices_.front())});
  for (int k = 0; k + 1 < n; ++k) segs.push_back({toVec(vertices_[k]), toVec(vertices_[k + 1])});
  segs.push_back({toVec(vertices_.back()), {0, 0, hi}});
  double scale = std::max(1.0, hi - lo);
  double tol = 1e-9 * scale;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    for (std::size_t j = i + 1; j < segs.size(); ++j) {
      double d;
      if (j == i + 1) {
        // Adjacent segments share a vertex; test that they do not fold back.
        Vec3 u = segs[i].first - segs[i].second, w = segs[j].second - segs[j].first;
        double cosang = u.dot(w) / std::sqrt(u.dot(u) * w.dot(w));
        d = cosang > 1 - 1e-12 ? 0 : 1;
      } else {
        d = segmentDistance(segs[i].first, segs[i].second, segs[j].first, segs[j].second);
      }
      if (d < tol) {
        std::ostringstream os;
        os << "segments " << i << " and " << j << " meet";
        throw SelfIntersection(os.str());
      }
    }
  }
}

double MorseKnot::tMin() const {
  double m = kInf;
  for (const auto& v : vertices_) m = std::min(m, v.t);
  return m;
}

double MorseKnot::tMax() const {
  double m = -kInf;
  for (const auto& v : vertices_) m = std::max(m, v.t);
  return m;
}

int MorseKnot::segmentAt(int branch, double t) const {
  const Branch& b = branches_.at(branch);
  const int n = static_cast<int>(vertices_.size());
  int first = std::max(b.firstVertex, 0);
  int last = std::min(b.lastVertex, n - 1);
  // Vertices first..last are monotone in altitude along the branch.
  auto above = [&](int k) { return b.direction > 0 ? vertices_[k].t > t : vertices_[k].t < t; };
  // Smallest k in [first, last] with vertex k strictly past t.
  int lo = first, hi = last + 1;
  while (lo < hi) {
    int mid = (lo + hi) / 2;
    if (above(mid)) hi = mid;
    else lo = mid + 1;
  }
  // Segment lo-1 joins vertices lo-1 and lo; on a decreasing branch "past"
  // means lower, so the same formula applies.
  return lo - 1;
}

Complex MorseKnot::position(int branch, double t) const {
  int k = segmentAt(branch, t);
  const int n = static_cast<int>(vertices_.size());
  if (k < 0 || k >= n - 1) return {0, 0};
  const auto& v0 = vertices_[k];
  const auto& v1 = vertices_[k + 1];
  double s = (t - v0.t) / (v1.t - v0.t);
  return {v0.x + s * (v1.x - v0.x), v0.y + s * (v1.y - v0.y)};
}

Complex MorseKnot::slope(int branch, double t) const {
  int k = segmentAt(branch, t);
  const int n = static_cast<int>(vertices_.size());
  if (k < 0 || k >= n - 1) return {0, 0};
  const auto& v0 = vertices_[k];
  const auto& v1 = vertices_[k + 1];
  return Complex(v1.x - v0.x, v1.y - v0.y) / (v1.t - v0.t);
}

std::vector<int> MorseKnot::strandsAt(double t) const {
  std::vector<int> out;
  for (int b = 0; b < static_cast<int>(branches_.size()); ++b)
    if (branches_[b].tLow < t && t < branches_[b].tHigh) out.push_back(b);
  return out;
}

std::vector<double> MorseKnot::breakpoints() const {
  std::vector<double> ts;
  for (const auto& v : vertices_) ts.push_back(v.t);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  return ts;
}

MorseKnot straightLineKnot() { return MorseKnot({{0, 0, 0}}); }

nlohmann::json toJson(const MorseKnot& k) {
  nlohmann::json v = nlohmann::json::array();
  for (const auto& p : k.vertices()) v.push_back({p.x, p.y, p.t});
  return {{"type", "pl"}, {"vertices", v}};
}

MorseKnot knotFromJson(const nlohmann::json& j) {
  if (!j.is_object() || j.value("type", "") != "pl" || !j.contains("vertices"))
    throw std::invalid_argument("knot JSON must be {\"type\":\"pl\",\"vertices\":[...]}");
  std::vector<KnotVertex> vs;
  for (const auto& p : j.at("vertices")) {
    if (!p.is_array() || p.size() != 3) throw std::invalid_argument("knot vertex must be [x,y,t]");
    vs.push_back({p[0].get<double>(), p[1].get<double>(), p[2].get<double>()});
  }
  return MorseKnot(std::move(vs));
}

MorseKnot loadKnot(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open knot file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("malformed knot file " + path + ": " + e.what());
  }
  return knotFromJson(j);
}

Complex KnotState::velocity(int branch, double t) const {
  int k = knot.segmentAt(branch, t);
  const auto& vs = knot.vertices();
  const int n = static_cast<int>(vs.size());
  if (k < 0 || k >= n - 1) return {0, 0};
  Complex z0(vs[k].x, vs[k].y), z1(vs[k + 1].x, vs[k + 1].y);
  double t0 = vs[k].t, t1 = vs[k + 1].t;
  double h = t1 - t0;
  double s = (t - t0) / h;
  double ds = (-dt[k] * h - (t - t0) * (dt[k + 1] - dt[k])) / (h * h);
  return dz[k] + (dz[k + 1] - dz[k]) * s + (z1 - z0) * ds;
}

KnotPath KnotPath::rotation(const MorseKnot& k) {
  KnotPath p;
  p.kind_ = Kind::Rotation;
  p.frames_ = {k};
  p.a_ = 0;
  p.b_ = 2 * M_PI;
  return p;
}

namespace {

MorseKnot lerpKnot(const MorseKnot& f0, const MorseKnot& f1, double s, bool check) {
  std::vector<KnotVertex> vs(f0.vertices().size());
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const auto& u = f0.vertices()[i];
    const auto& w = f1.vertices()[i];
    vs[i] = {u.x + s * (w.x - u.x), u.y + s * (w.y - u.y), u.t + s * (w.t - u.t)};
  }
  return MorseKnot(std::move(vs), check);
}

std::vector<int> criticalVertices(const MorseKnot& k) {
  std::vector<int> v;
  for (const auto& c : k.criticalPoints()) v.push_back(c.vertex);
  return v;
}

}  // namespace

KnotPath KnotPath::keyframes(std::vector<MorseKnot> frames, double a, double b, int samplesPerSegment) {
  if (frames.size() < 2) throw std::invalid_argument("a keyframe path needs at least two frames");
  if (!(b > a)) throw std::invalid_argument("keyframe range must satisfy a < b");
  const auto n = frames.front().vertices().size();
  const auto crit = criticalVertices(frames.front());
  for (const auto& f : frames) {
    if (f.vertices().size() != n) throw std::invalid_argument("keyframes must have equal vertex counts");
    if (criticalVertices(f) != crit)
      throw NotMorse("keyframes differ in their critical points (perestroikas are not supported)");
  }
  for (std::size_t j = 0; j + 1 < frames.size(); ++j)
    for (int s = 1; s < samplesPerSegment; ++s) {
      MorseKnot m = lerpKnot(frames[j], frames[j + 1], static_cast<double>(s) / samplesPerSegment, true);
      if (criticalVertices(m) != crit) throw NotMorse("intermediate knot changes its critical points");
    }
  KnotPath p;
  p.kind_ = Kind::Keyframes;
  p.frames_ = std::move(frames);
  p.a_ = a;
  p.b_ = b;
  return p;
}

std::vector<double> KnotPath::breakpoints() const {
  if (kind_ == Kind::Rotation) return {a_, b_};
  std::vector<double> out;
  const int m = static_cast<int>(frames_.size()) - 1;
  for (int j = 0; j <= m; ++j) out.push_back(a_ + (b_ - a_) * j / m);
  return out;
}

KnotState KnotPath::at(double phi) const {
  double sign = 1;
  if (reversed_) {
    phi = a_ + b_ - phi;
    sign = -1;
  }
  KnotState st;
  if (kind_ == Kind::Rotation) {
    const auto& base = frames_.front().vertices();
    std::vector<KnotVertex> vs(base.size());
    Complex rot = std::polar(1.0, phi);
    for (std::size_t i = 0; i < base.size(); ++i) {
      Complex z = Complex(base[i].x, base[i].y) * rot;
      vs[i] = {z.real(), z.imag(), base[i].t};
      st.dz.push_back(sign * Complex(0, 1) * z);
      st.dt.push_back(0);
    }
    st.knot = MorseKnot(std::move(vs), false);
    return st;
  }
  const int m = static_cast<int>(frames_.size()) - 1;
  double h = (b_ - a_) / m;
  int j = std::clamp(static_cast<int>(std::floor((phi - a_) / h)), 0, m - 1);
  double s = (phi - a_ - j * h) / h;
  st.knot = lerpKnot(frames_[j], frames_[j + 1], s, false);
  const auto& u = frames_[j].vertices();
  const auto& w = frames_[j + 1].vertices();
  for (std::size_t i = 0; i < u.size(); ++i) {
    st.dz.push_back(sign * Complex(w[i].x - u[i].x, w[i].y - u[i].y) / h);
    st.dt.push_back(sign * (w[i].t - u[i].t) / h);
  }
  return st;
}

KnotPath KnotPath::inverse() const {
  KnotPath p = *this;
  p.reversed_ = !reversed_;
  return p;
}

KnotPath KnotPath::then(const KnotPath& other) const {
  auto materialize = [](const KnotPath& p) {
    if (p.kind_ != Kind::Keyframes) throw std::invalid_argument("only keyframe paths can be composed");
    std::vector<MorseKnot> f = p.frames_;
    if (p.reversed_) std::reverse(f.begin(), f.end());
    return f;
  };
  auto f1 = materialize(*this);
  auto f2 = materialize(other);
  const auto& last = f1.back().vertices();
  const auto& first = f2.front().vertices();
  if (last.size() != first.size()) throw std::invalid_argument("composed paths do not meet");
  for (std::size_t i = 0; i < last.size(); ++i)
    if (last[i].x != first[i].x || last[i].y != first[i].y || last[i].t != first[i].t)
      throw std::invalid_argument("composed paths do not meet");
  // Equal spacing per frame is kept by requiring equal step lengths.
  double h1 = (b_ - a_) / (f1.size() - 1), h2 = (other.b_ - other.a_) / (f2.size() - 1);
  if (std::abs(h1 - h2) > 1e-12 * std::max(1.0, std::abs(h1)))
    throw std::invalid_argument("composed keyframe paths must use the same step per frame");
  f1.insert(f1.end(), f2.begin() + 1, f2.end());
  KnotPath p;
  p.kind_ = Kind::Keyframes;
  p.frames_ = std::move(f1);
  p.a_ = a_;
  p.b_ = b_ + (other.b_ - other.a_);
  return p;
}

nlohmann::json toJson(const KnotPath& p) {
  if (p.kind() == KnotPath::Kind::Rotation) {
    nlohmann::json j = {{"type", "rotation"}, {"knot", toJson(p.frames().front())}};
    if (p.reversed()) j["reversed"] = true;
    return j;
  }
  nlohmann::json frames = nlohmann::json::array();
  for (const auto& f : p.frames()) frames.push_back(toJson(f));
  nlohmann::json j = {{"type", "keyframes"}, {"frames", frames}, {"range", {p.a(), p.b()}}};
  if (p.reversed()) j["reversed"] = true;
  return j;
}

KnotPath pathFromJson(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("type")) throw std::invalid_argument("path JSON needs a type");
  std::string type = j.at("type").get<std::string>();
  KnotPath p;
  if (type == "rotation") {
    p = KnotPath::rotation(knotFromJson(j.at("knot")));
  } else if (type == "keyframes") {
    std::vector<MorseKnot> frames;
    for (const auto& f : j.at("frames")) frames.push_back(knotFromJson(f));
    const auto& r = j.at("range");
    p = KnotPath::keyframes(std::move(frames), r.at(0).get<double>(), r.at(1).get<double>());
  } else {
    throw std::invalid_argument("unknown path type " + type);
  }
  if (j.value("reversed", false)) p = p.inverse();
  return p;
}

}  // namespace kzc
