#pragma once
// Piecewise-linear long knots in C x R (altitude t is the third coordinate),
// their monotone branches, and one-parameter families of such knots.

#include <json.hpp>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace kzc {

using Complex = std::complex<double>;

struct KnotVertex {
  double x = 0, y = 0, t = 0;
};

/// Raised when a knot is not in generic position for the altitude function.
class NotMorse : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class SelfIntersection : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CriticalPoint {
  int vertex = 0;      // index into the vertex list
  double altitude = 0;
  bool maximum = false;
};

/// A maximal monotone piece of the knot. Branch 0 starts with the lower
/// ray, the last branch ends with the upper ray.
struct Branch {
  int firstVertex = 0;  // vertex where the branch starts (in knot order)
  int lastVertex = 0;   // vertex where it ends
  int direction = 1;    // +1 increasing altitude, -1 decreasing
  double tLow = 0, tHigh = 0;  // altitude range (may be infinite)
};

/// A long knot given by a vertex list. Before the first vertex and after the
/// last one the knot continues vertically along the axis x = y = 0.
class MorseKnot {
 public:
  MorseKnot() = default;
  /// Validates; throws NotMorse, SelfIntersection or std::invalid_argument.
  explicit MorseKnot(std::vector<KnotVertex> vertices, bool checkEmbedding = true);

  const std::vector<KnotVertex>& vertices() const { return vertices_; }
  const std::vector<CriticalPoint>& criticalPoints() const { return critical_; }
  int criticalCount() const { return static_cast<int>(critical_.size()); }
  const std::vector<Branch>& branches() const { return branches_; }

  /// Position of a branch at altitude t (t inside the branch range).
  Complex position(int branch, double t) const;
  /// d position / dt on the branch at altitude t (one-sided from above at
  /// vertex altitudes).
  Complex slope(int branch, double t) const;
  /// Index of the segment of the branch containing altitude t: the returned
  /// k satisfies that t lies between vertices k and k+1 (or -1 / size-1 on
  /// the rays).
  int segmentAt(int branch, double t) const;
  /// Branch indices present at altitude t, increasing.
  std::vector<int> strandsAt(double t) const;
  /// Sorted distinct vertex altitudes.
  std::vector<double> breakpoints() const;

  double tMin() const;
  double tMax() const;

 private:
  std::vector<KnotVertex> vertices_;
  std::vector<CriticalPoint> critical_;
  std::vector<Branch> branches_;
};

/// The axis itself: a single vertex at the origin, no critical points.
MorseKnot straightLineKnot();

nlohmann::json toJson(const MorseKnot& k);
/// Reads {"type":"pl","vertices":[[x,y,t],...]}.
MorseKnot knotFromJson(const nlohmann::json& j);
MorseKnot loadKnot(const std::string& path);

/// A knot together with the phi-derivatives of its vertex coordinates.
struct KnotState {
  MorseKnot knot;
  std::vector<Complex> dz;  // d(x + i y)/dphi per vertex
  std::vector<double> dt;   // d t/dphi per vertex

  /// d z/dphi at fixed altitude t on a branch.
  Complex velocity(int branch, double t) const;
};

/// A one-parameter family of Morse knots: either the rotation of a knot
/// about its axis (phi in [0, 2 pi]) or linear interpolation of keyframes.
class KnotPath {
 public:
  enum class Kind { Rotation, Keyframes };

  static KnotPath rotation(const MorseKnot& k);
  /// Frames must share vertex count and critical-point count.
  /// Intermediate knots are validated on a sample grid.
  static KnotPath keyframes(std::vector<MorseKnot> frames, double a, double b, int samplesPerSegment = 16);

  Kind kind() const { return kind_; }
  double a() const { return a_; }
  double b() const { return b_; }
  const std::vector<MorseKnot>& frames() const { return frames_; }
  /// phi values where the path is not smooth (keyframe boundaries), with a, b.
  std::vector<double> breakpoints() const;
  KnotState at(double phi) const;

  /// Same family traversed backwards.
  KnotPath inverse() const;
  /// Keyframe path of this followed by other (last frame of this must equal
  /// the first of other; ranges are concatenated).
  KnotPath then(const KnotPath& other) const;
  bool reversed() const { return reversed_; }

 private:
  Kind kind_ = Kind::Keyframes;
  bool reversed_ = false;
  std::vector<MorseKnot> frames_;
  double a_ = 0, b_ = 1;
};

nlohmann::json toJson(const KnotPath& p);
/// {"type":"rotation","knot":...} or {"type":"keyframes","frames":[...],"range":[a,b]}.
KnotPath pathFromJson(const nlohmann::json& j);

}  // namespace kzc
