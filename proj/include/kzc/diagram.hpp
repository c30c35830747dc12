#pragma once
// Chord diagrams, V-diagrams and the degree-two configurations on the line.
//
// A Diagram always stores canonical positions 1..q. Raw inputs with real
// labels go through canonicalize(), which replaces every label by its rank.

#include "kzc/rational.hpp"

#include <json.hpp>

#include <array>
#include <compare>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace kzc {

enum class DiagramKind { D0, D1, D2TwoVee, D2Tree, D2TildeGraph4, D2TildeTriVee };

std::string kindName(DiagramKind k);
DiagramKind kindFromName(const std::string& s);

/// Chords {mid,tipA} and {mid,tipB}; tipA < tipB.
struct Vee {
  int mid = 0;
  int tipA = 0;
  int tipB = 0;
  auto operator<=>(const Vee&) const = default;
};

/// A graph on a few marked positions. Edges join positions (not labels);
/// each edge is stored with its smaller endpoint first, edges sorted.
struct PointGraph {
  std::vector<int> points;
  std::vector<std::pair<int, int>> edges;
  auto operator<=>(const PointGraph&) const = default;

  /// Vertex label 1..n of a position, by increasing position.
  int label(int position) const;
};

struct TriangleVee {
  std::vector<int> triangle;  // three positions, increasing
  Vee vee;
  auto operator<=>(const TriangleVee&) const = default;
};

class Diagram {
 public:
  int q = 0;
  std::vector<std::pair<int, int>> chords;
  std::vector<Vee> vees;
  std::optional<PointGraph> tree;
  std::optional<PointGraph> graph4;
  std::optional<TriangleVee> triangleVee;

  DiagramKind kind() const;
  int degree() const;

  /// Flattened canonical encoding; diagram order is lexicographic on it.
  std::vector<int> encoding() const;

  bool operator==(const Diagram& o) const { return encoding() == o.encoding(); }
  std::strong_ordering operator<=>(const Diagram& o) const { return encoding() <=> o.encoding(); }

  /// Every point set that forms one structure (chord pairs, V triples, ...).
  std::vector<std::vector<int>> structures() const;

  std::string str() const;
};

/// Same shape as Diagram, with arbitrary real labels.
struct RawDiagram {
  std::vector<std::pair<double, double>> chords;
  std::vector<std::array<double, 3>> vees;  // mid, tip, tip
  std::optional<std::pair<std::vector<double>, std::vector<std::pair<double, double>>>> tree;
  std::optional<std::pair<std::vector<double>, std::vector<std::pair<double, double>>>> graph4;
  std::optional<std::pair<std::array<double, 3>, std::array<double, 3>>> triangleVee;
};

/// Errors: "duplicate position", "overlapping structures", "tree not spanning"
/// (also used for a disconnected graph4), all as std::invalid_argument.
Diagram canonicalize(const RawDiagram& raw);
RawDiagram toRaw(const Diagram& d);

/// (-1)^(number of points of p strictly between the two points of q).
int lk(const std::vector<double>& p, const std::pair<double, double>& q);

/// True when an ordinary chord has adjacent endpoints (local 1T).
bool hasIsolatedChord(const Diagram& d);

/// Which exponent S(D) uses. Count: number of pairs with lk = -1.
/// Literal: the sum of the lk values themselves.
enum class SignReading { Count, Literal };

/// S(D) for a V-diagram; throws std::invalid_argument for other kinds.
int sigmaSign(const Diagram& d, SignReading reading = SignReading::Count);

/// Places the diagrams side by side, left to right.
Diagram concatDiagrams(const std::vector<Diagram>& parts);

/// All diagrams of a kind and degree, sorted, without duplicates.
/// Throws std::invalid_argument for unsupported sizes (more than 10 points).
std::vector<Diagram> enumerateDiagrams(DiagramKind kind, int degree);

/// All perfect matchings of the given points, as sorted chord lists.
std::vector<std::vector<std::pair<int, int>>> perfectMatchings(const std::vector<int>& points);

/// Spanning trees of the complete graph on labels 1..4: the 4 stars by
/// center, then the 12 paths by sorted edge list.
std::vector<std::vector<std::pair<int, int>>> spanningTrees4();

nlohmann::json toJson(const Diagram& d);
Diagram diagramFromJson(const nlohmann::json& j);

/// A diagram together with a partition of its positions into consecutive
/// blocks ("slots"). Two configurations that close up to the same line
/// diagram stay distinct when their slot structure differs.
struct SlottedDiagram {
  Diagram d;
  std::vector<int> slotSizes;
  auto operator<=>(const SlottedDiagram&) const = default;
  bool operator==(const SlottedDiagram&) const = default;
};

}  // namespace kzc
