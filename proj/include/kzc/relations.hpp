#pragma once
// Desingularisation of degree-two configurations and the relation families
// on V-diagrams (1T, 2T, 16T, 28T, 4x4T) and on chord diagrams (4T).

#include "kzc/diagram.hpp"
#include "kzc/ratlinalg.hpp"
#include "kzc/series.hpp"

#include <json.hpp>

#include <string>
#include <utility>
#include <vector>

namespace kzc {

using SlottedSum = LinearCombination<SlottedDiagram, Rational>;

/// One desingularisation. slotSizes records which original position was
/// split in two (all other slots have size one).
struct SignedTerm {
  Rational coefficient;
  Diagram diagram;
  std::vector<int> slotSizes;
  SlottedDiagram slotted() const { return {diagram, slotSizes}; }
};

enum class SplitOrder { LoneBefore, LoneAfter };

/// Splits tree vertex `vertex` (label 1..4) so that `loneEdge` (a pair of
/// labels containing `vertex`) becomes an ordinary chord and the two other
/// edges a V. Coefficient (-1)^vertex * lk(V points, chord).
/// Throws std::invalid_argument when the split does not give a V and a chord.
SignedTerm splitTreeVertex(const Diagram& d, int vertex, std::pair<int, int> loneEdge, SplitOrder order);

/// All valid desingularisations of a tree diagram, uncollected
/// (6 terms for a star, 4 for a path), by vertex, lone edge, order.
std::vector<SignedTerm> treeSplitTerms(const Diagram& d);
FormalSum expandTree(const Diagram& d);
SlottedSum expandTreeSlotted(const Diagram& d);

/// Labels 1..6 of the two V's: 1..3 for the triple owning the least
/// position, 4..6 for the other, each by increasing position.
std::vector<std::pair<int, int>> twoTripleLabels(const Diagram& d);

/// The four desingularisations of a two-V diagram, uncollected.
std::vector<SignedTerm> twoVeeSplitTerms(const Diagram& d);
FormalSum expandTwoVee(const Diagram& d);
SlottedSum expandTwoVeeSlotted(const Diagram& d);

/// The one-V compact graph of the usual 4T relation on three marked
/// points: mid split both ways, each term weighted by lk of the two chords,
/// times (-1)^(label of the mid).
FormalSum compactOneVee(const Diagram& d);

/// Tree configuration columns: the 72 slot-distinct V-diagrams obtained by
/// splitting the 16 trees on four isolated points, in row order of the
/// trees (stars then paths), then vertex, lone edge, order.
const std::vector<SlottedDiagram>& treeConfigBasis();
/// The 16 tree diagrams on positions 1..4, stars first.
std::vector<Diagram> treeConfigRows();

enum class Family { OneT, TwoT, FourT, SixteenT, TwentyEightT, FourByFourT };
std::string familyName(Family f);
Family familyFromName(const std::string& s);

struct RelatorSet {
  int degree = 0;
  Family family = Family::OneT;
  std::vector<Diagram> basis;
  std::vector<FormalSum> relators;  // collected
  std::vector<int> rawTermCounts;   // before collecting equal diagrams

  SparseRationalMatrix matrix() const;
  nlohmann::json toJson() const;
};

/// Relators of one family in degree m over the canonical basis of the
/// right kind (chord diagrams for 4T, V-diagrams otherwise). Duplicates
/// (up to sign) are removed. Throws for m > 4.
RelatorSet relatorSet(Family family, int m);

/// 4x4T relators for two triples (positions in a diagram with ambient
/// chords). Exactly 4 relators, 16 raw terms each.
/// Throws std::invalid_argument on overlapping triples.
std::vector<FormalSum> relators4x4T(const std::vector<int>& tripleA, const std::vector<int>& tripleB,
                                    const std::vector<std::pair<int, int>>& ambient, int q,
                                    std::vector<int>* rawTermCounts = nullptr);

/// The six tree relators (three 16T, then three 28T) on four free points.
std::vector<FormalSum> relators16T28T(const std::vector<int>& points,
                                      const std::vector<std::pair<int, int>>& ambient, int q,
                                      std::vector<int>* rawTermCounts = nullptr);

/// All relators in degree m (1T, 2T, 16T, 28T, 4x4T) over enumerate(D1, m).
struct RelationMatrix {
  std::vector<Diagram> basis;
  SparseRationalMatrix matrix;
  std::vector<std::string> rowNames;  // family and index of each row
};
RelationMatrix relationMatrix(int m);

struct WeightCheck {
  bool ok = true;
  std::string violated;  // name of the first relator not annihilated
};
/// w is a functional given by its values on basis diagrams.
WeightCheck isWeightSystem(const FormalSum& w, int m);
std::vector<FormalSum> weightSystemBasis(int m);

}  // namespace kzc
