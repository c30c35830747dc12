#pragma once
// Submatrices of the first differential in the two local configurations
// (four isolated points carrying a tree, two disjoint triples), their
// eliminations, the sign calibration against the curvature matrix and the
// comparison with the printed tables.

#include "kzc/diagram.hpp"
#include "kzc/ratlinalg.hpp"
#include "kzc/relations.hpp"
#include "kzc/series.hpp"

#include <json.hpp>

#include <string>
#include <utility>
#include <vector>

namespace kzc {

/// Removing one edge at a time from a graph on labelled vertices, keeping
/// only removals after which the endpoints stay connected. Edges are
/// label pairs; j is the rank of the removed edge in lexicographic order
/// and the sign is (-1)^(j-1). Returns (remaining edges, sign).
std::vector<std::pair<std::vector<std::pair<int, int>>, int>> cycleEdgeRemovals(
    std::vector<std::pair<int, int>> edges);

/// The 15 connected graphs with 4 edges on positions 1..4, sorted.
std::vector<Diagram> enumerate4EdgeGraphs();
/// Signed sum of the spanning trees left by removing cycle edges.
/// Throws on a disconnected graph or repeated edges.
FormalSum removalBoundary(const Diagram& g);

struct TreeConfigMatrices {
  std::vector<Diagram> rows;    // 16 trees, stars first
  std::vector<Diagram> graphs;  // 15 columns of M1
  SparseRationalMatrix m1;      // 16 x 15
  SparseRationalMatrix mright;  // 16 x 72, columns = treeConfigBasis()
};

/// Right block entries are (-1)^k times the sign S of the split diagram
/// under the chosen reading. The count reading reproduces expandTree.
TreeConfigMatrices buildTreeConfigMatrices(SignReading reading = SignReading::Count);

/// Boundaries of the six graphs with five edges (K4 minus an edge), as
/// vectors over the 15 columns of M1.
std::vector<RationalVector> fiveEdgeBoundaries();

struct TwoTripleMatrices {
  std::vector<int> tripleA, tripleB;     // A owns the least position
  std::vector<Diagram> rows;             // 9 two-V diagrams, mid of A major
  std::vector<Diagram> columns;          // 6 triangle + V diagrams
  std::vector<SlottedDiagram> rightBasis;  // 36 columns of R
  SparseRationalMatrix l;                // 9 x 6
  SparseRationalMatrix r;                // 9 x 36
};

/// Two triples among positions 1..6 (default: {1,2,3} and {4,5,6}).
/// Throws std::invalid_argument on overlapping or malformed triples.
TwoTripleMatrices buildTwoTripleMatrices(std::vector<int> tripleA = {1, 2, 3}, std::vector<int> tripleB = {4, 5, 6});

/// Boundary of the diagram with both triples closed into triangles, over
/// the six columns of L.
RationalVector twoTriangleBoundary(const TwoTripleMatrices& m);

/// Rows of a matrix multiplied by -1 at the given indices.
SparseRationalMatrix flipRows(const SparseRationalMatrix& m, const std::vector<int>& rows);

/// x^T * (Mright with flipped rows) for a basis x of ker M1^T.
SparseRationalMatrix derivedM2(const TreeConfigMatrices& t, const std::vector<int>& flips);

/// Smallest set of tree rows whose sign change makes the derived M2 span
/// the curvature row space (sizes 0, 1, 2, 3 tried in order, subsets in
/// lexicographic order). Throws std::runtime_error when none exists.
std::vector<int> solveEpsilonZeta(const SparseRationalMatrix& curvature, SignReading reading = SignReading::Count);

/// Minimal-support vectors of the left kernel of m (supports up to maxSize),
/// each scaled so its first nonzero entry is 1, sorted by size then support.
std::vector<RationalVector> leftKernelCircuits(const SparseRationalMatrix& m, int maxSize);

/// Relator combinations of the tree rows: a basis of ker M1^T made of
/// circuits (greedy by size), with the calibrated signs folded in.
struct TreeCalibration {
  std::vector<int> flips;
  std::vector<RationalVector> combinations;
  std::vector<Family> families;  // 16T for path-only supports, 28T otherwise
};
const TreeCalibration& treeCalibration();

struct AppendixFixtures {
  SparseRationalMatrix m1;         // printed 16 x 15
  SparseRationalMatrix l;          // printed 9 x 6
  SparseRationalMatrix kernelM1T;  // 6 x 16, one vector per row
  SparseRationalMatrix kernelLT;   // 4 x 9
  std::vector<int> epsilonZetaColumns;  // 1-based, as printed
};

/// Directory from KZC_FIXTURE_DIR, else the build-time default.
std::string fixtureDirectory();
/// Reads appendixC/*.json below dir; throws std::runtime_error on failure.
AppendixFixtures loadAppendixFixtures(const std::string& dir);

/// Row/column bijections (with one sign per column) carrying a printed
/// sign matrix onto a computed one, rows below `starRows` kept among
/// themselves.
struct StructuredMatch {
  int count = 0;
  std::vector<int> rowPerm;  // printed row -> computed row (least match)
  std::vector<int> colPerm;  // printed column -> computed column
  std::vector<int> colSign;  // computed = colSign * printed
  std::vector<std::vector<int>> allRowPerms;
};
StructuredMatch matchUpToStructure(const SparseRationalMatrix& printed, const SparseRationalMatrix& computed,
                                   int starRows);

struct AppendixReport {
  int rankM1 = 0, kernelM1 = 0, kernelM1T = 0, kernelL = 0, kernelLT = 0;
  bool kernelM1FromBoundaries = false;
  int m1Matches = 0;
  std::vector<int> rowPerm, colPerm, colSign;
  bool sixVectorsSpan = false;
  bool lMatchesPrinted = false;
  bool fourVectorsSpan = false;
  bool kernelLIsTwoTriangle = false;
  bool fourByFourAgrees = false;
  std::vector<int> epsilonZeta;
  bool curvatureAgrees = false;
  std::vector<std::vector<int>> printedFlipsMapped;  // per structured match
  std::vector<bool> printedFlipsAgree;
  int perturbedMatches = 0;
  bool perturbationDetected = false;
  int curvatureRank = 0;

  bool pass() const;
  nlohmann::json toJson() const;
};

AppendixReport verifyAppendixC(const AppendixFixtures& fixtures);

}  // namespace kzc
