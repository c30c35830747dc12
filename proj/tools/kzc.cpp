// Command-line front end. Every subcommand prints one JSON report whose
// verdicts decide the exit status: 0 when all pass, 1 when one fails, 2 on
// bad input.

#include "kzc/integrator.hpp"
#include "kzc/kzforms.hpp"
#include "kzc/relations.hpp"
#include "kzc/vassiliev.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

using nlohmann::json;

namespace {

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Report {
  std::string command;
  json inputs = json::object();
  json verdicts = json::array();
  json outputs = json::object();

  void verdict(const std::string& name, bool ok) { verdicts.push_back({{"check", name}, {"status", ok ? "pass" : "fail"}}); }
  void skip(const std::string& name) { verdicts.push_back({{"check", name}, {"status", "skip"}}); }
  bool passed() const {
    for (const auto& v : verdicts)
      if (v.at("status") == "fail") return false;
    return true;
  }
};

std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// 64-bit FNV-1a, enough to tell inputs apart in a report.
std::string digest(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream s;
  s << std::hex << h;
  return s.str();
}

json parseJsonFile(const std::string& path) {
  try {
    return json::parse(readFile(path));
  } catch (const json::exception& e) {
    throw InputError("malformed JSON in " + path + ": " + e.what());
  }
}

kzc::MorseKnot knotInput(Report& r, const std::string& key, const std::string& path) {
  std::string bytes = readFile(path);
  r.inputs[key] = {{"file", path}, {"digest", digest(bytes)}};
  try {
    return kzc::knotFromJson(json::parse(bytes));
  } catch (const json::exception& e) {
    throw InputError("malformed knot file " + path + ": " + e.what());
  }
}

std::string defaultHump() { return kzc::fixtureDirectory() + "/knots/hump.json"; }

bool imaginaryWithinError(const kzc::NumericVector& v) {
  for (const auto& [d, t] : v.terms)
    if (std::abs(t.value.imag()) > 10 * t.error + 1e-300 && std::abs(t.value.imag()) > 1e-13) return false;
  return true;
}

bool allFinite(const kzc::NumericVector& v) {
  for (const auto& [d, t] : v.terms)
    if (!std::isfinite(t.value.real()) || !std::isfinite(t.value.imag()) || !std::isfinite(t.error)) return false;
  return true;
}

json comparisonsJson(const std::vector<kzc::FunctionalComparison>& cs) {
  json a = json::array();
  for (const auto& c : cs) a.push_back(kzc::toJson(c));
  return a;
}

json functionalJson(const kzc::FormalSum& w) {
  json a = json::array();
  for (const auto& [d, c] : w.terms()) a.push_back({{"diagram", kzc::toJson(d)}, {"value", kzc::toString(c)}});
  return a;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Diagram relations, KZ-form checks and numerical Kontsevich-type integrals"};
  app.require_subcommand(1);
  std::string outPath, quadPath;
  bool timing = false;
  kzc::QuadratureConfig quad;
  app.add_option("--out", outPath, "Write the JSON report to this file instead of stdout");
  app.add_option("--quad", quadPath, "Quadrature configuration JSON file");
  app.add_option("--order", quad.order, "Gauss-Legendre points per cell")->check(CLI::Range(1, 200));
  app.add_option("--tol", quad.tol, "Relative quadrature tolerance")->check(CLI::PositiveNumber);
  app.add_option("--max-refine", quad.maxRefine, "Maximal bisection depth")->check(CLI::NonNegativeNumber);
  app.add_flag("--timing", timing, "Include the wall time in the report");

  std::string fixtures;
  auto* verify = app.add_subcommand("verify-appendix", "Check the tree and two-triple tables against the computed matrices");
  verify->add_option("--fixtures", fixtures, "Fixture directory (default: KZC_FIXTURE_DIR or the build default)");

  int relDegree = 3;
  std::string relFamily;
  auto* relations = app.add_subcommand("relations", "Generate one relator family");
  relations->add_option("--degree", relDegree, "Degree")->required();
  relations->add_option("--family", relFamily, "1T, 2T, 4T, 16T, 28T or 4x4T")->required();

  int wDegree = 3;
  auto* weights = app.add_subcommand("weights", "Basis of weight systems in one degree");
  weights->add_option("--degree", wDegree, "Degree")->required();

  int strands = 4;
  auto* curvature = app.add_subcommand("curvature", "Curvature matrix, its rank and the sign calibration");
  curvature->add_option("--strands", strands, "Number of strands (4)");

  int maxP = 6;
  auto* treeLemma = app.add_subcommand("tree-lemma", "Tree forms against the top form for all labelled trees");
  treeLemma->add_option("--max-p", maxP, "Largest vertex count")->check(CLI::Range(2, 8));

  std::string knotPath, humpPath, pathPath;
  int zDegree = 2;
  auto* z = app.add_subcommand("z", "Kontsevich integral and its hump correction");
  z->add_option("--knot", knotPath, "Knot JSON file")->required();
  z->add_option("--max-degree", zDegree, "Maximal degree (0..2)");
  z->add_option("--hump", humpPath, "Hump JSON file (default: shipped fixture)");

  int z1Degree = 3;
  std::vector<double> window;
  auto* z1 = app.add_subcommand("z1", "The 1-cocycle integral on a path of knots");
  z1->add_option("--path", pathPath, "Path JSON file");
  z1->add_option("--max-degree", z1Degree, "Maximal degree (2 or 3)");
  z1->add_option("--window", window, "Restrict every level to [lo, hi]")->expected(2);
  auto* z1Gramain = z1->add_subcommand("gramain", "Rotation of a knot about its axis");
  z1Gramain->fallthrough();
  z1Gramain->add_option("--knot", knotPath, "Knot JSON file")->required();

  double relTol = 0.005;
  auto* consistency = app.add_subcommand("consistency", "Cross-checks between independent evaluations");
  consistency->require_subcommand(1);
  auto* consGramain = consistency->add_subcommand("gramain", "z1 of the rotation against the rotation oracle");
  consGramain->add_option("--knot", knotPath, "Knot JSON file")->required();
  consGramain->add_option("--rel-tol", relTol, "Relative tolerance")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  auto start = std::chrono::steady_clock::now();
  Report r;
  try {
    if (!quadPath.empty()) {
      try {
        quad = kzc::QuadratureConfig::fromJson(parseJsonFile(quadPath));
      } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
      }
    }
    if (*verify) {
      r.command = "verify-appendix";
      std::string dir = fixtures.empty() ? kzc::fixtureDirectory() : fixtures;
      kzc::AppendixFixtures fx;
      try {
        fx = kzc::loadAppendixFixtures(dir);
      } catch (const std::exception& e) {
        throw InputError(e.what());
      }
      r.inputs["fixtures"] = dir;
      auto rep = kzc::verifyAppendixC(fx);
      r.outputs = rep.toJson();
      r.verdict("M1 rank 10", rep.rankM1 == 10);
      r.verdict("kernel dimensions", rep.kernelM1 == 5 && rep.kernelM1T == 6 && rep.kernelL == 1 && rep.kernelLT == 4);
      r.verdict("appendix report", rep.pass());
    } else if (*relations) {
      r.command = "relations";
      r.inputs = {{"degree", relDegree}, {"family", relFamily}};
      kzc::Family fam;
      try {
        fam = kzc::familyFromName(relFamily);
      } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
      }
      if (relDegree < 1 || relDegree > 4) throw InputError("degree must be between 1 and 4");
      auto rs = kzc::relatorSet(fam, relDegree);
      r.outputs = rs.toJson();
      bool homogeneous = true;
      for (const auto& rel : rs.relators)
        for (const auto& [d, c] : rel.terms()) homogeneous = homogeneous && d.degree() == relDegree;
      r.verdict("relators homogeneous", homogeneous);
      const std::map<kzc::Family, std::size_t> termCount = {{kzc::Family::OneT, 1}, {kzc::Family::TwoT, 2}};
      if (auto it = termCount.find(fam); it != termCount.end()) {
        bool sized = true;
        for (const auto& rel : rs.relators) sized = sized && rel.size() == it->second;
        r.verdict("every relator has " + std::to_string(it->second) + " term(s)", sized);
      }
    } else if (*weights) {
      r.command = "weights";
      r.inputs = {{"degree", wDegree}};
      if (wDegree < 2 || wDegree > 4) throw InputError("degree must be between 2 and 4");
      auto rm = kzc::relationMatrix(wDegree);
      auto ws = kzc::weightSystemBasis(wDegree);
      std::map<kzc::Diagram, int> index;
      for (std::size_t i = 0; i < rm.basis.size(); ++i) index[rm.basis[i]] = static_cast<int>(i);
      bool annihilated = true;
      json fs = json::array();
      for (const auto& w : ws) {
        kzc::RationalVector v(rm.basis.size());
        for (const auto& [d, c] : w.terms()) v[index.at(d)] = c;
        for (const auto& x : kzc::multiply(rm.matrix, v)) annihilated = annihilated && kzc::isZero(x);
        fs.push_back(functionalJson(w));
      }
      r.outputs = {{"basisSize", rm.basis.size()},
                   {"relatorRows", rm.matrix.rows()},
                   {"relationRank", kzc::rank(rm.matrix)},
                   {"dimension", ws.size()},
                   {"functionals", fs}};
      r.verdict("rank + dimension = basis size", kzc::rank(rm.matrix) + ws.size() == rm.basis.size());
      r.verdict("relators annihilate every functional", annihilated);
    } else if (*curvature) {
      r.command = "curvature";
      r.inputs = {{"strands", strands}};
      if (strands != 4) throw InputError("only four strands give the curvature matrix");
      auto cm = kzc::curvatureMatrix(strands);
      auto cubes = kzc::curvatureCubeRows();
      auto flips = kzc::solveEpsilonZeta(cm);
      auto m2 = kzc::derivedM2(kzc::buildTreeConfigMatrices(), flips);
      bool same = kzc::rowSpaceEqual(m2, cm);
      std::size_t rk = kzc::rank(cm);
      r.outputs = {{"rows", cm.rows()},  {"cols", cm.cols()},         {"rank", rk},
                   {"nonZeros", cm.nonZeros()}, {"cubeRowsNonZeros", cubes.nonZeros()}, {"flips", flips},
                   {"rowSpaceEqual", same}};
      r.verdict("16 x 72", cm.rows() == 16 && cm.cols() == 72);
      r.verdict("rank 6", rk == 6);
      r.verdict("cube rows vanish", cubes.nonZeros() == 0);
      r.verdict("three sign flips", flips.size() == 3);
      r.verdict("derived rows span the curvature rows", same);
    } else if (*treeLemma) {
      r.command = "tree-lemma";
      r.inputs = {{"maxP", maxP}};
      json per = json::array();
      for (int p = 2; p <= maxP; ++p) {
        auto trees = kzc::allTrees(p);
        int plus = 0, minus = 0, failed = 0;
        for (const auto& t : trees) {
          try {
            (kzc::treeFormSign(p, t) > 0 ? plus : minus)++;
          } catch (const std::runtime_error&) {
            ++failed;
          }
        }
        long expected = 1;
        for (int i = 0; i < p - 2; ++i) expected *= p;
        per.push_back({{"p", p}, {"trees", trees.size()}, {"plus", plus}, {"minus", minus}, {"notProportional", failed}});
        r.verdict("p=" + std::to_string(p) + " tree count", static_cast<long>(trees.size()) == expected);
        r.verdict("p=" + std::to_string(p) + " all proportional", failed == 0);
      }
      r.outputs = {{"perSize", per}};
    } else if (*z) {
      r.command = "z";
      auto k = knotInput(r, "knot", knotPath);
      if (zDegree < 0 || zDegree > 2) throw InputError("max degree must be 0, 1 or 2");
      r.inputs["maxDegree"] = zDegree;
      r.inputs["quadrature"] = quad.toJson();
      auto zk = kzc::kontsevichZ(k, zDegree, quad);
      r.outputs["criticalPoints"] = k.criticalCount();
      r.outputs["Z"] = zk.toJson();
      r.verdict("Z imaginary parts within error", imaginaryWithinError(zk));
      if (k.criticalCount() % 2 == 0) {
        auto hump = knotInput(r, "hump", humpPath.empty() ? defaultHump() : humpPath);
        auto zh = kzc::zHat(k, hump, zDegree, quad);
        r.outputs["Zhat"] = zh.toJson();
        if (zDegree >= 2) {
          auto t = zh.coefficient(kzc::crossedChordDiagram());
          r.outputs["crossingCoefficient"] = {{"re", t.value.real()}, {"im", t.value.imag()}, {"err", t.error}};
        }
        r.verdict("Zhat imaginary parts within error", imaginaryWithinError(zh));
      } else {
        r.skip("Zhat needs an even number of critical points");
      }
    } else if (*z1) {
      r.inputs["maxDegree"] = z1Degree;
      r.inputs["quadrature"] = quad.toJson();
      if (z1Degree < 2 || z1Degree > 3) throw InputError("max degree must be 2 or 3");
      kzc::Z1Options opt;
      if (window.size() == 2) {
        if (!(window[0] < window[1])) throw InputError("window must satisfy lo < hi");
        opt.window = std::make_pair(window[0], window[1]);
        r.inputs["window"] = window;
      }
      kzc::KnotPath path;
      if (*z1Gramain) {
        r.command = "z1 gramain";
        path = kzc::gramain(knotInput(r, "knot", knotPath));
      } else {
        r.command = "z1";
        if (pathPath.empty()) throw InputError("z1 needs --path FILE or the gramain subcommand");
        std::string bytes = readFile(pathPath);
        r.inputs["path"] = {{"file", pathPath}, {"digest", digest(bytes)}};
        try {
          path = kzc::pathFromJson(json::parse(bytes));
        } catch (const json::exception& e) {
          throw InputError("malformed path file: " + std::string(e.what()));
        }
      }
      auto v = kzc::z1(path, z1Degree, quad, opt);
      r.outputs["Z1"] = v.toJson();
      r.verdict("finite coefficients", allFinite(v));
      if (*z1Gramain) r.verdict("loop: imaginary parts within error", imaginaryWithinError(v));
    } else if (*consistency) {
      r.command = "consistency gramain";
      auto k = knotInput(r, "knot", knotPath);
      r.inputs["relTol"] = relTol;
      r.inputs["quadrature"] = quad.toJson();
      auto cs = kzc::gramainConsistency(k, relTol, quad);
      r.outputs["comparisons"] = comparisonsJson(cs);
      for (const auto& c : cs)
        r.verdict("degree " + std::to_string(c.degree) + " functional " + std::to_string(c.index), c.agree);
    }
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const kzc::NotMorse& e) {
    std::cerr << "input error: not a Morse knot: " << e.what() << "\n";
    return 2;
  } catch (const kzc::SelfIntersection& e) {
    std::cerr << "input error: self-intersecting knot: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  json out = {{"command", r.command}, {"inputs", r.inputs}, {"verdicts", r.verdicts}, {"outputs", r.outputs},
              {"result", r.passed() ? "pass" : "fail"}};
  if (timing) out["wallTimeSeconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::string text = out.dump(2) + "\n";
  if (outPath.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(outPath);
    if (!f) {
      std::cerr << "input error: cannot write " << outPath << "\n";
      return 2;
    }
    f << text;
  }
  return r.passed() ? 0 : 1;
}
