#include "kzc/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace kzc {

nlohmann::json QuadratureConfig::toJson() const { return {{"order", order}, {"maxRefine", maxRefine}, {"tol", tol}, {"absTol", absTol}}; }

QuadratureConfig QuadratureConfig::fromJson(const nlohmann::json& j) {
  QuadratureConfig c;
  c.order = j.value("order", c.order);
  c.maxRefine = j.value("maxRefine", c.maxRefine);
  c.tol = j.value("tol", c.tol);
  c.absTol = j.value("absTol", c.absTol);
  if (c.order < 1 || c.order > 200 || c.maxRefine < 0 || !(c.tol > 0) || !(c.absTol >= 0))
    throw std::invalid_argument("invalid quadrature configuration");
  return c;
}

const GaussRule& gaussLegendre(int n) {
  if (n < 1 || n > 200) throw std::invalid_argument("Gauss-Legendre order out of range");
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  GaussRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1, p1 = x;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1);
    double w = 2 / ((1 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.nodes[n / 2] = 0;
  return cache.emplace(n, std::move(r)).first->second;
}

namespace {

using CVec = std::vector<std::complex<double>>;

struct Worker {
  const VectorIntegrand& f;
  int dim;
  const GaussRule& rule;
  const QuadratureConfig& cfg;
  double scale;  // magnitude used for the relative tolerance
  long evaluations = 0;
  bool converged = true;

  CVec cell(double a, double b, double* absSum = nullptr) {
    CVec acc(dim), sum(dim);
    double h = 0.5 * (b - a), c = 0.5 * (a + b);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      std::fill(acc.begin(), acc.end(), 0.0);
      f(c + h * rule.nodes[i], acc);
      ++evaluations;
      for (int d = 0; d < dim; ++d) sum[d] += rule.weights[i] * h * acc[d];
      if (absSum)
        for (int d = 0; d < dim; ++d) *absSum += rule.weights[i] * h * std::abs(acc[d]);
    }
    return sum;
  }

  void refine(double a, double b, const CVec& whole, int depth, double totalLength, CVec& value, std::vector<double>& err) {
    double m = 0.5 * (a + b);
    CVec left = cell(a, m), right = cell(m, b);
    double diff = 0;
    for (int d = 0; d < dim; ++d) diff = std::max(diff, std::abs(whole[d] - left[d] - right[d]));
    double allowed = std::max(cfg.tol * scale, cfg.absTol) * (b - a) / totalLength;
    if (diff <= allowed || depth >= cfg.maxRefine) {
      if (diff > allowed) converged = false;
      for (int d = 0; d < dim; ++d) {
        value[d] += left[d] + right[d];
        err[d] += std::abs(whole[d] - left[d] - right[d]);
      }
      return;
    }
    refine(a, m, left, depth + 1, totalLength, value, err);
    refine(m, b, right, depth + 1, totalLength, value, err);
  }
};

}  // namespace

QuadratureResult integrateAdaptive(const VectorIntegrand& f, int dim, double a, double b,
                                   const std::vector<double>& breakpoints, const QuadratureConfig& cfg) {
  QuadratureResult res;
  res.value.assign(dim, 0.0);
  res.error.assign(dim, 0.0);
  if (!(b > a) || dim == 0) return res;
  std::vector<double> cuts{a};
  for (double x : breakpoints)
    if (x > a && x < b) cuts.push_back(x);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  Worker w{f, dim, gaussLegendre(cfg.order), cfg, 0.0};
  std::vector<CVec> wholes;
  double scale = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    wholes.push_back(w.cell(cuts[i], cuts[i + 1], &scale));
  }
  w.scale = scale;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    w.refine(cuts[i], cuts[i + 1], wholes[i], 0, b - a, res.value, res.error);
  for (auto& e : res.error) e = std::max(e, 1e-15 * scale);
  res.evaluations = w.evaluations;
  res.converged = w.converged;
  return res;
}

}  // namespace kzc
