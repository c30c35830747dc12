#include "kzc/ratlinalg.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <tuple>

namespace kzc {

std::string toString(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Rational parseRational(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational");
  auto validInt = [](const std::string& t, bool allowSign) {
    std::size_t i = 0;
    if (allowSign && i < t.size() && (t[i] == '-' || t[i] == '+')) ++i;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') return false;
    return true;
  };
  auto slash = s.find('/');
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!validInt(num, true) || !validInt(den, false))
    throw std::invalid_argument("bad rational literal: " + s);
  if (num[0] == '+') num.erase(0, 1);
  mpz_class n(num), d(den);
  if (d == 0) throw std::invalid_argument("zero denominator: " + s);
  Rational r(n, d);
  r.canonicalize();
  return r;
}

SparseRationalMatrix::SparseRationalMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) throw std::invalid_argument("negative matrix dimension");
}

void SparseRationalMatrix::check(int r, int c) const {
  if (r < 0 || r >= rows_ || c < 0 || c >= cols_)
    throw std::out_of_range("matrix index (" + std::to_string(r) + "," + std::to_string(c) +
                            ") outside " + std::to_string(rows_) + "x" + std::to_string(cols_));
}

void SparseRationalMatrix::set(int r, int c, const Rational& v) {
  check(r, c);
  if (isZero(v))
    cells_.erase({r, c});
  else
    cells_[{r, c}] = v;
}

void SparseRationalMatrix::add(int r, int c, const Rational& v) {
  check(r, c);
  if (isZero(v)) return;
  auto [it, fresh] = cells_.try_emplace({r, c}, v);
  if (!fresh) {
    it->second += v;
    if (isZero(it->second)) cells_.erase(it);
  }
}

Rational SparseRationalMatrix::get(int r, int c) const {
  check(r, c);
  auto it = cells_.find({r, c});
  return it == cells_.end() ? Rational(0) : it->second;
}

std::vector<std::tuple<int, int, Rational>> SparseRationalMatrix::entries() const {
  std::vector<std::tuple<int, int, Rational>> out;
  out.reserve(cells_.size());
  for (const auto& [k, v] : cells_) out.emplace_back(k.first, k.second, v);
  return out;
}

SparseRow SparseRationalMatrix::row(int r) const {
  SparseRow out;
  for (auto it = cells_.lower_bound({r, 0}); it != cells_.end() && it->first.first == r; ++it)
    out.emplace_back(it->first.second, it->second);
  return out;
}

std::vector<SparseRow> SparseRationalMatrix::rowList() const {
  std::vector<SparseRow> out(rows_);
  for (const auto& [k, v] : cells_) out[k.first].emplace_back(k.second, v);
  return out;
}

std::vector<int> SparseRationalMatrix::rowSupport(int r) const {
  std::vector<int> out;
  for (const auto& [c, v] : row(r)) out.push_back(c);
  return out;
}

std::vector<int> SparseRationalMatrix::colSupport(int c) const {
  std::vector<int> out;
  for (const auto& [k, v] : cells_)
    if (k.second == c) out.push_back(k.first);
  return out;
}

SparseRationalMatrix SparseRationalMatrix::transpose() const {
  SparseRationalMatrix t(cols_, rows_);
  for (const auto& [k, v] : cells_) t.cells_[{k.second, k.first}] = v;
  return t;
}

SparseRationalMatrix SparseRationalMatrix::columnBlock(int first, int count) const {
  if (first < 0 || count < 0 || first + count > cols_) throw std::out_of_range("column block");
  SparseRationalMatrix b(rows_, count);
  for (const auto& [k, v] : cells_)
    if (k.second >= first && k.second < first + count) b.cells_[{k.first, k.second - first}] = v;
  return b;
}

std::vector<RationalVector> SparseRationalMatrix::dense() const {
  std::vector<RationalVector> d(rows_, RationalVector(cols_));
  for (const auto& [k, v] : cells_) d[k.first][k.second] = v;
  return d;
}

SparseRationalMatrix SparseRationalMatrix::fromDense(const std::vector<RationalVector>& d, int cols) {
  if (cols < 0) cols = d.empty() ? 0 : static_cast<int>(d.front().size());
  SparseRationalMatrix m(static_cast<int>(d.size()), cols);
  for (int r = 0; r < m.rows_; ++r) {
    if (static_cast<int>(d[r].size()) != cols) throw std::invalid_argument("ragged dense matrix");
    for (int c = 0; c < cols; ++c) m.set(r, c, d[r][c]);
  }
  return m;
}

SparseRationalMatrix SparseRationalMatrix::fromRows(const std::vector<SparseRow>& rows, int cols) {
  SparseRationalMatrix m(static_cast<int>(rows.size()), cols);
  for (int r = 0; r < m.rows_; ++r)
    for (const auto& [c, v] : rows[r]) m.add(r, c, v);
  return m;
}

SparseRationalMatrix SparseRationalMatrix::vstack(const SparseRationalMatrix& a,
                                                  const SparseRationalMatrix& b) {
  if (a.cols_ != b.cols_) throw std::invalid_argument("vstack: column mismatch");
  SparseRationalMatrix m(a.rows_ + b.rows_, a.cols_);
  m.cells_ = a.cells_;
  for (const auto& [k, v] : b.cells_) m.cells_[{k.first + a.rows_, k.second}] = v;
  return m;
}

bool SparseRationalMatrix::operator==(const SparseRationalMatrix& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && cells_ == o.cells_;
}

namespace {

// row -= factor * pivotRow, both sorted by column.
SparseRow axpy(const SparseRow& row, const Rational& factor, const SparseRow& pivotRow) {
  SparseRow out;
  out.reserve(row.size() + pivotRow.size());
  std::size_t i = 0, j = 0;
  while (i < row.size() || j < pivotRow.size()) {
    if (j == pivotRow.size() || (i < row.size() && row[i].first < pivotRow[j].first)) {
      out.push_back(row[i++]);
    } else if (i == row.size() || pivotRow[j].first < row[i].first) {
      out.emplace_back(pivotRow[j].first, -factor * pivotRow[j].second);
      ++j;
    } else {
      Rational v = row[i].second - factor * pivotRow[j].second;
      if (!isZero(v)) out.emplace_back(row[i].first, v);
      ++i;
      ++j;
    }
  }
  return out;
}

SparseRow normalized(SparseRow row) {
  std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  SparseRow out;
  for (auto& [c, v] : row) {
    if (!out.empty() && out.back().first == c)
      out.back().second += v;
    else
      out.emplace_back(c, v);
  }
  std::erase_if(out, [](const auto& e) { return isZero(e.second); });
  return out;
}

}  // namespace

EchelonForm rref(const std::vector<SparseRow>& input, int cols) {
  // Incremental forward elimination: pivot rows indexed by leading column.
  std::map<int, SparseRow> pivots;
  for (const auto& raw : input) {
    SparseRow row = normalized(raw);
    while (!row.empty()) {
      auto it = pivots.find(row.front().first);
      if (it == pivots.end()) break;
      row = axpy(row, row.front().second, it->second);
    }
    if (row.empty()) continue;
    Rational lead = row.front().second;
    for (auto& e : row) e.second /= lead;
    pivots.emplace(row.front().first, std::move(row));
  }
  // Back substitution, last pivot first, so each row is cleared above.
  std::vector<int> order;
  for (const auto& [c, r] : pivots) order.push_back(c);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const SparseRow& prow = pivots[*it];
    for (auto& [c, r] : pivots) {
      if (c >= *it) break;
      auto pos = std::lower_bound(r.begin(), r.end(), *it,
                                  [](const auto& e, int col) { return e.first < col; });
      if (pos != r.end() && pos->first == *it) r = axpy(r, pos->second, prow);
    }
  }
  EchelonForm ef;
  ef.cols = cols;
  for (auto& [c, r] : pivots) {
    ef.pivots.push_back(c);
    ef.rows.push_back(std::move(r));
  }
  return ef;
}

EchelonForm rref(const SparseRationalMatrix& m) { return rref(m.rowList(), m.cols()); }

std::size_t rank(const SparseRationalMatrix& m) { return rref(m).rows.size(); }

std::vector<RationalVector> kernelBasis(const SparseRationalMatrix& m) {
  EchelonForm ef = rref(m);
  std::vector<bool> isPivot(m.cols(), false);
  for (int p : ef.pivots) isPivot[p] = true;
  std::vector<RationalVector> basis;
  for (int f = 0; f < m.cols(); ++f) {
    if (isPivot[f]) continue;
    RationalVector v(m.cols());
    v[f] = 1;
    for (std::size_t i = 0; i < ef.rows.size(); ++i) {
      for (const auto& [c, val] : ef.rows[i])
        if (c == f) v[ef.pivots[i]] = -val;
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<RationalVector> transposeKernelBasis(const SparseRationalMatrix& m) {
  return kernelBasis(m.transpose());
}

bool rowSpaceEqual(const SparseRationalMatrix& a, const SparseRationalMatrix& b) {
  if (a.cols() != b.cols()) throw std::invalid_argument("rowSpaceEqual: column mismatch");
  std::size_t ra = rank(a), rb = rank(b);
  if (ra != rb) return false;
  return rank(SparseRationalMatrix::vstack(a, b)) == ra;
}

bool inRowSpace(const SparseRationalMatrix& m, const RationalVector& v) {
  SparseRationalMatrix extra = matrixFromVectors({v}, m.cols());
  return rank(SparseRationalMatrix::vstack(m, extra)) == rank(m);
}

LeftElimination eliminateLeft(const SparseRationalMatrix& m, int leftWidth) {
  if (leftWidth < 0 || leftWidth >= m.cols()) throw std::invalid_argument("eliminateLeft: bad width");
  SparseRationalMatrix left = m.columnBlock(0, leftWidth);
  SparseRationalMatrix right = m.columnBlock(leftWidth, m.cols() - leftWidth);
  LeftElimination out;
  out.combinations = transposeKernelBasis(left);
  for (const auto& x : out.combinations) out.rows.push_back(leftMultiply(x, right));
  return out;
}

RationalVector multiply(const SparseRationalMatrix& m, const RationalVector& v) {
  if (static_cast<int>(v.size()) != m.cols()) throw std::invalid_argument("multiply: size mismatch");
  RationalVector out(m.rows());
  for (const auto& [r, c, val] : m.entries()) out[r] += val * v[c];
  return out;
}

RationalVector leftMultiply(const RationalVector& x, const SparseRationalMatrix& m) {
  if (static_cast<int>(x.size()) != m.rows()) throw std::invalid_argument("leftMultiply: size mismatch");
  RationalVector out(m.cols());
  for (const auto& [r, c, val] : m.entries()) out[c] += x[r] * val;
  return out;
}

SparseRationalMatrix matrixFromVectors(const std::vector<RationalVector>& vs, int cols) {
  SparseRationalMatrix m(static_cast<int>(vs.size()), cols);
  for (int r = 0; r < m.rows(); ++r) {
    if (static_cast<int>(vs[r].size()) != cols) throw std::invalid_argument("vector length mismatch");
    for (int c = 0; c < cols; ++c) m.set(r, c, vs[r][c]);
  }
  return m;
}

nlohmann::json toJson(const SparseRationalMatrix& m) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& [r, c, v] : m.entries()) entries.push_back({r, c, toString(v)});
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

SparseRationalMatrix matrixFromJson(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("entries"))
    throw std::invalid_argument("matrix JSON needs rows, cols, entries");
  SparseRationalMatrix m(j.at("rows").get<int>(), j.at("cols").get<int>());
  for (const auto& e : j.at("entries")) {
    if (!e.is_array() || e.size() != 3) throw std::invalid_argument("matrix entry must be [r, c, \"p/q\"]");
    Rational v = e[2].is_string() ? parseRational(e[2].get<std::string>()) : Rational(e[2].get<long>());
    int r = e[0].get<int>(), c = e[1].get<int>();
    if (!isZero(m.get(r, c))) throw std::invalid_argument("duplicate matrix entry");
    m.set(r, c, v);
  }
  return m;
}

}  // namespace kzc
