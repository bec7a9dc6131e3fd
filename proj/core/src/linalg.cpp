#include "equislice/linalg.hpp"

#include <algorithm>
#include <stdexcept>

namespace equislice {

SparseVec sparse_axpy(const SparseVec& x, const Scalar& a, const SparseVec& y) {
  SparseVec out;
  out.reserve(x.size() + y.size());
  size_t i = 0, j = 0;
  while (i < x.size() || j < y.size()) {
    if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
      out.push_back(x[i++]);
    } else if (i == x.size() || y[j].first < x[i].first) {
      out.emplace_back(y[j].first, a * y[j].second);
      ++j;
    } else {
      Scalar v = x[i].second + a * y[j].second;
      if (!v.is_zero()) out.emplace_back(x[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  return out;
}

bool SparseEchelon::add(SparseVec row) {
  while (!row.empty()) {
    auto it = rows_.find(row.front().first);
    if (it == rows_.end()) break;
    Scalar f = -row.front().second / it->second.front().second;
    row = sparse_axpy(row, f, it->second);
  }
  if (row.empty()) return false;
  Scalar inv = row.front().second.inverse();
  for (auto& [c, v] : row) v *= inv;
  const int lead = row.front().first;
  rows_.emplace(lead, std::move(row));
  reduced_ = false;
  return true;
}

SparseVec SparseEchelon::reduce(SparseVec row) const {
  SparseVec out;
  while (!row.empty()) {
    auto it = rows_.find(row.front().first);
    if (it == rows_.end()) {
      out.push_back(row.front());
      row.erase(row.begin());
      continue;
    }
    Scalar f = -row.front().second / it->second.front().second;
    row = sparse_axpy(row, f, it->second);
  }
  return out;
}

void SparseEchelon::make_reduced() {
  if (reduced_) return;
  // process pivots from the largest index downwards
  for (auto it = rows_.rbegin(); it != rows_.rend(); ++it) {
    SparseVec& r = it->second;
    SparseVec out{r.front()};
    SparseVec rest(r.begin() + 1, r.end());
    while (!rest.empty()) {
      auto p = rows_.find(rest.front().first);
      if (p == rows_.end()) {
        out.push_back(rest.front());
        rest.erase(rest.begin());
        continue;
      }
      rest = sparse_axpy(rest, -rest.front().second, p->second);
    }
    r = std::move(out);
  }
  reduced_ = true;
}

std::vector<SparseVec> SparseEchelon::nullspace(int ncols) {
  make_reduced();
  std::vector<SparseVec> basis;
  for (int f = 0; f < ncols; ++f) {
    if (rows_.count(f)) continue;
    std::map<int, Scalar> v;
    v[f] = Scalar(1);
    for (auto& [p, r] : rows_) {
      for (auto& [c, x] : r)
        if (c == f) v[p] = -x;
    }
    basis.emplace_back(v.begin(), v.end());
  }
  return basis;
}

std::optional<std::vector<Scalar>> solve_sparse(const std::vector<SparseVec>& rows,
                                                const std::vector<Scalar>& rhs, int ncols) {
  if (rows.size() != rhs.size()) throw std::invalid_argument("rhs length mismatch");
  SparseEchelon e;
  for (size_t i = 0; i < rows.size(); ++i) {
    SparseVec r = rows[i];
    if (!rhs[i].is_zero()) r.emplace_back(ncols, rhs[i]);
    e.add(std::move(r));
  }
  if (e.is_pivot(ncols)) return std::nullopt;
  e.make_reduced();
  std::vector<Scalar> x(ncols, Scalar(0));
  for (auto& [p, r] : e.rows()) {
    for (auto& [c, v] : r)
      if (c == ncols) x[p] = v;
  }
  return x;
}

ExactMatrix::ExactMatrix(const std::vector<std::vector<Scalar>>& rows)
    : rows_(static_cast<int>(rows.size())), cols_(rows.empty() ? 0 : static_cast<int>(rows[0].size())) {
  for (auto& r : rows) {
    if (static_cast<int>(r.size()) != cols_) throw std::invalid_argument("ragged matrix");
    a_.insert(a_.end(), r.begin(), r.end());
  }
}

ExactMatrix ExactMatrix::identity(int n) {
  ExactMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = Scalar(1);
  return m;
}

ExactMatrix ExactMatrix::from_columns(int rows, const std::vector<std::vector<Scalar>>& cols) {
  ExactMatrix m(rows, static_cast<int>(cols.size()));
  for (size_t c = 0; c < cols.size(); ++c) {
    if (static_cast<int>(cols[c].size()) != rows) throw std::invalid_argument("column length mismatch");
    for (int r = 0; r < rows; ++r) m(r, static_cast<int>(c)) = cols[c][r];
  }
  return m;
}

std::vector<Scalar> ExactMatrix::column(int c) const {
  std::vector<Scalar> v(rows_);
  for (int r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

ExactMatrix ExactMatrix::transpose() const {
  ExactMatrix t(cols_, rows_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

ExactMatrix operator*(const ExactMatrix& a, const ExactMatrix& b) {
  if (a.cols_ != b.rows_) throw std::invalid_argument("matrix shape mismatch");
  ExactMatrix p(a.rows_, b.cols_);
  for (int i = 0; i < a.rows_; ++i)
    for (int k = 0; k < a.cols_; ++k) {
      const Scalar& x = a(i, k);
      if (x.is_zero()) continue;
      for (int j = 0; j < b.cols_; ++j)
        if (!b(k, j).is_zero()) p(i, j).add_product(x, b(k, j));
    }
  return p;
}

ExactMatrix operator+(const ExactMatrix& a, const ExactMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("matrix shape mismatch");
  ExactMatrix s = a;
  for (size_t i = 0; i < s.a_.size(); ++i) s.a_[i] += b.a_[i];
  return s;
}

ExactMatrix operator-(const ExactMatrix& a, const ExactMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("matrix shape mismatch");
  ExactMatrix s = a;
  for (size_t i = 0; i < s.a_.size(); ++i) s.a_[i] -= b.a_[i];
  return s;
}

bool operator==(const ExactMatrix& a, const ExactMatrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
}

std::vector<Scalar> ExactMatrix::apply(const std::vector<Scalar>& v) const {
  if (static_cast<int>(v.size()) != cols_) throw std::invalid_argument("vector length mismatch");
  std::vector<Scalar> out(rows_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c)
      if (!(*this)(r, c).is_zero() && !v[c].is_zero()) out[r].add_product((*this)(r, c), v[c]);
  return out;
}

int ExactMatrix::conductor() const {
  int n = 1;
  for (auto& x : a_) n = std::max(n, x.order());
  return n;
}

ExactMatrix ExactMatrix::lifted(int n) const {
  ExactMatrix m = *this;
  for (auto& x : m.a_)
    if (!x.is_rational()) x = x.lifted(n);
  return m;
}

std::string ExactMatrix::to_string() const {
  std::string s = "[";
  for (int r = 0; r < rows_; ++r) {
    s += r ? ",[" : "[";
    for (int c = 0; c < cols_; ++c) {
      if (c) s += ",";
      s += (*this)(r, c).to_string();
    }
    s += "]";
  }
  return s + "]";
}

std::pair<ExactMatrix, std::vector<int>> rref(const ExactMatrix& m) {
  ExactMatrix a = m;
  std::vector<int> pivots;
  int row = 0;
  for (int c = 0; c < a.cols() && row < a.rows(); ++c) {
    int p = row;
    while (p < a.rows() && a(p, c).is_zero()) ++p;
    if (p == a.rows()) continue;
    if (p != row)
      for (int j = 0; j < a.cols(); ++j) std::swap(a(p, j), a(row, j));
    const Scalar inv = a(row, c).inverse();
    for (int j = 0; j < a.cols(); ++j) a(row, j) *= inv;
    for (int i = 0; i < a.rows(); ++i) {
      if (i == row || a(i, c).is_zero()) continue;
      const Scalar f = -a(i, c);
      for (int j = 0; j < a.cols(); ++j)
        if (!a(row, j).is_zero()) a(i, j).add_product(f, a(row, j));
    }
    pivots.push_back(c);
    ++row;
  }
  return {a, pivots};
}

int exact_rank(const ExactMatrix& m) { return static_cast<int>(rref(m).second.size()); }

std::vector<std::vector<Scalar>> kernel_vectors(const ExactMatrix& m) {
  auto [r, pivots] = rref(m);
  std::vector<std::vector<Scalar>> basis;
  for (int f = 0; f < m.cols(); ++f) {
    if (std::find(pivots.begin(), pivots.end(), f) != pivots.end()) continue;
    std::vector<Scalar> v(m.cols());
    v[f] = Scalar(1);
    for (size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -r(static_cast<int>(i), f);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<ExactMatrix> inverse(const ExactMatrix& m) {
  if (m.rows() != m.cols()) return std::nullopt;
  return solve_exact(m, ExactMatrix::identity(m.rows()));
}

std::optional<ExactMatrix> solve_exact(const ExactMatrix& a, const ExactMatrix& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("matrix shape mismatch");
  ExactMatrix aug(a.rows(), a.cols() + b.cols());
  for (int r = 0; r < a.rows(); ++r) {
    for (int c = 0; c < a.cols(); ++c) aug(r, c) = a(r, c);
    for (int c = 0; c < b.cols(); ++c) aug(r, a.cols() + c) = b(r, c);
  }
  auto [red, pivots] = rref(aug);
  if (static_cast<int>(pivots.size()) < a.cols() || (!pivots.empty() && pivots.back() >= a.cols()))
    return std::nullopt;
  for (int i = 0; i < a.cols(); ++i)
    if (pivots[i] != i) return std::nullopt;
  ExactMatrix x(a.cols(), b.cols());
  for (int i = 0; i < a.cols(); ++i)
    for (int c = 0; c < b.cols(); ++c) x(i, c) = red(i, a.cols() + c);
  return x;
}

}  // namespace equislice
