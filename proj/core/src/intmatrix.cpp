#include "equislice/intmatrix.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace equislice {

long checked_add(long a, long b) {
  long r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("integer overflow");
  return r;
}

long checked_mul(long a, long b) {
  long r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("integer overflow");
  return r;
}

IntMatrix::IntMatrix(const std::vector<std::vector<long>>& rows) {
  rows_ = static_cast<int>(rows.size());
  cols_ = rows.empty() ? 0 : static_cast<int>(rows[0].size());
  a_.reserve(static_cast<size_t>(rows_) * cols_);
  for (auto& r : rows) {
    if (static_cast<int>(r.size()) != cols_) throw std::invalid_argument("ragged integer matrix");
    a_.insert(a_.end(), r.begin(), r.end());
  }
}

IntMatrix IntMatrix::identity(int n) {
  IntMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

IntMatrix IntMatrix::select_rows(const std::vector<int>& rows) const {
  IntMatrix s(static_cast<int>(rows.size()), cols_);
  for (size_t i = 0; i < rows.size(); ++i)
    for (int c = 0; c < cols_; ++c) s(static_cast<int>(i), c) = (*this)(rows[i], c);
  return s;
}

IntMatrix IntMatrix::select_cols(const std::vector<int>& cols) const {
  IntMatrix s(rows_, static_cast<int>(cols.size()));
  for (int r = 0; r < rows_; ++r)
    for (size_t j = 0; j < cols.size(); ++j) s(r, static_cast<int>(j)) = (*this)(r, cols[j]);
  return s;
}

std::vector<long> IntMatrix::row(int r) const {
  return {a_.begin() + static_cast<long>(r) * cols_, a_.begin() + static_cast<long>(r + 1) * cols_};
}

std::vector<std::vector<long>> IntMatrix::to_rows() const {
  std::vector<std::vector<long>> out;
  for (int r = 0; r < rows_; ++r) out.push_back(row(r));
  return out;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols_ != b.rows_) throw std::invalid_argument("matrix dimension mismatch");
  IntMatrix p(a.rows_, b.cols_);
  for (int i = 0; i < a.rows_; ++i)
    for (int k = 0; k < a.cols_; ++k) {
      long x = a(i, k);
      if (!x) continue;
      for (int j = 0; j < b.cols_; ++j) p(i, j) = checked_add(p(i, j), checked_mul(x, b(k, j)));
    }
  return p;
}

std::string IntMatrix::to_string() const {
  std::string s = "[";
  for (int r = 0; r < rows_; ++r) {
    if (r) s += ",";
    s += "[";
    for (int c = 0; c < cols_; ++c) {
      if (c) s += ",";
      s += std::to_string((*this)(r, c));
    }
    s += "]";
  }
  return s + "]";
}

long determinant(const IntMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant of non-square matrix");
  const int n = m.rows();
  if (n == 0) return 1;
  std::vector<mpz_class> a(static_cast<size_t>(n) * n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) a[r * n + c] = m(r, c);
  mpz_class prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (a[k * n + k] == 0) {
      int swap = -1;
      for (int r = k + 1; r < n; ++r)
        if (a[r * n + k] != 0) {
          swap = r;
          break;
        }
      if (swap < 0) return 0;
      for (int c = 0; c < n; ++c) std::swap(a[k * n + c], a[swap * n + c]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) {
        mpz_class v = a[i * n + j] * a[k * n + k] - a[i * n + k] * a[k * n + j];
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        a[i * n + j] = v;
      }
    prev = a[k * n + k];
  }
  mpz_class d = a[(n - 1) * n + (n - 1)] * sign;
  if (!d.fits_slong_p()) throw std::overflow_error("determinant overflow");
  return d.get_si();
}

int rank(const IntMatrix& m) { return hermite_normal_form(m).rows(); }

namespace {

void next_combination_init(std::vector<int>& idx, int k) {
  idx.resize(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
}

bool next_combination(std::vector<int>& idx, int n) {
  int k = static_cast<int>(idx.size());
  for (int i = k - 1; i >= 0; --i) {
    if (idx[i] < n - k + i) {
      ++idx[i];
      for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

std::vector<long> minors(const IntMatrix& m, int size) {
  if (size < 0 || size > m.rows() || size > m.cols())
    throw std::invalid_argument("minor size exceeds matrix dimensions");
  std::vector<long> out;
  std::vector<int> rs, cs;
  next_combination_init(rs, size);
  do {
    IntMatrix sub = m.select_rows(rs);
    next_combination_init(cs, size);
    do {
      out.push_back(determinant(sub.select_cols(cs)));
    } while (next_combination(cs, m.cols()));
  } while (next_combination(rs, m.rows()));
  return out;
}

namespace {

void row_swap(IntMatrix& a, int i, int j) {
  for (int c = 0; c < a.cols(); ++c) std::swap(a(i, c), a(j, c));
}
void col_swap(IntMatrix& a, int i, int j) {
  for (int r = 0; r < a.rows(); ++r) std::swap(a(r, i), a(r, j));
}
// row_i += f * row_j
void row_addmul(IntMatrix& a, int i, int j, long f) {
  if (!f) return;
  for (int c = 0; c < a.cols(); ++c) a(i, c) = checked_add(a(i, c), checked_mul(f, a(j, c)));
}
void col_addmul(IntMatrix& a, int i, int j, long f) {
  if (!f) return;
  for (int r = 0; r < a.rows(); ++r) a(r, i) = checked_add(a(r, i), checked_mul(f, a(r, j)));
}
void row_neg(IntMatrix& a, int i) {
  for (int c = 0; c < a.cols(); ++c) a(i, c) = -a(i, c);
}

long floor_div(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

SmithForm smith_normal_form(const IntMatrix& m) {
  IntMatrix D = m;
  IntMatrix U = IntMatrix::identity(m.rows());
  IntMatrix V = IntMatrix::identity(m.cols());
  const int R = m.rows(), C = m.cols();
  for (int t = 0; t < std::min(R, C); ++t) {
    while (true) {
      // pick the nonzero entry of smallest magnitude in the trailing block
      int pr = -1, pc = -1;
      for (int r = t; r < R; ++r)
        for (int c = t; c < C; ++c)
          if (D(r, c) != 0 && (pr < 0 || std::labs(D(r, c)) < std::labs(D(pr, pc)))) {
            pr = r;
            pc = c;
          }
      if (pr < 0) goto done;
      if (pr != t) {
        row_swap(D, pr, t);
        row_swap(U, pr, t);
      }
      if (pc != t) {
        col_swap(D, pc, t);
        col_swap(V, pc, t);
      }
      bool clean = true;
      for (int r = t + 1; r < R; ++r) {
        long q = floor_div(D(r, t), D(t, t));
        row_addmul(D, r, t, -q);
        row_addmul(U, r, t, -q);
        if (D(r, t)) clean = false;
      }
      for (int c = t + 1; c < C; ++c) {
        long q = floor_div(D(t, c), D(t, t));
        col_addmul(D, c, t, -q);
        col_addmul(V, c, t, -q);
        if (D(t, c)) clean = false;
      }
      if (!clean) continue;
      // divisibility: fold any non-divisible entry into row t
      int bad_r = -1;
      for (int r = t + 1; r < R && bad_r < 0; ++r)
        for (int c = t + 1; c < C; ++c)
          if (D(r, c) % D(t, t) != 0) {
            bad_r = r;
            break;
          }
      if (bad_r < 0) break;
      row_addmul(D, t, bad_r, 1);
      row_addmul(U, t, bad_r, 1);
    }
    if (D(t, t) < 0) {
      row_neg(D, t);
      row_neg(U, t);
    }
  }
done:
  SmithForm s{U, D, V, {}};
  for (int t = 0; t < std::min(R, C); ++t)
    if (D(t, t) != 0) s.invariant_factors.push_back(D(t, t));
  return s;
}

IntMatrix hermite_normal_form(const IntMatrix& m) {
  IntMatrix A = m;
  const int R = A.rows(), C = A.cols();
  int pr = 0;
  for (int c = 0; c < C && pr < R; ++c) {
    // Euclid on column c among rows pr..R-1
    while (true) {
      int best = -1;
      for (int r = pr; r < R; ++r)
        if (A(r, c) != 0 && (best < 0 || std::labs(A(r, c)) < std::labs(A(best, c)))) best = r;
      if (best < 0) break;
      if (best != pr) row_swap(A, best, pr);
      bool done = true;
      for (int r = pr + 1; r < R; ++r) {
        if (A(r, c) == 0) continue;
        row_addmul(A, r, pr, -floor_div(A(r, c), A(pr, c)));
        if (A(r, c) != 0) done = false;
      }
      if (done) break;
    }
    if (A(pr, c) == 0) continue;
    if (A(pr, c) < 0) row_neg(A, pr);
    for (int r = 0; r < pr; ++r) row_addmul(A, r, pr, -floor_div(A(r, c), A(pr, c)));
    ++pr;
  }
  std::vector<int> keep;
  for (int r = 0; r < pr; ++r) keep.push_back(r);
  return A.select_rows(keep);
}

IntMatrix kernel_basis(const IntMatrix& m) {
  SmithForm s = smith_normal_form(m);
  const int r = static_cast<int>(s.invariant_factors.size());
  IntMatrix basis(m.cols() - r, m.cols());
  for (int j = r; j < m.cols(); ++j)
    for (int i = 0; i < m.cols(); ++i) basis(j - r, i) = s.V(i, j);
  return hermite_normal_form(basis);
}

IntMatrix saturation(const IntMatrix& m) {
  if (m.rows() == 0) return IntMatrix(0, m.cols());
  // saturation of row lattice L = kernel of the kernel
  IntMatrix k = kernel_basis(m);
  if (k.rows() == 0) return IntMatrix::identity(m.cols());
  return kernel_basis(k);
}

}  // namespace equislice
