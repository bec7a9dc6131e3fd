// Sparse exact linear algebra over Scalar.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "equislice/scalar.hpp"

namespace equislice {

// Sorted by index, no zero entries.
using SparseVec = std::vector<std::pair<int, Scalar>>;

SparseVec sparse_axpy(const SparseVec& x, const Scalar& a, const SparseVec& y);  // x + a*y

// Incremental row echelon form; pivots are leading (smallest) indices.
class SparseEchelon {
 public:
  // Reduces `row` and stores it if independent; returns whether it was.
  bool add(SparseVec row);
  // Reduces against every stored pivot (not only the leading one).
  SparseVec reduce(SparseVec row) const;
  int rank() const { return static_cast<int>(rows_.size()); }
  bool is_pivot(int col) const { return rows_.count(col) > 0; }
  // Back-substitutes so that pivot rows are fully reduced with unit pivots.
  void make_reduced();
  const std::map<int, SparseVec>& rows() const { return rows_; }
  // Basis of the kernel of the stored rows, one vector per free column < ncols.
  std::vector<SparseVec> nullspace(int ncols);

 private:
  std::map<int, SparseVec> rows_;
  bool reduced_ = true;
};

// Solves A x = b (A given by sparse rows over ncols unknowns); nullopt if inconsistent.
std::optional<std::vector<Scalar>> solve_sparse(const std::vector<SparseVec>& rows,
                                                const std::vector<Scalar>& rhs, int ncols);

// Dense exact matrix over Scalar, row-major.
class ExactMatrix {
 public:
  ExactMatrix() = default;
  ExactMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {}
  explicit ExactMatrix(const std::vector<std::vector<Scalar>>& rows);
  static ExactMatrix identity(int n);
  // Columns given as vectors.
  static ExactMatrix from_columns(int rows, const std::vector<std::vector<Scalar>>& cols);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Scalar& operator()(int r, int c) { return a_[static_cast<size_t>(r) * cols_ + c]; }
  const Scalar& operator()(int r, int c) const { return a_[static_cast<size_t>(r) * cols_ + c]; }
  std::vector<Scalar> column(int c) const;

  ExactMatrix transpose() const;
  friend ExactMatrix operator*(const ExactMatrix& a, const ExactMatrix& b);
  friend ExactMatrix operator+(const ExactMatrix& a, const ExactMatrix& b);
  friend ExactMatrix operator-(const ExactMatrix& a, const ExactMatrix& b);
  friend bool operator==(const ExactMatrix& a, const ExactMatrix& b);
  std::vector<Scalar> apply(const std::vector<Scalar>& v) const;
  // Largest field conductor among the entries.
  int conductor() const;
  // Entries lifted into Q[zeta_n] (rational entries stay rational).
  ExactMatrix lifted(int n) const;

  std::string to_string() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Scalar> a_;
};

// Reduced row echelon form and pivot columns.
std::pair<ExactMatrix, std::vector<int>> rref(const ExactMatrix& m);
int exact_rank(const ExactMatrix& m);
// Basis of {v : m v = 0}, one vector per free column.
std::vector<std::vector<Scalar>> kernel_vectors(const ExactMatrix& m);
std::optional<ExactMatrix> inverse(const ExactMatrix& m);
// X with a X = b when a has full column rank and a solution exists.
std::optional<ExactMatrix> solve_exact(const ExactMatrix& a, const ExactMatrix& b);

}  // namespace equislice
