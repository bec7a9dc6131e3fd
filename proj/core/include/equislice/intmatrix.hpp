// Dense integer matrices with minors, Hermite and Smith normal forms.
#pragma once

#include <string>
#include <vector>

namespace equislice {

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, 0) {}
  explicit IntMatrix(const std::vector<std::vector<long>>& rows);

  static IntMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  long& operator()(int r, int c) { return a_[static_cast<size_t>(r) * cols_ + c]; }
  long operator()(int r, int c) const { return a_[static_cast<size_t>(r) * cols_ + c]; }

  IntMatrix transpose() const;
  IntMatrix select_rows(const std::vector<int>& rows) const;
  IntMatrix select_cols(const std::vector<int>& cols) const;
  std::vector<long> row(int r) const;
  std::vector<std::vector<long>> to_rows() const;
  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
  friend bool operator==(const IntMatrix& a, const IntMatrix& b) = default;

  // JSON-style text: [[1,0],[0,1]]
  std::string to_string() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<long> a_;
};

long checked_add(long a, long b);
long checked_mul(long a, long b);

long determinant(const IntMatrix& m);
int rank(const IntMatrix& m);

// All size x size minors; row subsets in lexicographic order, column subsets inner.
std::vector<long> minors(const IntMatrix& m, int size);

struct SmithForm {
  IntMatrix U;  // rows x rows, unimodular
  IntMatrix D;  // rows x cols, diagonal with d_1 | d_2 | ...
  IntMatrix V;  // cols x cols, unimodular
  std::vector<long> invariant_factors;  // nonzero diagonal entries
};
SmithForm smith_normal_form(const IntMatrix& m);

// Row Hermite normal form of the lattice spanned by the rows; zero rows dropped.
IntMatrix hermite_normal_form(const IntMatrix& m);

// Basis (as rows, in Hermite normal form) of {v in Z^cols : m v = 0}.
IntMatrix kernel_basis(const IntMatrix& m);

// Basis (as rows, HNF) of the saturation (Q-span intersected with Z^n) of the row lattice.
IntMatrix saturation(const IntMatrix& m);

enum class IntKitOp { minors, kernel_basis, smith_normal_form };

}  // namespace equislice
