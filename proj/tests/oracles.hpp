// Independent brute-force oracles shared by the property and acceptance tests.
#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "equislice/hypertoric.hpp"
#include "equislice/linalg.hpp"
#include "equislice/quantization.hpp"

namespace equislice::testgen {

// Rank of the given rows by fraction-free elimination.
inline int oracle_rank(std::vector<std::vector<long>> a) {
  int r = 0;
  const int cols = a.empty() ? 0 : static_cast<int>(a[0].size());
  for (int c = 0; c < cols && r < static_cast<int>(a.size()); ++c) {
    int p = r;
    while (p < static_cast<int>(a.size()) && a[p][c] == 0) ++p;
    if (p == static_cast<int>(a.size())) continue;
    std::swap(a[p], a[r]);
    for (size_t i = r + 1; i < a.size(); ++i) {
      long f = a[i][c], g = a[r][c];
      for (int j = 0; j < cols; ++j) a[i][j] = a[i][j] * g - a[r][j] * f;
    }
    ++r;
  }
  return r;
}

inline std::vector<std::vector<long>> rows_of(const IntMatrix& B, const std::vector<int>& S) {
  std::vector<std::vector<long>> out;
  for (int i : S) out.push_back(B.row(i));
  return out;
}

// Some integer vector with entries in [-3,3] \ {0} on S has sum_j c_j b_j = 0.
inline bool has_full_support_relation(const IntMatrix& B, const std::vector<int>& S) {
  if (S.empty()) return true;
  std::vector<int> c(S.size(), -3);
  while (true) {
    bool zero = true;
    for (int col = 0; col < B.cols() && zero; ++col) {
      long s = 0;
      for (size_t q = 0; q < S.size(); ++q) s += c[q] * B(S[q], col);
      zero = s == 0;
    }
    if (zero) return true;
    size_t q = 0;
    while (q < c.size()) {
      c[q] = c[q] == -1 ? 1 : c[q] + 1;
      if (c[q] <= 3) break;
      c[q] = -3;
      ++q;
    }
    if (q == c.size()) return false;
  }
}

// Leaves by brute force: S = F^c ranges over closed subsets carrying a full-support relation.
inline std::set<std::pair<std::vector<int>, int>> oracle_leaves(const IntMatrix& B) {
  std::set<std::pair<std::vector<int>, int>> out;
  const int n = B.rows();
  for (int mask = 0; mask < (1 << n); ++mask) {
    std::vector<int> S, F;
    for (int i = 0; i < n; ++i) (mask >> i & 1 ? S : F).push_back(i);
    const int r = oracle_rank(rows_of(B, S));
    bool closed = true;
    for (int j : F) {
      auto T = S;
      T.push_back(j);
      closed = closed && oracle_rank(rows_of(B, T)) > r;
    }
    if (closed && has_full_support_relation(B, S)) out.insert({F, 2 * (static_cast<int>(S.size()) - r)});
  }
  return out;
}

// Whether `x` lies in the span of `basis`, by elimination on the monomial coordinates.
inline bool in_span(const std::vector<QElement>& basis, const QElement& x) {
  std::map<QMono, int> col;
  auto to_vec = [&](const QElement& a) {
    SparseVec v;
    for (auto& [m, c] : a) {
      auto it = col.emplace(m, static_cast<int>(col.size())).first;
      v.emplace_back(it->second, c);
    }
    std::sort(v.begin(), v.end(), [](auto& p, auto& q) { return p.first < q.first; });
    return v;
  };
  SparseEchelon e;
  for (auto& b : basis) e.add(to_vec(b));
  return !e.add(to_vec(x));
}

}  // namespace equislice::testgen
