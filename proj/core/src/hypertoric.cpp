#include "equislice/hypertoric.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace equislice {
namespace {

long dot(const std::vector<long>& a, const std::vector<long>& b) {
  long s = 0;
  for (size_t i = 0; i < a.size(); ++i) s = checked_add(s, checked_mul(a[i], b[i]));
  return s;
}

std::vector<long> column(const IntMatrix& M, int c) {
  std::vector<long> v(M.rows());
  for (int r = 0; r < M.rows(); ++r) v[r] = M(r, c);
  return v;
}

bool is_coloop_free(const IntMatrix& B, const std::vector<int>& S) {
  const int full = rank(B.select_rows(S));
  for (size_t a = 0; a < S.size(); ++a) {
    std::vector<int> rest;
    for (size_t b = 0; b < S.size(); ++b)
      if (b != a) rest.push_back(S[b]);
    if (rank(B.select_rows(rest)) != full) return false;
  }
  return true;
}

// Next combination of {0..n-1} of the same size in lexicographic order.
bool next_combination(std::vector<int>& c, int n) {
  const int k = static_cast<int>(c.size());
  for (int i = k - 1; i >= 0; --i) {
    if (c[i] < n - k + i) {
      ++c[i];
      for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

// Leaf data for the parabolic subtorus with Lie lattice K.
LeafDescriptor leaf_from_kernel(const IntMatrix& B, const IntMatrix& K) {
  LeafDescriptor d;
  d.subtorus_lattice = K;
  std::vector<int> Fc;
  for (int j = 0; j < B.rows(); ++j) {
    bool acts = false;
    for (int s = 0; s < K.rows(); ++s)
      if (dot(B.row(j), K.row(s)) != 0) acts = true;
    if (acts) {
      d.F.push_back(j);
    } else {
      Fc.push_back(j);
    }
  }
  d.leaf_dim = 2 * (static_cast<int>(Fc.size()) - (B.cols() - K.rows()));
  d.is_vertex = d.leaf_dim == 0;
  return d;
}

bool unit_factors(const IntMatrix& M, int expected_rank) {
  SmithForm s = smith_normal_form(M);
  if (static_cast<int>(s.invariant_factors.size()) != expected_rank) return false;
  for (long f : s.invariant_factors)
    if (f != 1 && f != -1) return false;
  return true;
}

}  // namespace

void TorusActionMatrix::validate() const {
  if (m() == 0 || n() == 0) throw std::invalid_argument("empty torus action matrix");
  if (rank(B) != m()) throw std::invalid_argument("rank deficient: rank " + std::to_string(rank(B)) + " < m = " + std::to_string(m()));
}

UnimodularityResult check_unimodular(const TorusActionMatrix& A) {
  A.validate();
  UnimodularityResult res;
  std::vector<int> rows(A.m());
  std::iota(rows.begin(), rows.end(), 0);
  do {
    long d = determinant(A.B.select_rows(rows));
    if (d != 0 && d != 1 && d != -1) {
      res.unimodular = false;
      res.witness = d;
      res.witness_rows = rows;
      return res;
    }
  } while (next_combination(rows, A.n()));
  return res;
}

PoissonPresentation cotangent_presentation(int n, const std::vector<int>& inverted) {
  std::vector<std::string> names;
  for (int i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
  for (int i = 1; i <= n; ++i) names.push_back("y" + std::to_string(i));
  std::vector<bool> inv(2 * n, false);
  for (int v : inverted) inv.at(v) = true;
  auto ctx = make_context(names, std::vector<int>(2 * n, 1), inv, std::vector<bool>(2 * n, false), 6);
  PoissonPresentation P(ctx);
  for (int i = 0; i < n; ++i) P.set(i, n + i, P.one());
  P.declared_degree = -2;
  P.name = "cotangent";
  return P;
}

std::vector<TruncatedElement> moment_map(const TorusActionMatrix& A, const ContextPtr& ctx) {
  std::vector<TruncatedElement> mu;
  const int n = A.n();
  for (int i = 0; i < A.m(); ++i) {
    TruncatedElement f(ctx);
    for (int j = 0; j < n; ++j) {
      if (A.B(j, i) == 0) continue;
      f += TruncatedElement::variable(ctx, j) * TruncatedElement::variable(ctx, n + j) * Scalar(A.B(j, i));
    }
    mu.push_back(f);
  }
  return mu;
}

std::vector<int> LeafDescriptor::complement(int n) const {
  std::vector<int> out;
  for (int j = 0; j < n; ++j)
    if (!std::binary_search(F.begin(), F.end(), j)) out.push_back(j);
  return out;
}

std::vector<LeafDescriptor> enumerate_leaves(const TorusActionMatrix& A) {
  if (!check_unimodular(A).unimodular) throw std::invalid_argument("torus action matrix is not unimodular");
  const int n = A.n();
  if (n > 24) throw std::invalid_argument("too many coordinates for flat enumeration");
  std::map<std::vector<std::vector<long>>, LeafDescriptor> seen;
  for (unsigned long mask = 0; mask < (1UL << n); ++mask) {
    std::vector<int> S;
    for (int j = 0; j < n; ++j)
      if (mask & (1UL << j)) S.push_back(j);
    IntMatrix K = kernel_basis(A.B.select_rows(S));
    auto key = K.to_rows();
    if (seen.count(key)) continue;
    LeafDescriptor d = leaf_from_kernel(A.B, K);
    if (!is_coloop_free(A.B, d.complement(n))) continue;
    seen.emplace(std::move(key), std::move(d));
  }
  std::vector<LeafDescriptor> out;
  for (auto& [k, d] : seen) out.push_back(d);
  std::sort(out.begin(), out.end(), [](const LeafDescriptor& a, const LeafDescriptor& b) {
    if (a.leaf_dim != b.leaf_dim) return a.leaf_dim > b.leaf_dim;
    return a.F < b.F;
  });
  return out;
}

LeafDescriptor leaf_for_flat(const TorusActionMatrix& A, const std::vector<int>& F) {
  A.validate();
  std::vector<int> sorted = F;
  std::sort(sorted.begin(), sorted.end());
  for (int j : sorted)
    if (j < 0 || j >= A.n()) throw std::invalid_argument("coordinate index out of range");
  LeafDescriptor probe;
  probe.F = sorted;
  const std::vector<int> Fc = probe.complement(A.n());
  LeafDescriptor d = leaf_from_kernel(A.B, kernel_basis(A.B.select_rows(Fc)));
  if (d.F != sorted || !is_coloop_free(A.B, Fc)) throw std::invalid_argument("F is not the coordinate set of a leaf");
  return d;
}

IntMatrix slice_matrix(const TorusActionMatrix& A, const std::vector<int>& F) {
  LeafDescriptor d = leaf_for_flat(A, F);
  const IntMatrix& K = d.subtorus_lattice;
  IntMatrix S(static_cast<int>(d.F.size()), K.rows());
  for (size_t a = 0; a < d.F.size(); ++a)
    for (int s = 0; s < K.rows(); ++s) S(static_cast<int>(a), s) = dot(A.B.row(d.F[a]), K.row(s));
  return S;
}

NonvanishingData NonvanishingData::generic(int n) {
  return {std::vector<bool>(n, true), std::vector<bool>(n, true)};
}

NonvanishingData NonvanishingData::parse(int n, const std::string& text) {
  NonvanishingData d{std::vector<bool>(n, false), std::vector<bool>(n, false)};
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.size() < 2 || (item[0] != 'x' && item[0] != 'y'))
      throw std::invalid_argument("bad nonvanishing coordinate: " + item);
    int idx = 0;
    try {
      idx = std::stoi(item.substr(1));
    } catch (const std::exception&) {
      throw std::invalid_argument("bad nonvanishing coordinate: " + item);
    }
    if (idx < 1 || idx > n) throw std::invalid_argument("nonvanishing coordinate out of range: " + item);
    (item[0] == 'x' ? d.x : d.y)[idx - 1] = true;
  }
  return d;
}

DecompositionReport decompose_at(const TorusActionMatrix& A, const LeafDescriptor& leaf,
                                 const NonvanishingData& nz, const std::optional<std::vector<int>>& G_override) {
  if (!check_unimodular(A).unimodular) throw std::invalid_argument("torus action matrix is not unimodular");
  const int n = A.n(), m = A.m();
  if (static_cast<int>(nz.x.size()) != n || static_cast<int>(nz.y.size()) != n)
    throw std::invalid_argument("nonvanishing data has the wrong length");
  DecompositionReport rep;
  rep.leaf = leaf_for_flat(A, leaf.F);
  const std::vector<int> Fc = rep.leaf.complement(n);
  for (int j : rep.leaf.F)
    if (nz.x[j] || nz.y[j]) throw std::invalid_argument("base point must vanish on the coordinates of F");
  const int d = rank(A.B.select_rows(Fc));

  auto signed_rows = [&](const std::vector<int>& G) {
    IntMatrix M(static_cast<int>(G.size()), m);
    for (size_t q = 0; q < G.size(); ++q)
      for (int c = 0; c < m; ++c) M(static_cast<int>(q), c) = nz.x[G[q]] ? A.B(G[q], c) : -A.B(G[q], c);
    return M;
  };
  auto valid = [&](const std::vector<int>& G) {
    for (int j : G)
      if (!nz.x[j] && !nz.y[j]) return false;
    return unit_factors(signed_rows(G), d);
  };
  std::vector<int> G;
  if (G_override) {
    G = *G_override;
    std::sort(G.begin(), G.end());
    for (int j : G)
      if (!std::binary_search(Fc.begin(), Fc.end(), j)) throw std::invalid_argument("G must lie in the complement of F");
    if (static_cast<int>(G.size()) != d || !valid(G)) throw std::invalid_argument("supplied G is not valid for this point");
  } else if (d == 0) {
    G.clear();
  } else {
    std::vector<int> pick(d);
    std::iota(pick.begin(), pick.end(), 0);
    bool found = false;
    if (static_cast<int>(Fc.size()) >= d) {
      do {
        std::vector<int> cand;
        for (int p : pick) cand.push_back(Fc[p]);
        if (valid(cand)) {
          G = cand;
          found = true;
          break;
        }
      } while (next_combination(pick, static_cast<int>(Fc.size())));
    }
    if (!found) throw std::invalid_argument("no valid G: the base point is not on a free orbit");
  }
  rep.G = G;
  for (int j : G) rep.swapped.push_back(!nz.x[j]);
  for (int j : Fc)
    if (!std::binary_search(G.begin(), G.end(), j)) rep.rest.push_back(j);

  // dual vectors: Mg * X = Id via the Smith form U Mg V = D
  const IntMatrix Mg = signed_rows(G);
  rep.dual = IntMatrix(m, d);
  if (d > 0) {
    SmithForm s = smith_normal_form(Mg);
    IntMatrix Dp(m, d);
    for (int q = 0; q < d; ++q) Dp(q, q) = s.D(q, q);
    rep.dual = s.V * Dp * s.U;
  }
  for (int i : rep.rest) {
    std::vector<long> ri;
    long total = 0;
    for (int q = 0; q < d; ++q) {
      ri.push_back(-dot(A.B.row(i), column(rep.dual, q)));
      total += ri.back();
    }
    for (int c = 0; c < m; ++c) {
      long v = A.B(i, c);
      for (int q = 0; q < d; ++q) v += ri[q] * Mg(q, c);
      if (v != 0) throw std::logic_error("character of a leaf coordinate is outside the span of G");
    }
    rep.r.push_back(ri);
    rep.weight_x.push_back(1 + static_cast<int>(total));
    rep.weight_y.push_back(1 - static_cast<int>(total));
  }
  rep.slice = slice_matrix(A, rep.leaf.F);
  for (size_t q = 0; q < G.size(); ++q)
    rep.hyperplanes.push_back((rep.swapped[q] ? "y" : "x") + std::to_string(G[q] + 1));
  for (int i : rep.rest) {
    if (nz.x[i]) {
      rep.hyperplanes.push_back("x" + std::to_string(i + 1));
    } else if (nz.y[i]) {
      rep.hyperplanes.push_back("y" + std::to_string(i + 1));
    }
  }

  // C^x stabilizer: lambda in it iff (lambda, ..., lambda) lies in the image of T^m on the
  // nonzero coordinates; its order is the gcd of the coordinate sums of a basis of ker M^T.
  std::vector<std::vector<long>> chars;
  for (int j : Fc) {
    if (nz.x[j]) chars.push_back(A.B.row(j));
    if (nz.y[j]) {
      std::vector<long> c = A.B.row(j);
      for (auto& v : c) v = -v;
      chars.push_back(c);
    }
  }
  long g = 0;
  if (!chars.empty()) {
    IntMatrix W = kernel_basis(IntMatrix(chars).transpose());
    for (int s = 0; s < W.rows(); ++s) {
      long sum = 0;
      for (int c = 0; c < W.cols(); ++c) sum += W(s, c);
      g = std::gcd(g, std::labs(sum));
    }
  }
  rep.ell = static_cast<int>(g);
  rep.twisted = rep.ell == 2;
  return rep;
}

HypertoricVerification verify_decomposition(const TorusActionMatrix& A, const DecompositionReport& rep, int order) {
  HypertoricVerification out;
  const int n = A.n(), m = A.m();
  const int d = static_cast<int>(rep.G.size());
  auto fail = [&](const std::string& what, const TruncatedElement& r) {
    out.pass = false;
    out.failures.push_back({what, r});
  };
  std::vector<int> inverted;
  for (int q = 0; q < d; ++q) inverted.push_back(rep.swapped[q] ? n + rep.G[q] : rep.G[q]);
  const PoissonPresentation P = cotangent_presentation(n, inverted).with_order(std::max(order, 1));
  const ContextPtr ctx = P.context();
  auto X = [&](int i) { return TruncatedElement::variable(ctx, i); };
  auto Y = [&](int i) { return TruncatedElement::variable(ctx, n + i); };
  auto gvar = [&](int q, long p) {
    return TruncatedElement::variable(ctx, rep.swapped[q] ? n + rep.G[q] : rep.G[q], static_cast<int>(p));
  };
  if (static_cast<int>(rep.r.size()) != static_cast<int>(rep.rest.size())) throw std::invalid_argument("report r has the wrong shape");

  std::vector<TruncatedElement> leafx, leafy, slicex, slicey;
  for (size_t i = 0; i < rep.rest.size(); ++i) {
    TruncatedElement fx = X(rep.rest[i]), fy = Y(rep.rest[i]);
    for (int q = 0; q < d; ++q) {
      fx *= gvar(q, rep.r[i][q]);
      fy *= gvar(q, -rep.r[i][q]);
    }
    leafx.push_back(fx);
    leafy.push_back(fy);
    if (fx.weight() != std::optional<int>(rep.weight_x[i])) fail("weight of x'" + std::to_string(rep.rest[i] + 1), fx);
    if (fy.weight() != std::optional<int>(rep.weight_y[i])) fail("weight of y'" + std::to_string(rep.rest[i] + 1), fy);
  }
  for (int a : rep.leaf.F) {
    TruncatedElement fx = X(a), fy = Y(a);
    for (int q = 0; q < d; ++q) {
      const long c = dot(A.B.row(a), column(rep.dual, q));
      fx *= gvar(q, -c);
      fy *= gvar(q, c);
    }
    slicex.push_back(fx);
    slicey.push_back(fy);
  }
  const std::vector<TruncatedElement> mu = moment_map(A, ctx);
  auto mu_along = [&](const std::vector<long>& v) {
    TruncatedElement f(ctx);
    for (int s = 0; s < m; ++s)
      if (v[s] != 0) f += mu[s] * Scalar(v[s]);
    return f;
  };

  // invariance of leaf coordinates under T^m and of slice coordinates under T'
  for (size_t i = 0; i < leafx.size(); ++i)
    for (int s = 0; s < m; ++s) {
      TruncatedElement rx = bracket(P, mu[s], leafx[i]), ry = bracket(P, mu[s], leafy[i]);
      if (!rx.is_zero()) fail("{mu" + std::to_string(s + 1) + ", x'" + std::to_string(rep.rest[i] + 1) + "}", rx);
      if (!ry.is_zero()) fail("{mu" + std::to_string(s + 1) + ", y'" + std::to_string(rep.rest[i] + 1) + "}", ry);
    }
  for (int q = 0; q < d; ++q) {
    const TruncatedElement h = mu_along(column(rep.dual, q));
    for (size_t a = 0; a < slicex.size(); ++a) {
      TruncatedElement rx = bracket(P, h, slicex[a]), ry = bracket(P, h, slicey[a]);
      if (!rx.is_zero()) fail("T' action on x'" + std::to_string(rep.leaf.F[a] + 1), rx);
      if (!ry.is_zero()) fail("T' action on y'" + std::to_string(rep.leaf.F[a] + 1), ry);
    }
  }
  // standard symplectic block on the leaf coordinates
  const TruncatedElement one = TruncatedElement::constant(ctx, Scalar(1));
  for (size_t i = 0; i < leafx.size(); ++i)
    for (size_t j = 0; j < leafx.size(); ++j) {
      TruncatedElement xy = bracket(P, leafx[i], leafy[j]) - (i == j ? one : TruncatedElement(ctx));
      if (!xy.is_zero()) fail("{x'" + std::to_string(rep.rest[i] + 1) + ", y'" + std::to_string(rep.rest[j] + 1) + "}", xy);
      if (j > i) {
        TruncatedElement xx = bracket(P, leafx[i], leafx[j]), yy = bracket(P, leafy[i], leafy[j]);
        if (!xx.is_zero()) fail("{x'" + std::to_string(rep.rest[i] + 1) + ", x'" + std::to_string(rep.rest[j] + 1) + "}", xx);
        if (!yy.is_zero()) fail("{y'" + std::to_string(rep.rest[i] + 1) + ", y'" + std::to_string(rep.rest[j] + 1) + "}", yy);
      }
    }
  // leaf and slice coordinates commute
  for (size_t i = 0; i < leafx.size(); ++i)
    for (size_t a = 0; a < slicex.size(); ++a) {
      const TruncatedElement* lf[2] = {&leafx[i], &leafy[i]};
      const TruncatedElement* sf[2] = {&slicex[a], &slicey[a]};
      for (auto* l : lf)
        for (auto* s : sf) {
          TruncatedElement r = bracket(P, *l, *s);
          if (!r.is_zero()) fail("leaf/slice bracket at " + std::to_string(rep.rest[i] + 1) + "," + std::to_string(rep.leaf.F[a] + 1), r);
        }
    }
  // elimination of y_G (x_G when swapped) from mu(dual_q) = 0
  IntMatrix span(m, d + rep.leaf.subtorus_lattice.rows());
  for (int q = 0; q < d; ++q)
    for (int s = 0; s < m; ++s) span(s, q) = rep.dual(s, q);
  for (int t = 0; t < rep.leaf.subtorus_lattice.rows(); ++t)
    for (int s = 0; s < m; ++s) span(s, d + t) = rep.leaf.subtorus_lattice(t, s);
  if (rank(span) != m) fail("moment map directions do not span", TruncatedElement(ctx));
  for (int t = 0; t < rep.leaf.subtorus_lattice.rows(); ++t) {
    const TruncatedElement h = mu_along(rep.leaf.subtorus_lattice.row(t));
    for (auto& term : h.terms())
      for (int j = 0; j < n; ++j)
        if ((term.mono.e[j] != 0 || term.mono.e[n + j] != 0) && !std::binary_search(rep.leaf.F.begin(), rep.leaf.F.end(), j))
          fail("slice moment map involves leaf coordinates", h);
  }
  std::vector<TruncatedElement> images(2 * n);
  for (int i = 0; i < 2 * n; ++i) images[i] = TruncatedElement::variable(ctx, i);
  for (int q = 0; q < d; ++q) {
    const int j = rep.G[q];
    const std::vector<long> v = column(rep.dual, q);
    for (int p = 0; p < d; ++p) {
      const long c = dot(A.B.row(rep.G[p]), v) * (rep.swapped[p] ? -1 : 1);
      if (c != (p == q ? 1 : 0)) fail("elimination matrix is not the identity", TruncatedElement(ctx));
    }
    const TruncatedElement h = mu_along(v);
    // h = sign * x_j y_j + rest; solve for the non-inverted partner
    const long sign = dot(A.B.row(j), v);
    TruncatedElement rest = h - X(j) * Y(j) * Scalar(sign);
    const int solved = rep.swapped[q] ? j : n + j;
    images[solved] = -(rest * gvar(q, -1)) * Scalar(sign).inverse();
  }
  for (int q = 0; q < d; ++q) {
    TruncatedElement res = substitute(mu_along(column(rep.dual, q)), images, ctx);
    if (!res.is_zero()) fail("moment equation " + std::to_string(q + 1) + " after elimination", res);
  }
  return out;
}

}  // namespace equislice
