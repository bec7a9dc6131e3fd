#include "equislice/quotient.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <stdexcept>

namespace equislice {
namespace {

using Vec = std::vector<Scalar>;

// Stacks the rows of (g - Id) for every g in the list.
ExactMatrix stacked_fix_equations(const GroupData& G, const std::vector<int>& elems) {
  const int n = G.dim;
  ExactMatrix M(static_cast<int>(elems.size()) * n, n);
  const ExactMatrix I = ExactMatrix::identity(n);
  for (size_t e = 0; e < elems.size(); ++e) {
    const ExactMatrix d = G.elements[elems[e]] - I;
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) M(static_cast<int>(e) * n + r, c) = d(r, c);
  }
  return M;
}

std::vector<Vec> fixed_space(const GroupData& G, const std::vector<int>& elems) {
  if (elems.empty()) {
    std::vector<Vec> basis;
    for (int i = 0; i < G.dim; ++i) {
      Vec v(G.dim);
      v[i] = Scalar(1);
      basis.push_back(v);
    }
    return basis;
  }
  return kernel_vectors(stacked_fix_equations(G, elems));
}

std::vector<int> pointwise_stabilizer(const GroupData& G, const std::vector<Vec>& basis) {
  std::vector<int> out;
  for (int g = 0; g < G.order(); ++g) {
    bool fixes = true;
    for (const auto& u : basis)
      if (G.elements[g].apply(u) != u) {
        fixes = false;
        break;
      }
    if (fixes) out.push_back(g);
  }
  return out;
}

std::vector<Vec> omega_perp(const GroupData& G, const std::vector<Vec>& basis) {
  if (basis.empty()) return fixed_space(G, {});
  ExactMatrix rows(static_cast<int>(basis.size()), G.dim);
  for (size_t i = 0; i < basis.size(); ++i) {
    const Vec w = G.omega.transpose().apply(basis[i]);  // (u^T omega)^T
    for (int c = 0; c < G.dim; ++c) rows(static_cast<int>(i), c) = w[c];
  }
  return kernel_vectors(rows);
}

Scalar form_value(const ExactMatrix& omega, const Vec& x, const Vec& y) {
  const Vec oy = omega.apply(y);
  Scalar s;
  for (size_t i = 0; i < x.size(); ++i) s.add_product(x[i], oy[i]);
  return s;
}

}  // namespace

int GroupData::index_of(const ExactMatrix& g) const {
  auto it = keys.find(g.lifted(cyclotomic_order).to_string());
  return it == keys.end() ? -1 : it->second;
}

int GroupData::product(int a, int b) const {
  const int p = index_of(elements[a] * elements[b]);
  if (p < 0) throw std::logic_error("group is not closed under products");
  return p;
}

int GroupData::class_of(int g) const {
  for (size_t c = 0; c < classes.size(); ++c)
    if (std::binary_search(classes[c].begin(), classes[c].end(), g)) return static_cast<int>(c);
  return -1;
}

std::string GroupData::label(int g) const {
  if (g == 0) return "Id";
  ExactMatrix m = ExactMatrix::identity(dim);
  for (int i = 0; i < dim; ++i) m(i, i) = Scalar(-1);
  if (elements[g] == m) return "-Id";
  return "g" + std::to_string(g);
}

ExactMatrix standard_symplectic_form(int dim) {
  if (dim % 2) throw std::invalid_argument("symplectic dimension must be even");
  ExactMatrix w(dim, dim);
  for (int i = 0; i < dim; i += 2) {
    w(i, i + 1) = Scalar(1);
    w(i + 1, i) = Scalar(-1);
  }
  return w;
}

GroupData close_group(const std::vector<ExactMatrix>& generators, const ExactMatrix& omega, int cap) {
  const int n = omega.rows();
  if (n == 0 || omega.cols() != n || n % 2) throw std::invalid_argument("omega must be an even square matrix");
  if (!(omega.transpose() == ExactMatrix(n, n) - omega)) throw std::invalid_argument("omega is not skew");
  if (exact_rank(omega) != n) throw std::invalid_argument("omega is degenerate");
  GroupData G;
  G.dim = n;
  G.omega = omega;
  G.cyclotomic_order = omega.conductor();
  for (auto& g : generators) G.cyclotomic_order = std::lcm(G.cyclotomic_order, g.conductor());
  std::vector<ExactMatrix> gens;
  for (size_t i = 0; i < generators.size(); ++i) {
    const ExactMatrix& g = generators[i];
    if (g.rows() != n || g.cols() != n) throw std::invalid_argument("generator " + std::to_string(i + 1) + " has the wrong size");
    if (!(g.transpose() * omega * g == omega))
      throw std::invalid_argument("generator " + std::to_string(i + 1) + " does not preserve omega");
    gens.push_back(g.lifted(G.cyclotomic_order));
  }
  auto add = [&](const ExactMatrix& m) {
    std::string key = m.to_string();
    auto it = G.keys.find(key);
    if (it != G.keys.end()) return std::make_pair(it->second, false);
    if (G.order() >= cap) throw std::invalid_argument("group order exceeds cap " + std::to_string(cap));
    const int idx = G.order();
    G.keys.emplace(std::move(key), idx);
    G.elements.push_back(m);
    return std::make_pair(idx, true);
  };
  add(ExactMatrix::identity(n));
  for (auto& g : gens) G.generators.push_back(add(g).first);
  std::deque<int> queue;
  for (int i = 0; i < G.order(); ++i) queue.push_back(i);
  while (!queue.empty()) {
    const int a = queue.front();
    queue.pop_front();
    for (auto& g : gens) {
      auto [idx, fresh] = add(G.elements[a] * g);
      if (fresh) queue.push_back(idx);
    }
  }
  G.inverse.assign(G.order(), -1);
  for (int a = 0; a < G.order(); ++a) {
    if (G.inverse[a] >= 0) continue;
    auto inv = inverse(G.elements[a]);
    const int b = G.index_of(*inv);
    if (b < 0) throw std::logic_error("group is not closed under inverses");
    G.inverse[a] = b;
    G.inverse[b] = a;
  }
  std::vector<bool> done(G.order(), false);
  for (int a = 0; a < G.order(); ++a) {
    if (done[a]) continue;
    std::set<int> cls;
    for (int h = 0; h < G.order(); ++h) cls.insert(G.product(G.product(h, a), G.inverse[h]));
    for (int c : cls) done[c] = true;
    G.classes.emplace_back(cls.begin(), cls.end());
  }
  return G;
}

std::vector<ParabolicRecord> parabolic_subgroups(const GroupData& G) {
  std::set<std::vector<int>> seen;
  std::deque<std::vector<int>> queue;
  const std::vector<int> trivial = pointwise_stabilizer(G, fixed_space(G, {}));
  seen.insert(trivial);
  queue.push_back(trivial);
  while (!queue.empty()) {
    const std::vector<int> H = queue.front();
    queue.pop_front();
    for (int g = 0; g < G.order(); ++g) {
      if (std::binary_search(H.begin(), H.end(), g)) continue;
      std::vector<int> elems = H;
      elems.push_back(g);
      std::vector<int> H2 = pointwise_stabilizer(G, fixed_space(G, elems));
      if (seen.insert(H2).second) queue.push_back(H2);
    }
  }
  std::vector<ParabolicRecord> out;
  for (const auto& H : seen) {
    ParabolicRecord p;
    p.subgroup = H;
    p.fixed_basis = fixed_space(G, H);
    p.perp_basis = omega_perp(G, p.fixed_basis);
    const std::set<int> hs(H.begin(), H.end());
    for (int g = 0; g < G.order(); ++g) {
      bool normalizes = true;
      for (int h : H)
        if (!hs.count(G.product(G.product(g, h), G.inverse[g]))) {
          normalizes = false;
          break;
        }
      if (normalizes) p.normalizer.push_back(g);
    }
    p.residual_order = static_cast<int>(p.normalizer.size() / H.size());
    p.leaf_dim = static_cast<int>(p.fixed_basis.size());
    out.push_back(std::move(p));
  }
  std::sort(out.begin(), out.end(), [](const ParabolicRecord& a, const ParabolicRecord& b) {
    if (a.leaf_dim != b.leaf_dim) return a.leaf_dim > b.leaf_dim;
    if (a.subgroup.size() != b.subgroup.size()) return a.subgroup.size() < b.subgroup.size();
    return a.subgroup < b.subgroup;
  });
  return out;
}

SRAData symplectic_reflections(const GroupData& G) {
  SRAData s;
  const ExactMatrix I = ExactMatrix::identity(G.dim);
  std::vector<int> class_ids;
  for (int g = 1; g < G.order(); ++g) {
    const ExactMatrix d = G.elements[g] - I;
    auto [red, pivots] = rref(d);
    if (pivots.size() != 2) continue;
    // V = ker(s - Id) + im(s - Id); omega_s = P^T omega P with P the projection onto the image
    std::vector<Vec> cols = kernel_vectors(d);
    for (int p : pivots) cols.push_back(d.column(p));
    const ExactMatrix M = ExactMatrix::from_columns(G.dim, cols);
    auto Minv = inverse(M);
    if (!Minv) throw std::logic_error("reflection is not semisimple");
    ExactMatrix D(G.dim, G.dim);
    D(G.dim - 2, G.dim - 2) = Scalar(1);
    D(G.dim - 1, G.dim - 1) = Scalar(1);
    const ExactMatrix P = M * D * *Minv;
    s.reflections.push_back(g);
    s.omega_s.push_back(P.transpose() * G.omega * P);
    class_ids.push_back(G.class_of(g));
  }
  std::vector<int> distinct = class_ids;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  s.classes.assign(distinct.size(), {});
  for (size_t i = 0; i < s.reflections.size(); ++i) {
    const int c = static_cast<int>(std::lower_bound(distinct.begin(), distinct.end(), class_ids[i]) - distinct.begin());
    s.class_index.push_back(c);
    s.classes[c].push_back(s.reflections[i]);
  }
  return s;
}

LeafSliceSummary leaf_slice_data(const GroupData& G, const ParabolicRecord& p, const std::vector<Scalar>& v) {
  if (static_cast<int>(v.size()) != G.dim) throw std::invalid_argument("vector has the wrong length");
  if (std::all_of(v.begin(), v.end(), [](const Scalar& x) { return x.is_zero(); }))
    throw std::invalid_argument("v = 0 lies on the zero-dimensional leaf");
  std::vector<int> stab;
  for (int g = 0; g < G.order(); ++g)
    if (G.elements[g].apply(v) == v) stab.push_back(g);
  if (stab != p.subgroup) throw std::invalid_argument("stabilizer of v differs from the parabolic subgroup");

  LeafSliceSummary s;
  s.leaf_dim = p.leaf_dim;
  s.leaf_basis = p.fixed_basis;
  s.residual_order = p.residual_order;
  s.slice_dim = static_cast<int>(p.perp_basis.size());
  const ExactMatrix Pm = ExactMatrix::from_columns(G.dim, p.perp_basis);
  std::set<std::string> keys;
  for (int h : p.subgroup) {
    ExactMatrix r(s.slice_dim, s.slice_dim);
    if (s.slice_dim > 0) {
      auto sol = solve_exact(Pm, G.elements[h] * Pm);
      if (!sol) throw std::logic_error("subgroup does not preserve the perpendicular space");
      r = *sol;
    }
    keys.insert(r.to_string());
    s.slice_group.push_back(r);
  }
  s.slice_group_closed = true;
  for (auto& a : s.slice_group)
    for (auto& b : s.slice_group)
      if (!keys.count((a * b).to_string())) s.slice_group_closed = false;
  for (int g : p.normalizer) {
    bool minus = true;
    for (const auto& u : p.fixed_basis) {
      Vec neg = u;
      for (auto& x : neg) x = -x;
      if (G.elements[g].apply(u) != neg) {
        minus = false;
        break;
      }
    }
    if (minus) s.minus_id_in_residual = true;
  }
  s.ell = s.minus_id_in_residual ? 2 : 1;
  size_t lead = 0;
  while (v[lead].is_zero()) ++lead;
  std::set<std::string> lambdas;
  for (int g = 0; g < G.order(); ++g) {
    const Vec gv = G.elements[g].apply(v);
    const Scalar lambda = gv[lead] / v[lead];
    Vec lv = v;
    for (auto& x : lv) x *= lambda;
    if (lv == gv) lambdas.insert(lambda.to_string());
  }
  s.stabilizer_order = static_cast<int>(lambdas.size());
  return s;
}

bool SraCoefficient::is_zero() const {
  return hbar.is_zero() && std::all_of(c.begin(), c.end(), [](const Scalar& x) { return x.is_zero(); });
}

std::string SraCoefficient::to_string() const {
  std::string out;
  auto part = [&](const Scalar& a, const std::string& name) {
    if (a.is_zero()) return;
    std::string coef = a.to_string();
    bool neg = a.is_rational() && a.rational() < 0;
    if (neg) coef = (-a).to_string();
    if (!out.empty()) out += neg ? " - " : " + ";
    else if (neg) out += "-";
    out += (coef == "1" ? "" : coef + "*") + name;
  };
  part(hbar, "hbar");
  for (size_t i = 0; i < c.size(); ++i) part(c[i], "c" + std::to_string(i + 1));
  return out.empty() ? "0" : out;
}

std::string SraExpression::to_string(const GroupData& G) const {
  if (terms.empty()) return "0";
  std::string out;
  for (size_t i = 0; i < terms.size(); ++i) {
    if (i) out += " + ";
    out += "(" + terms[i].coefficient.to_string() + ")*[" + G.label(terms[i].element) + "]";
  }
  return out;
}

SraExpression sra_relation(const GroupData& G, const SRAData& sra, const std::vector<Scalar>& x,
                           const std::vector<Scalar>& y) {
  if (static_cast<int>(x.size()) != G.dim || static_cast<int>(y.size()) != G.dim)
    throw std::invalid_argument("vector has the wrong length");
  SraExpression e;
  const int r = static_cast<int>(sra.classes.size());
  SraTerm id{0, {form_value(G.omega, x, y), std::vector<Scalar>(r)}};
  if (!id.coefficient.is_zero()) e.terms.push_back(id);
  for (size_t i = 0; i < sra.reflections.size(); ++i) {
    SraTerm t{sra.reflections[i], {Scalar(0), std::vector<Scalar>(r)}};
    t.coefficient.c[sra.class_index[i]] = form_value(sra.omega_s[i], x, y);
    if (!t.coefficient.is_zero()) e.terms.push_back(t);
  }
  return e;
}

}  // namespace equislice
