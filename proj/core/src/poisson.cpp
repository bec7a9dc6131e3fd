#include "equislice/poisson.hpp"

#include <algorithm>
#include <climits>
#include <functional>
#include <set>
#include <stdexcept>

#include "equislice/linalg.hpp"

namespace equislice {

namespace {

bool has_filtration(const GradedContext& ctx) {
  for (bool f : ctx.filtration)
    if (f) return true;
  return false;
}

bool lead_divides(const GradedContext& ctx, const Mono& lead, const Mono& m) {
  for (int i = 0; i < ctx.size(); ++i)
    if (!ctx.invertible[i] && m.e[i] < lead.e[i]) return false;
  return true;
}

Mono mono_sub(const Mono& a, const Mono& b) {
  Mono r;
  for (int i = 0; i < kMaxVars; ++i) r.e[i] = static_cast<int8_t>(a.e[i] - b.e[i]);
  return r;
}

// Display order used to normalize basis vectors.
bool display_less(const GradedContext& ctx, const Mono& a, const Mono& b) {
  int ja = ctx.j_order(a), jb = ctx.j_order(b);
  if (ja != jb) return ja < jb;
  int da = ctx.poly_degree(a), db = ctx.poly_degree(b);
  if (da != db) return da < db;
  return b < a;
}

std::vector<int> support_vars(const TruncatedElement& f) {
  std::vector<int> vars;
  const int n = f.context()->size();
  std::vector<bool> seen(n, false);
  for (auto& t : f.terms())
    for (int i = 0; i < n; ++i)
      if (t.mono.e[i] != 0) seen[i] = true;
  for (int i = 0; i < n; ++i)
    if (seen[i]) vars.push_back(i);
  return vars;
}

std::string pair_name(const GradedContext& ctx, int i, int j) {
  return "{" + ctx.names[i] + "," + ctx.names[j] + "}";
}

}  // namespace

PoissonPresentation::PoissonPresentation(ContextPtr ctx) : ctx_(std::move(ctx)) {
  const int n = ctx_->size();
  table_.assign(n, std::vector<TruncatedElement>(n, TruncatedElement(ctx_)));
}

void PoissonPresentation::set(int i, int j, const TruncatedElement& v) {
  if (i == j) {
    if (!v.is_zero()) throw std::invalid_argument("bracket table must vanish on the diagonal");
    return;
  }
  TruncatedElement w = v.in_context(ctx_);
  table_[i][j] = w;
  table_[j][i] = -w;
}

void PoissonPresentation::set(const std::string& a, const std::string& b, const std::string& expr) {
  set(ctx_->require(a), ctx_->require(b), parse(expr));
}

Mono relation_lead(const TruncatedElement& r) {
  if (r.is_zero()) throw std::invalid_argument("zero relation");
  const auto& ctx = *r.context();
  const bool local = has_filtration(ctx);
  const Term* best = nullptr;
  auto key_less = [&](const Mono& a, const Mono& b) {
    if (local) {
      int ja = ctx.j_order(a), jb = ctx.j_order(b);
      if (ja != jb) return ja > jb;  // lower J-order is "larger"
    }
    int da = ctx.poly_degree(a), db = ctx.poly_degree(b);
    if (da != db) return da < db;
    return a < b;
  };
  for (auto& t : r.terms())
    if (!best || key_less(best->mono, t.mono)) best = &t;
  return best->mono;
}

void PoissonPresentation::add_relation(const TruncatedElement& r0) {
  TruncatedElement r = r0.in_context(ctx_);
  Mono lead = relation_lead(r);
  r *= r.coefficient(lead).inverse();
  relations_.push_back({r, lead});
}

bool PoissonPresentation::is_standard(const Mono& m) const {
  for (auto& rel : relations_)
    if (lead_divides(*ctx_, rel.lead, m)) return false;
  return true;
}

TruncatedElement PoissonPresentation::reduce(const TruncatedElement& f) const {
  if (relations_.empty()) return f;
  TruncatedElement r = f;
  for (int iter = 0; iter < 100000; ++iter) {
    std::vector<std::vector<Term>> quot(relations_.size());
    bool any = false;
    for (auto& t : r.terms()) {
      for (size_t k = 0; k < relations_.size(); ++k) {
        if (lead_divides(*ctx_, relations_[k].lead, t.mono)) {
          quot[k].push_back({mono_sub(t.mono, relations_[k].lead), t.coef});
          any = true;
          break;
        }
      }
    }
    if (!any) return r;
    for (size_t k = 0; k < relations_.size(); ++k) {
      if (quot[k].empty()) continue;
      r -= TruncatedElement::from_terms(ctx_, std::move(quot[k])) * relations_[k].poly;
    }
  }
  throw std::runtime_error("relation reduction did not terminate");
}

PoissonPresentation PoissonPresentation::with_order(int order) const {
  PoissonPresentation p(equislice::with_order(ctx_, order));
  for (int i = 0; i < size(); ++i)
    for (int j = i + 1; j < size(); ++j) p.set(i, j, table_[i][j].in_context(p.ctx_));
  for (auto& r : relations_) p.add_relation(r.poly.in_context(p.ctx_));
  p.declared_degree = declared_degree;
  p.name = name;
  return p;
}

TruncatedElement VectorFieldRep::apply(const TruncatedElement& f) const {
  TruncatedElement out(f.context());
  for (int i : support_vars(f)) {
    if (i >= static_cast<int>(images.size()) || images[i].is_zero()) continue;
    out += f.derivative(i) * images[i];
  }
  return out;
}

TruncatedElement bracket_ambient(const PoissonPresentation& P, const TruncatedElement& f0,
                                 const TruncatedElement& g0) {
  const auto& ctx = P.context();
  TruncatedElement f = f0.in_context(ctx), g = g0.in_context(ctx);
  TruncatedElement out(ctx);
  std::vector<int> fv = support_vars(f), gv = support_vars(g);
  if (fv.empty() || gv.empty()) return out;
  std::vector<TruncatedElement> dg(ctx->size());
  for (int j : gv) dg[j] = g.derivative(j);
  for (int i : fv) {
    TruncatedElement a(ctx);
    for (int j : gv) {
      const TruncatedElement& t = P.entry(i, j);
      if (t.is_zero()) continue;
      a += t * dg[j];
    }
    if (a.is_zero()) continue;
    out += f.derivative(i) * a;
  }
  return out;
}

TruncatedElement bracket(const PoissonPresentation& P, const TruncatedElement& f,
                         const TruncatedElement& g) {
  return P.reduce(bracket_ambient(P, f, g));
}

int bracket_precision(const ContextPtr& ctx) {
  return has_filtration(*ctx) ? std::max(ctx->order - 1, 0) : ctx->order;
}

bool vanishes_mod(const TruncatedElement& f, int precision) {
  for (auto& t : f.terms())
    if (f.context()->j_order(t.mono) < precision) return false;
  return true;
}

JacobiReport check_jacobi(const PoissonPresentation& P, std::optional<int> precision) {
  JacobiReport rep;
  rep.precision = precision.value_or(P.context()->order);
  const int n = P.size();
  auto ad = [&](int i, const TruncatedElement& f) { return bracket_ambient(P, P.var(i), f); };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        TruncatedElement r = ad(i, P.entry(j, k)) + ad(j, P.entry(k, i)) + ad(k, P.entry(i, j));
        r = P.reduce(r).truncated(rep.precision);
        if (!r.is_zero()) {
          rep.pass = false;
          rep.violations.push_back({i, j, k, r});
        }
      }
  return rep;
}

std::vector<RelationViolation> check_relation_ideal(const PoissonPresentation& P) {
  std::vector<RelationViolation> out;
  for (size_t r = 0; r < P.relations().size(); ++r)
    for (int i = 0; i < P.size(); ++i) {
      TruncatedElement b = bracket(P, P.relations()[r].poly, P.var(i));
      if (!b.is_zero()) out.push_back({static_cast<int>(r), i, b});
    }
  return out;
}

VectorFieldRep hamiltonian_field(const PoissonPresentation& P, const TruncatedElement& f) {
  VectorFieldRep xi;
  for (int i = 0; i < P.size(); ++i) xi.images.push_back(bracket(P, f, P.var(i)));
  return xi;
}

VectorFieldRep euler_field(const PoissonPresentation& P) {
  VectorFieldRep xi;
  const auto& ctx = P.context();
  for (int i = 0; i < P.size(); ++i)
    xi.images.push_back(P.var(i) * Scalar(static_cast<long>(ctx->weights[i])));
  return xi;
}

LieDerivativeReport lie_derivative_check(const PoissonPresentation& P, const VectorFieldRep& xi, int k,
                                         std::optional<int> precision) {
  LieDerivativeReport rep;
  rep.precision = precision.value_or(bracket_precision(P.context()));
  const int n = P.size();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      TruncatedElement r = xi.apply(P.entry(i, j)) - bracket_ambient(P, xi.images[i], P.var(j)) -
                           bracket_ambient(P, P.var(i), xi.images[j]) -
                           P.entry(i, j) * Scalar(static_cast<long>(k));
      r = P.reduce(r).truncated(rep.precision);
      if (!r.is_zero()) {
        rep.pass = false;
        rep.violations.push_back({i, j, r});
      }
    }
  return rep;
}

HomogeneityResult homogeneity_degree(const PoissonPresentation& P, const std::vector<int>& weights) {
  const auto& ctx = *P.context();
  if (static_cast<int>(weights.size()) != ctx.size())
    throw std::invalid_argument("weight vector length does not match the variables");
  auto wt = [&](const Mono& m) {
    int w = 0;
    for (int i = 0; i < ctx.size(); ++i) w += weights[i] * m.e[i];
    return w;
  };
  HomogeneityResult res;
  std::optional<int> d;
  for (int i = 0; i < ctx.size(); ++i)
    for (int j = i + 1; j < ctx.size(); ++j) {
      const auto& e = P.entry(i, j);
      for (auto& t : e.terms()) {
        int off = wt(t.mono) - weights[i] - weights[j];
        if (!d) d = off;
        if (off != *d) {
          res.offending.push_back(pair_name(ctx, i, j) + " term " + mono_to_string(ctx, t.mono) +
                                  " has degree " + std::to_string(off) + ", expected " +
                                  std::to_string(*d));
        }
      }
    }
  for (size_t r = 0; r < P.relations().size(); ++r) {
    const auto& terms = P.relations()[r].poly.terms();
    int w0 = wt(P.relations()[r].lead);
    for (auto& t : terms)
      if (wt(t.mono) != w0)
        res.offending.push_back("relation " + std::to_string(r) + " term " +
                                mono_to_string(ctx, t.mono) + " breaks homogeneity");
  }
  if (!d) res.offending.push_back("no nonzero bracket entries");
  if (res.offending.empty()) res.degree = d;
  return res;
}

std::vector<std::vector<int>> grading_search(const PoissonPresentation& P, int target, int bound) {
  const auto& ctx = *P.context();
  const int n = ctx.size();
  SparseEchelon ech;
  auto add_row = [&](std::vector<long> coeffs, long rhs) {
    SparseVec row;
    for (int l = 0; l < n; ++l)
      if (coeffs[l]) row.emplace_back(l, Scalar(coeffs[l]));
    if (rhs) row.emplace_back(n, Scalar(rhs));
    ech.add(std::move(row));
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (auto& t : P.entry(i, j).terms()) {
        std::vector<long> c(n, 0);
        for (int l = 0; l < n; ++l) c[l] = t.mono.e[l];
        c[i] -= 1;
        c[j] -= 1;
        add_row(c, target);
      }
  for (auto& rel : P.relations())
    for (auto& t : rel.poly.terms()) {
      std::vector<long> c(n, 0);
      for (int l = 0; l < n; ++l) c[l] = t.mono.e[l] - rel.lead.e[l];
      add_row(c, 0);
    }
  std::vector<std::vector<int>> out;
  if (ech.is_pivot(n)) return out;
  ech.make_reduced();
  std::vector<int> free_vars;
  for (int l = 0; l < n; ++l)
    if (!ech.is_pivot(l)) free_vars.push_back(l);
  std::vector<int> w(n, 0);
  std::function<void(size_t)> rec = [&](size_t level) {
    if (level == free_vars.size()) {
      for (auto& [p, row] : ech.rows()) {
        Scalar v(0);
        for (auto& [c, x] : row) {
          if (c == p) continue;
          if (c == n) v += x;
          else v -= x * Scalar(static_cast<long>(w[c]));
        }
        const mpq_class& q = v.rational();
        if (q.get_den() != 1 || abs(q) > bound) return;
        w[p] = static_cast<int>(q.get_num().get_si());
      }
      out.push_back(w);
      return;
    }
    for (int x = -bound; x <= bound; ++x) {
      w[free_vars[level]] = x;
      rec(level + 1);
    }
  };
  rec(0);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Mono> monomials_of_weight(const PoissonPresentation& P, int w, const MonomialBounds& b) {
  const auto& ctx = *P.context();
  const int n = ctx.size();
  std::vector<int> filt, plain, inv;
  for (int i = 0; i < n; ++i) {
    if (ctx.invertible[i]) inv.push_back(i);
    else if (ctx.filtration[i]) filt.push_back(i);
    else plain.push_back(i);
  }
  int solver = -1;
  for (int i : inv)
    if (ctx.weights[i] != 0) solver = i;
  std::vector<int> free_inv;
  for (int i : inv)
    if (i != solver) free_inv.push_back(i);

  std::vector<Mono> out;
  Mono m;
  std::function<void(size_t)> inv_rec = [&](size_t level) {
    if (level == free_inv.size()) {
      int rest = w - ctx.weight(m);
      if (solver < 0) {
        if (rest == 0 && P.is_standard(m)) out.push_back(m);
        return;
      }
      if (rest % ctx.weights[solver] != 0) return;
      int e = rest / ctx.weights[solver];
      if (e < INT8_MIN || e > INT8_MAX) return;
      m.e[solver] = static_cast<int8_t>(e);
      if (P.is_standard(m)) out.push_back(m);
      m.e[solver] = 0;
      return;
    }
    for (int e = -b.laurent_bound; e <= b.laurent_bound; ++e) {
      m.e[free_inv[level]] = static_cast<int8_t>(e);
      inv_rec(level + 1);
    }
    m.e[free_inv[level]] = 0;
  };
  std::function<void(size_t, int)> plain_rec = [&](size_t level, int budget) {
    if (level == plain.size()) {
      inv_rec(0);
      return;
    }
    for (int e = 0; e <= budget; ++e) {
      m.e[plain[level]] = static_cast<int8_t>(e);
      plain_rec(level + 1, budget - e);
    }
    m.e[plain[level]] = 0;
  };
  std::function<void(size_t, int)> filt_rec = [&](size_t level, int budget) {
    if (level == filt.size()) {
      plain_rec(0, b.degree_cap);
      return;
    }
    for (int e = 0; e <= budget; ++e) {
      m.e[filt[level]] = static_cast<int8_t>(e);
      filt_rec(level + 1, budget - e);
    }
    m.e[filt[level]] = 0;
  };
  filt_rec(0, ctx.order - 1);
  std::sort(out.begin(), out.end(), [&](const Mono& x, const Mono& y) { return display_less(ctx, x, y); });
  return out;
}

std::vector<TruncatedElement> joint_centralizer(const PoissonPresentation& P,
                                                const std::vector<Mono>& monos,
                                                const std::vector<TruncatedElement>& gens,
                                                int precision) {
  const auto& ctx = P.context();
  std::map<std::pair<int, Mono>, SparseVec> rows;
  for (size_t c = 0; c < monos.size(); ++c) {
    TruncatedElement m = TruncatedElement::monomial(ctx, monos[c], Scalar(1));
    for (size_t r = 0; r < gens.size(); ++r) {
      TruncatedElement b = bracket(P, m, gens[r]);
      for (auto& t : b.terms())
        if (ctx->j_order(t.mono) < precision)
          rows[{static_cast<int>(r), t.mono}].emplace_back(static_cast<int>(c), t.coef);
    }
  }
  SparseEchelon ech;
  for (auto& [key, row] : rows) ech.add(row);
  std::vector<TruncatedElement> basis;
  for (auto& v : ech.nullspace(static_cast<int>(monos.size()))) {
    // normalize by the coefficient of the first monomial in display order
    int first = v.front().first;
    Scalar lead = v.front().second;
    for (auto& [c, x] : v)
      if (c < first) {
        first = c;
        lead = x;
      }
    std::vector<Term> terms;
    for (auto& [c, x] : v) terms.push_back({monos[c], x / lead});
    basis.push_back(TruncatedElement::from_terms(ctx, std::move(terms)));
  }
  return basis;
}

std::vector<CenterBlock> poisson_center_basis(const PoissonPresentation& P, int wmin, int wmax,
                                              const MonomialBounds& b, std::optional<int> precision) {
  const int prec = precision.value_or(bracket_precision(P.context()));
  std::vector<TruncatedElement> gens;
  for (int i = 0; i < P.size(); ++i) gens.push_back(P.var(i));
  std::vector<CenterBlock> out;
  for (int w = wmin; w <= wmax; ++w) {
    std::vector<Mono> monos = monomials_of_weight(P, w, b);
    out.push_back({w, joint_centralizer(P, monos, gens, prec)});
  }
  return out;
}

GradedDimTable hp0_graded(const PoissonPresentation& P0, int degree_cap) {
  const auto& c0 = *P0.context();
  for (int i = 0; i < c0.size(); ++i) {
    if (c0.invertible[i]) throw std::invalid_argument("hp0 requires a polynomial presentation");
    if (c0.weights[i] <= 0) throw std::invalid_argument("hp0 requires positive weights");
  }
  // drop the filtration so that nothing is truncated
  ContextPtr ctx = make_context(c0.names, c0.weights, c0.invertible,
                                std::vector<bool>(c0.size(), false), 1);
  PoissonPresentation P(ctx);
  for (int i = 0; i < P.size(); ++i)
    for (int j = i + 1; j < P.size(); ++j) P.set(i, j, P0.entry(i, j).in_context(ctx));
  for (auto& r : P0.relations()) P.add_relation(r.poly.in_context(ctx));
  GradedDimTable out;
  if (P0.declared_degree) {
    out.bracket_degree = *P0.declared_degree;
  } else {
    auto h = homogeneity_degree(P, c0.weights);
    if (!h.degree) throw std::invalid_argument("presentation is not homogeneous for its weights");
    out.bracket_degree = *h.degree;
  }
  const int d = out.bracket_degree;
  MonomialBounds bounds;
  bounds.degree_cap = degree_cap;
  std::map<int, std::vector<Mono>> basis;
  const int top = std::max(degree_cap, degree_cap - d);
  for (int w = 0; w <= top; ++w) basis[w] = monomials_of_weight(P, w, bounds);
  for (int w = 0; w <= degree_cap; ++w) {
    const auto& target = basis[w];
    std::map<Mono, int> col;
    for (size_t i = 0; i < target.size(); ++i) col[target[i]] = static_cast<int>(i);
    SparseEchelon ech;
    for (int a = 0; a <= w - d; ++a) {
      int bw = w - d - a;
      if (bw < a) break;
      for (size_t i = 0; i < basis[a].size(); ++i)
        for (size_t j = (a == bw ? i + 1 : 0); j < basis[bw].size(); ++j) {
          auto f = TruncatedElement::monomial(ctx, basis[a][i], Scalar(1));
          auto g = TruncatedElement::monomial(ctx, basis[bw][j], Scalar(1));
          TruncatedElement br = bracket(P, f, g);
          SparseVec row;
          for (auto& t : br.terms()) {
            auto it = col.find(t.mono);
            if (it == col.end()) throw std::logic_error("bracket left its weight space");
            row.emplace_back(it->second, t.coef);
          }
          std::sort(row.begin(), row.end(), [](auto& x, auto& y) { return x.first < y.first; });
          ech.add(std::move(row));
        }
    }
    out.dims[w] = static_cast<int>(target.size()) - ech.rank();
  }
  for (int w = 0; w < degree_cap; ++w)
    if (out.dims[w] == 0 && out.dims[w + 1] == 0) {
      out.stable_from = w;
      break;
    }
  return out;
}

}  // namespace equislice
