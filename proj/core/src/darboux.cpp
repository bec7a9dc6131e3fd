#include "equislice/darboux.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

#include "equislice/linalg.hpp"

namespace equislice {

namespace {

// Single term in the invertible variables only.
bool is_unit_term(const TruncatedElement& e) {
  if (e.size() != 1) return false;
  const auto& ctx = *e.context();
  const Mono& m = e.terms().front().mono;
  for (int i = 0; i < ctx.size(); ++i)
    if (!ctx.invertible[i] && m.e[i] != 0) return false;
  return true;
}

TruncatedElement var(const ContextPtr& ctx, int i, int p = 1) { return TruncatedElement::variable(ctx, i, p); }

std::runtime_error stage_error(const std::string& stage, const std::string& msg) {
  return std::runtime_error(stage + ": " + msg);
}

// sum_n (sign * x)^n D^n f / n!; lies in ker D when D(x) = -sign.
TruncatedElement exp_projection(const TruncatedElement& f, const TruncatedElement& x, int sign,
                                const std::function<TruncatedElement(const TruncatedElement&)>& D,
                                int max_terms) {
  TruncatedElement sum = f, d = f;
  TruncatedElement xp = TruncatedElement::constant(f.context(), Scalar(1));
  TruncatedElement sx = x * Scalar(static_cast<long>(sign));
  mpz_class fact = 1;
  for (int n = 1; n <= max_terms; ++n) {
    d = D(d);
    xp *= sx;
    if (d.is_zero() || xp.is_zero()) return sum;
    fact *= n;
    sum += xp * d * Scalar(mpq_class(1, fact));
  }
  throw std::runtime_error("projection series did not terminate");
}

TruncatedElement embed(const TruncatedElement& e, const ContextPtr& ctx, int offset) {
  std::vector<Term> terms;
  for (auto& t : e.terms()) {
    Term s{Mono{}, t.coef};
    for (int i = 0; i < e.context()->size(); ++i) s.mono.e[i + offset] = t.mono.e[i];
    terms.push_back(std::move(s));
  }
  return TruncatedElement::from_terms(ctx, std::move(terms));
}

}  // namespace

bool CoordinateChange::is_identity() const {
  for (size_t i = 0; i < images.size(); ++i)
    if (images[i] != var(images[i].context(), static_cast<int>(i))) return false;
  return true;
}

CoordinateChange identity_change(const ContextPtr& ctx) {
  CoordinateChange c;
  for (int i = 0; i < ctx->size(); ++i) {
    c.images.push_back(var(ctx, i));
    c.inverse.push_back(var(ctx, i));
  }
  return c;
}

CoordinateChange make_change(std::vector<TruncatedElement> images) {
  CoordinateChange c;
  c.inverse = invert_coordinates(images);
  c.images = std::move(images);
  return c;
}

std::vector<TruncatedElement> invert_coordinates(const std::vector<TruncatedElement>& images) {
  if (images.empty()) return {};
  const ContextPtr ctx = images.front().context();
  const int n = ctx->size();
  if (static_cast<int>(images.size()) != n) throw std::invalid_argument("one image per variable required");
  std::vector<int> filt, inv;
  std::vector<Scalar> lead(n, Scalar(1));
  for (int i = 0; i < n; ++i) {
    const auto& c = images[i];
    if (ctx->invertible[i]) {
      TruncatedElement z = c.j_component(0);
      if (z.size() != 1 || z.terms().front().mono != var(ctx, i).terms().front().mono)
        throw std::invalid_argument("image of " + ctx->names[i] + " is not a unit multiple of it");
      lead[i] = z.terms().front().coef;
      inv.push_back(i);
    } else if (ctx->filtration[i]) {
      if (!c.j_component(0).is_zero())
        throw std::invalid_argument("image of " + ctx->names[i] + " does not lie in J");
      filt.push_back(i);
    } else if (c != var(ctx, i)) {
      throw std::invalid_argument("non-filtration variable " + ctx->names[i] + " must map to itself");
    }
  }
  const int m = static_cast<int>(filt.size());
  std::vector<int> pos(n, -1);
  for (int r = 0; r < m; ++r) pos[filt[r]] = r;
  // linear part M(t) and the remainder h
  std::vector<std::vector<TruncatedElement>> M(m, std::vector<TruncatedElement>(m, TruncatedElement(ctx)));
  std::vector<TruncatedElement> h(m);
  for (int r = 0; r < m; ++r) {
    const auto& c = images[filt[r]];
    std::vector<std::vector<Term>> parts(m);
    TruncatedElement lin(ctx);
    for (auto& term : c.terms()) {
      if (ctx->j_order(term.mono) != 1) continue;
      int col = -1;
      for (int j : filt)
        if (term.mono.e[j] != 0) col = pos[j];
      Term s = term;
      s.mono.e[filt[col]] = 0;
      parts[col].push_back(s);
    }
    for (int col = 0; col < m; ++col) {
      M[r][col] = TruncatedElement::from_terms(ctx, std::move(parts[col]));
      lin += M[r][col] * var(ctx, filt[col]);
    }
    h[r] = c - lin;
  }
  // Gauss-Jordan with unit pivots over the J-order-0 ring
  std::vector<std::vector<TruncatedElement>> A = M, Minv(m, std::vector<TruncatedElement>(m, TruncatedElement(ctx)));
  for (int r = 0; r < m; ++r) Minv[r][r] = TruncatedElement::constant(ctx, Scalar(1));
  for (int col = 0; col < m; ++col) {
    int piv = -1;
    for (int r = col; r < m; ++r)
      if (is_unit_term(A[r][col])) {
        piv = r;
        break;
      }
    if (piv < 0) throw std::invalid_argument("linear part of the coordinate change is not invertible");
    std::swap(A[piv], A[col]);
    std::swap(Minv[piv], Minv[col]);
    TruncatedElement pinv = invert_unit(A[col][col]);
    for (int c = 0; c < m; ++c) {
      A[col][c] = A[col][c] * pinv;
      Minv[col][c] = Minv[col][c] * pinv;
    }
    for (int r = 0; r < m; ++r) {
      if (r == col || A[r][col].is_zero()) continue;
      TruncatedElement f = A[r][col];
      for (int c = 0; c < m; ++c) {
        A[r][c] -= f * A[col][c];
        Minv[r][c] -= f * Minv[col][c];
      }
    }
  }
  std::vector<TruncatedElement> g(n);
  for (int v : inv) g[v] = images[v] * var(ctx, v, -1);

  std::vector<TruncatedElement> phi(n);
  for (int i = 0; i < n; ++i) phi[i] = var(ctx, i);
  for (int v : inv) phi[v] = phi[v] * lead[v].inverse();
  // One J-order is gained per step, so step j runs at truncation order j + 1; a few
  // extra steps at the full order confirm the fixed point.
  auto step = [&](const ContextPtr& c, const std::vector<TruncatedElement>& cur) {
    std::vector<TruncatedElement> p, next(n);
    for (auto& e : cur) p.push_back(e.in_context(c));
    for (int i = 0; i < n; ++i) next[i] = p[i];
    for (int v : inv) next[v] = var(c, v) * invert_unit(substitute(g[v].in_context(c), p, c));
    std::vector<TruncatedElement> rhs(m);
    for (int col = 0; col < m; ++col) rhs[col] = var(c, filt[col]) - substitute(h[col].in_context(c), p, c);
    for (int r = 0; r < m; ++r) {
      TruncatedElement acc(c);
      for (int col = 0; col < m; ++col)
        if (!Minv[r][col].is_zero()) acc += substitute(Minv[r][col].in_context(c), p, c) * rhs[col];
      next[filt[r]] = acc;
    }
    return next;
  };
  for (int j = 1; j < ctx->order; ++j) phi = step(with_order(ctx, j + 1), phi);
  for (int iter = 0; iter < 4; ++iter) {
    std::vector<TruncatedElement> next = step(ctx, phi);
    if (next == phi) return phi;
    phi = std::move(next);
  }
  throw std::runtime_error("coordinate inverse did not converge");
}

CoordinateChange compose(const CoordinateChange& first, const CoordinateChange& second) {
  const ContextPtr ctx = first.images.front().context();
  CoordinateChange c;
  for (auto& e : second.images) c.images.push_back(substitute(e, first.images, ctx));
  for (auto& e : first.inverse) c.inverse.push_back(substitute(e, second.inverse, ctx));
  c.is_hamiltonian_flow = first.is_hamiltonian_flow && second.is_hamiltonian_flow;
  c.iterations = first.iterations + second.iterations;
  return c;
}

PoissonPresentation transform(const PoissonPresentation& P, const CoordinateChange& c) {
  const ContextPtr& ctx = P.context();
  PoissonPresentation Q(ctx);
  for (int i = 0; i < P.size(); ++i)
    for (int j = i + 1; j < P.size(); ++j)
      Q.set(i, j, substitute(c.images[i] == var(ctx, i) && c.images[j] == var(ctx, j)
                                 ? P.entry(i, j)
                                 : bracket(P, c.images[i], c.images[j]),
                             c.inverse, ctx));
  for (auto& r : P.relations()) Q.add_relation(substitute(r.poly, c.inverse, ctx));
  Q.declared_degree = P.declared_degree;
  Q.name = P.name;
  return Q;
}

std::vector<MorphismViolation> check_poisson_morphism(const PoissonPresentation& P,
                                                      const PoissonPresentation& Q,
                                                      const CoordinateChange& c, int precision) {
  std::vector<MorphismViolation> out;
  const ContextPtr& ctx = P.context();
  for (int i = 0; i < P.size(); ++i)
    for (int j = i + 1; j < P.size(); ++j) {
      TruncatedElement lhs = bracket(P, c.images[i], c.images[j]);
      TruncatedElement rhs = substitute(Q.entry(i, j).in_context(ctx), c.images, ctx);
      TruncatedElement d = P.reduce(lhs - rhs).truncated(precision);
      if (!d.is_zero()) out.push_back({i, j, d});
    }
  return out;
}

PoissonPresentation standard_presentation(int n, int k, int ell, int order) {
  if (n < 1) throw std::invalid_argument("standard structure needs n >= 1");
  if (ell < 1) throw std::invalid_argument("stabilizer order must be positive");
  std::vector<std::string> names{"t", "u"};
  std::vector<int> weights{ell, 0};
  for (int i = 1; i <= 2 * n - 2; ++i) {
    names.push_back("z" + std::to_string(i));
    weights.push_back(i % 2 ? k * ell : 0);
  }
  const int m = static_cast<int>(names.size());
  std::vector<bool> invertible(m, false), filtration(m, true);
  invertible[0] = true;
  filtration[0] = false;
  auto ctx = make_context(names, weights, invertible, filtration, order);
  PoissonPresentation P(ctx);
  P.set(0, 1, var(ctx, 0, 1 - k));
  for (int i = 2; i < m; i += 2) P.set(i, i + 1, TruncatedElement::constant(ctx, Scalar(1)));
  P.declared_degree = -k * ell;
  P.name = "standard(" + std::to_string(n) + "," + std::to_string(k) + "," + std::to_string(ell) + ")";
  return P;
}

PoissonPresentation product_presentation(const PoissonPresentation& P, const PoissonPresentation& S) {
  const auto& a = *P.context();
  const auto& b = *S.context();
  std::vector<std::string> names = a.names;
  std::vector<int> weights = a.weights;
  std::vector<bool> inv = a.invertible, filt = a.filtration;
  for (int i = 0; i < b.size(); ++i) {
    if (a.index(b.names[i]) >= 0) throw std::invalid_argument("duplicate variable " + b.names[i]);
    names.push_back(b.names[i]);
    weights.push_back(b.weights[i]);
    inv.push_back(b.invertible[i]);
    filt.push_back(b.filtration[i]);
  }
  auto ctx = make_context(names, weights, inv, filt, a.order);
  PoissonPresentation R(ctx);
  for (int i = 0; i < a.size(); ++i)
    for (int j = i + 1; j < a.size(); ++j) R.set(i, j, embed(P.entry(i, j), ctx, 0));
  for (int i = 0; i < b.size(); ++i)
    for (int j = i + 1; j < b.size(); ++j) R.set(a.size() + i, a.size() + j, embed(S.entry(i, j), ctx, a.size()));
  for (auto& r : P.relations()) R.add_relation(embed(r.poly, ctx, 0));
  for (auto& r : S.relations()) R.add_relation(embed(r.poly, ctx, a.size()));
  if (P.declared_degree && P.declared_degree == S.declared_degree) R.declared_degree = P.declared_degree;
  R.name = P.name + "*" + S.name;
  return R;
}

LeafShape leaf_shape(const PoissonPresentation& P) {
  const auto& ctx = *P.context();
  LeafShape s;
  for (int i = 0; i < ctx.size(); ++i)
    if (ctx.invertible[i]) {
      if (s.t >= 0) throw std::invalid_argument("expected exactly one invertible variable");
      s.t = i;
    }
  if (s.t < 0) throw std::invalid_argument("expected exactly one invertible variable");
  s.ell = ctx.weights[s.t];
  if (s.ell <= 0) throw std::invalid_argument("the invertible variable must have positive weight");
  std::optional<int> d = P.declared_degree;
  if (!d) {
    auto h = homogeneity_degree(P, ctx.weights);
    if (!h.degree) throw std::invalid_argument("presentation is not homogeneous");
    d = h.degree;
  }
  if (*d % s.ell != 0) throw std::invalid_argument("bracket degree is not a multiple of the weight of t");
  s.k = -*d / s.ell;
  return s;
}

TruncatedElement hamiltonian_flow(const PoissonPresentation& P, const TruncatedElement& H,
                                  const TruncatedElement& f, int max_terms) {
  TruncatedElement sum = f, term = f;
  for (int n = 1; n <= max_terms; ++n) {
    term = bracket(P, H, term) * Scalar(1L, static_cast<long>(n));
    if (term.is_zero()) return sum;
    sum += term;
  }
  throw std::runtime_error("Hamiltonian flow did not terminate");
}

CoordinateChange straighten_t(const PoissonPresentation& P, const TruncatedElement& tau0, int u) {
  const LeafShape s = leaf_shape(P);
  const ContextPtr& ctx = P.context();
  const int prec = bracket_precision(ctx);
  const TruncatedElement tinv = var(ctx, s.t, -1);
  TruncatedElement tau = tau0.in_context(ctx);
  if (!(tau * tinv - TruncatedElement::constant(ctx, Scalar(1))).j_component(0).is_zero())
    throw stage_error("straighten_t", "leading part of tau is not t");
  std::vector<TruncatedElement> phi;
  for (int i = 0; i < P.size(); ++i) phi.push_back(var(ctx, i));
  CoordinateChange c;
  c.is_hamiltonian_flow = true;
  const int budget = 2 * ctx->order;
  int it = 0;
  for (;; ++it) {
    TruncatedElement d = (tau * tinv - TruncatedElement::constant(ctx, Scalar(1))).truncated(prec);
    if (d.is_zero()) break;
    if (it >= budget) throw stage_error("straighten_t", "iteration budget exceeded");
    TruncatedElement H = var(ctx, s.t, s.k) * d.antiderivative(u);
    c.generator = c.generator ? *c.generator + H : H;
    const int terms = 4 * ctx->order;
    tau = hamiltonian_flow(P, H, tau, terms);
    for (auto& p : phi) p = hamiltonian_flow(P, H, p, terms);
  }
  c.iterations = it;
  c.inverse = phi;
  c.images = invert_coordinates(phi);
  return c;
}

CoordinateChange enforce_tu(const PoissonPresentation& P, int u) {
  const LeafShape s = leaf_shape(P);
  const ContextPtr& ctx = P.context();
  const int prec = bracket_precision(ctx);
  for (int j = 0; j < P.size(); ++j) {
    if (j == s.t || j == u) continue;
    if (!P.entry(s.t, j).truncated(prec).is_zero())
      throw stage_error("enforce_tu", "variable " + ctx->names[j] + " does not commute with t");
  }
  auto nabla = [&](const TruncatedElement& f) { return var(ctx, s.t, s.k - 1) * bracket(P, var(ctx, s.t), f); };
  const TruncatedElement one = TruncatedElement::constant(ctx, Scalar(1));
  TruncatedElement lead = nabla(var(ctx, u)).j_component(0);
  if (lead.size() != 1 || lead.terms().front().mono != Mono{})
    throw stage_error("enforce_tu", "{t,u} is not a constant multiple of t^(1-k) modulo J");
  TruncatedElement U = var(ctx, u) * lead.terms().front().coef.inverse();
  const int budget = 2 * ctx->order;
  int it = 0;
  for (;; ++it) {
    TruncatedElement r = (nabla(U) - one).truncated(prec);
    if (r.is_zero()) break;
    if (it >= budget) throw stage_error("enforce_tu", "iteration budget exceeded");
    U -= r.antiderivative(u);
  }
  std::vector<TruncatedElement> images;
  for (int i = 0; i < P.size(); ++i) images.push_back(i == u ? U : var(ctx, i));
  CoordinateChange c = make_change(std::move(images));
  c.iterations = it;
  return c;
}

std::vector<std::pair<int, int>> detect_pairs(const PoissonPresentation& P, const std::vector<int>& cand,
                                              int precision) {
  const ContextPtr& ctx = P.context();
  const TruncatedElement one = TruncatedElement::constant(ctx, Scalar(1));
  std::vector<std::pair<int, int>> out;
  std::set<int> used;
  for (size_t a = 0; a < cand.size(); ++a) {
    if (used.count(cand[a])) continue;
    for (size_t b = a + 1; b < cand.size(); ++b) {
      if (used.count(cand[b])) continue;
      if ((P.entry(cand[a], cand[b]) - one).truncated(precision).is_zero()) {
        out.emplace_back(cand[a], cand[b]);
        used.insert(cand[a]);
        used.insert(cand[b]);
        break;
      }
    }
  }
  return out;
}

CoordinateChange decouple_u(const PoissonPresentation& P, int u, const std::vector<std::pair<int, int>>& pairs) {
  const LeafShape s = leaf_shape(P);
  const ContextPtr& ctx = P.context();
  const int prec = bracket_precision(ctx);
  const TruncatedElement one = TruncatedElement::constant(ctx, Scalar(1));
  if (!(P.entry(s.t, u) - var(ctx, s.t, 1 - s.k)).truncated(prec).is_zero())
    throw stage_error("decouple_u", "{t,u} is not t^(1-k)");
  for (auto [a, b] : pairs)
    if (!(P.entry(a, b) - one).truncated(prec).is_zero())
      throw stage_error("decouple_u", "{" + ctx->names[a] + "," + ctx->names[b] + "} is not 1");
  TruncatedElement U = var(ctx, u);
  const int budget = 2 * ctx->order;
  int pass = 0;
  for (;; ++pass) {
    bool clean = true;
    for (auto [a, b] : pairs)
      if (!bracket(P, U, var(ctx, a)).truncated(prec).is_zero() ||
          !bracket(P, U, var(ctx, b)).truncated(prec).is_zero())
        clean = false;
    if (clean) break;
    if (pass >= budget) throw stage_error("decouple_u", "iteration budget exceeded");
    for (auto [a, b] : pairs) {
      U += bracket(P, U, var(ctx, a)).truncated(prec).antiderivative(b);
      U -= bracket(P, U, var(ctx, b)).truncated(prec).antiderivative(a);
    }
  }
  std::vector<TruncatedElement> images;
  for (int i = 0; i < P.size(); ++i) images.push_back(i == u ? U : var(ctx, i));
  CoordinateChange c = make_change(std::move(images));
  c.iterations = pass;
  return c;
}

namespace {

int natural_weight(const TruncatedElement& g, int t, int ell) {
  int emin = INT32_MAX;
  for (auto& term : g.terms()) emin = std::min(emin, static_cast<int>(term.mono.e[t]));
  return g.is_zero() ? 0 : -ell * emin;
}

int max_poly_degree(const TruncatedElement& g) {
  int d = 0;
  for (auto& term : g.terms()) d = std::max(d, g.context()->poly_degree(term.mono));
  return d;
}

// All exponent vectors e with sum_a e_a * deg_a <= cap.
void exponent_vectors(const std::vector<int>& deg, int cap, std::vector<std::vector<int>>& out) {
  std::vector<int> e(deg.size(), 0);
  std::function<void(size_t, int)> rec = [&](size_t a, int budget) {
    if (a == deg.size()) {
      out.push_back(e);
      return;
    }
    for (int x = 0; x * deg[a] <= budget; ++x) {
      e[a] = x;
      rec(a + 1, budget - x * deg[a]);
      if (deg[a] == 0) break;
    }
    e[a] = 0;
  };
  rec(0, cap);
}

}  // namespace

SliceResult extract_slice(const PoissonPresentation& P, const std::vector<int>& leaf_vars, const SliceOptions& opt) {
  const LeafShape s = leaf_shape(P);
  const ContextPtr& ctx = P.context();
  const int prec = bracket_precision(ctx);
  MonomialBounds bounds = opt.bounds;
  bounds.degree_cap = opt.degree_cap;
  std::vector<Mono> monos;
  for (auto& m : monomials_of_weight(P, 0, bounds))
    if (ctx->poly_degree(m) <= opt.degree_cap) monos.push_back(m);
  std::stable_sort(monos.begin(), monos.end(), [&](const Mono& a, const Mono& b) {
    return ctx->poly_degree(a) < ctx->poly_degree(b);
  });
  std::map<Mono, int> col;
  for (size_t i = 0; i < monos.size(); ++i) col[monos[i]] = static_cast<int>(i);
  std::vector<TruncatedElement> gens{var(ctx, s.t)};
  for (int v : leaf_vars) gens.push_back(var(ctx, v));
  std::vector<TruncatedElement> kernel = joint_centralizer(P, monos, gens, prec);

  auto to_vec = [&](const TruncatedElement& e) {
    SparseVec v;
    const TruncatedElement et = e.truncated(prec);
    for (auto& term : et.terms()) {
      auto it = col.find(term.mono);
      if (it == col.end()) continue;  // beyond the degree cap
      v.emplace_back(it->second, term.coef);
    }
    std::sort(v.begin(), v.end(), [](auto& a, auto& b) { return a.first < b.first; });
    return v;
  };

  SliceResult res;
  std::vector<int> gdeg;
  for (int d = 0; d <= opt.degree_cap; ++d) {
    SparseEchelon span;
    for (auto& k : kernel)
      if (max_poly_degree(k) < d) span.add(to_vec(k));
    std::vector<std::vector<int>> exps;
    exponent_vectors(gdeg, d, exps);
    for (auto& e : exps) {
      int total = 0;
      for (int x : e) total += x;
      if (total < 2) continue;
      TruncatedElement p = TruncatedElement::constant(ctx, Scalar(1));
      for (size_t a = 0; a < e.size(); ++a)
        if (e[a]) p *= res.generators[a].pow(e[a]);
      span.add(to_vec(p));
    }
    for (auto& k : kernel) {
      if (max_poly_degree(k) != d || d == 0) continue;
      if (span.add(to_vec(k))) {
        res.generators.push_back(k);
        gdeg.push_back(d);
      }
    }
  }
  // slice context
  std::vector<std::string> names;
  std::vector<int> weights;
  bool formal = false;
  for (int i = 0; i < ctx->size(); ++i) formal = formal || ctx->filtration[i];
  for (size_t a = 0; a < res.generators.size(); ++a) {
    const auto& g = res.generators[a];
    std::string name = "g" + std::to_string(a + 1);
    if (g.size() == 1) {
      const Mono& m = g.terms().front().mono;
      int single = -1, count = 0;
      for (int i = 0; i < ctx->size(); ++i)
        if (!ctx->invertible[i] && m.e[i]) {
          single = i;
          count += m.e[i];
        }
      if (count == 1) name = ctx->names[single];
    }
    if (std::find(names.begin(), names.end(), name) != names.end()) name = "g" + std::to_string(a + 1);
    names.push_back(name);
    res.natural_weights.push_back(natural_weight(g, s.t, s.ell));
    weights.push_back(res.natural_weights.back());
  }
  const int r = static_cast<int>(names.size());
  auto sctx = make_context(names, weights, std::vector<bool>(r, false), std::vector<bool>(r, formal), ctx->order);
  res.slice = PoissonPresentation(sctx);
  res.slice.declared_degree = -s.k * s.ell;
  res.slice.name = "slice";
  if (r == 0) return res;

  std::vector<std::vector<int>> exps;
  exponent_vectors(gdeg, opt.degree_cap, exps);
  std::vector<TruncatedElement> prods;
  std::vector<SparseVec> cols;
  for (auto& e : exps) {
    TruncatedElement p = TruncatedElement::constant(ctx, Scalar(1));
    for (size_t a = 0; a < e.size(); ++a)
      if (e[a]) p *= res.generators[a].pow(e[a]);
    prods.push_back(p.truncated(prec));
  }
  // rows indexed by base monomials
  std::map<Mono, int> rowix;
  std::vector<std::map<int, Scalar>> rows;
  for (size_t c = 0; c < prods.size(); ++c)
    for (auto& term : prods[c].terms()) {
      auto [it, fresh] = rowix.emplace(term.mono, static_cast<int>(rows.size()));
      if (fresh) rows.emplace_back();
      rows[it->second][static_cast<int>(c)] = term.coef;
    }
  const TruncatedElement tk = var(ctx, s.t, s.k);
  for (int a = 0; a < r; ++a)
    for (int b = a + 1; b < r; ++b) {
      TruncatedElement B = (tk * bracket(P, res.generators[a], res.generators[b])).truncated(prec);
      if (B.is_zero()) continue;
      std::vector<std::map<int, Scalar>> rr = rows;
      std::vector<Scalar> rhs(rr.size(), Scalar(0));
      bool outside = false;
      for (auto& term : B.terms()) {
        auto it = rowix.find(term.mono);
        if (it == rowix.end()) {
          outside = true;
          break;
        }
        rhs[it->second] = term.coef;
      }
      std::optional<std::vector<Scalar>> sol;
      if (!outside) {
        std::vector<SparseVec> sv;
        for (auto& m : rr) sv.emplace_back(m.begin(), m.end());
        sol = solve_sparse(sv, rhs, static_cast<int>(prods.size()));
      }
      if (!sol) {
        res.unexpressed.push_back("{" + names[a] + "," + names[b] + "}");
        continue;
      }
      std::vector<Term> terms;
      for (size_t c = 0; c < prods.size(); ++c) {
        if ((*sol)[c].is_zero()) continue;
        Mono m;
        for (int x = 0; x < r; ++x) m.e[x] = static_cast<int8_t>(exps[c][x]);
        terms.push_back({m, (*sol)[c]});
      }
      res.slice.set(a, b, TruncatedElement::from_terms(sctx, std::move(terms)));
    }
  return res;
}

namespace {

// Normalization state: coordinates as series in the base variables and the table in them.
struct Workspace {
  PoissonPresentation base;
  std::vector<TruncatedElement> coords;  // current coordinates in the base variables
  PoissonPresentation Q;
  ContextPtr ctx;

  // Stage images are polynomials in the current coordinates, so the new table is
  // computed from Q directly and stays exact modulo J^order.
  void apply(const std::vector<TruncatedElement>& stage_images) {
    CoordinateChange stage = make_change(stage_images);
    Q = transform(Q, stage);
    std::vector<TruncatedElement> next;
    for (int i = 0; i < ctx->size(); ++i)
      next.push_back(stage_images[i] == x(i) ? coords[i] : substitute(stage_images[i], coords, ctx));
    coords = std::move(next);
  }
  TruncatedElement x(int i, int p = 1) const { return TruncatedElement::variable(ctx, i, p); }
  std::vector<TruncatedElement> identity() const {
    std::vector<TruncatedElement> v;
    for (int i = 0; i < ctx->size(); ++i) v.push_back(x(i));
    return v;
  }
};

// New coordinates y_p = x_p / c_p, y_m = x_m - (c_m / c_p) x_p, where c_m = D(x_m) mod J.
// Returns false when the change is the identity.
bool linear_pivot(const Workspace& w, const std::function<TruncatedElement(const TruncatedElement&)>& D,
                  int p, const std::vector<int>& active, std::vector<TruncatedElement>& images) {
  images = w.identity();
  TruncatedElement cp = D(w.x(p)).j_component(0);
  TruncatedElement cpinv = invert_unit(cp);
  bool changed = !(cp.size() == 1 && cp.terms().front().mono == Mono{} && cp.terms().front().coef.is_one());
  images[p] = w.x(p) * cpinv;
  for (int m : active) {
    if (m == p) continue;
    TruncatedElement cm = D(w.x(m)).j_component(0);
    if (cm.is_zero()) continue;
    images[m] = w.x(m) - cm * cpinv * w.x(p);
    changed = true;
  }
  return changed;
}

}  // namespace

DecompositionCertificate normalize_full(const PoissonPresentation& P0, int order, const NormalizeOptions& opt) {
  if (order < 2) throw std::invalid_argument("order must be at least 2");
  DecompositionCertificate cert;
  cert.base = P0;
  cert.order = order;
  const LeafShape shape = leaf_shape(P0);
  cert.t = shape.t;
  cert.ell = shape.ell;
  cert.k = shape.k;
  const int W = order + opt.extra_order;
  Workspace w;
  w.base = P0.with_order(W);
  w.base.clear_relations();  // relations are Casimirs; the table is used on the ambient algebra
  w.ctx = w.base.context();
  w.coords = w.identity();
  w.Q = w.base;
  const ContextPtr& ctx = w.ctx;
  const int n = ctx->size();
  const int t = shape.t, k = shape.k;
  const int prec = W - 1;
  const TruncatedElement one = TruncatedElement::constant(ctx, Scalar(1));
  for (int i = 0; i < n; ++i)
    if (i != t && !ctx->filtration[i])
      throw stage_error("normalize", "variable " + ctx->names[i] + " must be a filtration variable");

  auto nabla = [&](const TruncatedElement& f) { return w.x(t, k - 1) * bracket(w.Q, w.x(t), f); };
  auto record = [&](const std::string& name, int iterations, bool identity) {
    cert.stages.push_back({name, iterations, identity});
  };

  // t is kept as given: straightening towards t itself is the identity
  record("straighten_t", 0, true);

  // leaf block
  int p = -1;
  int leaf_iters = 0;
  bool leaf_changed = false;
  try {
    std::vector<int> others;
    for (int i = 0; i < n; ++i)
      if (i != t) others.push_back(i);
    int named_u = ctx->index("u");
    if (named_u >= 0 && named_u != t && is_unit_term(nabla(w.x(named_u)).j_component(0))) p = named_u;
    for (int i : others)
      if (p < 0 && is_unit_term(nabla(w.x(i)).j_component(0))) p = i;
    if (p < 0) throw std::runtime_error("t has no conjugate coordinate");
    std::vector<TruncatedElement> imgs;
    if (linear_pivot(w, nabla, p, others, imgs)) {
      w.apply(imgs);
      leaf_changed = true;
    }
    // solve nabla U = 1
    TruncatedElement U = w.x(p);
    for (int it = 0;; ++it) {
      TruncatedElement r = (nabla(U) - one).truncated(prec);
      if (r.is_zero()) break;
      if (it >= 2 * W) throw std::runtime_error("solving {t,u} = t^(1-k) exceeded the iteration budget");
      U -= r.antiderivative(p);
      ++leaf_iters;
    }
    if (U != w.x(p)) {
      imgs = w.identity();
      imgs[p] = U;
      w.apply(imgs);
      leaf_changed = true;
    }
    // project the remaining coordinates onto ker(ad t)
    imgs = w.identity();
    bool proj = false;
    for (int i : others) {
      if (i == p) continue;
      imgs[i] = exp_projection(w.x(i), w.x(p), -1, nabla, W + 1);
      proj = proj || imgs[i] != w.x(i);
    }
    if (proj) {
      w.apply(imgs);
      leaf_changed = true;
    }
    // symplectic pairs among the remaining coordinates
    std::vector<int> rest;
    for (int i : others)
      if (i != p) rest.push_back(i);
    std::set<int> paired;
    for (bool found = true; found;) {
      found = false;
      for (int i : rest) {
        if (paired.count(i)) continue;
        int j = -1;
        for (int c : rest)
          if (c != i && !paired.count(c) && is_unit_term(bracket(w.Q, w.x(i), w.x(c)).j_component(0))) {
            j = c;
            break;
          }
        if (j < 0) continue;
        auto D1 = [&, i](const TruncatedElement& f) { return bracket(w.Q, w.x(i), f); };
        std::vector<int> active{p};
        for (int c : rest)
          if (c != i && !paired.count(c)) active.push_back(c);
        if (linear_pivot(w, D1, j, active, imgs)) {
          w.apply(imgs);
          leaf_changed = true;
        }
        TruncatedElement Z = w.x(j);
        for (int it = 0;; ++it) {
          TruncatedElement r = (D1(Z) - one).truncated(prec);
          if (r.is_zero()) break;
          if (it >= 2 * W) throw std::runtime_error("solving {z,z'} = 1 exceeded the iteration budget");
          Z -= r.antiderivative(j);
          ++leaf_iters;
        }
        if (Z != w.x(j)) {
          imgs = w.identity();
          imgs[j] = Z;
          w.apply(imgs);
          leaf_changed = true;
        }
        auto D2 = [&, j](const TruncatedElement& f) { return bracket(w.Q, w.x(j), f); };
        imgs = w.identity();
        proj = false;
        for (int c : rest) {
          if (c == i || c == j || paired.count(c)) continue;
          TruncatedElement f = exp_projection(w.x(c), w.x(j), -1, D1, W + 1);
          imgs[c] = exp_projection(f, w.x(i), 1, D2, W + 1);
          proj = proj || imgs[c] != w.x(c);
        }
        if (proj) {
          w.apply(imgs);
          leaf_changed = true;
        }
        paired.insert(i);
        paired.insert(j);
        cert.z_pairs.emplace_back(i, j);
        found = true;
        break;
      }
    }
    for (int i : rest)
      if (!paired.count(i)) cert.slice_vars.push_back(i);
  } catch (const std::exception& e) {
    throw stage_error("leaf_block", e.what());
  }
  cert.u = p;
  record("leaf_block", leaf_iters, !leaf_changed);

  // enforce {t,u} = t^{1-k}
  {
    CoordinateChange c;
    try {
      c = enforce_tu(w.Q, p);
    } catch (const std::exception& e) {
      throw stage_error("enforce_tu", e.what());
    }
    bool id = c.is_identity();
    if (!id) w.apply(c.images);
    record("enforce_tu", c.iterations, id);
  }

  // decouple u from the z pairs
  {
    CoordinateChange c;
    try {
      c = decouple_u(w.Q, p, cert.z_pairs);
    } catch (const std::exception& e) {
      throw stage_error("decouple_u", e.what());
    }
    bool id = c.is_identity();
    if (!id) w.apply(c.images);
    record("decouple_u", c.iterations, id);
  }

  // Grading gauge. With xi(s) = t^k {u, s} on the slice variables, terms c t^e m(s) with
  // e != 0 are removed by s -> s + c t^e m / e; the rest needs u -> u - F with
  // t^k {F, s} = xi(s) for a weight-zero slice function F.
  {
    const auto& sv = cert.slice_vars;
    const TruncatedElement tk = w.x(t, k);
    std::vector<bool> allowed(n, false);
    allowed[t] = true;
    for (int v : sv) allowed[v] = true;
    int rounds = 0;
    bool id = true;
    const int budget = 2 * W;
    for (;; ++rounds) {
      if (rounds >= budget) throw stage_error("gauge", "iteration budget exceeded");
      std::vector<TruncatedElement> xi;
      bool any = false, foreign = false;
      for (int v : sv) {
        xi.push_back((tk * bracket(w.Q, w.x(p), w.x(v))).truncated(prec));
        any = any || !xi.back().is_zero();
        for (auto& term : xi.back().terms())
          for (int i = 0; i < n; ++i)
            if (term.mono.e[i] != 0 && !allowed[i]) foreign = true;
      }
      if (!any || foreign) break;
      std::vector<TruncatedElement> imgs = w.identity();
      bool shifted = false;
      for (size_t a = 0; a < sv.size(); ++a) {
        std::vector<Term> g;
        for (auto& term : xi[a].terms()) {
          const int e = term.mono.e[t];
          if (e != 0) g.push_back({term.mono, term.coef / Scalar(static_cast<long>(e))});
        }
        if (g.empty()) continue;
        imgs[sv[a]] += TruncatedElement::from_terms(ctx, std::move(g));
        shifted = true;
      }
      if (shifted) {
        w.apply(imgs);
        id = false;
        continue;
      }
      std::vector<Mono> monos;
      Mono m;
      std::function<void(size_t, int)> rec = [&](size_t a, int left) {
        if (a == sv.size()) {
          int wt = ctx->weight(m);
          if (m != Mono{} && wt % shape.ell == 0) {
            Mono mm = m;
            mm.e[t] = static_cast<int8_t>(-wt / shape.ell);
            monos.push_back(mm);
          }
          return;
        }
        for (int e = 0; e <= left; ++e) {
          m.e[sv[a]] = static_cast<int8_t>(e);
          rec(a + 1, left - e);
        }
        m.e[sv[a]] = 0;
      };
      rec(0, W - 1);
      std::map<std::pair<int, Mono>, int> rowix;
      std::vector<std::map<int, Scalar>> rows;
      for (size_t c = 0; c < monos.size(); ++c) {
        TruncatedElement f = TruncatedElement::monomial(ctx, monos[c], Scalar(1));
        for (size_t a = 0; a < sv.size(); ++a) {
          const TruncatedElement b = (tk * bracket(w.Q, f, w.x(sv[a]))).truncated(prec);
          for (auto& term : b.terms()) {
            auto [it, fresh] =
                rowix.emplace(std::make_pair(static_cast<int>(a), term.mono), static_cast<int>(rows.size()));
            if (fresh) rows.emplace_back();
            rows[it->second][static_cast<int>(c)] = term.coef;
          }
        }
      }
      std::vector<Scalar> rhs(rows.size(), Scalar(0));
      bool outside = false;
      for (size_t a = 0; a < sv.size(); ++a)
        for (auto& term : xi[a].terms()) {
          auto it = rowix.find({static_cast<int>(a), term.mono});
          if (it == rowix.end()) {
            outside = true;
            continue;
          }
          rhs[it->second] = term.coef;
        }
      if (outside) break;
      std::vector<SparseVec> svs;
      for (auto& r : rows) svs.emplace_back(r.begin(), r.end());
      auto sol = solve_sparse(svs, rhs, static_cast<int>(monos.size()));
      if (!sol) break;
      std::vector<Term> terms;
      for (size_t c = 0; c < monos.size(); ++c)
        if (!(*sol)[c].is_zero()) terms.push_back({monos[c], (*sol)[c]});
      imgs[p] = w.x(p) - TruncatedElement::from_terms(ctx, std::move(terms));
      w.apply(imgs);
      id = false;
    }
    record("gauge", rounds, id);
  }

  // final table at the target order
  PoissonPresentation R = w.Q.with_order(order);
  const ContextPtr& rctx = R.context();
  cert.result = R;
  for (auto& c : w.coords) cert.coordinates.push_back(c.in_context(rctx));
  auto rx = [&](int i, int pw = 1) { return TruncatedElement::variable(rctx, i, pw); };
  const TruncatedElement rone = TruncatedElement::constant(rctx, Scalar(1));
  bool standard = (R.entry(t, p) - rx(t, 1 - k)).is_zero();
  std::vector<int> leaf{t, p};
  for (auto [a, b] : cert.z_pairs) {
    standard = standard && (R.entry(a, b) - rone).is_zero();
    leaf.push_back(a);
    leaf.push_back(b);
  }
  for (size_t a = 0; a < leaf.size(); ++a)
    for (size_t b = a + 1; b < leaf.size(); ++b) {
      int i = leaf[a], j = leaf[b];
      bool expected = (i == t && j == p) || (i == p && j == t);
      for (auto [x, y] : cert.z_pairs) expected = expected || (i == x && j == y) || (i == y && j == x);
      if (!expected && !R.entry(i, j).is_zero()) standard = false;
    }
  cert.leaf_block_standard = standard;
  bool couplings = true;
  for (int sv : cert.slice_vars) {
    if (!R.entry(t, sv).is_zero()) couplings = false;
    for (auto [a, b] : cert.z_pairs)
      if (!R.entry(a, sv).is_zero() || !R.entry(b, sv).is_zero()) couplings = false;
  }
  cert.couplings_vanish = couplings;

  std::vector<int> zs;
  for (auto [a, b] : cert.z_pairs) {
    zs.push_back(a);
    zs.push_back(b);
  }
  SliceOptions so;
  so.degree_cap = opt.degree_cap > 0 ? opt.degree_cap : order - 1;
  try {
    cert.slice = extract_slice(R, zs, so);
  } catch (const std::exception& e) {
    throw stage_error("extract_slice", e.what());
  }
  record("extract_slice", 0, true);
  const int rprec = bracket_precision(rctx);
  bool product = true;
  for (size_t a = 0; a < cert.slice.generators.size(); ++a) {
    // evaluated on the natural-weight lift t^(n_a / ell) g_a
    const TruncatedElement lift = rx(t, cert.slice.natural_weights[a] / shape.ell) * cert.slice.generators[a];
    cert.xi.push_back((rx(t, k) * bracket(R, rx(p), lift)).truncated(rprec));
    product = product && cert.xi.back().is_zero();
  }
  cert.product = product;
  return cert;
}

CoordinateChange random_scramble(const ContextPtr& ctx, int t, std::mt19937_64& rng, int terms, int max_j) {
  const int n = ctx->size();
  const int ell = ctx->weights[t];
  std::vector<int> filt;
  for (int i = 0; i < n; ++i)
    if (ctx->filtration[i]) filt.push_back(i);
  static const long nums[] = {1, -1, 2, -2, 1, -1};
  static const long dens[] = {1, 1, 1, 1, 2, 3};
  auto coef = [&]() {
    int c = static_cast<int>(rng() % 6);
    return Scalar(nums[c], dens[c]);
  };
  auto random_part = [&](int target_weight, int min_j) {
    TruncatedElement out(ctx);
    if (filt.empty()) return out;
    for (int a = 0; a < terms; ++a) {
      for (int attempt = 0; attempt < 32; ++attempt) {
        int d = min_j + static_cast<int>(rng() % (max_j - min_j + 1));
        Mono m;
        for (int q = 0; q < d; ++q) ++m.e[filt[rng() % filt.size()]];
        int rem = target_weight - ctx->weight(m);
        if (rem % ell != 0) continue;
        int e = rem / ell;
        if (e < -20 || e > 20) continue;
        m.e[t] = static_cast<int8_t>(e);
        out += TruncatedElement::monomial(ctx, m, coef());
        break;
      }
    }
    return out;
  };
  std::vector<TruncatedElement> images;
  for (int i = 0; i < n; ++i) {
    TruncatedElement x = TruncatedElement::variable(ctx, i);
    if (i == t) images.push_back(x * (TruncatedElement::constant(ctx, Scalar(1)) + random_part(0, 1)));
    else if (ctx->filtration[i]) images.push_back(x + random_part(ctx->weights[i], 2));
    else images.push_back(x);
  }
  return make_change(std::move(images));
}

}  // namespace equislice
