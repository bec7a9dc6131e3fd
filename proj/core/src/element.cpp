#include "equislice/element.hpp"

#include <algorithm>
#include <climits>
#include <cstring>
#include <map>
#include <set>
#include <stdexcept>

namespace equislice {

Mono mono_mul(const Mono& a, const Mono& b) {
  Mono r;
  for (int i = 0; i < kMaxVars; ++i) {
    int s = a.e[i] + b.e[i];
    if (s > INT8_MAX || s < INT8_MIN) throw std::overflow_error("exponent overflow");
    r.e[i] = static_cast<int8_t>(s);
  }
  return r;
}

bool mono_divides(const Mono& b, const Mono& a) {
  for (int i = 0; i < kMaxVars; ++i)
    if (b.e[i] > 0 && a.e[i] < b.e[i]) return false;
  return true;
}

int GradedContext::index(const std::string& name) const {
  for (int i = 0; i < size(); ++i)
    if (names[i] == name) return i;
  return -1;
}

int GradedContext::require(const std::string& name) const {
  int i = index(name);
  if (i < 0) throw std::invalid_argument("unknown variable: " + name);
  return i;
}

int GradedContext::j_order(const Mono& m) const {
  int d = 0;
  for (int i = 0; i < size(); ++i)
    if (filtration[i]) d += m.e[i];
  return d;
}

int GradedContext::weight(const Mono& m) const {
  int w = 0;
  for (int i = 0; i < size(); ++i) w += weights[i] * m.e[i];
  return w;
}

int GradedContext::poly_degree(const Mono& m) const {
  int d = 0;
  for (int i = 0; i < size(); ++i)
    if (!invertible[i]) d += m.e[i];
  return d;
}

bool GradedContext::same_shape(const GradedContext& o) const {
  return names == o.names && weights == o.weights && invertible == o.invertible &&
         filtration == o.filtration;
}

ContextPtr make_context(std::vector<std::string> names, std::vector<int> weights,
                        std::vector<bool> invertible, std::vector<bool> filtration, int order) {
  const size_t n = names.size();
  if (n > static_cast<size_t>(kMaxVars)) throw std::invalid_argument("too many variables");
  if (weights.size() != n || invertible.size() != n || filtration.size() != n)
    throw std::invalid_argument("context field lengths disagree");
  if (order < 1) throw std::invalid_argument("truncation order must be positive");
  std::set<std::string> seen;
  for (size_t i = 0; i < n; ++i) {
    if (names[i].empty() || !seen.insert(names[i]).second)
      throw std::invalid_argument("duplicate or empty variable name: " + names[i]);
    if (invertible[i] && filtration[i])
      throw std::invalid_argument("invertible variable cannot generate J: " + names[i]);
  }
  auto ctx = std::make_shared<GradedContext>();
  ctx->names = std::move(names);
  ctx->weights = std::move(weights);
  ctx->invertible = std::move(invertible);
  ctx->filtration = std::move(filtration);
  ctx->order = order;
  return ctx;
}

ContextPtr with_order(const ContextPtr& ctx, int order) {
  if (ctx->order == order) return ctx;
  return make_context(ctx->names, ctx->weights, ctx->invertible, ctx->filtration, order);
}

ContextPtr with_weights(const ContextPtr& ctx, std::vector<int> weights) {
  return make_context(ctx->names, std::move(weights), ctx->invertible, ctx->filtration, ctx->order);
}

TruncatedElement TruncatedElement::constant(const ContextPtr& ctx, const Scalar& c) {
  return monomial(ctx, Mono{}, c);
}

TruncatedElement TruncatedElement::variable(const ContextPtr& ctx, int index, int power) {
  if (index < 0 || index >= ctx->size()) throw std::out_of_range("variable index");
  if (power < 0 && !ctx->invertible[index])
    throw std::invalid_argument("negative power of non-invertible variable " + ctx->names[index]);
  Mono m;
  m.e[index] = static_cast<int8_t>(power);
  return monomial(ctx, m, Scalar(1));
}

TruncatedElement TruncatedElement::variable(const ContextPtr& ctx, const std::string& name,
                                            int power) {
  return variable(ctx, ctx->require(name), power);
}

TruncatedElement TruncatedElement::monomial(const ContextPtr& ctx, const Mono& m, const Scalar& c) {
  TruncatedElement r(ctx);
  if (!c.is_zero() && ctx->j_order(m) < ctx->order) r.terms_.push_back({m, c});
  return r;
}

TruncatedElement TruncatedElement::from_terms(const ContextPtr& ctx, std::vector<Term> terms) {
  TruncatedElement r(ctx);
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return a.mono < b.mono; });
  for (auto& t : terms) {
    if (ctx->j_order(t.mono) >= ctx->order) continue;
    if (!r.terms_.empty() && r.terms_.back().mono == t.mono) {
      r.terms_.back().coef += t.coef;
      if (r.terms_.back().coef.is_zero()) r.terms_.pop_back();
    } else if (!t.coef.is_zero()) {
      r.terms_.push_back(std::move(t));
    }
  }
  return r;
}

Scalar TruncatedElement::coefficient(const Mono& m) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                             [](const Term& t, const Mono& k) { return t.mono < k; });
  if (it != terms_.end() && it->mono == m) return it->coef;
  return Scalar(0);
}

int TruncatedElement::valuation() const {
  int v = INT32_MAX;
  for (auto& t : terms_) v = std::min(v, ctx_->j_order(t.mono));
  return v;
}

TruncatedElement TruncatedElement::truncated(int order) const {
  TruncatedElement r(ctx_);
  for (auto& t : terms_)
    if (ctx_->j_order(t.mono) < order) r.terms_.push_back(t);
  return r;
}

TruncatedElement TruncatedElement::j_component(int d) const {
  TruncatedElement r(ctx_);
  for (auto& t : terms_)
    if (ctx_->j_order(t.mono) == d) r.terms_.push_back(t);
  return r;
}

TruncatedElement TruncatedElement::in_context(const ContextPtr& ctx) const {
  if (ctx_ && ctx_ != ctx && ctx_->names != ctx->names)
    throw std::invalid_argument("context mismatch");
  TruncatedElement r(ctx);
  for (auto& t : terms_)
    if (ctx->j_order(t.mono) < ctx->order) r.terms_.push_back(t);
  return r;
}

std::optional<int> TruncatedElement::weight() const {
  if (terms_.empty()) return std::nullopt;
  int w = ctx_->weight(terms_.front().mono);
  for (auto& t : terms_)
    if (ctx_->weight(t.mono) != w) return std::nullopt;
  return w;
}

bool TruncatedElement::is_homogeneous() const { return terms_.empty() || weight().has_value(); }

TruncatedElement TruncatedElement::weight_component(int w) const {
  TruncatedElement r(ctx_);
  for (auto& t : terms_)
    if (ctx_->weight(t.mono) == w) r.terms_.push_back(t);
  return r;
}

void TruncatedElement::check_same(const TruncatedElement& o) const {
  if (ctx_ == o.ctx_) return;
  if (!ctx_ || !o.ctx_ || !ctx_->same_shape(*o.ctx_) || ctx_->order != o.ctx_->order)
    throw std::invalid_argument("context mismatch");
}

TruncatedElement TruncatedElement::operator-() const {
  TruncatedElement r = *this;
  for (auto& t : r.terms_) t.coef = -t.coef;
  return r;
}

TruncatedElement& TruncatedElement::operator+=(const TruncatedElement& o) {
  if (!ctx_) return *this = o;
  if (!o.ctx_) return *this;
  check_same(o);
  std::vector<Term> out;
  out.reserve(terms_.size() + o.terms_.size());
  size_t i = 0, j = 0;
  while (i < terms_.size() || j < o.terms_.size()) {
    if (j == o.terms_.size() || (i < terms_.size() && terms_[i].mono < o.terms_[j].mono)) {
      out.push_back(std::move(terms_[i++]));
    } else if (i == terms_.size() || o.terms_[j].mono < terms_[i].mono) {
      out.push_back(o.terms_[j++]);
    } else {
      Scalar c = terms_[i].coef + o.terms_[j].coef;
      if (!c.is_zero()) out.push_back({terms_[i].mono, std::move(c)});
      ++i;
      ++j;
    }
  }
  terms_ = std::move(out);
  return *this;
}

TruncatedElement& TruncatedElement::operator-=(const TruncatedElement& o) { return *this += -o; }

TruncatedElement& TruncatedElement::operator*=(const Scalar& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.coef *= c;
  return *this;
}

namespace {

uint64_t mono_hash(const Mono& m) {
  uint64_t w[4];
  std::memcpy(w, m.e.data(), sizeof(w));
  uint64_t h = w[0] * 0x9E3779B97F4A7C15ULL;
  h ^= (w[1] + 0x632BE59BD9B4E019ULL) * 0xC2B2AE3D27D4EB4FULL;
  h ^= (w[2] + 0x165667B19E3779F9ULL) * 0x27D4EB2F165667C5ULL;
  h ^= (w[3] + 0x85EBCA77C2B2AE63ULL) * 0x9E3779B97F4A7C15ULL;
  return h ^ (h >> 29);
}

}  // namespace

TruncatedElement operator*(const TruncatedElement& a, const TruncatedElement& b) {
  if (!a.ctx_) return TruncatedElement(b.ctx_);
  return mul_truncated(a, b, a.ctx_->order);
}

TruncatedElement mul_truncated(const TruncatedElement& a, const TruncatedElement& b, int precision) {
  if (!a.ctx_) return TruncatedElement(b.ctx_);
  if (!b.ctx_) return TruncatedElement(a.ctx_);
  a.check_same(b);
  const auto& ctx = *a.ctx_;
  precision = std::min(precision, ctx.order);
  TruncatedElement r(a.ctx_);
  if (a.terms_.empty() || b.terms_.empty()) return r;
  std::vector<int> ja(a.terms_.size()), jb(b.terms_.size());
  for (size_t i = 0; i < ja.size(); ++i) ja[i] = ctx.j_order(a.terms_[i].mono);
  for (size_t i = 0; i < jb.size(); ++i) jb[i] = ctx.j_order(b.terms_[i].mono);
  // open addressing accumulator keyed by the product monomial
  size_t cap = 16;
  while (cap < 4 * (a.terms_.size() + b.terms_.size())) cap <<= 1;
  std::vector<int32_t> slot(cap, -1);
  std::vector<Term> acc;
  for (size_t i = 0; i < a.terms_.size(); ++i) {
    for (size_t j = 0; j < b.terms_.size(); ++j) {
      if (ja[i] + jb[j] >= precision) continue;
      Mono m = mono_mul(a.terms_[i].mono, b.terms_[j].mono);
      size_t h = mono_hash(m) & (cap - 1);
      while (slot[h] >= 0 && acc[slot[h]].mono != m) h = (h + 1) & (cap - 1);
      if (slot[h] < 0) {
        if (2 * (acc.size() + 1) > cap) {
          cap <<= 1;
          std::vector<int32_t> grown(cap, -1);
          for (size_t q = 0; q < acc.size(); ++q) {
            size_t g = mono_hash(acc[q].mono) & (cap - 1);
            while (grown[g] >= 0) g = (g + 1) & (cap - 1);
            grown[g] = static_cast<int32_t>(q);
          }
          slot = std::move(grown);
          h = mono_hash(m) & (cap - 1);
          while (slot[h] >= 0) h = (h + 1) & (cap - 1);
        }
        slot[h] = static_cast<int32_t>(acc.size());
        acc.push_back({m, Scalar(0)});
      }
      acc[slot[h]].coef.add_product(a.terms_[i].coef, b.terms_[j].coef);
    }
  }
  std::vector<int32_t> idx;
  idx.reserve(acc.size());
  for (size_t q = 0; q < acc.size(); ++q)
    if (!acc[q].coef.is_zero()) idx.push_back(static_cast<int32_t>(q));
  std::sort(idx.begin(), idx.end(), [&](int32_t x, int32_t y) { return acc[x].mono < acc[y].mono; });
  r.terms_.reserve(idx.size());
  for (int32_t q : idx) r.terms_.push_back(std::move(acc[q]));
  return r;
}

TruncatedElement& TruncatedElement::operator*=(const TruncatedElement& o) {
  return *this = *this * o;
}

bool operator==(const TruncatedElement& a, const TruncatedElement& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (size_t i = 0; i < a.terms_.size(); ++i)
    if (a.terms_[i].mono != b.terms_[i].mono || a.terms_[i].coef != b.terms_[i].coef) return false;
  return true;
}

TruncatedElement TruncatedElement::pow(int e) const {
  if (e < 0) return invert_unit(*this).pow(-e);
  TruncatedElement result = constant(ctx_, Scalar(1));
  TruncatedElement base = *this;
  while (e > 0) {
    if (e & 1) result *= base;
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

TruncatedElement TruncatedElement::derivative(int var) const {
  std::vector<Term> out;
  for (auto& t : terms_) {
    int e = t.mono.e[var];
    if (e == 0) continue;
    Term d = t;
    d.mono.e[var] = static_cast<int8_t>(e - 1);
    d.coef *= Scalar(static_cast<long>(e));
    out.push_back(std::move(d));
  }
  return from_terms(ctx_, std::move(out));
}

TruncatedElement TruncatedElement::antiderivative(int var) const {
  std::vector<Term> out;
  for (auto& t : terms_) {
    int e = t.mono.e[var];
    if (e == -1)
      throw std::domain_error("antiderivative of x^-1 in " + ctx_->names[var]);
    Term d = t;
    d.mono.e[var] = static_cast<int8_t>(e + 1);
    d.coef /= Scalar(static_cast<long>(e + 1));
    out.push_back(std::move(d));
  }
  return from_terms(ctx_, std::move(out));
}

TruncatedElement TruncatedElement::shifted(const Mono& m) const {
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (auto& t : terms_) out.push_back({mono_mul(t.mono, m), t.coef});
  return from_terms(ctx_, std::move(out));
}

TruncatedElement arith(const TruncatedElement& a, const TruncatedElement& b, ArithOp op) {
  switch (op) {
    case ArithOp::add: return a + b;
    case ArithOp::sub: return a - b;
    case ArithOp::mul: return a * b;
  }
  throw std::invalid_argument("unknown op");
}

TruncatedElement invert_unit(const TruncatedElement& a) {
  const auto& ctx = a.context();
  if (!ctx) throw std::invalid_argument("element without context");
  TruncatedElement lead = a.j_component(0);
  if (lead.size() != 1) throw std::domain_error("non-unit leading part: " + a.to_string());
  const Term& lt = lead.terms().front();
  for (int i = 0; i < ctx->size(); ++i)
    if (lt.mono.e[i] != 0 && !ctx->invertible[i])
      throw std::domain_error("non-unit leading part: " + a.to_string());
  Mono inv_m;
  for (int i = 0; i < kMaxVars; ++i) inv_m.e[i] = static_cast<int8_t>(-lt.mono.e[i]);
  const Scalar inv_c = lt.coef.inverse();
  // a = c m (1 + r) with r in J
  TruncatedElement r = (a - lead).shifted(inv_m) * inv_c;
  TruncatedElement one = TruncatedElement::constant(ctx, Scalar(1));
  TruncatedElement s = one;
  // s_i is correct modulo J^(i+1), so each step only needs one more order
  if (!r.is_zero())
    for (int i = 0; i < ctx->order; ++i) s = one - mul_truncated(r, s, i + 2);
  return s.shifted(inv_m) * inv_c;
}

namespace {

// Recursive substitution over the variables with nontrivial images, computed modulo
// J^prec; an inner factor multiplying images[v]^e only needs prec - e * val(images[v]).
TruncatedElement subst_rec(const std::vector<Term>& terms, const std::vector<int>& vars, size_t level,
                           int prec, std::vector<std::map<int, TruncatedElement>>& power_cache,
                           const std::vector<int>& val, const std::vector<TruncatedElement>& images,
                           const ContextPtr& target) {
  if (level == vars.size()) {
    std::vector<Term> copy(terms);
    return TruncatedElement::from_terms(target, std::move(copy)).truncated(prec);
  }
  const int v = vars[level];
  std::map<int, std::vector<Term>> groups;
  for (auto& t : terms) {
    Term s = t;
    int e = s.mono.e[v];
    s.mono.e[v] = 0;
    groups[e].push_back(std::move(s));
  }
  TruncatedElement result(target);
  for (auto& [e, group] : groups) {
    const int inner_prec = e > 0 ? prec - e * val[level] : prec;
    if (inner_prec <= 0) continue;
    TruncatedElement inner =
        subst_rec(group, vars, level + 1, inner_prec, power_cache, val, images, target);
    if (inner.is_zero()) continue;
    if (e == 0) {
      result += inner;
      continue;
    }
    auto& cache = power_cache[level];
    auto it = cache.find(e);
    if (it == cache.end()) {
      // powers are built from the nearest cached one of the same sign
      const int sgn = e > 0 ? 1 : -1;
      auto base = cache.find(sgn);
      if (base == cache.end())
        base = cache.emplace(sgn, sgn > 0 ? images[v] : invert_unit(images[v])).first;
      int have = sgn;
      TruncatedElement p = base->second;
      for (int q = e - sgn; q != sgn && q != 0; q -= sgn) {
        auto c = cache.find(q);
        if (c != cache.end()) {
          have = q;
          p = c->second;
          break;
        }
      }
      while (have != e) {
        p = p * base->second;
        have += sgn;
        cache.emplace(have, p);
      }
      it = cache.find(e);
    }
    result += mul_truncated(inner, it->second, prec);
  }
  return result;
}

}  // namespace

TruncatedElement substitute(const TruncatedElement& f, const std::vector<TruncatedElement>& images,
                            const ContextPtr& target) {
  const auto& src = f.context();
  std::vector<int> vars;
  for (int i = 0; i < src->size(); ++i) {
    if (i < static_cast<int>(images.size()) && images[i].context()) {
      if (images[i].context()->names != target->names) throw std::invalid_argument("image context mismatch");
      const auto& im = images[i].terms();
      const bool same = src->names == target->names && im.size() == 1 && im[0].coef.is_one() &&
                        im[0].mono == TruncatedElement::variable(target, i).terms()[0].mono;
      if (!same) vars.push_back(i);
    }
  }
  if (src->names != target->names && vars.size() != static_cast<size_t>(src->size()))
    throw std::invalid_argument("identity images need matching contexts");
  std::vector<std::map<int, TruncatedElement>> cache(vars.size());
  std::vector<int> val;
  for (int v : vars) {
    const int d = images[v].valuation();
    val.push_back(d == INT32_MAX ? 0 : d);
  }
  return subst_rec(f.terms(), vars, 0, target->order, cache, val, images, target);
}

std::string mono_to_string(const GradedContext& ctx, const Mono& m) {
  std::string out;
  for (int i = 0; i < ctx.size(); ++i) {
    if (m.e[i] == 0) continue;
    if (!out.empty()) out += "*";
    out += ctx.names[i];
    if (m.e[i] != 1) out += "^" + std::to_string(m.e[i]);
  }
  return out.empty() ? "1" : out;
}

std::string TruncatedElement::to_string() const {
  if (terms_.empty()) return "0";
  std::vector<const Term*> order;
  for (auto& t : terms_) order.push_back(&t);
  const auto& ctx = *ctx_;
  std::stable_sort(order.begin(), order.end(), [&](const Term* a, const Term* b) {
    int ja = ctx.j_order(a->mono), jb = ctx.j_order(b->mono);
    if (ja != jb) return ja < jb;
    int da = ctx.poly_degree(a->mono), db = ctx.poly_degree(b->mono);
    if (da != db) return da < db;
    return b->mono < a->mono;
  });
  std::string out;
  for (const Term* t : order) {
    const bool is_const = t->mono == Mono{};
    Scalar c = t->coef;
    bool neg = c.is_rational() && c.rational() < 0;
    if (neg) c = -c;
    if (out.empty()) {
      if (neg) out += "-";
    } else {
      out += neg ? " - " : " + ";
    }
    if (is_const) {
      out += c.to_string();
    } else if (c.is_one()) {
      out += mono_to_string(ctx, t->mono);
    } else {
      out += c.to_string() + "*" + mono_to_string(ctx, t->mono);
    }
  }
  return out;
}

}  // namespace equislice
