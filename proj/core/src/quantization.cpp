#include "equislice/quantization.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <functional>
#include <set>

#include "equislice/linalg.hpp"

namespace equislice {
namespace {

constexpr long kDefaultBudget = 50'000'000;

QMono unit_mono(int n) {
  QMono m;
  m.e.assign(n, 0);
  return m;
}

void accumulate(QElement& out, const QMono& m, const Scalar& c) {
  if (c.is_zero()) return;
  auto it = out.find(m);
  if (it == out.end()) {
    out.emplace(m, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) out.erase(it);
}

// Adds c * hbar^shift * x to out, dropping terms of hbar order >= prec.
void accumulate_shifted(QElement& out, const QElement& x, const Scalar& c, int shift, int prec) {
  for (const auto& [m, v] : x) {
    if (m.hbar + shift >= prec) continue;
    QMono s = m;
    s.hbar += shift;
    accumulate(out, s, v * c);
  }
}

class Parser {
 public:
  Parser(const HbarPresentation& A, const std::string& text) : A_(A), s_(text) {}

  QElement parse() {
    QElement v = expr();
    skip();
    if (p_ != s_.size()) fail("unexpected character");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument(what + " at position " + std::to_string(p_) + " in \"" + s_ + "\"");
  }
  void skip() {
    while (p_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[p_]))) ++p_;
  }
  bool eat(char c) {
    skip();
    if (p_ < s_.size() && s_[p_] == c) {
      ++p_;
      return true;
    }
    return false;
  }
  long integer() {
    skip();
    size_t start = p_;
    if (p_ < s_.size() && s_[p_] == '-') ++p_;
    while (p_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p_]))) ++p_;
    if (start == p_ || (p_ == start + 1 && s_[start] == '-')) fail("expected an integer");
    return std::stol(s_.substr(start, p_ - start));
  }
  QElement expr() {
    QElement v = term();
    for (;;) {
      if (eat('+')) {
        v = A_.add(v, term());
      } else if (eat('-')) {
        v = A_.sub(v, term());
      } else {
        return v;
      }
    }
  }
  QElement term() {
    QElement v = unary();
    while (eat('*')) v = A_.mul(v, unary());
    return v;
  }
  QElement unary() {
    if (eat('-')) return A_.scale(unary(), Scalar(-1));
    return primary();
  }
  QElement primary() {
    skip();
    if (p_ >= s_.size()) fail("unexpected end of input");
    if (eat('(')) {
      QElement v = expr();
      if (!eat(')')) fail("expected ')'");
      if (eat('^')) v = A_.pow(v, static_cast<int>(integer()));
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(s_[p_]))) {
      long num = integer(), den = 1;
      if (eat('/')) den = integer();
      if (den == 0) fail("zero denominator");
      return A_.constant(Scalar(num, den));
    }
    if (!std::isalpha(static_cast<unsigned char>(s_[p_])) && s_[p_] != '_') fail("expected a generator");
    size_t start = p_;
    while (p_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[p_])) || s_[p_] == '_' || s_[p_] == '\'')) ++p_;
    const std::string name = s_.substr(start, p_ - start);
    int power = 1;
    if (eat('^')) power = static_cast<int>(integer());
    if (name == "hbar") {
      if (power < 0) fail("hbar is not invertible");
      return A_.hbar(power);
    }
    const int idx = A_.index(name);
    if (idx < 0) {
      p_ = start;
      fail("unknown generator '" + name + "'");
    }
    if (power < 0 && !A_.invertible()[idx]) {
      p_ = start;
      fail("generator '" + name + "' is not invertible");
    }
    return A_.gen(idx, power);
  }

  const HbarPresentation& A_;
  std::string s_;
  size_t p_ = 0;
};

}  // namespace

long default_step_budget() {
  if (const char* env = std::getenv("EQUISLICE_MAX_STEPS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return kDefaultBudget;
}

HbarPresentation::HbarPresentation(std::vector<std::string> names, std::vector<int> weights,
                                   std::vector<bool> invertible, int hbar_weight, int order)
    : names_(std::move(names)),
      weights_(std::move(weights)),
      invertible_(std::move(invertible)),
      hbar_weight_(hbar_weight),
      order_(order),
      budget_(default_step_budget()) {
  if (weights_.size() != names_.size() || invertible_.size() != names_.size())
    throw std::invalid_argument("generator data has inconsistent lengths");
  if (order_ < 1) throw std::invalid_argument("hbar order must be positive");
  std::set<std::string> seen;
  for (auto& n : names_) {
    if (n.empty() || n == "hbar" || !seen.insert(n).second) throw std::invalid_argument("bad generator name '" + n + "'");
  }
}

int HbarPresentation::index(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  return it == names_.end() ? -1 : static_cast<int>(it - names_.begin());
}

HbarPresentation HbarPresentation::with_order(int order) const {
  HbarPresentation B = *this;
  B.order_ = order;
  B.mul_cache_.clear();
  B.comm_cache_.clear();
  for (auto& [k, v] : B.rules_) v = B.truncate(v);
  return B;
}

void HbarPresentation::set_commutator(int j, int i, const QElement& c) {
  if (!(i < j) || j >= size() || i < 0) throw std::invalid_argument("rules need i < j");
  for (auto& [m, v] : c)
    if (m.hbar < 1) throw std::invalid_argument("commutator of " + names_[j] + " and " + names_[i] + " must be divisible by hbar");
  rules_[{j, i}] = truncate(c);
  mul_cache_.clear();
  comm_cache_.clear();
}

const QElement& HbarPresentation::commutator_rule(int j, int i) const {
  static const QElement empty;
  auto it = rules_.find({j, i});
  return it == rules_.end() ? empty : it->second;
}

QElement HbarPresentation::one() const { return constant(Scalar(1)); }

QElement HbarPresentation::constant(const Scalar& c) const {
  QElement out;
  accumulate(out, unit_mono(size()), c);
  return out;
}

QElement HbarPresentation::hbar(int power) const {
  QMono m = unit_mono(size());
  m.hbar = power;
  QElement out;
  if (power < order_) out.emplace(m, Scalar(1));
  return out;
}

QElement HbarPresentation::gen(int i, int power) const {
  if (power < 0 && !invertible_.at(i)) throw std::invalid_argument("generator " + names_[i] + " is not invertible");
  QMono m = unit_mono(size());
  m.e.at(i) = power;
  return QElement{{m, Scalar(1)}};
}

QElement HbarPresentation::truncate(QElement a) const {
  for (auto it = a.begin(); it != a.end();) {
    if (it->first.hbar >= order_ || it->second.is_zero()) {
      it = a.erase(it);
    } else {
      ++it;
    }
  }
  return a;
}

QElement HbarPresentation::add(const QElement& a, const QElement& b) const {
  QElement out = a;
  for (auto& [m, v] : b) accumulate(out, m, v);
  return truncate(out);
}

QElement HbarPresentation::sub(const QElement& a, const QElement& b) const {
  QElement out = a;
  for (auto& [m, v] : b) accumulate(out, m, -v);
  return truncate(out);
}

QElement HbarPresentation::scale(const QElement& a, const Scalar& c) const {
  QElement out;
  for (auto& [m, v] : a) accumulate(out, m, v * c);
  return out;
}

void HbarPresentation::count_step() const {
  if (++steps_ > budget_ && budget_ > 0)
    throw RewriteBudgetExceeded("rewriting exceeded the step budget of " + std::to_string(budget_));
}

QElement HbarPresentation::mul(const QElement& a, const QElement& b) const { return mul_p(a, b, order_); }

QElement HbarPresentation::mul_p(const QElement& a, const QElement& b, int prec) const {
  QElement out;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) {
      const int shift = ma.hbar + mb.hbar;
      if (shift >= prec) continue;
      QMono xa = ma, xb = mb;
      xa.hbar = xb.hbar = 0;
      accumulate_shifted(out, mul_mono(xa, xb, prec - shift), ca * cb, shift, prec);
    }
  return out;
}

// Product of hbar-free ordered monomials: right-multiplies a by the factors of b one at a time.
QElement HbarPresentation::mul_mono(const QMono& a, const QMono& b, int prec) const {
  if (prec <= 0) return {};
  auto key = std::make_tuple(a, b, prec);
  auto it = mul_cache_.find(key);
  if (it != mul_cache_.end()) return it->second;
  QElement cur{{a, Scalar(1)}};
  for (int i = 0; i < size(); ++i) {
    const int e = b.e[i];
    const int sign = e > 0 ? 1 : -1;
    for (int r = 0; r < std::abs(e); ++r) {
      QElement next;
      for (const auto& [m, c] : cur)
        for (const auto& [sm, sc] : mono_times_gen(m, i, sign, prec)) accumulate(next, sm, sc * c);
      cur = std::move(next);
    }
  }
  mul_cache_.emplace(key, cur);
  return cur;
}

// m * g_j^sign modulo hbar^prec.
QElement HbarPresentation::mono_times_gen(const QMono& m, int j, int sign, int prec) const {
  if (m.hbar >= prec) return {};
  if (sign < 0 && !invertible_[j]) throw std::invalid_argument("generator " + names_[j] + " is not invertible");
  QMono left = m, right = unit_mono(size());
  bool has_right = false;
  for (int i = j + 1; i < size(); ++i) {
    if (m.e[i] != 0) has_right = true;
    right.e[i] = m.e[i];
    left.e[i] = 0;
  }
  QMono moved = m;
  moved.e[j] += sign;
  QElement out{{moved, Scalar(1)}};
  if (!has_right) return out;
  count_step();
  // L R g = L g R + L [R, g]
  const int p = prec - m.hbar;
  QMono l0 = left;
  l0.hbar = 0;
  QElement prod = mul_p(QElement{{l0, Scalar(1)}}, comm_suffix(right, j, sign, p), p);
  accumulate_shifted(out, prod, Scalar(1), m.hbar, prec);
  return out;
}

// [R, g_j^sign] for an hbar-free ordered monomial R supported on indices > j.
QElement HbarPresentation::comm_suffix(const QMono& r, int j, int sign, int prec) const {
  if (prec <= 1) return {};
  int h = -1;
  for (int i = 0; i < size(); ++i)
    if (r.e[i] != 0) {
      h = i;
      break;
    }
  if (h < 0) return {};
  QMono head = unit_mono(size()), rest = r;
  head.e[h] = r.e[h];
  rest.e[h] = 0;
  QElement out;
  // [h^e R', g] = h^e [R', g] + [h^e, g] R'
  QElement inner = comm_suffix(rest, j, sign, prec);
  if (!inner.empty())
    for (auto& [m, v] : mul_p(QElement{{head, Scalar(1)}}, inner, prec)) accumulate(out, m, v);
  QElement hp = comm_gen_gen(h, r.e[h], j, sign, prec);
  if (!hp.empty())
    for (auto& [m, v] : mul_p(hp, QElement{{rest, Scalar(1)}}, prec)) accumulate(out, m, v);
  return out;
}

// [g_h^hs, g_j^sign] with h > j, modulo hbar^prec.
QElement HbarPresentation::comm_gen_gen(int h, int hs, int j, int sign, int prec) const {
  auto key = std::make_tuple(h, hs, j, sign, prec);
  auto it = comm_cache_.find(key);
  if (it != comm_cache_.end()) return it->second;
  QElement base;
  for (auto& [m, v] : commutator_rule(h, j))
    if (m.hbar < prec) base.emplace(m, v);
  QElement out;
  if (!base.empty()) {
    if (sign < 0) {
      // [g_h, g_j^{-1}] = -g_j^{-1} [g_h, g_j] g_j^{-1}
      base = scale(mul_p(mul_p(gen(j, -1), base, prec), gen(j, -1), prec), Scalar(-1));
    }
    QElement unit = base;
    if (hs < 0) unit = scale(mul_p(mul_p(gen(h, -1), base, prec), gen(h, -1), prec), Scalar(-1));
    const int m = std::abs(hs);
    const int step = hs > 0 ? 1 : -1;
    for (int a = 0; a < m; ++a) {
      QElement term = mul_p(mul_p(gen(h, step * a), unit, prec), gen(h, step * (m - 1 - a)), prec);
      for (auto& [mm, v] : term) accumulate(out, mm, v);
    }
  }
  comm_cache_.emplace(key, out);
  return out;
}

QElement HbarPresentation::commutator(const QElement& a, const QElement& b) const {
  return sub(mul(a, b), mul(b, a));
}

QElement HbarPresentation::pow(const QElement& a, int e) const {
  if (e < 0) {
    if (a.size() != 1 || a.begin()->second != Scalar(1) || a.begin()->first.hbar != 0)
      throw std::invalid_argument("only generator monomials can be inverted");
    const QMono& m = a.begin()->first;
    int nz = 0, idx = -1;
    for (int i = 0; i < size(); ++i)
      if (m.e[i] != 0) {
        ++nz;
        idx = i;
      }
    if (nz != 1) throw std::invalid_argument("only single generators can be inverted");
    return gen(idx, m.e[idx] * e);
  }
  QElement r = one();
  for (int i = 0; i < e; ++i) r = mul(r, a);
  return r;
}

QElement HbarPresentation::parse(const std::string& text) const { return Parser(*this, text).parse(); }

int HbarPresentation::weight(const QMono& m) const {
  int w = m.hbar * hbar_weight_;
  for (int i = 0; i < size(); ++i) w += m.e[i] * weights_[i];
  return w;
}

std::optional<int> HbarPresentation::weight(const QElement& a) const {
  if (a.empty()) return std::nullopt;
  const int w = weight(a.begin()->first);
  for (auto& [m, v] : a)
    if (weight(m) != w) return std::nullopt;
  return w;
}

std::string HbarPresentation::to_string(const QElement& a) const {
  if (a.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : a) {
    std::string mono;
    auto factor = [&](const std::string& name, int e) {
      if (e == 0) return;
      if (!mono.empty()) mono += "*";
      mono += name;
      if (e != 1) mono += "^" + std::to_string(e);
    };
    factor("hbar", m.hbar);
    for (int i = 0; i < size(); ++i) factor(names_[i], m.e[i]);
    Scalar coef = c;
    bool neg = c.is_rational() && c.rational() < 0;
    if (neg) coef = -c;
    if (first) {
      if (neg) out += "-";
    } else {
      out += neg ? " - " : " + ";
    }
    first = false;
    if (mono.empty()) {
      out += coef.to_string();
    } else if (coef.is_one()) {
      out += mono;
    } else {
      out += coef.to_string() + "*" + mono;
    }
  }
  return out;
}

StructureConstants sl2_structure_constants() {
  StructureConstants sc;
  sc.names = {"e", "f", "h"};
  sc.brackets[{0, 1}] = {{2, Scalar(1)}};   // [e,f] = h
  sc.brackets[{0, 2}] = {{0, Scalar(-2)}};  // [e,h] = -2e
  sc.brackets[{1, 2}] = {{1, Scalar(2)}};   // [f,h] = 2f
  return sc;
}

HbarPresentation build_d(int n, int k, int order) {
  if (n < 1) throw std::invalid_argument("D(n,k) needs n >= 1");
  std::vector<std::string> names{"t", "u"};
  std::vector<int> weights{1, 0};
  std::vector<bool> inv{true, false};
  for (int i = 1; i <= 2 * n - 2; ++i) {
    names.push_back("z" + std::to_string(i));
    weights.push_back(i % 2 ? k : 0);
    inv.push_back(false);
  }
  HbarPresentation A(names, weights, inv, k, order);
  // [u,t] = -hbar t^{1-k}
  A.set_commutator(1, 0, A.scale(A.mul(A.hbar(), A.gen(0, 1 - k)), Scalar(-1)));
  for (int i = 0; i < n - 1; ++i) A.set_commutator(3 + 2 * i, 2 + 2 * i, A.scale(A.hbar(), Scalar(-1)));
  A.name = "D(" + std::to_string(n) + "," + std::to_string(k) + ")";
  return A;
}

HbarPresentation build_weyl(int n, int k, int order) {
  if (n < 1) throw std::invalid_argument("Weyl(n,k) needs n >= 1");
  std::vector<std::string> names;
  std::vector<int> weights;
  for (int i = 1; i <= 2 * n - 2; ++i) {
    names.push_back("z" + std::to_string(i));
    weights.push_back(i % 2 ? k : 0);
  }
  HbarPresentation A(names, weights, std::vector<bool>(names.size(), false), k, order);
  for (int i = 0; i < n - 1; ++i) A.set_commutator(2 * i + 1, 2 * i, A.scale(A.hbar(), Scalar(-1)));
  A.name = "Weyl(" + std::to_string(n) + "," + std::to_string(k) + ")";
  return A;
}

namespace {

using LinComb = std::map<int, Scalar>;

LinComb bracket_of(const StructureConstants& sc, int a, int b) {
  LinComb out;
  if (a == b) return out;
  const bool swap = a > b;
  auto it = sc.brackets.find(swap ? std::make_pair(b, a) : std::make_pair(a, b));
  if (it == sc.brackets.end()) return out;
  for (auto& [i, c] : it->second) {
    out[i] += swap ? -c : c;
    if (out[i].is_zero()) out.erase(i);
  }
  return out;
}

LinComb bracket_lin(const StructureConstants& sc, const LinComb& x, int b) {
  LinComb out;
  for (auto& [i, c] : x)
    for (auto& [j, d] : bracket_of(sc, i, b)) {
      out[j] += c * d;
      if (out[j].is_zero()) out.erase(j);
    }
  return out;
}

}  // namespace

HbarPresentation build_enveloping(const StructureConstants& sc, int order, const std::vector<std::string>& inverted) {
  const int n = static_cast<int>(sc.names.size());
  for (auto& [key, v] : sc.brackets) {
    if (key.first >= key.second || key.second >= n || key.first < 0)
      throw std::invalid_argument("structure constants must be indexed by pairs i < j");
    for (auto& [i, c] : v)
      if (i < 0 || i >= n) throw std::invalid_argument("structure constant index out of range");
  }
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c) {
        LinComb s;
        auto add_in = [&](const LinComb& x) {
          for (auto& [i, v] : x) {
            s[i] += v;
            if (s[i].is_zero()) s.erase(i);
          }
        };
        add_in(bracket_lin(sc, bracket_of(sc, a, b), c));
        add_in(bracket_lin(sc, bracket_of(sc, b, c), a));
        add_in(bracket_lin(sc, bracket_of(sc, c, a), b));
        if (!s.empty())
          throw std::invalid_argument("structure constants fail Jacobi on (" + sc.names[a] + "," + sc.names[b] + "," +
                                      sc.names[c] + ")");
      }
  std::vector<int> perm;  // new position -> old index
  for (auto& name : inverted) {
    auto it = std::find(sc.names.begin(), sc.names.end(), name);
    if (it == sc.names.end()) throw std::invalid_argument("unknown generator to invert: " + name);
    perm.push_back(static_cast<int>(it - sc.names.begin()));
  }
  for (int i = 0; i < n; ++i)
    if (std::find(perm.begin(), perm.end(), i) == perm.end()) perm.push_back(i);
  std::vector<std::string> names;
  std::vector<bool> inv;
  for (int p = 0; p < n; ++p) {
    names.push_back(sc.names[perm[p]]);
    inv.push_back(p < static_cast<int>(inverted.size()));
  }
  HbarPresentation A(names, std::vector<int>(n, 1), inv, 1, order);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < j; ++i) {
      QElement c;
      for (auto& [idx, v] : bracket_of(sc, perm[j], perm[i])) {
        const int pos = static_cast<int>(std::find(perm.begin(), perm.end(), idx) - perm.begin());
        c = A.add(c, A.scale(A.mul(A.hbar(), A.gen(pos)), v));
      }
      if (!c.empty()) A.set_commutator(j, i, c);
    }
  A.name = "U_hbar";
  return A;
}

HbarPresentation tensor(const HbarPresentation& a, const HbarPresentation& b) {
  if (a.hbar_weight() != b.hbar_weight()) throw std::invalid_argument("tensor factors have different hbar weights");
  std::vector<std::string> names = a.names();
  std::vector<int> weights = a.weights();
  std::vector<bool> inv = a.invertible();
  names.insert(names.end(), b.names().begin(), b.names().end());
  weights.insert(weights.end(), b.weights().begin(), b.weights().end());
  inv.insert(inv.end(), b.invertible().begin(), b.invertible().end());
  HbarPresentation T(names, weights, inv, a.hbar_weight(), std::min(a.order(), b.order()));
  auto embed = [&](const QElement& x, int offset) {
    QElement out;
    for (auto& [m, v] : x) {
      QMono y;
      y.hbar = m.hbar;
      y.e.assign(T.size(), 0);
      for (size_t i = 0; i < m.e.size(); ++i) y.e[offset + i] = m.e[i];
      out.emplace(y, v);
    }
    return out;
  };
  for (int j = 0; j < a.size(); ++j)
    for (int i = 0; i < j; ++i)
      if (!a.commutator_rule(j, i).empty()) T.set_commutator(j, i, embed(a.commutator_rule(j, i), 0));
  for (int j = 0; j < b.size(); ++j)
    for (int i = 0; i < j; ++i)
      if (!b.commutator_rule(j, i).empty())
        T.set_commutator(a.size() + j, a.size() + i, embed(b.commutator_rule(j, i), a.size()));
  T.name = a.name + "*" + b.name;
  return T;
}

std::vector<OverlapFailure> overlap_check(const HbarPresentation& A) {
  std::vector<OverlapFailure> out;
  const int n = A.size();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int l = j + 1; l < n; ++l) {
        QElement left = A.mul(A.mul(A.gen(l), A.gen(j)), A.gen(i));
        QElement right = A.mul(A.gen(l), A.mul(A.gen(j), A.gen(i)));
        QElement r = A.sub(left, right);
        if (!r.empty()) out.push_back({l, j, i, r});
      }
  for (int i = 0; i < n; ++i) {
    if (!A.invertible()[i]) continue;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      // (g_j g_i) g_i^{-1} = g_j
      QElement r = A.sub(A.mul(A.mul(A.gen(j), A.gen(i)), A.gen(i, -1)), A.gen(j));
      if (!r.empty()) out.push_back({j, i, i, r});
    }
  }
  return out;
}

CentralityResult centrality_check(const HbarPresentation& A, const QElement& element, int degree_cap) {
  CentralityResult res;
  auto probe = [&](const std::string& name, const QElement& g) {
    QElement c = A.commutator(element, g);
    if (!c.empty()) {
      res.pass = false;
      res.residues.emplace_back(name, c);
    }
  };
  for (int i = 0; i < A.size(); ++i) {
    probe(A.names()[i], A.gen(i));
    if (A.invertible()[i]) probe(A.names()[i] + "^-1", A.gen(i, -1));
  }
  std::vector<int> free;
  for (int i = 0; i < A.size(); ++i)
    if (!A.invertible()[i]) free.push_back(i);
  // PBW monomials of degree 2..cap in the non-invertible generators
  std::vector<int> e(free.size(), 0);
  std::function<void(size_t, int)> rec = [&](size_t pos, int left) {
    if (pos == free.size()) {
      int deg = 0;
      for (int x : e) deg += x;
      if (deg < 2) return;
      QElement m = A.one();
      std::string name;
      for (size_t q = 0; q < free.size(); ++q) {
        if (e[q] == 0) continue;
        m = A.mul(m, A.gen(free[q], e[q]));
        if (!name.empty()) name += "*";
        name += A.names()[free[q]] + (e[q] > 1 ? "^" + std::to_string(e[q]) : "");
      }
      probe(name, m);
      return;
    }
    for (int x = 0; x <= left; ++x) {
      e[pos] = x;
      rec(pos + 1, left - x);
    }
    e[pos] = 0;
  };
  rec(0, degree_cap);
  return res;
}

Sl2LocalizationReport verify_sl2_localization(int order) {
  Sl2LocalizationReport r;
  HbarPresentation A = build_enveloping(sl2_structure_constants(), order, {"f"});
  const QElement x = A.parse("f");
  const QElement y = A.parse("1/2*h");
  const QElement C = A.parse("e*f + f*e + 1/2*h*h");
  r.xy_residue = A.sub(A.commutator(x, y), A.mul(A.hbar(), x));
  r.cx = A.commutator(C, x);
  r.cy = A.commutator(C, y);
  r.weight_x = A.weight(x).value_or(-999);
  r.weight_y = A.weight(y).value_or(-999);
  r.weight_c = A.weight(C).value_or(-999);
  r.weight_hbar = A.hbar_weight();
  r.pass = r.xy_residue.empty() && r.cx.empty() && r.cy.empty() && r.weight_x == 1 && r.weight_y == 1 &&
           r.weight_c == 2 && r.weight_hbar == 1;
  return r;
}

bool in_joint_kernel(const HbarPresentation& A, const QElement& a, const QElement& t_lift,
                     const std::vector<QElement>& z_lifts) {
  const HbarPresentation B = A.with_order(A.order() + 1);
  if (!B.commutator(t_lift, a).empty()) return false;
  for (auto& z : z_lifts)
    if (!B.commutator(z, a).empty()) return false;
  return true;
}

QElement conjugate_by_exp(const HbarPresentation& A, const QElement& w, const QElement& x) {
  QElement out = x, term = x;
  for (int n = 1; n <= 2 * A.order() + 2; ++n) {
    term = A.scale(A.mul(A.hbar(), A.commutator(w, term)), Scalar(1, n));
    if (term.empty()) break;
    out = A.add(out, term);
  }
  return out;
}

QuantSliceResult quantized_slice(const HbarPresentation& A, const QElement& t_lift,
                                 const std::vector<QElement>& z_lifts, const QuantSliceOptions& opt) {
  QuantSliceResult res;
  const int N = A.order();
  if (z_lifts.size() % 2) throw std::invalid_argument("z lifts must come in pairs");
  for (size_t i = 0; i < z_lifts.size(); ++i) {
    if (!A.commutator(t_lift, z_lifts[i]).empty())
      res.lift_failures.push_back("[t, z" + std::to_string(i + 1) + "] != 0");
    for (size_t j = i + 1; j < z_lifts.size(); ++j) {
      QElement expect = (i % 2 == 0 && j == i + 1) ? A.hbar() : QElement{};
      if (!A.sub(A.commutator(z_lifts[i], z_lifts[j]), expect).empty())
        res.lift_failures.push_back("[z" + std::to_string(i + 1) + ", z" + std::to_string(j + 1) + "] has the wrong value");
    }
  }
  if (!res.lift_failures.empty()) {
    res.lifts_ok = false;
    return res;
  }
  const HbarPresentation B = A.with_order(N + 1);
  std::vector<int> inv, free;
  for (int i = 0; i < A.size(); ++i) (A.invertible()[i] ? inv : free).push_back(i);

  std::vector<QElement> probes{t_lift};
  probes.insert(probes.end(), z_lifts.begin(), z_lifts.end());
  for (int w = opt.weight_min; w <= opt.weight_max; ++w) {
    // monomial basis of weight w
    std::vector<QMono> basis;
    QMono cur;
    cur.e.assign(A.size(), 0);
    std::function<void(size_t, int)> rec_free;
    std::function<void(size_t)> rec_inv = [&](size_t pos) {
      if (pos == inv.size()) {
        rec_free(0, opt.degree_cap);
        return;
      }
      for (int x = -opt.laurent_bound; x <= opt.laurent_bound; ++x) {
        cur.e[inv[pos]] = x;
        rec_inv(pos + 1);
      }
      cur.e[inv[pos]] = 0;
    };
    rec_free = [&](size_t pos, int left) {
      if (pos == free.size()) {
        if (A.weight(cur) == w) basis.push_back(cur);
        return;
      }
      for (int x = 0; x <= left; ++x) {
        cur.e[free[pos]] = x;
        rec_free(pos + 1, left - x);
      }
      cur.e[free[pos]] = 0;
    };
    for (int h = 0; h < N; ++h) {
      cur.hbar = h;
      rec_inv(0);
    }
    std::sort(basis.begin(), basis.end());
    // rows: (probe, monomial) -> coefficients over the basis
    std::map<std::pair<int, QMono>, SparseVec> rows;
    for (size_t b = 0; b < basis.size(); ++b) {
      const QElement x{{basis[b], Scalar(1)}};
      for (size_t p = 0; p < probes.size(); ++p)
        for (auto& [m, v] : B.commutator(probes[p], x)) rows[{static_cast<int>(p), m}].emplace_back(static_cast<int>(b), v);
    }
    SparseEchelon ech;
    for (auto& [key, row] : rows) ech.add(row);
    QuantSliceBlock block{w, {}};
    for (auto& vec : ech.nullspace(static_cast<int>(basis.size()))) {
      QElement el;
      for (auto& [idx, v] : vec) el.emplace(basis[idx], v);
      block.basis.push_back(el);
    }
    res.blocks.push_back(std::move(block));
  }

  // generator candidates by symbol degree
  auto degree = [&](const QMono& m) {
    int d = 0;
    for (int i : free) d += m.e[i];
    return d;
  };
  struct Cand {
    int deg;
    int weight;
    QElement el;
    std::map<std::vector<int>, Scalar> sym;
  };
  std::vector<Cand> all;
  for (auto& blk : res.blocks)
    for (auto& el : blk.basis) {
      Cand c{0, blk.weight, el, {}};
      for (auto& [m, v] : el)
        if (m.hbar == 0) {
          c.sym[m.e] = v;
          c.deg = std::max(c.deg, degree(m));
        }
      if (!c.sym.empty() && c.deg > 0) all.push_back(std::move(c));
    }
  std::stable_sort(all.begin(), all.end(), [](const Cand& a, const Cand& b) { return a.deg < b.deg; });
  std::vector<const Cand*> chosen;
  std::map<std::vector<int>, int> mono_index;
  auto to_sparse = [&](const std::map<std::vector<int>, Scalar>& sym) {
    SparseVec v;
    for (auto& [m, c] : sym) {
      auto it = mono_index.emplace(m, static_cast<int>(mono_index.size())).first;
      v.emplace_back(it->second, c);
    }
    std::sort(v.begin(), v.end(), [](auto& a, auto& b) { return a.first < b.first; });
    return v;
  };
  for (auto& c : all) {
    SparseEchelon span;
    // products of at least two chosen symbols with total degree <= cap and weight in window
    std::function<void(size_t, int, int, int, std::map<std::vector<int>, Scalar>)> prod =
        [&](size_t start, int count, int deg, int wsum, std::map<std::vector<int>, Scalar> acc) {
          if (count >= 2 && wsum == c.weight) span.add(to_sparse(acc));
          for (size_t q = start; q < chosen.size(); ++q) {
            if (deg + chosen[q]->deg > c.deg) continue;
            std::map<std::vector<int>, Scalar> next;
            for (auto& [ma, va] : acc)
              for (auto& [mb, vb] : chosen[q]->sym) {
                std::vector<int> m = ma;
                for (size_t i = 0; i < m.size(); ++i) m[i] += mb[i];
                next[m] += va * vb;
              }
            for (auto it = next.begin(); it != next.end();) it = it->second.is_zero() ? next.erase(it) : std::next(it);
            prod(q, count + 1, deg + chosen[q]->deg, wsum + chosen[q]->weight, next);
          }
        };
    std::map<std::vector<int>, Scalar> unit{{std::vector<int>(A.size(), 0), Scalar(1)}};
    prod(0, 0, 0, 0, unit);
    for (auto* prev : chosen)
      if (prev->deg == c.deg && prev->weight == c.weight) span.add(to_sparse(prev->sym));
    if (!span.reduce(to_sparse(c.sym)).empty()) chosen.push_back(&c);
  }
  for (auto* c : chosen) res.generators.push_back(c->el);

  // closure: products of basis elements whose weights sum into the window stay in the kernel
  for (auto& ba : res.blocks)
    for (auto& bb : res.blocks) {
      const int w = ba.weight + bb.weight;
      if (w < opt.weight_min || w > opt.weight_max) continue;
      for (auto& a : ba.basis)
        for (auto& b : bb.basis)
          if (!in_joint_kernel(A, A.mul(a, b), t_lift, z_lifts)) res.product_closed = false;
    }
  return res;
}

TruncatedElement symbol(const HbarPresentation& A, const QElement& a, const ContextPtr& ctx) {
  std::vector<int> map(A.size());
  for (int i = 0; i < A.size(); ++i) {
    map[i] = ctx->index(A.names()[i]);
    if (map[i] < 0) throw std::invalid_argument("generator " + A.names()[i] + " is missing from the Poisson context");
  }
  std::vector<Term> terms;
  for (auto& [m, v] : a) {
    if (m.hbar != 0) continue;
    Mono mono;
    for (int i = 0; i < A.size(); ++i) mono.e[map[i]] = static_cast<int8_t>(m.e[i]);
    terms.push_back({mono, v});
  }
  return TruncatedElement::from_terms(ctx, std::move(terms));
}

AxiomReport quantization_axiom_check(const HbarPresentation& A, const PoissonPresentation& P) {
  AxiomReport rep;
  const ContextPtr& ctx = P.context();
  if (ctx->size() != A.size()) rep.shape_errors.push_back("generator counts differ");
  for (int i = 0; i < A.size(); ++i) {
    const int j = ctx->index(A.names()[i]);
    if (j < 0) {
      rep.shape_errors.push_back("generator " + A.names()[i] + " is missing from the Poisson presentation");
      continue;
    }
    if (ctx->weights[j] != A.weights()[i]) rep.shape_errors.push_back("weight of " + A.names()[i] + " differs");
    if (ctx->invertible[j] != A.invertible()[i]) rep.shape_errors.push_back("invertibility of " + A.names()[i] + " differs");
  }
  if (P.declared_degree && *P.declared_degree != -A.hbar_weight())
    rep.shape_errors.push_back("bracket degree " + std::to_string(*P.declared_degree) + " does not match |hbar| = " +
                               std::to_string(A.hbar_weight()));
  if (!rep.shape_errors.empty()) {
    rep.pass = false;
    return rep;
  }
  const HbarPresentation B = A.with_order(std::max(A.order(), 2));
  const int prec = bracket_precision(ctx);
  for (int i = 0; i < B.size(); ++i)
    for (int j = i + 1; j < B.size(); ++j) {
      const QElement c = B.commutator(B.gen(i), B.gen(j));
      QElement first;
      bool classical_ok = true;
      for (auto& [m, v] : c) {
        if (m.hbar == 0) classical_ok = false;
        if (m.hbar == 1) {
          QMono x = m;
          x.hbar = 0;
          first.emplace(x, v);
        }
      }
      const TruncatedElement found = symbol(B, first, ctx);
      const TruncatedElement expected = P.entry(ctx->index(B.names()[i]), ctx->index(B.names()[j]));
      if (!classical_ok || !vanishes_mod(P.reduce(found - expected), prec)) {
        rep.pass = false;
        rep.failures.push_back({B.names()[i], B.names()[j], expected, found});
      }
    }
  return rep;
}

}  // namespace equislice
