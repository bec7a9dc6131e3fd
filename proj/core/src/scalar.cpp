#include "equislice/scalar.hpp"

#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace equislice {
namespace {

using QPoly = std::vector<mpq_class>;

void trim(QPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

// Reduces p modulo the monic integer polynomial m.
void reduce_mod(QPoly& p, const std::vector<long>& m) {
  const size_t d = m.size() - 1;
  for (size_t i = p.size(); i-- > d;) {
    if (p[i] == 0) continue;
    mpq_class c = p[i];
    for (size_t j = 0; j <= d; ++j) p[i - d + j] -= c * m[j];
  }
  p.resize(std::min(p.size(), d));
  p.resize(d, mpq_class(0));
}

std::vector<long> poly_div_exact(std::vector<long> num, const std::vector<long>& den) {
  const size_t dn = den.size() - 1;
  std::vector<long> quot(num.size() - dn, 0);
  for (size_t i = num.size(); i-- > dn;) {
    long c = num[i] / den.back();
    quot[i - dn] = c;
    for (size_t j = 0; j <= dn; ++j) num[i - dn + j] -= c * den[j];
  }
  return quot;
}

// Polynomial long division over Q: a = q*b + r.
void poly_divmod(const QPoly& a, const QPoly& b, QPoly& q, QPoly& r) {
  r = a;
  trim(r);
  q.assign(r.size() >= b.size() ? r.size() - b.size() + 1 : 0, mpq_class(0));
  while (r.size() >= b.size() && !r.empty()) {
    const size_t shift = r.size() - b.size();
    mpq_class c = r.back() / b.back();
    q[shift] = c;
    for (size_t j = 0; j < b.size(); ++j) r[shift + j] -= c * b[j];
    trim(r);
  }
}

QPoly poly_sub_mul(const QPoly& s0, const QPoly& q, const QPoly& s1) {
  QPoly out(std::max(s0.size(), q.size() + s1.size()), mpq_class(0));
  for (size_t i = 0; i < s0.size(); ++i) out[i] += s0[i];
  for (size_t i = 0; i < q.size(); ++i)
    for (size_t j = 0; j < s1.size(); ++j) out[i + j] -= q[i] * s1[j];
  trim(out);
  return out;
}

// Extended Euclid over Q[x]: returns s with s*a = 1 mod m.
QPoly poly_inverse_mod(QPoly a, const std::vector<long>& m_int) {
  QPoly r0(m_int.begin(), m_int.end());
  QPoly r1 = std::move(a);
  trim(r1);
  if (r1.empty()) throw std::domain_error("division by zero");
  QPoly s0, s1{mpq_class(1)};
  while (r1.size() > 1) {
    QPoly q, r;
    poly_divmod(r0, r1, q, r);
    if (r.empty()) throw std::domain_error("non-invertible cyclotomic element");
    QPoly sn = poly_sub_mul(s0, q, s1);
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(sn);
  }
  for (auto& x : s1) x /= r1[0];
  return s1;
}

const std::vector<long>& cyclotomic_cached(int n, std::map<int, std::vector<long>>& cache) {
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<long> num(n + 1, 0);
  num[0] = -1;
  num[n] = 1;
  for (int d = 1; d < n; ++d)
    if (n % d == 0) num = poly_div_exact(num, cyclotomic_cached(d, cache));
  return cache.emplace(n, std::move(num)).first->second;
}

}  // namespace

const std::vector<long>& cyclotomic_polynomial(int n) {
  if (n < 1) throw std::invalid_argument("cyclotomic order must be positive");
  static std::mutex mu;
  static std::map<int, std::vector<long>> cache;
  std::lock_guard<std::mutex> lock(mu);
  return cyclotomic_cached(n, cache);
}

namespace {

unsigned __int128 gcd128(unsigned __int128 a, unsigned __int128 b) {
  while (b != 0) {
    unsigned __int128 r = a % b;
    a = b;
    b = r;
  }
  return a;
}

mpz_class mpz_from(__int128 v) {
  const bool neg = v < 0;
  unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  mpz_class hi(static_cast<unsigned long>(u >> 64)), lo(static_cast<unsigned long>(u));
  mpz_class r = (hi << 64) + lo;
  return neg ? mpz_class(-r) : r;
}

}  // namespace

Scalar::Scalar(mpq_class q) {
  q.canonicalize();
  set_rational(q);
}

Scalar::Scalar(long num, long den) {
  if (den == 0) throw std::domain_error("zero denominator");
  set_small(num, den);
}

void Scalar::set_small(__int128 num, __int128 den) {
  if (den < 0) {
    num = -num;
    den = -den;
  }
  unsigned __int128 g = gcd128(num < 0 ? -static_cast<unsigned __int128>(num) : num, den);
  if (g > 1) {
    num /= static_cast<__int128>(g);
    den /= static_cast<__int128>(g);
  }
  n_ = 1;
  c_.clear();
  if (num >= INT64_MIN && num <= INT64_MAX && den <= INT64_MAX) {
    sn_ = static_cast<int64_t>(num);
    sd_ = static_cast<int64_t>(den);
    big_ = false;
    q_.reset();
    return;
  }
  auto q = std::make_shared<mpq_class>(mpz_from(num), mpz_from(den));
  q->canonicalize();
  q_ = std::move(q);
  big_ = true;
}

void Scalar::set_rational(const mpq_class& q) {
  n_ = 1;
  c_.clear();
  if (mpz_fits_slong_p(q.get_num_mpz_t()) && mpz_fits_slong_p(q.get_den_mpz_t())) {
    sn_ = q.get_num().get_si();
    sd_ = q.get_den().get_si();
    big_ = false;
    q_.reset();
    return;
  }
  q_ = std::make_shared<const mpq_class>(q);
  big_ = true;
}

mpq_class Scalar::big() const {
  if (big_) return *q_;
  return mpq_class(mpz_class(static_cast<long>(sn_)), mpz_class(static_cast<long>(sd_)));
}

Scalar Scalar::zeta(int n, long power) {
  if (n < 1) throw std::invalid_argument("cyclotomic order must be positive");
  long p = ((power % n) + n) % n;
  std::vector<mpq_class> c(p + 1, mpq_class(0));
  c[p] = 1;
  return cyclotomic(n, std::move(c));
}

Scalar Scalar::cyclotomic(int n, std::vector<mpq_class> coeffs) {
  Scalar s;
  if (n <= 2) {
    // Q[zeta_1] = Q[zeta_2] = Q; zeta_2 = -1
    mpq_class v = 0, z = 1;
    const mpq_class step = (n == 2) ? -1 : 1;
    for (auto& c : coeffs) {
      v += c * z;
      z *= step;
    }
    s.set_rational(v);
    return s;
  }
  reduce_mod(coeffs, cyclotomic_polynomial(n));
  s.n_ = n;
  s.c_ = std::move(coeffs);
  s.normalize();
  return s;
}

Scalar Scalar::parse_rational(const std::string& text) {
  mpq_class q;
  if (q.set_str(text, 10) != 0) throw std::invalid_argument("bad rational: " + text);
  q.canonicalize();
  return Scalar(q);
}

void Scalar::normalize() {
  if (n_ == 1) return;
  for (size_t i = 1; i < c_.size(); ++i)
    if (c_[i] != 0) return;
  mpq_class v = c_.empty() ? mpq_class(0) : c_[0];
  set_rational(v);
}

bool Scalar::is_zero() const { return n_ == 1 && !big_ && sn_ == 0; }
bool Scalar::is_one() const { return n_ == 1 && !big_ && sn_ == 1 && sd_ == 1; }

mpq_class Scalar::rational() const {
  if (n_ != 1) throw std::domain_error("scalar is not rational: " + to_string());
  return big();
}

std::vector<mpq_class> Scalar::coefficients() const {
  if (n_ == 1) return {big()};
  return c_;
}

Scalar Scalar::lifted(int m) const {
  if (m % n_) throw std::invalid_argument("lift target is not a multiple of the conductor");
  if (m <= 2 || n_ == m) return *this;
  if (n_ == 1) {
    Scalar s;
    s.n_ = m;
    s.c_.assign(cyclotomic_polynomial(m).size() - 1, mpq_class(0));
    s.c_[0] = big();
    return s;
  }
  const int step = m / n_;
  std::vector<mpq_class> c(step * (c_.size() - 1) + 1, mpq_class(0));
  for (size_t i = 0; i < c_.size(); ++i) c[i * step] = c_[i];
  reduce_mod(c, cyclotomic_polynomial(m));
  Scalar s;
  s.n_ = m;
  s.c_ = std::move(c);
  return s;
}

Scalar Scalar::operator-() const {
  Scalar s = *this;
  if (n_ == 1 && !big_ && sn_ != INT64_MIN) {
    s.sn_ = -sn_;
    return s;
  }
  if (n_ == 1) {
    s.set_rational(-big());
    return s;
  }
  for (auto& c : s.c_) c = -c;
  return s;
}

Scalar& Scalar::operator+=(const Scalar& o) {
  if (both_small(o)) {
    if (sd_ == 1 && o.sd_ == 1) {
      set_small(static_cast<__int128>(sn_) + o.sn_, 1);
    } else {
      set_small(static_cast<__int128>(sn_) * o.sd_ + static_cast<__int128>(o.sn_) * sd_,
                static_cast<__int128>(sd_) * o.sd_);
    }
    return *this;
  }
  if (n_ == 1 && o.n_ == 1) {
    set_rational(big() + o.big());
    return *this;
  }
  const int m = std::lcm(n_, o.n_);
  Scalar a = lifted(m);
  Scalar b = o.lifted(m);
  for (size_t i = 0; i < a.c_.size(); ++i) a.c_[i] += b.c_[i];
  a.normalize();
  return *this = std::move(a);
}

Scalar& Scalar::operator-=(const Scalar& o) { return *this += -o; }

Scalar& Scalar::operator*=(const Scalar& o) {
  if (both_small(o)) {
    set_small(static_cast<__int128>(sn_) * o.sn_, static_cast<__int128>(sd_) * o.sd_);
    return *this;
  }
  if (n_ == 1 && o.n_ == 1) {
    set_rational(big() * o.big());
    return *this;
  }
  if (o.n_ == 1) {
    for (auto& c : c_) c *= o.big();
    normalize();
    return *this;
  }
  if (n_ == 1) {
    Scalar r = o;
    for (auto& c : r.c_) c *= big();
    r.normalize();
    return *this = std::move(r);
  }
  const int m = std::lcm(n_, o.n_);
  Scalar a = lifted(m);
  Scalar b = o.lifted(m);
  std::vector<mpq_class> p(a.c_.size() + b.c_.size(), mpq_class(0));
  for (size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i] == 0) continue;
    for (size_t j = 0; j < b.c_.size(); ++j) p[i + j] += a.c_[i] * b.c_[j];
  }
  reduce_mod(p, cyclotomic_polynomial(m));
  a.c_ = std::move(p);
  a.normalize();
  return *this = std::move(a);
}

void Scalar::add_product(const Scalar& a, const Scalar& b) {
  if (a.both_small(b) && n_ == 1 && !big_) {
    if (a.sd_ == 1 && b.sd_ == 1 && sd_ == 1) {
      const __int128 v = static_cast<__int128>(a.sn_) * b.sn_ + sn_;
      if (v >= INT64_MIN && v <= INT64_MAX) {
        sn_ = static_cast<int64_t>(v);
        return;
      }
    }
  }
  *this += a * b;
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw std::domain_error("division by zero");
  if (n_ == 1 && !big_) {
    Scalar s;
    s.set_small(sd_, sn_);
    return s;
  }
  if (n_ == 1) return Scalar(mpq_class(1) / big());
  Scalar s;
  s.n_ = n_;
  s.c_ = poly_inverse_mod(c_, cyclotomic_polynomial(n_));
  s.c_.resize(c_.size(), mpq_class(0));
  s.normalize();
  return s;
}

Scalar& Scalar::operator/=(const Scalar& o) { return *this *= o.inverse(); }

Scalar Scalar::conjugate() const {
  if (n_ == 1) return *this;
  Scalar r;
  for (size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    r += Scalar(c_[i]) * zeta(n_, -static_cast<long>(i));
  }
  return r;
}

bool operator==(const Scalar& a, const Scalar& b) {
  if (a.n_ == 1 && b.n_ == 1) {
    if (a.big_ != b.big_) return false;
    return a.big_ ? *a.q_ == *b.q_ : (a.sn_ == b.sn_ && a.sd_ == b.sd_);
  }
  if (a.n_ == b.n_) return a.c_ == b.c_;
  return (a - b).is_zero();
}

std::string Scalar::to_string() const {
  if (n_ == 1) return big_ ? q_->get_str() : (sd_ == 1 ? std::to_string(sn_) : std::to_string(sn_) + "/" + std::to_string(sd_));
  std::string out = "(";
  bool first = true;
  const std::string z = "zeta" + std::to_string(n_);
  for (size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    mpq_class c = c_[i];
    if (!first) {
      out += (c < 0) ? " - " : " + ";
      c = abs(c);
    } else if (c < 0 && i > 0) {
      out += "-";
      c = abs(c);
    }
    first = false;
    if (i == 0) {
      out += c.get_str();
      continue;
    }
    if (c != 1) out += c.get_str() + "*";
    out += z;
    if (i > 1) out += "^" + std::to_string(i);
  }
  return out + ")";
}

}  // namespace equislice
