// Exact scalars: rationals, or elements of a cyclotomic field Q[zeta_N].
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace equislice {

// Integer coefficients of the N-th cyclotomic polynomial, constant term first.
const std::vector<long>& cyclotomic_polynomial(int n);

class Scalar {
 public:
  Scalar() = default;
  Scalar(long v) : sn_(v) {}  // NOLINT(google-explicit-constructor)
  Scalar(int v) : sn_(v) {}   // NOLINT(google-explicit-constructor)
  explicit Scalar(mpq_class q);
  Scalar(long num, long den);

  // zeta_n^power, reduced modulo Phi_n.
  static Scalar zeta(int n, long power = 1);
  // sum_i coeffs[i] * zeta_n^i, reduced modulo Phi_n.
  static Scalar cyclotomic(int n, std::vector<mpq_class> coeffs);
  // Parses "3", "-3/4".
  static Scalar parse_rational(const std::string& text);

  bool is_zero() const;
  bool is_one() const;
  bool is_rational() const { return n_ == 1; }
  // Conductor of the field the value is stored in (1 for Q).
  int order() const { return n_; }
  mpq_class rational() const;
  // Coefficient vector of length deg(Phi_N) (length 1 for rationals).
  std::vector<mpq_class> coefficients() const;

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);
  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  friend bool operator==(const Scalar& a, const Scalar& b);
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  // this += a * b without temporaries in the rational case.
  void add_product(const Scalar& a, const Scalar& b);

  Scalar inverse() const;
  // Complex conjugate (zeta -> zeta^{-1}).
  Scalar conjugate() const;
  // Image in Q[zeta_m]; m must be a multiple of order().
  Scalar lifted(int m) const;

  // Canonical text: "3/4", or "(1 + 2*zeta6)".
  std::string to_string() const;
  // True when to_string() needs no parentheses as a factor.
  bool is_atomic() const { return n_ == 1; }

 private:
  void normalize();
  // Rational value as an mpq (materialized on demand for small values).
  mpq_class big() const;
  void set_rational(const mpq_class& q);
  void set_small(__int128 num, __int128 den);
  bool both_small(const Scalar& o) const { return n_ == 1 && o.n_ == 1 && !big_ && !o.big_; }

  // Rationals use an int64 fraction until it overflows, then q_.
  int64_t sn_ = 0;
  int64_t sd_ = 1;
  bool big_ = false;
  std::shared_ptr<const mpq_class> q_;  // set iff big_
  int n_ = 1;
  std::vector<mpq_class> c_;  // used only when n_ > 1
};

}  // namespace equislice
