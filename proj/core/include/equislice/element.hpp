// Graded contexts and truncated sparse elements of C[t^{+-1}, ...][[u, z, ...]].
#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "equislice/scalar.hpp"

namespace equislice {

inline constexpr int kMaxVars = 32;

// Dense exponent vector; entries beyond the context's variable count stay 0.
struct Mono {
  std::array<int8_t, kMaxVars> e{};

  int8_t operator[](int i) const { return e[i]; }
  int8_t& operator[](int i) { return e[i]; }
  friend auto operator<=>(const Mono&, const Mono&) = default;
  friend bool operator==(const Mono&, const Mono&) = default;
};

Mono mono_mul(const Mono& a, const Mono& b);
// True if b divides a (componentwise a >= b on every slot where b > 0).
bool mono_divides(const Mono& b, const Mono& a);

struct GradedContext {
  std::vector<std::string> names;
  std::vector<int> weights;
  std::vector<bool> invertible;
  std::vector<bool> filtration;
  int order = 6;

  int size() const { return static_cast<int>(names.size()); }
  int index(const std::string& name) const;  // -1 when absent
  int require(const std::string& name) const;
  int j_order(const Mono& m) const;
  int weight(const Mono& m) const;
  // Total degree in the non-invertible variables.
  int poly_degree(const Mono& m) const;
  bool same_shape(const GradedContext& o) const;
};

using ContextPtr = std::shared_ptr<const GradedContext>;

// Validates and freezes a context.
ContextPtr make_context(std::vector<std::string> names, std::vector<int> weights,
                        std::vector<bool> invertible, std::vector<bool> filtration, int order);
ContextPtr with_order(const ContextPtr& ctx, int order);
ContextPtr with_weights(const ContextPtr& ctx, std::vector<int> weights);

struct Term {
  Mono mono;
  Scalar coef;
};

class TruncatedElement {
 public:
  TruncatedElement() = default;
  explicit TruncatedElement(ContextPtr ctx) : ctx_(std::move(ctx)) {}

  static TruncatedElement constant(const ContextPtr& ctx, const Scalar& c);
  static TruncatedElement variable(const ContextPtr& ctx, int index, int power = 1);
  static TruncatedElement variable(const ContextPtr& ctx, const std::string& name, int power = 1);
  static TruncatedElement monomial(const ContextPtr& ctx, const Mono& m, const Scalar& c);
  // Builds from unsorted terms; merges duplicates, drops zeros and truncates.
  static TruncatedElement from_terms(const ContextPtr& ctx, std::vector<Term> terms);

  const ContextPtr& context() const { return ctx_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  size_t size() const { return terms_.size(); }
  Scalar coefficient(const Mono& m) const;
  // Constant term.
  Scalar constant_term() const { return coefficient(Mono{}); }

  // Smallest J-order of a term; INT32_MAX for zero.
  int valuation() const;
  TruncatedElement truncated(int order) const;
  // Terms of J-order exactly d.
  TruncatedElement j_component(int d) const;
  // Same element viewed in a compatible context (possibly different order).
  TruncatedElement in_context(const ContextPtr& ctx) const;

  std::optional<int> weight() const;  // set iff nonzero and homogeneous
  bool is_homogeneous() const;
  TruncatedElement weight_component(int w) const;

  TruncatedElement operator-() const;
  TruncatedElement& operator+=(const TruncatedElement& o);
  TruncatedElement& operator-=(const TruncatedElement& o);
  TruncatedElement& operator*=(const TruncatedElement& o);
  TruncatedElement& operator*=(const Scalar& c);
  friend TruncatedElement operator+(TruncatedElement a, const TruncatedElement& b) { return a += b; }
  friend TruncatedElement operator-(TruncatedElement a, const TruncatedElement& b) { return a -= b; }
  friend TruncatedElement operator*(const TruncatedElement& a, const TruncatedElement& b);
  friend TruncatedElement mul_truncated(const TruncatedElement& a, const TruncatedElement& b, int precision);
  friend TruncatedElement operator*(TruncatedElement a, const Scalar& c) { return a *= c; }
  friend TruncatedElement operator*(const Scalar& c, TruncatedElement a) { return a *= c; }
  friend bool operator==(const TruncatedElement& a, const TruncatedElement& b);
  friend bool operator!=(const TruncatedElement& a, const TruncatedElement& b) { return !(a == b); }

  TruncatedElement pow(int e) const;
  TruncatedElement derivative(int var) const;
  // Primitive with zero constant term in var.
  TruncatedElement antiderivative(int var) const;
  // Multiplies by a monomial (exponents may be negative on invertible slots).
  TruncatedElement shifted(const Mono& m) const;

  std::string to_string() const;

 private:
  void check_same(const TruncatedElement& o) const;

  ContextPtr ctx_;
  std::vector<Term> terms_;  // sorted by mono, nonzero coefficients, J-order < order
};

// Product modulo J^precision.
TruncatedElement mul_truncated(const TruncatedElement& a, const TruncatedElement& b, int precision);

enum class ArithOp { add, sub, mul };
TruncatedElement arith(const TruncatedElement& a, const TruncatedElement& b, ArithOp op);

// Inverse of a unit: J-order-0 part must be c * (monomial in invertible variables).
TruncatedElement invert_unit(const TruncatedElement& a);

// f(x_1..x_n) with x_i replaced by images[i]; images live in `target`.
// Image entries may be empty (zero-context) meaning "x_i itself".
TruncatedElement substitute(const TruncatedElement& f, const std::vector<TruncatedElement>& images,
                            const ContextPtr& target);

// Canonical text for a monomial, "1" for the empty one.
std::string mono_to_string(const GradedContext& ctx, const Mono& m);

// Parses canonical element text ("2*e*f + 1/2*h^2", "t^-1*u", "(1+u)^-1").
TruncatedElement parse_element(const ContextPtr& ctx, const std::string& text);

}  // namespace equislice
