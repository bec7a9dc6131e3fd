// Poisson presentations: generators, a skew bracket table and an optional relation ideal.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "equislice/element.hpp"

namespace equislice {

struct Relation {
  TruncatedElement poly;  // monic in `lead`
  Mono lead;
};

class PoissonPresentation {
 public:
  PoissonPresentation() = default;
  explicit PoissonPresentation(ContextPtr ctx);

  const ContextPtr& context() const { return ctx_; }
  int size() const { return ctx_->size(); }
  const TruncatedElement& entry(int i, int j) const { return table_[i][j]; }
  // Sets {x_i, x_j} = v and {x_j, x_i} = -v.
  void set(int i, int j, const TruncatedElement& v);
  void set(const std::string& a, const std::string& b, const std::string& expr);

  void add_relation(const TruncatedElement& r);
  const std::vector<Relation>& relations() const { return relations_; }
  void clear_relations() { relations_.clear(); }
  TruncatedElement reduce(const TruncatedElement& f) const;
  // True if no relation leading monomial divides m.
  bool is_standard(const Mono& m) const;

  std::optional<int> declared_degree;
  std::string name;

  TruncatedElement var(int i) const { return TruncatedElement::variable(ctx_, i); }
  TruncatedElement var(const std::string& n) const { return TruncatedElement::variable(ctx_, n); }
  TruncatedElement parse(const std::string& text) const { return parse_element(ctx_, text); }
  TruncatedElement zero() const { return TruncatedElement(ctx_); }
  TruncatedElement one() const { return TruncatedElement::constant(ctx_, Scalar(1)); }

  // Same presentation re-truncated at another order.
  PoissonPresentation with_order(int order) const;

 private:
  ContextPtr ctx_;
  std::vector<std::vector<TruncatedElement>> table_;
  std::vector<Relation> relations_;
};

// Leading monomial of a relation: lowest J-order first (local order) when the
// context has filtration variables, otherwise highest degree; ties by degree then lex.
Mono relation_lead(const TruncatedElement& r);

struct VectorFieldRep {
  std::vector<TruncatedElement> images;  // generator index -> image
  TruncatedElement apply(const TruncatedElement& f) const;
};

// {f, g} by the Leibniz extension of the table, reduced modulo the relations.
TruncatedElement bracket(const PoissonPresentation& P, const TruncatedElement& f,
                         const TruncatedElement& g);
// Same without relation reduction.
TruncatedElement bracket_ambient(const PoissonPresentation& P, const TruncatedElement& f,
                                 const TruncatedElement& g);

// Precision at which identities involving one bracket of truncated data are certified:
// order - 1 when the context has filtration variables, otherwise the full order.
int bracket_precision(const ContextPtr& ctx);
bool vanishes_mod(const TruncatedElement& f, int precision);

struct JacobiViolation {
  int i, j, k;
  TruncatedElement residue;
};
struct JacobiReport {
  bool pass = true;
  int precision = 0;
  std::vector<JacobiViolation> violations;
};
JacobiReport check_jacobi(const PoissonPresentation& P, std::optional<int> precision = std::nullopt);

struct RelationViolation {
  int relation, generator;
  TruncatedElement residue;
};
// Checks {r, x_i} = 0 modulo the ideal for every relation r and generator x_i.
std::vector<RelationViolation> check_relation_ideal(const PoissonPresentation& P);

VectorFieldRep hamiltonian_field(const PoissonPresentation& P, const TruncatedElement& f);
// Euler field of the context weights.
VectorFieldRep euler_field(const PoissonPresentation& P);

struct LieDerivativeViolation {
  int i, j;
  TruncatedElement residue;
};
struct LieDerivativeReport {
  bool pass = true;
  int precision = 0;
  std::vector<LieDerivativeViolation> violations;
};
// Checks xi{x_i,x_j} - {xi x_i, x_j} - {x_i, xi x_j} = k {x_i, x_j} for all pairs.
LieDerivativeReport lie_derivative_check(const PoissonPresentation& P, const VectorFieldRep& xi, int k,
                                         std::optional<int> precision = std::nullopt);

struct HomogeneityResult {
  std::optional<int> degree;
  std::vector<std::string> offending;  // empty when homogeneous
};
HomogeneityResult homogeneity_degree(const PoissonPresentation& P, const std::vector<int>& weights);

std::vector<std::vector<int>> grading_search(const PoissonPresentation& P, int target_degree,
                                             int weight_bound);

struct MonomialBounds {
  int degree_cap = 8;      // bound on the degree in non-invertible, non-filtration variables
  int laurent_bound = 12;  // bound on |exponent| of free invertible variables
};
// Standard monomials of weight w (finite thanks to J-truncation and the bounds).
std::vector<Mono> monomials_of_weight(const PoissonPresentation& P, int w, const MonomialBounds& b);

struct CenterBlock {
  int weight;
  std::vector<TruncatedElement> basis;
};
std::vector<CenterBlock> poisson_center_basis(const PoissonPresentation& P, int weight_min,
                                              int weight_max, const MonomialBounds& b = {},
                                              std::optional<int> precision = std::nullopt);

struct GradedDimTable {
  std::map<int, int> dims;
  int bracket_degree = 0;
  std::optional<int> stable_from;  // first w with dims[w] = dims[w+1] = 0
};
GradedDimTable hp0_graded(const PoissonPresentation& P, int degree_cap);

// Kernel of the linear map f -> ({f, g_1}, ..., {f, g_r}) on the span of `monos`,
// with equations imposed modulo J^precision. Basis vectors are normalized so that
// their first term in display order has coefficient 1.
std::vector<TruncatedElement> joint_centralizer(const PoissonPresentation& P,
                                                const std::vector<Mono>& monos,
                                                const std::vector<TruncatedElement>& gens,
                                                int precision);

}  // namespace equislice
