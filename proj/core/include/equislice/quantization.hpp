// Graded hbar-algebras by PBW rewriting: families D(n,k), Weyl(n,k), U_hbar(g), and slice extraction.
#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "equislice/poisson.hpp"

namespace equislice {

// hbar^h times the ordered monomial prod_i g_i^{e_i}.
struct QMono {
  int hbar = 0;
  std::vector<int> e;
  friend auto operator<=>(const QMono&, const QMono&) = default;
};
using QElement = std::map<QMono, Scalar>;

struct RewriteBudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Step budget from EQUISLICE_MAX_STEPS, or the default.
long default_step_budget();

class HbarPresentation {
 public:
  HbarPresentation() = default;
  // Generators in PBW order: normal monomials list them in this order.
  HbarPresentation(std::vector<std::string> names, std::vector<int> weights, std::vector<bool> invertible,
                   int hbar_weight, int order);

  int size() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<int>& weights() const { return weights_; }
  const std::vector<bool>& invertible() const { return invertible_; }
  int hbar_weight() const { return hbar_weight_; }
  int order() const { return order_; }
  int index(const std::string& name) const;  // -1 when absent
  // Same algebra truncated at another hbar order.
  HbarPresentation with_order(int order) const;

  // Rule g_j g_i -> g_i g_j + c for i < j, with c = [g_j, g_i] in normal form.
  void set_commutator(int j, int i, const QElement& c);
  const QElement& commutator_rule(int j, int i) const;

  QElement zero() const { return {}; }
  QElement one() const;
  QElement hbar(int power = 1) const;
  QElement gen(int i, int power = 1) const;
  QElement constant(const Scalar& c) const;

  QElement add(const QElement& a, const QElement& b) const;
  QElement sub(const QElement& a, const QElement& b) const;
  QElement scale(const QElement& a, const Scalar& c) const;
  QElement mul(const QElement& a, const QElement& b) const;
  QElement commutator(const QElement& a, const QElement& b) const;
  QElement pow(const QElement& a, int e) const;

  // Parses words such as "2*u*t^2 - 1/2*hbar*h^2 + e*f" (products taken left to right).
  QElement parse(const std::string& text) const;
  std::string to_string(const QElement& a) const;
  // Weight of hbar^h prod g^e.
  int weight(const QMono& m) const;
  std::optional<int> weight(const QElement& a) const;  // set iff nonzero and homogeneous

  long steps() const { return steps_; }
  void set_step_budget(long budget) { budget_ = budget; }
  void reset_steps() { steps_ = 0; }

  std::string name;

 private:
  QElement truncate(QElement a) const;
  // Workers compute modulo hbar^prec; every rule is divisible by hbar, so recursion through a
  // commutator lowers prec and terminates.
  QElement mul_p(const QElement& a, const QElement& b, int prec) const;
  QElement mul_mono(const QMono& a, const QMono& b, int prec) const;
  QElement mono_times_gen(const QMono& m, int j, int sign, int prec) const;
  QElement comm_suffix(const QMono& r, int j, int sign, int prec) const;
  QElement comm_gen_gen(int h, int hs, int j, int sign, int prec) const;
  void count_step() const;

  std::vector<std::string> names_;
  std::vector<int> weights_;
  std::vector<bool> invertible_;
  int hbar_weight_ = 1;
  int order_ = 3;
  std::map<std::pair<int, int>, QElement> rules_;
  mutable std::map<std::tuple<QMono, QMono, int>, QElement> mul_cache_;
  mutable std::map<std::tuple<int, int, int, int, int>, QElement> comm_cache_;
  mutable long steps_ = 0;
  long budget_ = 0;
};

struct StructureConstants {
  std::vector<std::string> names;
  // brackets[{i,j}] = [g_i, g_j] as sparse linear combination (index -> coefficient), i < j.
  std::map<std::pair<int, int>, std::vector<std::pair<int, Scalar>>> brackets;
};
StructureConstants sl2_structure_constants();

// D(n,k): t (invertible), u, z1..z_{2n-2}; [t,u] = hbar t^{1-k}, [z_{2i-1}, z_{2i}] = hbar.
HbarPresentation build_d(int n, int k, int order = 3);
// Weyl(n,k): z1..z_{2n-2} with [z_{2i-1}, z_{2i}] = hbar.
HbarPresentation build_weyl(int n, int k, int order = 3);
// U_hbar(g) with all generators of weight 1 and |hbar| = 1; throws on a Jacobi failure.
// `inverted` lists generators to localize at (moved first in the order).
HbarPresentation build_enveloping(const StructureConstants& sc, int order = 3,
                                  const std::vector<std::string>& inverted = {});
// Tensor product: generators of a then b, commuting across.
HbarPresentation tensor(const HbarPresentation& a, const HbarPresentation& b);

// Associativity of the rewriting on generator triples: (g_l g_j) g_i = g_l (g_j g_i).
struct OverlapFailure {
  int l, j, i;
  QElement residue;
};
std::vector<OverlapFailure> overlap_check(const HbarPresentation& A);

struct CentralityResult {
  bool pass = true;
  std::vector<std::pair<std::string, QElement>> residues;  // probe name -> commutator
};
// Commutators of the element with every generator (and inverse) and with every PBW monomial
// in the non-invertible generators up to degree_cap.
CentralityResult centrality_check(const HbarPresentation& A, const QElement& element, int degree_cap);

struct Sl2LocalizationReport {
  bool pass = true;
  QElement xy_residue;  // [x,y] - hbar x
  QElement cx, cy;      // [C,x], [C,y]
  int weight_x = 0, weight_y = 0, weight_c = 0, weight_hbar = 0;
};
Sl2LocalizationReport verify_sl2_localization(int order);

struct QuantSliceOptions {
  int weight_min = 0, weight_max = 0;
  int degree_cap = 3;      // PBW degree in non-invertible generators
  int laurent_bound = 6;   // |exponent| bound on invertible generators
};
struct QuantSliceBlock {
  int weight;
  std::vector<QElement> basis;
};
struct QuantSliceResult {
  bool lifts_ok = true;
  std::vector<std::string> lift_failures;
  std::vector<QuantSliceBlock> blocks;
  std::vector<QElement> generators;  // kernel elements whose symbols generate modulo products
  bool product_closed = true;
};
// Joint kernel of ad(t)/hbar and ad(z_i)/hbar modulo hbar^N within the weight window.
QuantSliceResult quantized_slice(const HbarPresentation& A, const QElement& t_lift,
                                 const std::vector<QElement>& z_lifts, const QuantSliceOptions& opt);
// True if ad(t) and ad(z_i) of a vanish modulo hbar^{N+1}.
bool in_joint_kernel(const HbarPresentation& A, const QElement& a, const QElement& t_lift,
                     const std::vector<QElement>& z_lifts);
// exp(hbar ad(w)) applied to x, modulo hbar^N.
QElement conjugate_by_exp(const HbarPresentation& A, const QElement& w, const QElement& x);

struct AxiomFailure {
  std::string a, b;
  TruncatedElement expected, found;
};
struct AxiomReport {
  bool pass = true;
  std::vector<std::string> shape_errors;
  std::vector<AxiomFailure> failures;
};
// hbar^{-1}[g_i, g_j] mod hbar against P's bracket table, generators matched by name.
AxiomReport quantization_axiom_check(const HbarPresentation& A, const PoissonPresentation& P);

// Commutative symbol (hbar^0 part) of a in the context of P (generators matched by name).
TruncatedElement symbol(const HbarPresentation& A, const QElement& a, const ContextPtr& ctx);

}  // namespace equislice
