// Equivariant Darboux normalization of graded Poisson presentations near a free C^x-orbit.
#pragma once

#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "equislice/poisson.hpp"

namespace equislice {

// Coordinate change y_i = images[i](x), with old variables recovered as x_i = inverse[i](y).
// Both sides live in the same context (new coordinates reuse the old names).
struct CoordinateChange {
  std::vector<TruncatedElement> images;
  std::vector<TruncatedElement> inverse;
  bool is_hamiltonian_flow = false;
  std::optional<TruncatedElement> generator;  // H when the change is a flow (or composite of flows)
  int iterations = 0;

  bool is_identity() const;
};

CoordinateChange identity_change(const ContextPtr& ctx);
// Builds a change from its forward images, computing the inverse to the context order.
CoordinateChange make_change(std::vector<TruncatedElement> images);
// Inverse of a near-identity coordinate map: the linear part in the filtration variables
// must be invertible with unit pivots and each invertible variable must map to a unit
// multiple of itself.
std::vector<TruncatedElement> invert_coordinates(const std::vector<TruncatedElement>& images);
// first then second: y = second(first(x)).
CoordinateChange compose(const CoordinateChange& first, const CoordinateChange& second);

// Presentation of the same Poisson algebra in the new coordinates.
PoissonPresentation transform(const PoissonPresentation& P, const CoordinateChange& c);

struct MorphismViolation {
  int i, j;
  TruncatedElement residue;
};
// Checks {y_i, y_j}_P = Q_ij(y) for all pairs, modulo J^precision.
std::vector<MorphismViolation> check_poisson_morphism(const PoissonPresentation& P,
                                                      const PoissonPresentation& Q,
                                                      const CoordinateChange& c, int precision);

// Variables t (weight ell, invertible), u, z1..z_{2n-2}; {t,u} = t^{1-k}, {z_{2i-1}, z_{2i}} = 1.
// |u| = |z_even| = 0 and |z_odd| = k*ell. Filtration: everything except t.
PoissonPresentation standard_presentation(int n, int k, int ell, int order = 6);
// Appends the slice variables and table of S to P (product structure).
PoissonPresentation product_presentation(const PoissonPresentation& P, const PoissonPresentation& S);

struct LeafShape {
  int t = -1;
  int ell = 1;
  int k = 0;
};
// Finds the unique invertible variable and the integer k with bracket degree -k*ell.
LeafShape leaf_shape(const PoissonPresentation& P);

// exp of the Hamiltonian field of H applied to f, summed until the terms vanish.
TruncatedElement hamiltonian_flow(const PoissonPresentation& P, const TruncatedElement& H,
                                  const TruncatedElement& f, int max_terms);

// Composite of Hamiltonian flows exp(xi_H) with H = t^k * int (f - 1) du, f = tau / t.
// The returned change has images[t] = tau and preserves the bracket table.
CoordinateChange straighten_t(const PoissonPresentation& P, const TruncatedElement& tau, int u_index);

// Corrects u so that {t, u} = t^{1-k}; every other variable must commute with t.
CoordinateChange enforce_tu(const PoissonPresentation& P, int u_index);

// Removes the couplings {u, z} by the two-phase antiderivative sweep over the pairs.
CoordinateChange decouple_u(const PoissonPresentation& P, int u_index,
                            const std::vector<std::pair<int, int>>& pairs);
// Pairs (i, j) with {x_i, x_j} = 1 modulo J^precision, chosen greedily in variable order.
std::vector<std::pair<int, int>> detect_pairs(const PoissonPresentation& P, const std::vector<int>& candidates,
                                              int precision);

struct SliceOptions {
  int degree_cap = 4;
  MonomialBounds bounds{};
};
struct SliceResult {
  std::vector<TruncatedElement> generators;  // in P's algebra
  std::vector<int> natural_weights;
  PoissonPresentation slice;                  // bracket t^k {g_a, g_b} in generator variables
  std::vector<std::string> unexpressed;       // entries not expressible in the generators
};
// Weight-zero centralizer of t and the given leaf variables, with minimal generators chosen
// by polynomial degree modulo decomposables.
SliceResult extract_slice(const PoissonPresentation& P, const std::vector<int>& leaf_vars,
                          const SliceOptions& opt = {});

struct StageRecord {
  std::string name;
  int iterations = 0;
  bool identity = true;
};

struct DecompositionCertificate {
  PoissonPresentation base;
  PoissonPresentation result;  // table in the final coordinates, truncated at order
  std::vector<TruncatedElement> coordinates;  // final coordinates in the base variables
  std::vector<StageRecord> stages;
  int t = -1, u = -1;
  std::vector<std::pair<int, int>> z_pairs;
  std::vector<int> slice_vars;
  SliceResult slice;
  std::vector<TruncatedElement> xi;  // xi(g_a) = t^k {u, g_a} on slice generators
  int order = 0;
  int ell = 1;
  int k = 0;
  bool leaf_block_standard = false;
  bool couplings_vanish = false;
  bool product = false;
  std::string form = "T-form";
};

struct NormalizeOptions {
  int extra_order = 2;  // working precision above the target order
  int degree_cap = 0;   // slice generator degree cap; 0 means order - 1
};
DecompositionCertificate normalize_full(const PoissonPresentation& P, int order,
                                        const NormalizeOptions& opt = {});

// Random weight-homogeneous unipotent change: t -> t(1 + J), x -> x + J^2 on the rest.
CoordinateChange random_scramble(const ContextPtr& ctx, int t_index, std::mt19937_64& rng,
                                 int terms = 3, int max_j_order = 3);

}  // namespace equislice
