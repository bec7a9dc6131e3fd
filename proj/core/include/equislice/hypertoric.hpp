// Hypertoric cones T*A^n //// T^m: leaves, slices and the affine-chart product decomposition.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "equislice/intmatrix.hpp"
#include "equislice/poisson.hpp"

namespace equislice {

// Row j of B is the character of T^m on x_j (y_j has the opposite character).
struct TorusActionMatrix {
  IntMatrix B;

  int n() const { return B.rows(); }
  int m() const { return B.cols(); }
  // Throws unless rank B = m.
  void validate() const;
};

struct UnimodularityResult {
  bool unimodular = true;
  std::optional<long> witness;        // offending minor
  std::vector<int> witness_rows;      // its row subset
};
UnimodularityResult check_unimodular(const TorusActionMatrix& A);

// Coordinates x1..xn, y1..yn of weight 1 with {x_i, y_i} = 1. Variables whose index is
// listed in `inverted` (0..2n-1) are made invertible.
PoissonPresentation cotangent_presentation(int n, const std::vector<int>& inverted = {});
// mu_i = sum_j b_{ji} x_j y_j in cotangent_presentation(n).
std::vector<TruncatedElement> moment_map(const TorusActionMatrix& A, const ContextPtr& ctx);

struct LeafDescriptor {
  std::vector<int> F;          // 0-based coordinates where the parabolic subtorus acts nontrivially
  IntMatrix subtorus_lattice;  // rows span Lie of the parabolic subtorus inside Z^m (HNF)
  int leaf_dim = 0;
  bool is_vertex = false;

  std::vector<int> complement(int n) const;
};
// One leaf per coloop-free flat, sorted by decreasing dimension then by F.
std::vector<LeafDescriptor> enumerate_leaves(const TorusActionMatrix& A);
// Parabolic data for the flat F; throws when F is not the coordinate set of a leaf.
LeafDescriptor leaf_for_flat(const TorusActionMatrix& A, const std::vector<int>& F);

// Weights of the parabolic subtorus on the coordinates in F (|F| x rank).
IntMatrix slice_matrix(const TorusActionMatrix& A, const std::vector<int>& F);

// Which of x_i, y_i are nonzero at the base point, per coordinate.
struct NonvanishingData {
  std::vector<bool> x, y;
  static NonvanishingData generic(int n);
  // Parses "x1,y3" (1-based names); coordinates not listed are zero.
  static NonvanishingData parse(int n, const std::string& text);
};

struct DecompositionReport {
  LeafDescriptor leaf;
  std::vector<int> G;                 // 0-based, |G| = dim T
  std::vector<bool> swapped;          // per G entry: y_j plays the role of x_j
  std::vector<int> rest;              // F^c \ G
  std::vector<std::vector<long>> r;   // r[i][q] for rest[i], G[q]
  std::vector<int> weight_x, weight_y;
  IntMatrix dual;                     // m x |G| with b'_G * dual = Id (Lie of T')
  IntMatrix slice;                    // slice_matrix(B, F)
  std::vector<std::string> hyperplanes;
  int ell = 1;                        // C^x stabilizer order of the base point (0 if infinite)
  bool twisted = false;               // ell == 2: the twisted chart is not constructed
};
DecompositionReport decompose_at(const TorusActionMatrix& A, const LeafDescriptor& leaf,
                                 const NonvanishingData& nonzero,
                                 const std::optional<std::vector<int>>& G_override = std::nullopt);

struct HypertoricCheck {
  std::string what;
  TruncatedElement residue;
};
struct HypertoricVerification {
  bool pass = true;
  std::vector<HypertoricCheck> failures;
};
// Symbolic check of the report: invariance and Poisson relations of the leaf coordinates
// x'_i, y'_i, commutation with the slice coordinates, and unique elimination of y_G
// from the moment map equations.
HypertoricVerification verify_decomposition(const TorusActionMatrix& A, const DecompositionReport& rep,
                                            int order);

}  // namespace equislice
