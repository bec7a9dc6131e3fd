// Finite symplectic quotients V/Gamma: parabolic subgroups, leaves, reflections and SRA relations.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "equislice/linalg.hpp"

namespace equislice {

struct GroupData {
  int dim = 0;                    // dim V = 2d
  int cyclotomic_order = 1;       // entries live in Q[zeta_N]
  ExactMatrix omega;              // omega(x, y) = x^T omega y
  std::vector<ExactMatrix> elements;  // elements[0] is the identity
  std::vector<int> generators;
  std::vector<int> inverse;
  std::vector<std::vector<int>> classes;  // conjugacy classes, each sorted, ordered by first element
  std::map<std::string, int> keys;        // canonical text -> index

  int order() const { return static_cast<int>(elements.size()); }
  int index_of(const ExactMatrix& g) const;  // -1 when absent
  int product(int a, int b) const;
  int class_of(int g) const;
  // "Id", "-Id" or "g<index>".
  std::string label(int g) const;
};

// Standard form with omega(e_{2i}, e_{2i+1}) = 1.
ExactMatrix standard_symplectic_form(int dim);

// Closure of the generators by right multiplication in breadth-first order.
// Throws when a generator does not preserve omega or the order exceeds cap.
GroupData close_group(const std::vector<ExactMatrix>& generators, const ExactMatrix& omega, int cap = 2048);

struct ParabolicRecord {
  std::vector<int> subgroup;                    // Gamma_0
  std::vector<std::vector<Scalar>> fixed_basis; // V^{Gamma_0}
  std::vector<std::vector<Scalar>> perp_basis;  // omega-orthogonal complement
  std::vector<int> normalizer;                  // N(Gamma_0)
  int residual_order = 1;                       // |N(Gamma_0) / Gamma_0|
  int leaf_dim = 0;
};
// Pointwise stabilizers of all intersections of fixed spaces, ordered by decreasing leaf
// dimension, then by subgroup order and indices.
std::vector<ParabolicRecord> parabolic_subgroups(const GroupData& G);

struct SRAData {
  std::vector<int> reflections;              // rank(s - Id) = 2
  std::vector<std::vector<int>> classes;     // partition of the reflections by conjugacy
  std::vector<ExactMatrix> omega_s;          // parallel to reflections
  std::vector<int> class_index;              // parallel to reflections
};
SRAData symplectic_reflections(const GroupData& G);

struct LeafSliceSummary {
  int leaf_dim = 0;
  std::vector<std::vector<Scalar>> leaf_basis;
  std::vector<ExactMatrix> slice_group;  // Gamma_0 on the perp, in perp_basis coordinates
  bool slice_group_closed = false;
  int slice_dim = 0;
  int residual_order = 1;
  bool minus_id_in_residual = false;     // some normalizer element acts as -Id on V^{Gamma_0}
  int ell = 1;                           // 2 iff minus_id_in_residual
  int stabilizer_order = 1;              // #{lambda : lambda v in Gamma v}, computed directly
};
// Throws for v = 0 or when Stab(v) differs from the record's subgroup.
LeafSliceSummary leaf_slice_data(const GroupData& G, const ParabolicRecord& p, const std::vector<Scalar>& v);

// Coefficient a * hbar + sum_i c[i] * c_{i+1}.
struct SraCoefficient {
  Scalar hbar;
  std::vector<Scalar> c;
  bool is_zero() const;
  std::string to_string() const;
};
struct SraTerm {
  int element;  // 0 is the identity
  SraCoefficient coefficient;
};
struct SraExpression {
  std::vector<SraTerm> terms;
  std::string to_string(const GroupData& G) const;
};
// Right-hand side of [x, y] = hbar omega(x, y) + sum_s c(s) omega_s(x, y) s.
SraExpression sra_relation(const GroupData& G, const SRAData& sra, const std::vector<Scalar>& x,
                           const std::vector<Scalar>& y);

}  // namespace equislice
