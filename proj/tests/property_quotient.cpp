#include "doctest.h"

#include <string>

#include "equislice/quotient.hpp"
#include "random_gen.hpp"

using namespace equislice;
using namespace equislice::testgen;

namespace {

ExactMatrix diag(const std::vector<Scalar>& d) {
  ExactMatrix m(static_cast<int>(d.size()), static_cast<int>(d.size()));
  for (size_t i = 0; i < d.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = d[i];
  return m;
}

struct Sample {
  std::string name;
  std::vector<ExactMatrix> gens;
  int dim;
};

std::vector<Sample> samples() {
  std::vector<Sample> out;
  for (int n = 2; n <= 6; ++n)
    out.push_back({"Z/" + std::to_string(n), {diag({Scalar::zeta(n), Scalar::zeta(n).inverse()})}, 2});
  Scalar i = Scalar::zeta(4);
  out.push_back({"Q8", {diag({i, -i}), ExactMatrix(std::vector<std::vector<Scalar>>{{0, 1}, {-1, 0}})}, 2});
  Scalar z = Scalar::zeta(6);
  out.push_back({"BD3", {diag({z, z.inverse()}), ExactMatrix(std::vector<std::vector<Scalar>>{{0, i}, {i, 0}}).lifted(12)}, 2});
  out.push_back({"klein4", {diag({-1, -1, 1, 1}), diag({1, 1, -1, -1})}, 4});
  Scalar w = Scalar::zeta(3);
  out.push_back({"Z2xZ3", {diag({-1, -1, 1, 1}), diag({1, 1, w, w.inverse()})}, 4});
  return out;
}

// Symplectic transvection x -> x + c omega(v, x) v.
ExactMatrix transvection(const ExactMatrix& omega, const std::vector<Scalar>& v, const Scalar& c) {
  const int d = omega.rows();
  ExactMatrix vt(1, d), col(d, 1);
  for (int k = 0; k < d; ++k) {
    vt(0, k) = v[k];
    col(k, 0) = v[k];
  }
  ExactMatrix m = col * (vt * omega);
  ExactMatrix s(d, d);
  for (int r = 0; r < d; ++r) s(r, r) = c;
  return ExactMatrix::identity(d) + m * s;
}

ExactMatrix random_symplectic(std::mt19937& g, const ExactMatrix& omega) {
  ExactMatrix out = ExactMatrix::identity(omega.rows());
  for (int k = 0; k < 3; ++k) {
    std::vector<Scalar> v(omega.rows());
    for (auto& x : v) x = Scalar(uniform(g, -2, 2));
    out = out * transvection(omega, v, rational(g, 2));
  }
  return out;
}

ExactMatrix basis_matrix(const std::vector<std::vector<Scalar>>& basis, int dim) {
  return ExactMatrix::from_columns(dim, basis);
}

}  // namespace

TEST_CASE("parabolic counts are conjugation invariant") {
  auto g = rng_for(41);
  for (auto& s : samples()) {
    ExactMatrix omega = standard_symplectic_form(s.dim);
    GroupData G = close_group(s.gens, omega);
    for (int trial = 0; trial < 2; ++trial) {
      ExactMatrix c = random_symplectic(g, omega);
      REQUIRE(c.transpose() * omega * c == omega);
      ExactMatrix ci = *inverse(c);
      std::vector<ExactMatrix> conj;
      for (auto& x : s.gens) conj.push_back(ci * x.lifted(G.cyclotomic_order) * c);
      GroupData H = close_group(conj, omega);
      CHECK(H.order() == G.order());
      CHECK(parabolic_subgroups(H).size() == parabolic_subgroups(G).size());
      CHECK(symplectic_reflections(H).reflections.size() == symplectic_reflections(G).reflections.size());
    }
  }
}

TEST_CASE("omega is nondegenerate on fixed spaces and their complements") {
  for (auto& s : samples()) {
    GroupData G = close_group(s.gens, standard_symplectic_form(s.dim));
    for (auto& p : parabolic_subgroups(G)) {
      CHECK(static_cast<int>(p.fixed_basis.size()) == p.leaf_dim);
      CHECK(p.fixed_basis.size() + p.perp_basis.size() == static_cast<size_t>(s.dim));
      for (auto* basis : {&p.fixed_basis, &p.perp_basis}) {
        if (basis->empty()) continue;
        ExactMatrix B = basis_matrix(*basis, s.dim);
        CHECK(exact_rank(B.transpose() * G.omega * B) == static_cast<int>(basis->size()));
      }
      CHECK(G.order() % static_cast<int>(p.subgroup.size()) == 0);
      CHECK(p.residual_order * static_cast<int>(p.subgroup.size()) == static_cast<int>(p.normalizer.size()));
    }
  }
}

TEST_CASE("reflection data is consistent") {
  for (auto& s : samples()) {
    GroupData G = close_group(s.gens, standard_symplectic_form(s.dim));
    SRAData r = symplectic_reflections(G);
    int total = 0;
    for (size_t a = 0; a < r.reflections.size(); ++a) {
      total += exact_rank(G.elements[r.reflections[a]] - ExactMatrix::identity(s.dim));
      const ExactMatrix& w = r.omega_s[a];
      CHECK(w.transpose() == ExactMatrix(s.dim, s.dim) - w);
      CHECK(w + (G.omega - w) == G.omega);
      CHECK(exact_rank(w) == 2);
    }
    CHECK(total == 2 * static_cast<int>(r.reflections.size()));
    size_t in_classes = 0;
    for (auto& c : r.classes) in_classes += c.size();
    CHECK(in_classes == r.reflections.size());
  }
}

TEST_CASE("slice groups are closed and leaf data is consistent") {
  auto g = rng_for(43);
  for (auto& s : samples()) {
    GroupData G = close_group(s.gens, standard_symplectic_form(s.dim));
    for (auto& p : parabolic_subgroups(G)) {
      if (p.fixed_basis.empty()) continue;
      // a point of the fixed space that no larger subgroup fixes
      for (int trial = 0; trial < 3; ++trial) {
        std::vector<Scalar> v(s.dim, Scalar(0));
        for (auto& b : p.fixed_basis) {
          Scalar c(uniform(g, 1, 7));
          for (int k = 0; k < s.dim; ++k) v[k] += c * b[k];
        }
        try {
          LeafSliceSummary L = leaf_slice_data(G, p, v);
          CHECK(L.slice_group_closed);
          CHECK(L.leaf_dim == p.leaf_dim);
          CHECK(L.slice_dim == s.dim - p.leaf_dim);
          CHECK(L.ell == (L.minus_id_in_residual ? 2 : 1));
          CHECK(L.stabilizer_order >= 1);
        } catch (const std::invalid_argument&) {
          // v landed on a smaller stratum
        }
      }
    }
  }
}

TEST_CASE("sra relations are antisymmetric") {
  auto g = rng_for(44);
  for (auto& s : samples()) {
    GroupData G = close_group(s.gens, standard_symplectic_form(s.dim));
    SRAData r = symplectic_reflections(G);
    for (int trial = 0; trial < 6; ++trial) {
      int a = uniform(g, 0, s.dim - 1), b = uniform(g, 0, s.dim - 1);
      std::vector<Scalar> x(s.dim, Scalar(0)), y(s.dim, Scalar(0));
      x[a] = 1;
      y[b] = 1;
      SraExpression xy = sra_relation(G, r, x, y), yx = sra_relation(G, r, y, x);
      REQUIRE(xy.terms.size() == yx.terms.size());
      for (size_t k = 0; k < xy.terms.size(); ++k) {
        CHECK(xy.terms[k].element == yx.terms[k].element);
        CHECK(xy.terms[k].coefficient.hbar == -yx.terms[k].coefficient.hbar);
        for (size_t c = 0; c < xy.terms[k].coefficient.c.size(); ++c)
          CHECK(xy.terms[k].coefficient.c[c] == -yx.terms[k].coefficient.c[c]);
      }
    }
  }
}
