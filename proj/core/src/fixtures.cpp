#include "equislice/fixtures.hpp"

#include <string>

namespace equislice {

PoissonPresentation sl2_presentation(int order) {
  PoissonPresentation P(make_context({"e", "f", "h"}, {1, 1, 1}, {false, false, false}, {false, false, false}, order));
  P.set("h", "e", "2*e");
  P.set("h", "f", "-2*f");
  P.set("e", "f", "h");
  P.declared_degree = -1;
  P.name = "sl2";
  return P;
}

namespace {

void set_kleinian(PoissonPresentation& P, int n) {
  P.set("x", "y", std::to_string(n) + "*z^" + std::to_string(n - 1));
  P.set("z", "x", "x");
  P.set("y", "z", "y");
  P.declared_degree = -2;
}

}  // namespace

PoissonPresentation kleinian_presentation(int n, int order) {
  PoissonPresentation P(make_context({"x", "y", "z"}, {n, n, 2}, {false, false, false}, {false, false, false}, order));
  set_kleinian(P, n);
  P.add_relation(P.parse("x*y+z^" + std::to_string(n)));
  P.name = "kleinian" + std::to_string(n);
  return P;
}

PoissonPresentation kleinian_slice(int n, int order) {
  PoissonPresentation P(make_context({"x", "y", "z"}, {n, n, 2}, {false, false, false}, {true, true, true}, order));
  set_kleinian(P, n);
  P.name = "kleinian-slice" + std::to_string(n);
  return P;
}

PoissonPresentation counterex1_presentation(int order) {
  PoissonPresentation P(make_context({"t", "u", "z"}, {1, 0, 0}, {true, false, false}, {false, true, true}, order));
  P.set("u", "t", "t");
  P.set("u", "z", "1");
  P.declared_degree = 0;
  P.name = "counterex1";
  return P;
}

PoissonPresentation counterex2_presentation(int order) {
  PoissonPresentation P(make_context({"t", "u", "x", "y", "z"}, {1, 0, 0, 0, 0}, {true, false, false, false, false},
                                     {false, true, true, true, true}, order));
  P.set("u", "t", "t");
  P.set("u", "x", "x");
  P.set("u", "y", "y");
  P.set("u", "z", "z");
  P.set("y", "z", "3*x^2");
  P.set("z", "x", "3*y^2");
  P.set("x", "y", "3*z^2");
  P.add_relation(P.parse("x^3+y^3+z^3"));
  P.declared_degree = 0;
  P.name = "counterex2";
  return P;
}

PoissonPresentation cyclic_presentation(int order) {
  PoissonPresentation P(make_context({"x", "y", "z"}, {0, 0, 0}, {false, false, false}, {false, false, false}, order));
  P.set("x", "y", "x");
  P.set("y", "z", "y");
  P.set("z", "x", "z");
  P.name = "cyclic";
  return P;
}

}  // namespace equislice
