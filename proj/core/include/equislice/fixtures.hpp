// Built-in presentations used by the CLI self test and the test suites.
#pragma once

#include "equislice/poisson.hpp"

namespace equislice {

// sl(2)^*: {h,e} = 2e, {h,f} = -2f, {e,f} = h, all weights 1.
PoissonPresentation sl2_presentation(int order = 6);
// {x,y} = n z^{n-1}, {z,x} = x, {y,z} = y with |x| = |y| = n, |z| = 2 and relation xy + z^n.
PoissonPresentation kleinian_presentation(int n, int order = 6);
// Same brackets on the formal slice (filtration variables, no relation).
PoissonPresentation kleinian_slice(int n, int order = 6);
// C^x x Delta^2 with bivector d_u ^ (t d_t + d_z).
PoissonPresentation counterex1_presentation(int order = 6);
// C^x x Delta x Z with bivector d_u ^ (t d_t + Euler) + Jacobian structure of x^3 + y^3 + z^3.
PoissonPresentation counterex2_presentation(int order = 6);
// {x,y} = x, {y,z} = y, {z,x} = z (violates Jacobi).
PoissonPresentation cyclic_presentation(int order = 6);

}  // namespace equislice
