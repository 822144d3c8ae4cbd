#pragma once

#include <array>

#include "minnaert/types.hpp"

namespace minnaert {

// Symmetric 6-point rule of degree 4 on the reference triangle.
// Barycentric nodes and weights summing to one.
struct TriangleRule {
  static constexpr int size = 6;
  std::array<std::array<double, 3>, size> bary;
  std::array<double, size> weight;
};
const TriangleRule& triangle_rule();

// Integral of 1/|x-y| over the flat triangle (a,b,c), for any x in space.
double inv_r_integral(const Vec3& x, const Vec3& a, const Vec3& b, const Vec3& c);

// Signed solid angle of triangle (a,b,c) seen from x, positive when x lies on
// the side opposite to the normal (b-a)x(c-a). Equals -∫ ν·(x-y)/|x-y|^3 dσ(y).
double solid_angle(const Vec3& x, const Vec3& a, const Vec3& b, const Vec3& c);

// e^{iw} - 1 - iw, accurate for small |w|.
cplx expi_minus_linear(cplx w);
// (1 - iw) e^{iw} - 1 - w^2/2, accurate for small |w|.
cplx dipole_remainder(cplx w);
// Both of the above sharing one exponential; either pointer may be null.
void expi_remainders(cplx w, cplx* s, cplx* k);

}  // namespace minnaert
