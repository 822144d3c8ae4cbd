#pragma once

#include <string>
#include <vector>

#include "minnaert/types.hpp"

namespace minnaert {

// j_l, j_l', y_l, y_l' for l = 0..L at real x > 0.
struct SphericalBessel {
  std::vector<double> j, jp, y, yp;
};
SphericalBessel spherical_bessel(int L, double x);

// j_l and h_l = j_l + i y_l for l = 0..L at complex x (Im x >= 0 for the
// outgoing branch to decay).
struct ComplexSphericalBessel {
  std::vector<cplx> j, h;
};
ComplexSphericalBessel spherical_bessel(int L, cplx x);

// P_0..P_L at t.
std::vector<double> legendre(int L, double t);

// Penetrable sphere of physical radius εR, interior and exterior wavenumber ω,
// flux contrast ε^{-2}, plane wave e^{iω z} along the axis.
struct MieSolution {
  double R = 1, eps = 1, omega = 1;
  int L = 0;
  std::vector<cplx> a, b;
  double max_system_residual = 0;
  bool singular = false;
};

int default_truncation(double R, double omega);
MieSolution mie_solve(double R, double eps, double omega, int L);
MieSolution mie_solve(double R, double eps, double omega);

struct MieField {
  std::vector<cplx> values;
  double truncation_bound = 0;
};
// Points relative to the sphere center; gamma measured from the +z axis.
MieField mie_eval(const MieSolution& sol, const std::vector<Vec3>& points);

// A with u^sc ≈ A e^{iωr}/(4πr) from the l = 0 term: -4πi b_0/ω.
cplx mie_monopole_amplitude(const MieSolution& sol);

// Exact correction kernel for the ball of radius εR centered at the origin:
// the scattered field at x due to the source G_z(· - y), with the interior
// relation ψ = DN_ω γ_0 u on the sphere, summed over l = 0..L. Needs |x|, |y| > εR.
cplx sphere_resolvent_correction(double R, double eps, double omega, cplx z, const Vec3& x, const Vec3& y, int L = 30);

// Fixture text {R, eps, omega, L, b_l, sha256}; numbers with 17 significant digits.
std::string mie_fixture_json(const MieSolution& sol);
// Parses and verifies the embedded checksum; throws InputError on mismatch.
MieSolution parse_mie_fixture(const std::string& text);
MieSolution load_mie_fixture(const std::string& path);

}  // namespace minnaert
