#include "minnaert/oracle.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "minnaert/io.hpp"

namespace minnaert {

SphericalBessel spherical_bessel(int L, double x) {
  if (!(x > 0.0)) throw InputError("spherical Bessel argument must be positive");
  if (L < 0) throw InputError("negative order");
  const int top = L + 1;  // one extra order for the derivatives
  SphericalBessel b;
  b.j.assign(top + 1, 0.0);
  b.y.assign(top + 1, 0.0);

  // j: downward (Miller) recurrence from well above the turning point
  const int start = top + 20 + static_cast<int>(x);
  std::vector<double> f(start + 2, 0.0);
  f[start + 1] = 0.0;
  f[start] = 1e-300;
  for (int l = start; l >= 1; --l) {
    f[l - 1] = (2.0 * l + 1.0) / x * f[l] - f[l + 1];
    if (std::abs(f[l - 1]) > 1e250) {
      for (int k = l - 1; k <= start + 1; ++k) f[k] *= 1e-250;
    }
  }
  const double j0 = std::sin(x) / x;
  const double j1 = std::sin(x) / (x * x) - std::cos(x) / x;
  const double scale = std::abs(j0) > 0.1 ? j0 / f[0] : j1 / f[1];
  for (int l = 0; l <= top; ++l) b.j[l] = f[l] * scale;

  // y: upward recurrence
  b.y[0] = -std::cos(x) / x;
  if (top >= 1) b.y[1] = -std::cos(x) / (x * x) - std::sin(x) / x;
  for (int l = 1; l < top; ++l) b.y[l + 1] = (2.0 * l + 1.0) / x * b.y[l] - b.y[l - 1];

  b.jp.resize(L + 1);
  b.yp.resize(L + 1);
  b.jp[0] = -b.j[1];
  b.yp[0] = -b.y[1];
  for (int l = 1; l <= L; ++l) {
    b.jp[l] = b.j[l - 1] - (l + 1.0) / x * b.j[l];
    b.yp[l] = b.y[l - 1] - (l + 1.0) / x * b.y[l];
  }
  b.j.resize(L + 1);
  b.y.resize(L + 1);
  return b;
}

ComplexSphericalBessel spherical_bessel(int L, cplx x) {
  if (x == cplx(0.0)) throw InputError("spherical Bessel argument must be nonzero");
  if (L < 0) throw InputError("negative order");
  ComplexSphericalBessel b;
  const int start = L + 20 + static_cast<int>(std::abs(x));
  std::vector<cplx> f(start + 2, 0.0);
  f[start] = 1e-300;
  for (int l = start; l >= 1; --l) {
    f[l - 1] = (2.0 * l + 1.0) / x * f[l] - f[l + 1];
    if (std::abs(f[l - 1]) > 1e250) {
      for (int k = l - 1; k <= start + 1; ++k) f[k] *= 1e-250;
    }
  }
  const cplx j0 = std::sin(x) / x;
  const cplx j1 = std::sin(x) / (x * x) - std::cos(x) / x;
  const cplx scale = std::abs(j0) > std::abs(j1) ? j0 / f[0] : j1 / f[1];
  b.j.resize(L + 1);
  for (int l = 0; l <= L; ++l) b.j[l] = f[l] * scale;
  // h_0 = -i e^{ix}/x, h_1 = -(x + i) e^{ix}/x^2, upward
  b.h.resize(L + 1);
  const cplx e = std::exp(kI * x);
  b.h[0] = -kI * e / x;
  if (L >= 1) b.h[1] = -(x + kI) * e / (x * x);
  for (int l = 1; l < L; ++l) b.h[l + 1] = (2.0 * l + 1.0) / x * b.h[l] - b.h[l - 1];
  return b;
}

std::vector<double> legendre(int L, double t) {
  std::vector<double> P(L + 1);
  P[0] = 1.0;
  if (L >= 1) P[1] = t;
  for (int l = 1; l < L; ++l) P[l + 1] = ((2.0 * l + 1.0) * t * P[l] - l * P[l - 1]) / (l + 1.0);
  return P;
}

int default_truncation(double R, double omega) { return static_cast<int>(std::ceil(omega * R)) + 10; }

MieSolution mie_solve(double R, double eps, double omega) { return mie_solve(R, eps, omega, default_truncation(R, omega)); }

MieSolution mie_solve(double R, double eps, double omega, int L) {
  if (!(R > 0.0) || !(omega > 0.0)) throw InputError("Mie oracle needs R, ω > 0");
  if (!(eps > 0.0 && eps <= 1.0)) throw InputError("Mie oracle needs 0 < ε ≤ 1");
  if (L < omega * R + 10.0) throw InputError("Mie truncation order must satisfy L ≥ ωR + 10");
  MieSolution s;
  s.R = R;
  s.eps = eps;
  s.omega = omega;
  s.L = L;
  s.a.resize(L + 1);
  s.b.resize(L + 1);
  const double x = omega * eps * R;
  const double c = 1.0 / (eps * eps);
  const auto B = spherical_bessel(L, x);
  cplx il = 1.0;
  for (int l = 0; l <= L; ++l, il *= kI) {
    const cplx p = il * (2.0 * l + 1.0);
    const double j = B.j[l], jp = B.jp[l];
    const cplx h(j, B.y[l]), hp(jp, B.yp[l]);
    // [ j  -h ; c j'  -h' ] (a, b) = p (j, j')
    const cplx det = -j * hp + c * jp * h;
    if (std::abs(det) <= 1e-14 * (std::abs(j * hp) + c * std::abs(jp * h))) s.singular = true;
    s.a[l] = p * (-j * hp + h * jp) / det;
    s.b[l] = p * j * jp * (1.0 - c) / det;
    const double r1 = std::abs(s.a[l] * j - s.b[l] * h - p * j);
    const double r2 = std::abs(c * s.a[l] * jp - s.b[l] * hp - p * jp);
    const double sc = std::abs(p) * (std::abs(j) + std::abs(jp)) + std::abs(s.b[l]) * (std::abs(h) + std::abs(hp)) +
                      c * std::abs(s.a[l] * jp) + std::abs(s.a[l] * j);
    s.max_system_residual = std::max(s.max_system_residual, (r1 + r2) / sc);
  }
  return s;
}

MieField mie_eval(const MieSolution& sol, const std::vector<Vec3>& points) {
  MieField f;
  f.values.resize(points.size());
  for (std::size_t k = 0; k < points.size(); ++k) {
    const double r = points[k].norm();
    if (!(r > sol.eps * sol.R)) throw InputError("Mie field evaluated inside the sphere");
    const auto B = spherical_bessel(sol.L, sol.omega * r);
    const auto P = legendre(sol.L, points[k].z() / r);
    cplx u = 0.0;
    for (int l = 0; l <= sol.L; ++l) u += sol.b[l] * cplx(B.j[l], B.y[l]) * P[l];
    f.values[k] = u;
    f.truncation_bound = std::max(f.truncation_bound, std::abs(sol.b[sol.L] * cplx(B.j[sol.L], B.y[sol.L])));
  }
  return f;
}

cplx sphere_resolvent_correction(double R, double eps, double omega, cplx z, const Vec3& x, const Vec3& y, int L) {
  const double a = eps * R, rx = x.norm(), ry = y.norm();
  if (!(rx > a) || !(ry > a)) throw InputError("kernel points must lie outside the sphere");
  const double kappa = 1.0 / (eps * eps) - 1.0;
  const auto Jw = spherical_bessel(L, omega * a);
  const auto Ba = spherical_bessel(L, z * a);
  const auto Bx = spherical_bessel(L, z * rx);
  const auto By = spherical_bessel(L, z * ry);
  const auto P = legendre(L, x.dot(y) / (rx * ry));
  cplx sum = 0.0;
  for (int l = 0; l <= L; ++l) {
    // sphere eigenvalues: DN_ω -> d, single layer at z -> i z a^2 j_l(za) h_l(za)
    const double d = omega * Jw.jp[l] / Jw.j[l];
    const cplx sl = kI * z * a * a * Ba.j[l];
    const cplx inc = kI * z / (4.0 * kPi) * (2.0 * l + 1.0) * Ba.j[l] * By.h[l];
    const cplx psi = d * inc / (1.0 + kappa * d * sl * Ba.h[l]);
    sum += -kappa * sl * Bx.h[l] * psi * P[l];
  }
  return sum;
}

cplx mie_monopole_amplitude(const MieSolution& sol) { return -4.0 * kPi * kI * sol.b[0] / sol.omega; }

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string payload(const MieSolution& s) {
  std::string t = "{\"R\": " + num(s.R) + ", \"eps\": " + num(s.eps) + ", \"omega\": " + num(s.omega) +
                  ", \"L\": " + std::to_string(s.L) + ", \"b_l\": [";
  for (int l = 0; l <= s.L; ++l) {
    if (l) t += ", ";
    t += "[" + num(s.b[l].real()) + ", " + num(s.b[l].imag()) + "]";
  }
  return t + "]}";
}

}  // namespace

std::string mie_fixture_json(const MieSolution& sol) {
  const std::string p = payload(sol);
  return "{\"data\": " + p + ", \"sha256\": \"" + sha256_hex(p) + "\"}\n";
}

MieSolution parse_mie_fixture(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  const auto& d = j.at("data");
  MieSolution s;
  s.R = d.at("R").get<double>();
  s.eps = d.at("eps").get<double>();
  s.omega = d.at("omega").get<double>();
  s.L = d.at("L").get<int>();
  for (const auto& e : d.at("b_l")) s.b.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
  if (static_cast<int>(s.b.size()) != s.L + 1) throw InputError("fixture b_l length does not match L");
  if (sha256_hex(payload(s)) != j.at("sha256").get<std::string>()) throw InputError("fixture checksum mismatch");
  return s;
}

MieSolution load_mie_fixture(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open fixture " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_mie_fixture(ss.str());
}

}  // namespace minnaert
