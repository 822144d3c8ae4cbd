#include "minnaert/panel_integrals.hpp"

#include <cmath>

namespace minnaert {

const TriangleRule& triangle_rule() {
  static const TriangleRule rule = [] {
    TriangleRule r{};
    const double a1 = 0.445948490915964886318329253883, w1 = 0.223381589678011465944827884085;
    const double a2 = 0.091576213509770743459571463402, w2 = 0.109951743655321867388505449249;
    const double b1 = 1.0 - 2.0 * a1, b2 = 1.0 - 2.0 * a2;
    r.bary = {{{b1, a1, a1}, {a1, b1, a1}, {a1, a1, b1}, {b2, a2, a2}, {a2, b2, a2}, {a2, a2, b2}}};
    r.weight = {w1, w1, w1, w2, w2, w2};
    return r;
  }();
  return rule;
}

double inv_r_integral(const Vec3& x, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 cr = (b - a).cross(c - a);
  const Vec3 n = cr.normalized();
  const double h = n.dot(x - a);
  const double ah = std::abs(h);
  const Vec3 rho = x - h * n;
  const Vec3* p[3] = {&a, &b, &c};

  double log_part = 0.0, ang_part = 0.0;
  for (int e = 0; e < 3; ++e) {
    const Vec3& p1 = *p[e];
    const Vec3& p2 = *p[(e + 1) % 3];
    const Vec3 d = p2 - p1;
    const Vec3 s = d / d.norm();
    const Vec3 m = s.cross(n);  // outward in-plane edge normal
    const double P0 = (p1 - rho).dot(m);
    const double lp = (p2 - rho).dot(s), lm = (p1 - rho).dot(s);
    const double R02 = P0 * P0 + h * h;
    const double Rp = (x - p2).norm(), Rm = (x - p1).norm();
    if (std::abs(P0) < 1e-14 * d.norm()) continue;  // x on the edge line: terms vanish
    // log(R + l) without cancellation when l < 0
    auto lg = [R02](double R, double l) { return l >= 0.0 ? std::log(R + l) : std::log(R02 / (R - l)); };
    log_part += P0 * (lg(Rp, lp) - lg(Rm, lm));
    if (ah > 0.0) {
      ang_part += std::atan(P0 * lp / (R02 + ah * Rp)) - std::atan(P0 * lm / (R02 + ah * Rm));
    }
  }
  return log_part - ah * ang_part;
}

double solid_angle(const Vec3& x, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 ra = a - x, rb = b - x, rc = c - x;
  const double la = ra.norm(), lb = rb.norm(), lc = rc.norm();
  const double num = ra.dot(rb.cross(rc));
  const double den = la * lb * lc + ra.dot(rb) * lc + ra.dot(rc) * lb + rb.dot(rc) * la;
  return 2.0 * std::atan2(num, den);
}

namespace {
// Above this |w| the closed forms lose at most ~1e-12 relative accuracy.
constexpr double kSeriesCut = 0.05;

// (iw)^n / n! for n = 2..
void series(cplx w, cplx* s, cplx* k) {
  const cplx iw = kI * w;
  cplx p = iw * iw / 2.0, ssum = 0.0, ksum = 0.0;
  for (int n = 2; n < 14; ++n) {
    ssum += p;
    if (n >= 3) ksum += double(1 - n) * p;
    p *= iw / double(n + 1);
  }
  if (s) *s = ssum;
  if (k) *k = ksum;
}

cplx expi(cplx w) {
  const double decay = std::exp(-w.imag());
  return {decay * std::cos(w.real()), decay * std::sin(w.real())};
}
}  // namespace

cplx expi_minus_linear(cplx w) {
  cplx s;
  expi_remainders(w, &s, nullptr);
  return s;
}

cplx dipole_remainder(cplx w) {
  cplx k;
  expi_remainders(w, nullptr, &k);
  return k;
}

void expi_remainders(cplx w, cplx* s, cplx* k) {
  if (std::abs(w) < kSeriesCut) {
    series(w, s, k);
    return;
  }
  const cplx iw = kI * w;
  const cplx e = expi(w);
  if (s) *s = e - 1.0 - iw;
  if (k) *k = (1.0 - iw) * e - 1.0 - 0.5 * w * w;
}

}  // namespace minnaert
