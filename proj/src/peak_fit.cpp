#include <algorithm>
#include <cmath>

#include "minnaert/scattering.hpp"

namespace minnaert {

namespace {

// f(s) = α s² / ((s0 - s)² + β s³)
double model(const Eigen::Vector3d& p, double s) {
  const double d = p[1] - s;
  return p[0] * s * s / (d * d + p[2] * s * s * s);
}

Eigen::Vector3d model_grad(const Eigen::Vector3d& p, double s) {
  const double d = p[1] - s;
  const double D = d * d + p[2] * s * s * s;
  const double f = p[0] * s * s / D;
  return {s * s / D, -f * 2.0 * d / D, -f * s * s * s / D};
}

// maximizer of the model: 2 s0 (s0 - s) = β s³
double model_argmax(const Eigen::Vector3d& p) {
  double s = p[1];
  for (int it = 0; it < 60; ++it) {
    const double g = 2.0 * p[1] * (p[1] - s) - p[2] * s * s * s;
    const double dg = -2.0 * p[1] - 3.0 * p[2] * s * s;
    const double step = g / dg;
    s -= step;
    if (std::abs(step) < 1e-15 * std::abs(s)) break;
  }
  return s;
}

}  // namespace

PeakFit resonance_peak(const std::vector<double>& omegas, const std::vector<double>& power) {
  if (omegas.size() != power.size() || omegas.size() < 5) throw InputError("peak fit needs at least 5 samples");
  const std::size_t n = omegas.size();
  const std::size_t k = std::max_element(power.begin(), power.end()) - power.begin();
  if (k == 0 || k + 1 == n || !(power[k] > power[0]) || !(power[k] > power[n - 1]))
    throw InputError("no interior maximum in sweep");

  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = omegas[i] * omegas[i];
  // half-maximum crossings for the initial width
  const double half = 0.5 * power[k];
  std::size_t lo = k, hi = k;
  while (lo > 0 && power[lo] > half) --lo;
  while (hi + 1 < n && power[hi] > half) ++hi;
  double gamma = 0.5 * (s[hi] - s[lo]);
  if (!(gamma > 0.0)) gamma = s[k + 1] - s[k - 1];
  Eigen::Vector3d p(power[k] * gamma * gamma / (s[k] * s[k]), s[k], gamma * gamma / (s[k] * s[k] * s[k]));

  auto cost = [&](const Eigen::Vector3d& q) {
    double c = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = model(q, s[i]) / power[i] - 1.0;
      c += r * r;
    }
    return c;
  };

  double lambda = 1e-3, c = cost(p);
  int it = 0;
  Eigen::Matrix3d JtJ;
  for (; it < 200; ++it) {
    JtJ.setZero();
    Eigen::Vector3d Jtr = Eigen::Vector3d::Zero();
    for (std::size_t i = 0; i < n; ++i) {
      const Eigen::Vector3d g = model_grad(p, s[i]) / power[i];
      const double r = model(p, s[i]) / power[i] - 1.0;
      JtJ += g * g.transpose();
      Jtr += g * r;
    }
    bool improved = false;
    for (int tries = 0; tries < 30 && !improved; ++tries) {
      Eigen::Matrix3d A = JtJ;
      A.diagonal() += lambda * JtJ.diagonal();
      const Eigen::Vector3d step = A.ldlt().solve(-Jtr);
      const Eigen::Vector3d q = p + step;
      const double cq = q[0] > 0 && q[1] > 0 && q[2] > 0 ? cost(q) : HUGE_VAL;
      if (cq < c) {
        const double rel = (step.array() / p.array()).abs().maxCoeff();
        p = q;
        improved = true;
        lambda = std::max(lambda / 10.0, 1e-12);
        const double dc = c - cq;
        c = cq;
        if (rel < 1e-13 || dc < 1e-30) it = 1000;
      } else {
        lambda *= 10.0;
      }
    }
    if (!improved) break;
  }
  if (!std::isfinite(c)) throw InputError("peak fit did not converge");

  PeakFit f;
  f.alpha = p[0];
  f.s0 = p[1];
  f.beta = p[2];
  const double sp = model_argmax(p);
  f.omega_peak = std::sqrt(sp);
  f.width = std::sqrt(p[2] * p[1] * p[1] * p[1]);
  f.height = model(p, sp);
  const double dof = n > 3 ? double(n - 3) : 1.0;
  f.covariance = (c / dof) * JtJ.inverse();
  f.iterations = std::min(it, 200);
  return f;
}

PeakFit resonance_peak(const std::vector<SweepRow>& rows) {
  std::vector<double> w, pw;
  for (const auto& r : rows) {
    if (!r.error.empty() || !(r.power > 0.0)) continue;
    w.push_back(r.omega);
    pw.push_back(r.power);
  }
  return resonance_peak(w, pw);
}

}  // namespace minnaert
