#include "minnaert/verify.hpp"

#include <cmath>
#include <cstdio>

namespace minnaert {

PowerFit fit_power(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InputError("power fit needs at least two points");
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw InputError("power fit needs positive data");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double d = n * sxx - sx * sx;
  PowerFit f;
  f.exponent = (n * sxy - sx * sy) / d;
  const double b = (sy - f.exponent * sx) / n;
  f.prefactor = std::exp(b);
  if (n > 2) {
    double rss = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = std::log(y[i]) - (b + f.exponent * std::log(x[i]));
      rss += r * r;
    }
    f.stderr_exponent = std::sqrt(rss / (n - 2) * n / d);
  }
  return f;
}

namespace {

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Two-sided 95% Student quantiles, 1..5 degrees of freedom.
double t95(int dof) {
  static const double q[] = {12.706, 4.303, 3.182, 2.776, 2.571};
  return dof >= 1 && dof <= 5 ? q[dof - 1] : 1.96;
}

}  // namespace

std::vector<CheckResult> run_verification_suite(const SurfaceMesh& mesh, const VerifyOptions& opt) {
  std::vector<CheckResult> out;
  auto as = std::make_shared<const LayerAssembler>(mesh);
  const SpectralData sd = projectors(*as);
  const NormSurrogate norm(*as, sd);

  for (double w : {0.5, 1.0, 2.0}) {
    const double d = schur_coefficient_defect(*as, sd, norm, w, opt.k2_sign);
    out.push_back({fmt("schur_coefficient omega=%.1f", w), d <= 0.02, fmt("relative defect %.3e (limit 2e-2)", d)});
  }
  {
    const double d = k3_defect(*as, sd, norm);
    out.push_back({"k3", d <= 0.02, fmt("relative defect %.3e (limit 2e-2)", d)});
  }

  const double w_res = operator_minnaert_frequency(*as, sd);
  struct Case {
    Regime regime;
    double omega;
  };
  for (const Case c : {Case{Regime::NonResonant, 1.0}, Case{Regime::Resonant, w_res}}) {
    for (double z : {0.5, 0.7}) {
      const double r1 = expansion_residual(*as, sd, norm, 0.04, c.omega, z, c.regime).residual;
      const double r2 = expansion_residual(*as, sd, norm, 0.02, c.omega, z, c.regime).residual;
      const double ratio = r1 / r2;
      out.push_back({fmt("%s omega=%.5f z=%.1f", c.regime == Regime::Resonant ? "exp2" : "exp1", c.omega, z),
                     ratio >= 1.6 && ratio <= 2.6,
                     fmt("residual %.3e -> %.3e, ratio %.3f (window [1.6, 2.6])", r1, r2, ratio)});
    }
  }

  if (opt.include_kernel) {
    const Vec3 x(1, 0, 0), y(0, 1, 0);
    const Vec3 c = mesh.volume_centroid();
    const std::vector<double> es = {0.2, 0.1, 0.05, 0.025};
    std::vector<double> err;
    bool monotone = true;
    for (double e : es) {
      auto p = ScatteringProblem::make(as, e, w_res);
      const cplx k = resolvent_correction_kernel(p, kI, c + x, c + y);
      err.push_back(std::abs(k - krein_correction(kI, p.y0, c + x, c + y)));
      if (err.size() > 1 && !(err.back() < err[err.size() - 2])) monotone = false;
    }
    const PowerFit f = fit_power(es, err);
    const double half = t95(static_cast<int>(es.size()) - 2) * f.stderr_exponent;
    out.push_back({"krein_kernel_convergence", monotone && f.exponent > 0,
                   fmt("z=i omega=%.5f error %.3e -> %.3e, exponent %.3f, 95%% CI [%.3f, %.3f]", w_res, err.front(),
                       err.back(), f.exponent, f.exponent - half, f.exponent + half)});
  }
  return out;
}

}  // namespace minnaert
