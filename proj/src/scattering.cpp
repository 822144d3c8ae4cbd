#include "minnaert/scattering.hpp"

#include <algorithm>
#include <cmath>

#include "minnaert/panel_integrals.hpp"

namespace minnaert {

IncidentWave IncidentWave::plane(const Vec3& dir, double amplitude) {
  if (!(dir.norm() > 0.0)) throw InputError("plane wave direction must be nonzero");
  IncidentWave w;
  w.kind = Kind::PlaneWave;
  w.direction = dir.normalized();
  w.amplitude = amplitude;
  return w;
}

IncidentWave IncidentWave::point(const Vec3& src, double amplitude) {
  IncidentWave w;
  w.kind = Kind::PointSource;
  w.source = src;
  w.amplitude = amplitude;
  return w;
}

cplx IncidentWave::value(const Vec3& x, cplx omega) const {
  if (kind == Kind::PlaneWave) return amplitude * std::exp(kI * omega * direction.dot(x));
  const double r = (x - source).norm();
  if (r == 0.0) throw InputError("point source evaluated at its own location");
  return amplitude * green(omega, r);
}

ScatteringProblem ScatteringProblem::make(std::shared_ptr<const LayerAssembler> reference, double eps, double omega,
                                          IncidentWave incident, std::optional<Vec3> y0, double validity) {
  if (!reference) throw InputError("scattering problem needs a reference mesh");
  if (!(eps > 0.0 && eps < 1.0)) throw InputError("scale ε must lie in (0, 1)");
  if (!(omega > 0.0)) throw InputError("frequency ω must be positive");
  ScatteringProblem p;
  p.reference = std::move(reference);
  p.eps = eps;
  p.omega = omega;
  p.incident = incident;
  p.y0 = y0 ? *y0 : p.reference->mesh().volume_centroid();
  if (eps * omega * p.reference->mesh().diameter() > validity)
    p.warnings.push_back("ε·ω·d_Ω exceeds the small-bubble validity threshold");
  if (incident.kind == IncidentWave::Kind::PointSource) {
    const Vec3 s = p.undilate(incident.source);
    for (std::size_t j = 0; j < p.mesh().size(); ++j)
      if ((s - p.mesh().centroid(j)).norm() < p.mesh().panel_diameter(j))
        throw InputError("point source too close to the scatterer");
    double winding = 0;
    for (std::size_t j = 0; j < p.mesh().size(); ++j)
      winding += solid_angle(s, p.mesh().vertex(j, 0), p.mesh().vertex(j, 1), p.mesh().vertex(j, 2));
    if (winding > 2.0 * kPi) throw InputError("point source inside the scatterer");
  }
  return p;
}

double ScatteringProblem::fit_radius() const { return 10.0 * std::max(eps * mesh().diameter(), 1.0 / omega); }

MonopoleFit monopole_amplitude(const std::vector<Vec3>& points, const CVec& values, cplx omega, const Vec3& y0) {
  if (points.size() < 16) throw InputError("monopole fit needs at least 16 sample points");
  if (static_cast<Eigen::Index>(points.size()) != values.size()) throw InputError("point/value count mismatch");
  CVec g(values.size());
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    const double r = (points[i] - y0).norm();
    if (r == 0.0) throw InputError("degenerate sample geometry: point at the center");
    g[i] = green(omega, r);
  }
  const double gg = g.squaredNorm();
  if (!(gg > 0.0)) throw InputError("degenerate sample geometry");
  MonopoleFit f;
  f.amplitude = g.dot(values) / gg;
  const double vn = values.norm();
  f.residual = vn > 0.0 ? (values - f.amplitude * g).norm() / vn : 0.0;
  return f;
}

MonopoleFit monopole_amplitude(const FieldResult& field, cplx omega, const Vec3& y0) {
  return monopole_amplitude(field.points, field.u_sc, omega, y0);
}

std::vector<Vec3> far_sample_points(const Vec3& center, double radius, int count) {
  if (count < 2 || count % 2) throw InputError("sample count must be even");
  const int half = count / 2;
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  std::vector<Vec3> pts;
  pts.reserve(count);
  for (int k = 0; k < half; ++k) {
    // upper hemisphere spiral, mirrored through the center
    const double z = 1.0 - (k + 0.5) / half;
    const double rho = std::sqrt(1.0 - z * z);
    const double phi = golden * k;
    pts.push_back(center + radius * Vec3(rho * std::cos(phi), rho * std::sin(phi), z));
  }
  for (int k = 0; k < half; ++k) pts.push_back(2.0 * center - pts[k]);
  return pts;
}

std::vector<Vec3> far_sample_points(const ScatteringProblem& p) { return far_sample_points(p.y0, p.fit_radius()); }

namespace {

void fill_incident(FieldResult& f, const ScatteringProblem& p) {
  f.u_in.resize(f.points.size());
  for (std::size_t k = 0; k < f.points.size(); ++k) f.u_in[k] = p.incident.value(f.points[k], p.omega);
  f.u_total = f.u_in + f.u_sc;
  if (f.points.size() >= 16) {
    auto fit = monopole_amplitude(f.points, f.u_sc, p.omega, p.y0);
    f.amplitude = fit.amplitude;
    f.fit_residual = fit.residual;
  } else {
    f.fit_residual = std::nan("");
  }
}

// γ_0(u∘Φ_ε) at the reference centroids.
CVec dilated_trace(const ScatteringProblem& p, const std::function<cplx(const Vec3&)>& u) {
  const auto& m = p.mesh();
  CVec g(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) g[i] = u(p.dilate(m.centroid(i)));
  return g;
}

FieldResult direct_solve(const LayerAssembler& phys, const ScatteringProblem& p, const std::vector<Vec3>& points,
                         const DirectOptions& opt) {
  const Eigen::Index n = phys.size();
  const double kappa = opt.contrast ? *opt.contrast : 1.0 / (p.eps * p.eps) - 1.0;
  auto [S, K] = phys.layer_pair(p.omega);
  K.matrix.diagonal().array() += 0.5;  // 1/2 + K
  CVec g(n);
  for (Eigen::Index i = 0; i < n; ++i) g[i] = p.incident.value(phys.mesh().centroid(i), p.omega);

  // S ψ = (1/2+K)(g − κ S ψ), ψ the interior flux
  const CMat KS = K.matrix * S.matrix;
  CMat A = S.matrix + kappa * KS;
  auto lu = guarded_lu(A, "direct boundary system", opt.guard);
  const CVec psi = lu.solve(K.matrix * g);

  FieldResult f;
  f.points = points;
  f.u_sc = -kappa * phys.potential(psi, p.omega, points);

  // interface relation ψ = DN_ω(ε) γ_0 u
  auto slu = guarded_lu(S.matrix, "single layer S_ω on Γ^ε", opt.guard);
  const CVec trace = g - kappa * (S.matrix * psi);
  const CVec res = psi - slu.solve(K.matrix * trace);
  const double pn = psi.norm();
  f.interface_residual = pn > 0.0 ? res.norm() / pn : 0.0;
  fill_incident(f, p);
  return f;
}

cplx incident_at_center(const ScatteringProblem& p) { return p.incident.value(p.y0, p.omega); }

FieldResult closed_form_field(const ScatteringProblem& p, cplx A, const std::vector<Vec3>& pts) {
  FieldResult f;
  f.points = pts;
  f.u_sc.resize(pts.size());
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const double r = (pts[k] - p.y0).norm();
    if (r == 0.0) throw InputError("closed-form field evaluated at the center");
    f.u_sc[k] = A * green(p.omega, r);
  }
  f.u_in.resize(pts.size());
  for (std::size_t k = 0; k < pts.size(); ++k) f.u_in[k] = p.incident.value(pts[k], p.omega);
  f.u_total = f.u_in + f.u_sc;
  f.amplitude = A;
  return f;
}

}  // namespace

BoundaryOperator lambda_operator(const ScatteringProblem& p, cplx z, double guard) {
  const LayerAssembler& as = *p.reference;
  const double e = p.eps, e2 = e * e;
  const Eigen::Index n = as.size();
  auto [Sw, Kw] = as.layer_pair(e * p.omega);
  BoundaryOperator Sz = z == cplx(p.omega) ? Sw : as.single_layer(e * z);
  const BoundaryOperator DN = dirichlet_to_neumann(Sw, Kw, guard);
  CMat X = (1.0 - e2) * (DN.matrix * Sz.matrix);
  X.diagonal().array() += e2;
  auto lu = guarded_lu(X, "inner operator ε² + (1-ε²) DN_{εω} S_{εz}", guard);
  BoundaryOperator L;
  L.matrix = (e * (1.0 - e2)) * lu.solve(DN.matrix);
  L.domain = Space::Dirichlet;
  L.codomain = Space::Neumann;
  L.wavenumber = z;
  L.label = OpLabel::Lambda;
  (void)n;
  return L;
}

FieldResult scattered_field_dilated(const ScatteringProblem& p, const std::vector<Vec3>& points) {
  const BoundaryOperator L = lambda_operator(p, p.omega);
  const CVec g = dilated_trace(p, [&](const Vec3& x) { return p.incident.value(x, p.omega); });
  const CVec rho = L.matrix * g;
  std::vector<Vec3> ref(points.size());
  for (std::size_t k = 0; k < points.size(); ++k) ref[k] = p.undilate(points[k]);
  FieldResult f;
  f.points = points;
  f.u_sc = (-1.0 / p.eps) * p.reference->potential(rho, p.eps * p.omega, ref);
  fill_incident(f, p);
  return f;
}

FieldResult scattered_field_direct(const ScatteringProblem& p, const std::vector<Vec3>& points,
                                   const DirectOptions& opt) {
  const LayerAssembler phys(p.mesh().dilated(p.eps, p.y0), p.reference->execution());
  return direct_solve(phys, p, points, opt);
}

cplx nonresonant_amplitude(const ScatteringProblem& p, const ShapeConstants& k) {
  const double d = k.omega_M * k.omega_M - p.omega * p.omega;
  if (std::abs(p.omega - k.omega_M) <= 1e-14 * k.omega_M)
    throw InputError("non-resonant formula is undefined at ω = ω_M");
  return p.eps * p.omega * p.omega * k.capacitance / d * incident_at_center(p);
}

cplx resonant_amplitude(const ScatteringProblem& p, const ShapeConstants& k) {
  (void)k;
  return 4.0 * kPi * kI / p.omega * incident_at_center(p);
}

cplx uniform_amplitude(const ScatteringProblem& p, const ShapeConstants& k) {
  const double w = p.omega;
  const cplx d = k.omega_M * k.omega_M - w * w - kI * p.eps * w * w * w * k.capacitance / (4.0 * kPi);
  return p.eps * w * w * k.capacitance / d * incident_at_center(p);
}

FieldResult asymptotic_nonresonant(const ScatteringProblem& p, const ShapeConstants& k, const std::vector<Vec3>& pts) {
  return closed_form_field(p, nonresonant_amplitude(p, k), pts);
}
FieldResult asymptotic_resonant(const ScatteringProblem& p, const ShapeConstants& k, const std::vector<Vec3>& pts) {
  return closed_form_field(p, resonant_amplitude(p, k), pts);
}
FieldResult asymptotic_uniform(const ScatteringProblem& p, const ShapeConstants& k, const std::vector<Vec3>& pts) {
  return closed_form_field(p, uniform_amplitude(p, k), pts);
}

SweepMethod parse_sweep_method(const std::string& s) {
  if (s == "direct") return SweepMethod::Direct;
  if (s == "dilated") return SweepMethod::Dilated;
  if (s == "uniform") return SweepMethod::Uniform;
  if (s == "nonresonant") return SweepMethod::NonResonant;
  throw InputError("unknown method '" + s + "' (direct, dilated, uniform, nonresonant)");
}

std::string to_string(SweepMethod m) {
  switch (m) {
    case SweepMethod::Direct: return "direct";
    case SweepMethod::Dilated: return "dilated";
    case SweepMethod::Uniform: return "uniform";
    case SweepMethod::NonResonant: return "nonresonant";
  }
  return "?";
}

std::vector<SweepRow> frequency_sweep(const ScatteringProblem& base, const std::vector<double>& omegas,
                                      SweepMethod method, const ShapeConstants& k, const SweepOptions& opt) {
  for (std::size_t i = 0; i < omegas.size(); ++i) {
    if (!(omegas[i] > 0.0)) throw InputError("sweep frequencies must be positive");
    if (i && !(omegas[i] > omegas[i - 1])) throw InputError("sweep grid must be strictly increasing");
  }
  std::unique_ptr<LayerAssembler> phys;
  if (method == SweepMethod::Direct) {
    // static tables on Γ^ε are shared by every frequency
    phys = std::make_unique<LayerAssembler>(base.mesh().dilated(base.eps, base.y0), base.reference->execution());
    phys->static_single_layer();
    phys->static_double_layer();
    phys->newton_double_layer();
  }
  std::vector<SweepRow> rows(omegas.size());
  const long m = static_cast<long>(omegas.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < m; ++i) {
    SweepRow& row = rows[i];
    ScatteringProblem p = base;
    p.omega = omegas[i];
    row.omega = p.omega;
    row.in_guard_band = std::abs(p.omega - k.omega_M) < opt.guard_constant * p.eps;
    try {
      row.uniform = uniform_amplitude(p, k);
      row.resonant = resonant_amplitude(p, k);
      if (std::abs(p.omega - k.omega_M) > 1e-14 * k.omega_M) row.nonresonant = nonresonant_amplitude(p, k);
      switch (method) {
        case SweepMethod::Direct: {
          auto f = direct_solve(*phys, p, far_sample_points(p), {});
          row.amplitude = f.amplitude;
          row.fit_residual = f.fit_residual;
          break;
        }
        case SweepMethod::Dilated: {
          auto f = scattered_field_dilated(p, far_sample_points(p));
          row.amplitude = f.amplitude;
          row.fit_residual = f.fit_residual;
          break;
        }
        case SweepMethod::Uniform: row.amplitude = row.uniform; break;
        case SweepMethod::NonResonant:
          if (!row.nonresonant) throw InputError("non-resonant formula is undefined at ω = ω_M");
          row.amplitude = *row.nonresonant;
          break;
      }
      row.power = std::norm(row.amplitude);
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  }
  return rows;
}

ResolventCorrection::ResolventCorrection(const ScatteringProblem& p, cplx z) : p_(p), z_(z) {
  if (!(z.imag() > 0.0)) throw InputError("resolvent kernels need Im z > 0");
  lambda_ = lambda_operator(p_, z_);
}

cplx ResolventCorrection::operator()(const Vec3& x, const Vec3& y) const {
  const auto& m = p_.mesh();
  const Vec3 ys = p_.undilate(y);
  for (std::size_t j = 0; j < m.size(); ++j)
    if ((ys - m.centroid(j)).norm() < m.panel_diameter(j))
      throw InputError("kernel source point too close to the scatterer");
  const CVec g = dilated_trace(p_, [&](const Vec3& t) { return green(z_, (t - y).norm()); });
  const CVec rho = lambda_.matrix * g;
  const CVec v = p_.reference->potential(rho, p_.eps * z_, {p_.undilate(x)});
  return -v[0] / p_.eps;
}

cplx resolvent_correction_kernel(const ScatteringProblem& p, cplx z, const Vec3& x, const Vec3& y) {
  return ResolventCorrection(p, z)(x, y);
}

cplx krein_correction(cplx z, const Vec3& y0, const Vec3& x, const Vec3& y) {
  const double rx = (x - y0).norm(), ry = (y - y0).norm();
  if (rx == 0.0 || ry == 0.0) throw InputError("coincident points in point-interaction kernel");
  if (z == cplx(0.0)) throw InputError("point-interaction kernel needs z != 0");
  return 4.0 * kPi * (kI / z) * green(z, rx) * green(z, ry);
}

cplx point_perturbation_kernel(cplx z, const Vec3& y0, const Vec3& x, const Vec3& y) {
  const double r = (x - y).norm();
  if (r == 0.0) throw InputError("coincident points in point-interaction kernel");
  return green(z, r) + krein_correction(z, y0, x, y);
}

}  // namespace minnaert
