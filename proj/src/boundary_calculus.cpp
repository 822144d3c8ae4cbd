#include "minnaert/boundary_calculus.hpp"

#include <cmath>

namespace minnaert {

CVec SpectralData::apply_P0(const CVec& phi) const {
  const cplx a = weight.cast<cplx>().dot(phi);
  return CVec::Constant(phi.size(), a);
}

CVec SpectralData::apply_Q0(const CVec& phi) const { return phi - apply_P0(phi); }

CMat SpectralData::P0() const {
  const Eigen::Index n = weight.size();
  return (RVec::Ones(n) * weight.transpose()).cast<cplx>();
}

CMat SpectralData::Q0() const {
  const Eigen::Index n = weight.size();
  return CMat::Identity(n, n) - P0();
}

SpectralData projectors(const LayerAssembler& as, double guard) {
  const SurfaceMesh& mesh = as.mesh();
  auto lu = std::make_shared<Eigen::PartialPivLU<RMat>>(as.static_single_layer());
  if (!(lu->rcond() * guard > 1.0))
    throw NumericalGuard("single layer factorization is ill-conditioned (mesh quality)");
  SpectralData sd;
  sd.areas = mesh.areas();
  sd.q_eq = lu->solve(RVec::Ones(mesh.size()));
  sd.capacitance = sd.areas.dot(sd.q_eq);
  if (!(sd.capacitance > 0.0)) throw NumericalGuard("nonpositive capacitance");
  sd.volume = mesh.volume();
  sd.omega_M = std::sqrt(sd.capacitance / sd.volume);
  sd.weight = sd.areas.cwiseProduct(sd.q_eq) / sd.capacitance;
  sd.s0_lu = std::move(lu);
  return sd;
}

SpectralData projectors(const SurfaceMesh& mesh) { return projectors(LayerAssembler(mesh)); }
double capacitance(const SurfaceMesh& mesh) { return projectors(mesh).capacitance; }
double minnaert_frequency(const SurfaceMesh& mesh) { return projectors(mesh).omega_M; }

cplx s0_inner(const SpectralData& sd, const CVec& phi, const CVec& psi) {
  if (phi.size() != sd.areas.size() || psi.size() != sd.areas.size())
    throw InputError("density length does not match panel count");
  // S_0 is real, so conj(S_0^{-1} φ) = S_0^{-1} conj(φ). The collocation S_0
  // is not symmetric; averaging both orders makes the form Hermitian, same
  // Gram matrix as NormSurrogate.
  auto solve = [&](const CVec& v) -> CVec {
    return sd.s0_lu->solve(RMat(v.real())).cast<cplx>() + kI * sd.s0_lu->solve(RMat(v.imag())).cast<cplx>();
  };
  const CVec w = sd.areas.cast<cplx>();
  const CVec a = solve(phi.conjugate());
  const CVec b = solve(psi);
  return 0.5 * ((a.array() * w.array() * psi.array()).sum() + (phi.conjugate().array() * w.array() * b.array()).sum());
}

cplx s0_inner(const SpectralData& sd, const BoundaryDensity& phi, const BoundaryDensity& psi) {
  if (phi.space != Space::Dirichlet || psi.space != Space::Dirichlet)
    throw InputError("s0_inner expects Dirichlet-role densities");
  return s0_inner(sd, phi.values, psi.values);
}

NormSurrogate::NormSurrogate(const LayerAssembler& as, const SpectralData& sd) : areas_(sd.areas) {
  const Eigen::Index n = areas_.size();
  RMat G = sd.s0_lu->solve(RMat::Identity(n, n));
  G = areas_.asDiagonal() * G;
  G = 0.5 * (G + G.transpose()).eval();
  gram_.compute(G);
  if (gram_.info() != Eigen::Success) throw NumericalGuard("S_0^{-1} Gram matrix is not positive definite");
  (void)as;
}

double NormSurrogate::norm(const CVec& phi) const {
  // ‖Lᵀφ‖ with G = L Lᵀ
  return (gram_.matrixU() * phi).norm();
}

double NormSurrogate::dual_norm(const CVec& psi) const {
  const CVec wpsi = areas_.cast<cplx>().cwiseProduct(psi);
  return gram_.matrixL().solve(wpsi).norm();
}

double NormSurrogate::operator_norm(const LinearMap& op, const LinearMap& adj, Space domain, Space codomain) const {
  const Eigen::Index n = areas_.size();
  const auto L = gram_.matrixL();
  const auto U = gram_.matrixU();
  const RVec W = areas_;
  // x ↦ (left) T (right⁻¹) x, both factors chosen per trace role so that the
  // surrogate norm becomes Euclidean.
  auto right_inv = [&](const CVec& v) -> CVec {
    return domain == Space::Dirichlet ? CVec(U.solve(v)) : CVec(W.cwiseInverse().cast<cplx>().cwiseProduct(L * v));
  };
  auto right_inv_adj = [&](const CVec& v) -> CVec {
    return domain == Space::Dirichlet ? CVec(L.solve(v)) : CVec(U * W.cwiseInverse().cast<cplx>().cwiseProduct(v));
  };
  auto left = [&](const CVec& v) -> CVec {
    return codomain == Space::Dirichlet ? CVec(U * v) : CVec(L.solve(W.cast<cplx>().cwiseProduct(v)));
  };
  auto left_adj = [&](const CVec& v) -> CVec {
    return codomain == Space::Dirichlet ? CVec(L * v) : CVec(W.cast<cplx>().cwiseProduct(U.solve(v)));
  };

  CVec v(n);
  for (Eigen::Index k = 0; k < n; ++k) v[k] = cplx(1.0 + 0.5 * std::sin(0.7 * k + 0.3), 0.25 * std::cos(1.3 * k));
  v.normalize();
  double sigma2 = 0.0;
  for (int it = 0; it < 1000; ++it) {
    const CVec y = left(op(right_inv(v)));
    const CVec u = right_inv_adj(adj(left_adj(y)));
    const double s2 = v.dot(u).real();
    const double un = u.norm();
    if (un == 0.0) return 0.0;
    v = u / un;
    if (it > 5 && std::abs(s2 - sigma2) <= 1e-12 * std::abs(s2)) {
      sigma2 = s2;
      break;
    }
    sigma2 = s2;
  }
  return std::sqrt(std::max(sigma2, 0.0));
}

double NormSurrogate::operator_norm(const CMat& T, Space domain, Space codomain) const {
  return operator_norm([&](const CVec& x) { return CVec(T * x); },
                       [&](const CVec& x) { return CVec(T.adjoint() * x); }, domain, codomain);
}

Eigen::PartialPivLU<CMat> guarded_lu(const CMat& A, const std::string& what, double guard) {
  Eigen::PartialPivLU<CMat> lu(A);
  const double rc = lu.rcond();
  if (!(rc * guard > 1.0)) {
    throw NumericalGuard(what + " is near-singular (condition estimate " + std::to_string(1.0 / rc) + ")");
  }
  return lu;
}

BoundaryOperator dirichlet_to_neumann(const BoundaryOperator& S, const BoundaryOperator& K, double guard) {
  const Eigen::Index n = S.size();
  auto lu = guarded_lu(S.matrix, "single layer S_z (interior Dirichlet eigenvalue proximity)", guard);
  BoundaryOperator dn;
  dn.matrix = lu.solve(K.matrix + 0.5 * CMat::Identity(n, n));
  dn.domain = Space::Dirichlet;
  dn.codomain = Space::Neumann;
  dn.wavenumber = S.wavenumber;
  dn.label = OpLabel::DN;
  return dn;
}

BoundaryOperator dirichlet_to_neumann(const LayerAssembler& as, cplx z, double guard) {
  auto [S, K] = as.layer_pair(z);
  return dirichlet_to_neumann(S, K, guard);
}

CMat interaction_matrix(const LayerAssembler& as, double eps, cplx omega, cplx z, double guard) {
  if (!(eps > 0.0 && eps < 1.0)) throw InputError("scale ε must lie in (0, 1)");
  auto [Sw, Kw] = as.layer_pair(eps * omega);
  const BoundaryOperator Sz = as.single_layer(eps * z);
  // X = S_{εz} S_{εω}^{-1} from Xᵀ = S_{εω}^{-ᵀ} S_{εz}ᵀ
  auto lut = guarded_lu(Sw.matrix.transpose(), "single layer S_{εω}", guard);
  const CMat X = lut.solve(CMat(Sz.matrix.transpose())).transpose();
  Kw.matrix.diagonal().array() += 0.5;
  CMat M = (1.0 - eps * eps) * (Kw.matrix * X);
  M.diagonal().array() += eps * eps;
  return M;
}

cplx leading_E0(const SpectralData& sd, cplx omega) { return 1.0 - omega * omega / (sd.omega_M * sd.omega_M); }
cplx leading_E1(const SpectralData& sd, cplx omega) { return -kI * omega * omega * omega * sd.volume / (4.0 * kPi); }

SchurBlocks schur_blocks(const CMat& M, const SpectralData& sd, double eps, cplx omega, cplx z, double guard) {
  const Eigen::Index n = M.rows();
  SchurBlocks b;
  b.eps = eps;
  b.omega = omega;
  b.z = z;
  b.M = M;
  // P_0 is rank one, so every block is an O(N^2) update
  const CVec ones = CVec::Ones(n);
  const CVec w = sd.weight.cast<cplx>();
  const CVec M1 = M * ones;                           // M P_0 = M1 wᵀ
  const CVec wM = (w.transpose() * M).transpose();    // P_0 M = 1 wMᵀ
  const cplx m00 = w.dot(M1);
  const CMat PMP = m00 * ones * w.transpose();
  const CMat PM = ones * wM.transpose();
  const CMat MP = M1 * w.transpose();
  b.M00 = PMP;
  b.M01 = PM - PMP;
  b.M10 = MP - PMP;
  b.M11 = M - PM - MP + PMP;
  b.recomposition_residual = (b.M00 + b.M01 + b.M10 + b.M11 - M).norm() / M.norm();
  b.E0 = leading_E0(sd, omega);
  b.E1 = leading_E1(sd, omega);

  // bordered system [M11 1; wᵀ 0] inverts M11 on ran(Q_0)
  CMat B(n + 1, n + 1);
  B.topLeftCorner(n, n) = b.M11;
  B.topRightCorner(n, 1) = ones;
  B.bottomLeftCorner(1, n) = w.transpose();
  B(n, n) = 0.0;
  auto lu = guarded_lu(B, "block M_11 on ran(Q_0)", guard);
  const Eigen::PartialPivLU<CMat> lua(B.adjoint());

  CVec rhs(n + 1);
  rhs.head(n) = sd.apply_Q0(M1);
  rhs[n] = 0.0;
  const CVec y = lu.solve(rhs).head(n);
  const cplx corr = (wM.transpose() * y)(0);
  b.c00 = m00 - corr;

  // inverse power iteration for the smallest singular value of the bordered matrix
  CVec v = CVec::Ones(n + 1).normalized();
  double s = 0.0;
  for (int it = 0; it < 200; ++it) {
    CVec u = lua.solve(CVec(lu.solve(v)));
    const double un = u.norm();
    const double s_new = std::sqrt(v.dot(u).real());
    v = u / un;
    if (it > 3 && std::abs(s_new - s) <= 1e-10 * s_new) {
      s = s_new;
      break;
    }
    s = s_new;
  }
  b.m11_min_singular = s > 0 ? 1.0 / s : 0.0;
  return b;
}

SchurBlocks schur_blocks(const LayerAssembler& as, const SpectralData& sd, double eps, cplx omega, cplx z,
                         double guard) {
  return schur_blocks(interaction_matrix(as, eps, omega, z, guard), sd, eps, omega, z, guard);
}

ExpansionResidual expansion_residual(const CMat& M, const SpectralData& sd, const NormSurrogate& norm, double eps,
                                     cplx omega, cplx z, Regime regime) {
  auto lu = guarded_lu(M, "interaction operator", kConditionGuard);
  const Eigen::PartialPivLU<CMat> lua(M.adjoint());
  ExpansionResidual r;
  r.regime = regime;
  double power;
  if (regime == Regime::NonResonant) {
    r.leading = 1.0 / leading_E0(sd, omega);
    power = eps * eps;
  } else {
    if (z == cplx(0.0)) throw InputError("resonant expansion needs z != 0");
    r.leading = 4.0 * kPi / sd.capacitance * kI / z;
    power = eps * eps * eps;
  }
  const CVec w = sd.weight.cast<cplx>();
  const cplx lead = r.leading;
  auto op = [&](const CVec& x) -> CVec {
    CVec y = power * lu.solve(x);
    y.array() -= lead * (w.transpose() * x)(0);
    return y;
  };
  auto adj = [&](const CVec& x) -> CVec {
    CVec y = power * lua.solve(x);
    y -= std::conj(lead) * x.sum() * w;
    return y;
  };
  r.residual = norm.operator_norm(op, adj);
  return r;
}

ExpansionResidual expansion_residual(const LayerAssembler& as, const SpectralData& sd, const NormSurrogate& norm,
                                     double eps, cplx omega, cplx z, Regime regime) {
  return expansion_residual(interaction_matrix(as, eps, omega, z), sd, norm, eps, omega, z, regime);
}

namespace {

// ‖P_0 A P_0 - t P_0‖ / ‖t P_0‖, using P_0 A P_0 = (wᵀ A 1) P_0 and P_0^H = w 1ᵀ.
double constant_block_defect(const CMat& A, const SpectralData& sd, const NormSurrogate& norm, cplx t) {
  const CVec w = sd.weight.cast<cplx>();
  const CVec ones = CVec::Ones(w.size());
  const cplx a = w.dot(A * ones);
  auto diff = [&](const CVec& x) -> CVec { return ones * ((a - t) * w.dot(x)); };
  auto diff_adj = [&](const CVec& x) -> CVec { return w * (std::conj(a - t) * x.sum()); };
  auto tp = [&](const CVec& x) -> CVec { return ones * (t * w.dot(x)); };
  auto tp_adj = [&](const CVec& x) -> CVec { return w * (std::conj(t) * x.sum()); };
  return norm.operator_norm(diff, diff_adj) / norm.operator_norm(tp, tp_adj);
}

}  // namespace

double schur_coefficient_defect(const LayerAssembler& as, const SpectralData& sd, const NormSurrogate& norm,
                                double omega, double k2_sign) {
  CMat A = (omega * omega * k2_sign) * as.newton_double_layer().cast<cplx>();
  A.diagonal().array() += 1.0;
  return constant_block_defect(A, sd, norm, leading_E0(sd, omega));
}

double operator_minnaert_frequency(const LayerAssembler& as, const SpectralData& sd) {
  const double k2 = sd.weight.dot(as.newton_double_layer() * RVec::Ones(as.size()));
  if (!(k2 < 0.0)) throw NumericalGuard("constant block of K_(2) is not negative");
  return std::sqrt(-1.0 / k2);
}

double k3_defect(const LayerAssembler& as, const SpectralData& sd, const NormSurrogate& norm) {
  return constant_block_defect(as.series_K(3).matrix, sd, norm, -kI * sd.volume / (4.0 * kPi));
}

}  // namespace minnaert
