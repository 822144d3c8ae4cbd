#pragma once

#include <functional>
#include <memory>

#include "minnaert/layer_ops.hpp"

namespace minnaert {

inline constexpr double kConditionGuard = 1e12;

// Equilibrium data of a mesh. P_0 = 1 ⊗ weight, weight = area ∘ q_eq / c.
struct SpectralData {
  double capacitance = 0;
  double omega_M = 0;
  double volume = 0;
  RVec q_eq;
  RVec weight;
  RVec areas;
  std::shared_ptr<const Eigen::PartialPivLU<RMat>> s0_lu;  // solve() is const, safe to share

  CVec apply_P0(const CVec& phi) const;
  CVec apply_Q0(const CVec& phi) const;
  CMat P0() const;
  CMat Q0() const;
};

SpectralData projectors(const LayerAssembler& as, double guard = kConditionGuard);
SpectralData projectors(const SurfaceMesh& mesh);
double capacitance(const SurfaceMesh& mesh);
double minnaert_frequency(const SurfaceMesh& mesh);
// Root of the discrete constant block 1 + ω² <w, K_(2) 1>. Differs from
// SpectralData::omega_M by the quadrature error of the volume, O(h²).
double operator_minnaert_frequency(const LayerAssembler& as, const SpectralData& sd);

// <S_0^{-1} φ, ψ> with the discrete surface duality, conjugate-linear in φ.
cplx s0_inner(const SpectralData& sd, const CVec& phi, const CVec& psi);
cplx s0_inner(const SpectralData& sd, const BoundaryDensity& phi, const BoundaryDensity& psi);

using LinearMap = std::function<CVec(const CVec&)>;

// Norms induced by the (symmetrized) discrete S_0^{-1} Gram matrix on
// Dirichlet data and by its dual on flux data.
class NormSurrogate {
 public:
  NormSurrogate(const LayerAssembler& as, const SpectralData& sd);

  double norm(const CVec& phi) const;
  double dual_norm(const CVec& psi) const;
  // Largest singular value by power iteration; `adj` is the Euclidean adjoint of `op`.
  double operator_norm(const LinearMap& op, const LinearMap& adj, Space domain = Space::Dirichlet,
                       Space codomain = Space::Dirichlet) const;
  double operator_norm(const CMat& T, Space domain = Space::Dirichlet, Space codomain = Space::Dirichlet) const;

 private:
  RVec areas_;
  Eigen::LLT<RMat> gram_;
};

// DN_z = S_z^{-1}(1/2 + K_z).
BoundaryOperator dirichlet_to_neumann(const LayerAssembler& as, cplx z, double guard = kConditionGuard);
BoundaryOperator dirichlet_to_neumann(const BoundaryOperator& S, const BoundaryOperator& K,
                                      double guard = kConditionGuard);

// LU with the conditioning guard; `what` names the factor in the error.
Eigen::PartialPivLU<CMat> guarded_lu(const CMat& A, const std::string& what, double guard = kConditionGuard);

// ε^2 + (1 - ε^2)(1/2 + K_{εω}) S_{εz} S_{εω}^{-1}.
CMat interaction_matrix(const LayerAssembler& as, double eps, cplx omega, cplx z, double guard = kConditionGuard);

struct SchurBlocks {
  double eps = 0;
  cplx omega = 0, z = 0;
  CMat M, M00, M01, M10, M11;
  cplx c00 = 0;  // C_00 = c00 · P_0
  cplx E0 = 0, E1 = 0;
  double recomposition_residual = 0;
  double m11_min_singular = 0;  // bordered system estimate, Euclidean
};

SchurBlocks schur_blocks(const LayerAssembler& as, const SpectralData& sd, double eps, cplx omega, cplx z,
                         double guard = kConditionGuard);
SchurBlocks schur_blocks(const CMat& M, const SpectralData& sd, double eps, cplx omega, cplx z,
                         double guard = kConditionGuard);

cplx leading_E0(const SpectralData& sd, cplx omega);
cplx leading_E1(const SpectralData& sd, cplx omega);

enum class Regime { NonResonant, Resonant };

struct ExpansionResidual {
  Regime regime;
  double residual;
  cplx leading;  // 1/E0 or (4π/c)(i/z)
};

// Non-resonant: ‖ε²𝕄⁻¹ − P_0/E0‖; resonant: ‖ε³𝕄⁻¹ − (4π/c)(i/z)P_0‖.
ExpansionResidual expansion_residual(const CMat& M, const SpectralData& sd, const NormSurrogate& norm,
                                     double eps, cplx omega, cplx z, Regime regime);
ExpansionResidual expansion_residual(const LayerAssembler& as, const SpectralData& sd, const NormSurrogate& norm,
                                     double eps, cplx omega, cplx z, Regime regime);

// Relative defects of the two constant-block identities, in the surrogate norm.
double schur_coefficient_defect(const LayerAssembler& as, const SpectralData& sd, const NormSurrogate& norm,
                                double omega, double k2_sign = 1.0);
double k3_defect(const LayerAssembler& as, const SpectralData& sd, const NormSurrogate& norm);

}  // namespace minnaert
