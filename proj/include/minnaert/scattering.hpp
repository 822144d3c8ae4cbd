#pragma once

#include <optional>
#include <string>
#include <vector>

#include "minnaert/boundary_calculus.hpp"

namespace minnaert {

struct IncidentWave {
  enum class Kind { PlaneWave, PointSource };
  Kind kind = Kind::PlaneWave;
  Vec3 direction{0, 0, 1};  // unit, plane wave
  Vec3 source{0, 0, 0};     // point source location
  double amplitude = 1.0;

  static IncidentWave plane(const Vec3& dir, double amplitude = 1.0);
  static IncidentWave point(const Vec3& src, double amplitude = 1.0);
  // u^in at x for wavenumber ω (e^{iωθ·x} or G_ω(x - x_s)).
  cplx value(const Vec3& x, cplx omega) const;
};

struct ScatteringProblem {
  std::shared_ptr<const LayerAssembler> reference;  // Ω at unit scale
  Vec3 y0 = Vec3::Zero();
  double eps = 0.05;
  double omega = 1.0;
  IncidentWave incident;
  std::vector<std::string> warnings;

  // y0 defaults to the volume centroid of the mesh.
  static ScatteringProblem make(std::shared_ptr<const LayerAssembler> reference, double eps, double omega,
                                IncidentWave incident = IncidentWave::plane({0, 0, 1}),
                                std::optional<Vec3> y0 = std::nullopt, double validity = 1.0);

  const SurfaceMesh& mesh() const { return reference->mesh(); }
  Vec3 dilate(const Vec3& y) const { return y0 + eps * (y - y0); }    // Φ_ε
  Vec3 undilate(const Vec3& x) const { return y0 + (x - y0) / eps; }  // Φ_ε^{-1}
  // Far-field sample radius 10·max(ε d_Ω, 1/ω).
  double fit_radius() const;
};

struct FieldResult {
  std::vector<Vec3> points;
  CVec u_in, u_sc, u_total;
  cplx amplitude = 0.0;
  double fit_residual = 0.0;        // ‖u^sc − A G‖ / ‖u^sc‖
  double interface_residual = 0.0;  // direct solver only
};

struct MonopoleFit {
  cplx amplitude;
  double residual;
};

// Least squares fit of values against G_ω(x - y_0); needs >= 16 points.
MonopoleFit monopole_amplitude(const std::vector<Vec3>& points, const CVec& values, cplx omega, const Vec3& y0);
MonopoleFit monopole_amplitude(const FieldResult& field, cplx omega, const Vec3& y0);

// 64 points, antipodally symmetric Fibonacci set, on the sphere |x - center| = radius.
std::vector<Vec3> far_sample_points(const Vec3& center, double radius, int count = 64);
std::vector<Vec3> far_sample_points(const ScatteringProblem& p);

// ε(1-ε²)(ε² + (1-ε²) DN_{εω} S_{εz})^{-1} DN_{εω} on the reference mesh.
BoundaryOperator lambda_operator(const ScatteringProblem& p, cplx z, double guard = kConditionGuard);

// Through Λ on the reference mesh, mapped back with Φ_ε.
FieldResult scattered_field_dilated(const ScatteringProblem& p, const std::vector<Vec3>& points);

struct DirectOptions {
  std::optional<double> contrast;  // replaces ε^{-2} - 1
  double guard = kConditionGuard;
};
// Boundary system on the physical surface Γ^ε.
FieldResult scattered_field_direct(const ScatteringProblem& p, const std::vector<Vec3>& points,
                                   const DirectOptions& opt = {});

// Closed-form monopole predictions, using the given constants (c_Ω, ω_M).
struct ShapeConstants {
  double capacitance;
  double omega_M;
  static ShapeConstants of(const SpectralData& sd) { return {sd.capacitance, sd.omega_M}; }
};
cplx nonresonant_amplitude(const ScatteringProblem& p, const ShapeConstants& k);
cplx resonant_amplitude(const ScatteringProblem& p, const ShapeConstants& k);
cplx uniform_amplitude(const ScatteringProblem& p, const ShapeConstants& k);

FieldResult asymptotic_nonresonant(const ScatteringProblem& p, const ShapeConstants& k, const std::vector<Vec3>& pts);
FieldResult asymptotic_resonant(const ScatteringProblem& p, const ShapeConstants& k, const std::vector<Vec3>& pts);
FieldResult asymptotic_uniform(const ScatteringProblem& p, const ShapeConstants& k, const std::vector<Vec3>& pts);

enum class SweepMethod { Direct, Dilated, Uniform, NonResonant };
SweepMethod parse_sweep_method(const std::string& s);
std::string to_string(SweepMethod m);

struct SweepRow {
  double omega = 0;
  cplx amplitude = 0;
  double power = 0;  // |A|^2
  cplx uniform = 0;
  std::optional<cplx> nonresonant;
  cplx resonant = 0;
  double fit_residual = 0;
  bool in_guard_band = false;
  std::string error;
};

struct SweepOptions {
  double guard_constant = 1.0;  // c_M
};

std::vector<SweepRow> frequency_sweep(const ScatteringProblem& p, const std::vector<double>& omegas, SweepMethod method,
                                      const ShapeConstants& k, const SweepOptions& opt = {});

struct PeakFit {
  double omega_peak;
  double width;   // half width of |A|^2 in the variable ω²
  double height;  // max |A|^2 of the fitted model
  double s0, alpha, beta;  // model α s² / ((s0 - s)² + β s³), s = ω²
  Eigen::Matrix3d covariance;
  int iterations;
};
// Throws InputError when the maximum is on the grid boundary or the fit fails.
PeakFit resonance_peak(const std::vector<SweepRow>& rows);
PeakFit resonance_peak(const std::vector<double>& omegas, const std::vector<double>& power);

// Kernel of R_z^ω(ε) - R_z at (x, y), cached Λ for repeated evaluation.
class ResolventCorrection {
 public:
  ResolventCorrection(const ScatteringProblem& p, cplx z);
  cplx operator()(const Vec3& x, const Vec3& y) const;

 private:
  ScatteringProblem p_;
  cplx z_;
  BoundaryOperator lambda_;
};
cplx resolvent_correction_kernel(const ScatteringProblem& p, cplx z, const Vec3& x, const Vec3& y);

// G_z(x-y) + 4π(i/z) G_z(x-y0) G_z(y-y0).
cplx point_perturbation_kernel(cplx z, const Vec3& y0, const Vec3& x, const Vec3& y);
// The second term alone.
cplx krein_correction(cplx z, const Vec3& y0, const Vec3& x, const Vec3& y);

}  // namespace minnaert
