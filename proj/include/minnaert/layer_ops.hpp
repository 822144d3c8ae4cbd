#pragma once

#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "minnaert/mesh.hpp"

namespace minnaert {

// Trace-space role of a density: Dirichlet data (H^{1/2}-like) or flux data (H^{-1/2}-like).
enum class Space { Dirichlet, Neumann };

enum class OpLabel { S, K, Sn, Kn, DN, P0, Q0, Lambda, Composite };

struct BoundaryDensity {
  CVec values;
  Space space = Space::Dirichlet;
};

struct BoundaryOperator {
  CMat matrix;
  Space domain = Space::Dirichlet;
  Space codomain = Space::Dirichlet;
  cplx wavenumber = 0.0;
  OpLabel label = OpLabel::Composite;
  int order = 0;  // series index for Sn/Kn

  Eigen::Index size() const { return matrix.rows(); }
  BoundaryDensity apply(const BoundaryDensity& d) const;
};

// a∘b; throws InputError when b's codomain is not a's domain.
BoundaryOperator compose(const BoundaryOperator& a, const BoundaryOperator& b);

// Free-space kernel e^{iz|x|}/(4π|x|).
cplx green(cplx z, double r);

enum class Execution { Serial, Parallel };

// Collocation at panel centroids with piecewise-constant densities.
// Static (z = 0) parts are integrated in closed form; z-dependent remainders
// use the 6-point rule on every panel. Row-parallel with OpenMP.
class LayerAssembler {
 public:
  explicit LayerAssembler(SurfaceMesh mesh, Execution exec = Execution::Parallel);

  const SurfaceMesh& mesh() const { return mesh_; }
  std::size_t size() const { return mesh_.size(); }
  Execution execution() const { return exec_; }

  // z = 0 tables, built on first use.
  const RMat& static_single_layer() const;
  // Diagonal regularized so that each row sum equals -1/2.
  const RMat& static_double_layer() const;
  // Entries of K_(2), real.
  const RMat& newton_double_layer() const;

  BoundaryOperator single_layer(cplx z) const;
  BoundaryOperator double_layer(cplx z) const;
  // S_z and K_z from one pass over the quadrature nodes.
  std::pair<BoundaryOperator, BoundaryOperator> layer_pair(cplx z) const;

  // n in [1, 6].
  BoundaryOperator series_S(int n) const;
  // n in [2, 6].
  BoundaryOperator series_K(int n) const;

  // Single layer potential of a flux density at off-surface points. Throws
  // InputError when a point is closer than one panel diameter to a centroid.
  CVec potential(const CVec& density, cplx z, const std::vector<Vec3>& points) const;

 private:
  void build_nodes();
  void check_wavenumber(cplx z) const;
  void fill_pair(cplx z, CMat* S, CMat* K) const;

  SurfaceMesh mesh_;
  Execution exec_;
  std::vector<Vec3> nodes_;      // 6 per panel
  std::vector<double> weights_;  // rule weight times panel area

  mutable std::once_flag s0_once_, k0_once_, k2_once_;
  mutable RMat s0_, k0_, k2_;
};

namespace reference {
// Plain serial entry-by-entry assembly, kept as the test reference for LayerAssembler.
CMat single_layer(const SurfaceMesh& mesh, cplx z);
CMat double_layer(const SurfaceMesh& mesh, cplx z);
}  // namespace reference

}  // namespace minnaert
