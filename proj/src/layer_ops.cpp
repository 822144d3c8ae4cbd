#include "minnaert/layer_ops.hpp"

#include <cmath>
#include <omp.h>

#include "minnaert/panel_integrals.hpp"

namespace minnaert {

namespace {

constexpr double kFour = 4.0 * kPi;

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

cplx ipow(int n) {
  static const cplx table[4] = {1.0, kI, -1.0, -kI};
  return table[n % 4];
}

}  // namespace

BoundaryDensity BoundaryOperator::apply(const BoundaryDensity& d) const {
  if (d.space != domain) throw InputError("density role does not match operator domain");
  return {matrix * d.values, codomain};
}

BoundaryOperator compose(const BoundaryOperator& a, const BoundaryOperator& b) {
  if (b.codomain != a.domain) throw InputError("composition of operators with mismatched trace roles");
  if (a.matrix.cols() != b.matrix.rows()) throw InputError("composition of operators with mismatched sizes");
  BoundaryOperator r;
  r.matrix = a.matrix * b.matrix;
  r.domain = b.domain;
  r.codomain = a.codomain;
  r.wavenumber = a.wavenumber;
  r.label = OpLabel::Composite;
  return r;
}

cplx green(cplx z, double r) { return std::exp(kI * z * r) / (kFour * r); }

LayerAssembler::LayerAssembler(SurfaceMesh mesh, Execution exec) : mesh_(std::move(mesh)), exec_(exec) {
  build_nodes();
}

void LayerAssembler::build_nodes() {
  const auto& rule = triangle_rule();
  const std::size_t n = mesh_.size();
  nodes_.resize(n * TriangleRule::size);
  weights_.resize(n * TriangleRule::size);
  for (std::size_t j = 0; j < n; ++j) {
    const Vec3 &a = mesh_.vertex(j, 0), &b = mesh_.vertex(j, 1), &c = mesh_.vertex(j, 2);
    for (int q = 0; q < TriangleRule::size; ++q) {
      const auto& l = rule.bary[q];
      nodes_[j * TriangleRule::size + q] = l[0] * a + l[1] * b + l[2] * c;
      weights_[j * TriangleRule::size + q] = rule.weight[q] * mesh_.panel_area(j);
    }
  }
}

void LayerAssembler::check_wavenumber(cplx z) const {
  if (z.imag() < 0.0) throw InputError("wavenumber must have nonnegative imaginary part");
}

const RMat& LayerAssembler::static_single_layer() const {
  std::call_once(s0_once_, [this] {
    const Eigen::Index n = size();
    s0_.resize(n, n);
#pragma omp parallel for schedule(static) if (exec_ == Execution::Parallel)
    for (Eigen::Index i = 0; i < n; ++i) {
      const Vec3& x = mesh_.centroid(i);
      for (Eigen::Index j = 0; j < n; ++j)
        s0_(i, j) = inv_r_integral(x, mesh_.vertex(j, 0), mesh_.vertex(j, 1), mesh_.vertex(j, 2)) / kFour;
    }
  });
  return s0_;
}

const RMat& LayerAssembler::static_double_layer() const {
  std::call_once(k0_once_, [this] {
    const Eigen::Index n = size();
    k0_.resize(n, n);
#pragma omp parallel for schedule(static) if (exec_ == Execution::Parallel)
    for (Eigen::Index i = 0; i < n; ++i) {
      const Vec3& x = mesh_.centroid(i);
      double off = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;  // flat self panel: ν ⟂ (x - y)
        k0_(i, j) = -solid_angle(x, mesh_.vertex(j, 0), mesh_.vertex(j, 1), mesh_.vertex(j, 2)) / kFour;
        off += k0_(i, j);
      }
      k0_(i, i) = -0.5 - off;
    }
  });
  return k0_;
}

const RMat& LayerAssembler::newton_double_layer() const {
  std::call_once(k2_once_, [this] {
    const Eigen::Index n = size();
    const RMat& s0 = static_single_layer();
    k2_.resize(n, n);
#pragma omp parallel for schedule(static) if (exec_ == Execution::Parallel)
    for (Eigen::Index i = 0; i < n; ++i) {
      const Vec3& x = mesh_.centroid(i);
      for (Eigen::Index j = 0; j < n; ++j) {
        // ν·(x - y) is constant on a flat panel; s0 already carries the 1/(4π)
        const double h = j == i ? 0.0 : mesh_.normal(j).dot(x - mesh_.vertex(j, 0));
        k2_(i, j) = 0.5 * h * s0(i, j);
      }
    }
  });
  return k2_;
}

void LayerAssembler::fill_pair(cplx z, CMat* S, CMat* K) const {
  check_wavenumber(z);
  const Eigen::Index n = size();
  const RMat& s0 = static_single_layer();
  const RMat* k0 = K ? &static_double_layer() : nullptr;
  const RMat* k2 = K ? &newton_double_layer() : nullptr;
  if (S) S->resize(n, n);
  if (K) K->resize(n, n);
  const bool zero = z == cplx(0.0);
  const cplx lin = kI * z / kFour;
  const cplx z2 = z * z;
  constexpr int Q = TriangleRule::size;

#pragma omp parallel for schedule(static) if (exec_ == Execution::Parallel)
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vec3& x = mesh_.centroid(i);
    for (Eigen::Index j = 0; j < n; ++j) {
      cplx srem = 0.0, krem = 0.0;
      if (!zero) {
        const double h = j == i ? 0.0 : mesh_.normal(j).dot(x - mesh_.vertex(j, 0));
        for (int q = 0; q < Q; ++q) {
          const double r = (x - nodes_[j * Q + q]).norm();
          const double w = weights_[j * Q + q];
          cplx es, ek;
          expi_remainders(z * r, S ? &es : nullptr, (K && h != 0.0) ? &ek : nullptr);
          if (S) srem += w * es / r;
          if (K && h != 0.0) krem += w * ek / (r * r * r);
        }
        krem *= h;
      }
      if (S) (*S)(i, j) = s0(i, j) + lin * mesh_.panel_area(j) + srem / kFour;
      if (K) (*K)(i, j) = (*k0)(i, j) + z2 * (*k2)(i, j) + krem / kFour;
    }
  }
}

BoundaryOperator LayerAssembler::single_layer(cplx z) const {
  BoundaryOperator op{CMat(), Space::Neumann, Space::Dirichlet, z, OpLabel::S, 0};
  fill_pair(z, &op.matrix, nullptr);
  return op;
}

BoundaryOperator LayerAssembler::double_layer(cplx z) const {
  BoundaryOperator op{CMat(), Space::Dirichlet, Space::Dirichlet, z, OpLabel::K, 0};
  fill_pair(z, nullptr, &op.matrix);
  return op;
}

std::pair<BoundaryOperator, BoundaryOperator> LayerAssembler::layer_pair(cplx z) const {
  BoundaryOperator s{CMat(), Space::Neumann, Space::Dirichlet, z, OpLabel::S, 0};
  BoundaryOperator k{CMat(), Space::Dirichlet, Space::Dirichlet, z, OpLabel::K, 0};
  fill_pair(z, &s.matrix, &k.matrix);
  return {std::move(s), std::move(k)};
}

BoundaryOperator LayerAssembler::series_S(int n) const {
  if (n < 1 || n > 6) throw InputError("series index for S must be in [1, 6]");
  const Eigen::Index N = size();
  BoundaryOperator op{CMat(N, N), Space::Neumann, Space::Dirichlet, 0.0, OpLabel::Sn, n};
  const cplx coef = ipow(n) / (kFour * factorial(n));
  constexpr int Q = TriangleRule::size;
#pragma omp parallel for schedule(static) if (exec_ == Execution::Parallel)
  for (Eigen::Index i = 0; i < N; ++i) {
    const Vec3& x = mesh_.centroid(i);
    for (Eigen::Index j = 0; j < N; ++j) {
      double acc = 0.0;
      if (n == 1) {
        acc = mesh_.panel_area(j);
      } else {
        for (int q = 0; q < Q; ++q) acc += weights_[j * Q + q] * std::pow((x - nodes_[j * Q + q]).norm(), n - 1);
      }
      op.matrix(i, j) = coef * acc;
    }
  }
  return op;
}

BoundaryOperator LayerAssembler::series_K(int n) const {
  if (n < 2 || n > 6) throw InputError("series index for K must be in [2, 6]");
  const Eigen::Index N = size();
  BoundaryOperator op{CMat(N, N), Space::Dirichlet, Space::Dirichlet, 0.0, OpLabel::Kn, n};
  if (n == 2) {
    op.matrix = newton_double_layer().cast<cplx>();
    return op;
  }
  const cplx coef = -double(n - 1) * ipow(n) / (kFour * factorial(n));
  constexpr int Q = TriangleRule::size;
#pragma omp parallel for schedule(static) if (exec_ == Execution::Parallel)
  for (Eigen::Index i = 0; i < N; ++i) {
    const Vec3& x = mesh_.centroid(i);
    for (Eigen::Index j = 0; j < N; ++j) {
      const double h = j == i ? 0.0 : mesh_.normal(j).dot(x - mesh_.vertex(j, 0));
      double acc = 0.0;
      for (int q = 0; q < Q; ++q) acc += weights_[j * Q + q] * std::pow((x - nodes_[j * Q + q]).norm(), n - 3);
      op.matrix(i, j) = coef * h * acc;
    }
  }
  return op;
}

CVec LayerAssembler::potential(const CVec& density, cplx z, const std::vector<Vec3>& points) const {
  check_wavenumber(z);
  if (density.size() != static_cast<Eigen::Index>(size())) throw InputError("density length does not match panel count");
  const Eigen::Index n = size();
  const Eigen::Index m = static_cast<Eigen::Index>(points.size());
  for (Eigen::Index p = 0; p < m; ++p)
    for (Eigen::Index j = 0; j < n; ++j)
      if ((points[p] - mesh_.centroid(j)).norm() < mesh_.panel_diameter(j))
        throw InputError("evaluation point closer than one panel diameter to the surface");

  CVec out(m);
  const cplx lin = kI * z / kFour;
  constexpr int Q = TriangleRule::size;
#pragma omp parallel for schedule(static) if (exec_ == Execution::Parallel)
  for (Eigen::Index p = 0; p < m; ++p) {
    const Vec3& x = points[p];
    cplx acc = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      cplx v = 0.0;
      if ((x - mesh_.centroid(j)).norm() > 30.0 * mesh_.panel_diameter(j)) {
        for (int q = 0; q < Q; ++q) v += weights_[j * Q + q] * green(z, (x - nodes_[j * Q + q]).norm());
      } else {
        cplx rem = 0.0;
        for (int q = 0; q < Q; ++q) {
          const double r = (x - nodes_[j * Q + q]).norm();
          rem += weights_[j * Q + q] * expi_minus_linear(z * r) / r;
        }
        v = inv_r_integral(x, mesh_.vertex(j, 0), mesh_.vertex(j, 1), mesh_.vertex(j, 2)) / kFour +
            lin * mesh_.panel_area(j) + rem / kFour;
      }
      acc += v * density[j];
    }
    out[p] = acc;
  }
  return out;
}

namespace reference {

namespace {

cplx single_entry(const SurfaceMesh& mesh, std::size_t i, std::size_t j, cplx z) {
  const auto& rule = triangle_rule();
  const Vec3& x = mesh.centroid(i);
  const Vec3 &a = mesh.vertex(j, 0), &b = mesh.vertex(j, 1), &c = mesh.vertex(j, 2);
  cplx v = inv_r_integral(x, a, b, c) / kFour;
  if (z == cplx(0.0)) return v;
  v += kI * z / kFour * mesh.panel_area(j);
  cplx rem = 0.0;
  for (int q = 0; q < TriangleRule::size; ++q) {
    const auto& l = rule.bary[q];
    const double r = (x - (l[0] * a + l[1] * b + l[2] * c)).norm();
    rem += rule.weight[q] * mesh.panel_area(j) * expi_minus_linear(z * r) / r;
  }
  return v + rem / kFour;
}

cplx double_entry_offdiag(const SurfaceMesh& mesh, std::size_t i, std::size_t j, cplx z) {
  const auto& rule = triangle_rule();
  const Vec3& x = mesh.centroid(i);
  const Vec3 &a = mesh.vertex(j, 0), &b = mesh.vertex(j, 1), &c = mesh.vertex(j, 2);
  const double h = mesh.normal(j).dot(x - a);
  cplx v = -solid_angle(x, a, b, c) / kFour;
  v += z * z * 0.5 * h * inv_r_integral(x, a, b, c) / kFour;
  cplx rem = 0.0;
  for (int q = 0; q < TriangleRule::size; ++q) {
    const auto& l = rule.bary[q];
    const double r = (x - (l[0] * a + l[1] * b + l[2] * c)).norm();
    rem += rule.weight[q] * mesh.panel_area(j) * dipole_remainder(z * r) / (r * r * r);
  }
  return v + h * rem / kFour;
}

}  // namespace

CMat single_layer(const SurfaceMesh& mesh, cplx z) {
  const Eigen::Index n = mesh.size();
  CMat S(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) S(i, j) = single_entry(mesh, i, j, z);
  return S;
}

CMat double_layer(const SurfaceMesh& mesh, cplx z) {
  const Eigen::Index n = mesh.size();
  CMat K(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    // static part summed separately so the diagonal matches the Gauss regularization
    double off0 = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      K(i, j) = double_entry_offdiag(mesh, i, j, z);
      const Vec3 &a = mesh.vertex(j, 0), &b = mesh.vertex(j, 1), &c = mesh.vertex(j, 2);
      off0 += -solid_angle(mesh.centroid(i), a, b, c) / kFour;
    }
    K(i, i) = -0.5 - off0;
  }
  return K;
}

}  // namespace reference

}  // namespace minnaert
