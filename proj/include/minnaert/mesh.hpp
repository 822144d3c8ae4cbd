#pragma once

#include <array>
#include <string>
#include <vector>

#include "minnaert/types.hpp"

namespace minnaert {

class MeshError : public InputError {
 public:
  using InputError::InputError;
};

// Closed triangulated surface with flat panels. Triangles are counter-clockwise
// seen from outside. Immutable after construction.
class SurfaceMesh {
 public:
  SurfaceMesh() = default;
  // Validates manifoldness, panel areas and outward orientation; throws MeshError.
  SurfaceMesh(std::vector<Vec3> vertices, std::vector<std::array<int, 3>> triangles);

  std::size_t size() const { return triangles_.size(); }
  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }

  const Vec3& vertex(int t, int k) const { return vertices_[triangles_[t][k]]; }
  const Vec3& centroid(std::size_t t) const { return centroids_[t]; }
  const Vec3& normal(std::size_t t) const { return normals_[t]; }
  double panel_area(std::size_t t) const { return areas_[t]; }
  // Longest edge of panel t.
  double panel_diameter(std::size_t t) const { return diameters_[t]; }
  const RVec& areas() const { return area_vec_; }

  double area() const { return area_; }
  double volume() const { return volume_; }
  double diameter() const { return diameter_; }
  double max_panel_diameter() const { return max_panel_diameter_; }
  // Centroid of the enclosed solid.
  const Vec3& volume_centroid() const { return volume_centroid_; }

  // y -> center + s (y - center), panel order preserved.
  SurfaceMesh dilated(double s, const Vec3& center) const;
  SurfaceMesh translated(const Vec3& shift) const;

 private:
  std::vector<Vec3> vertices_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<Vec3> centroids_, normals_;
  std::vector<double> areas_, diameters_;
  RVec area_vec_;
  double area_ = 0, volume_ = 0, diameter_ = 0, max_panel_diameter_ = 0;
  Vec3 volume_centroid_ = Vec3::Zero();
};

struct Moments {
  double area, volume, diameter;
};

Moments geometric_moments(const SurfaceMesh& mesh);

enum class MeshFormat { Off, Obj };

SurfaceMesh load_mesh(const std::string& path, MeshFormat format);
// Picks the format from the file extension.
SurfaceMesh load_mesh(const std::string& path);
SurfaceMesh parse_off(const std::string& text);
SurfaceMesh parse_obj(const std::string& text);
void write_off(const SurfaceMesh& mesh, const std::string& path);
std::string format_off(const SurfaceMesh& mesh);

// Subdivided icosahedron projected on the sphere of given radius about the origin.
SurfaceMesh make_icosphere(double radius, int subdivisions);
// Icosphere with vertex coordinates scaled by the semi-axes.
SurfaceMesh make_ellipsoid(const Vec3& semi_axes, int subdivisions);
// Unit cube [0,1]^3 with 12 triangles.
SurfaceMesh make_unit_cube();

}  // namespace minnaert
