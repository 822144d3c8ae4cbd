#include <cmath>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "minnaert/mesh.hpp"

using namespace minnaert;

TEST_CASE("icosphere volume approaches the ball under refinement") {
  const double exact = 4.0 * kPi / 3.0;
  double prev = 1e9;
  for (int sub : {2, 3, 4}) {
    const auto m = make_icosphere(1.0, sub);
    const double err = std::abs(m.volume() - exact) / exact;
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 3e-3);
  const auto m = make_icosphere(1.0, 3);
  CHECK(m.size() == 1280);
  CHECK(m.diameter() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(m.volume_centroid().norm() < 1e-12);
}

TEST_CASE("unit cube moments are exact") {
  const auto m = make_unit_cube();
  CHECK(m.volume() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(m.area() == doctest::Approx(6.0).epsilon(1e-15));
  CHECK(m.diameter() == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
  const auto g = geometric_moments(m);
  CHECK(g.volume == m.volume());
  CHECK((m.volume_centroid() - Vec3(0.5, 0.5, 0.5)).norm() < 1e-15);
}

TEST_CASE("cube file from the data directory") {
  const auto m = load_mesh(std::string(MINNAERT_DATA_DIR) + "/cube.off");
  CHECK(m.size() == 12);
  CHECK(m.volume() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("non-manifold edge is rejected") {
  CHECK_THROWS_AS(load_mesh(std::string(MINNAERT_DATA_DIR) + "/nonmanifold.off"), MeshError);
}

TEST_CASE("orientation errors") {
  auto cube = make_unit_cube();
  auto tris = cube.triangles();
  for (auto& t : tris) std::swap(t[1], t[2]);
  try {
    SurfaceMesh(cube.vertices(), tris);
    FAIL("inverted mesh accepted");
  } catch (const MeshError& e) {
    CHECK(std::string(e.what()).find("inverted") != std::string::npos);
  }
  tris = cube.triangles();
  std::swap(tris[0][1], tris[0][2]);
  CHECK_THROWS_AS(SurfaceMesh(cube.vertices(), tris), MeshError);
  tris = cube.triangles();
  tris[3][0] = 99;
  CHECK_THROWS_AS(SurfaceMesh(cube.vertices(), tris), MeshError);
  // open surface: drop a face
  tris = cube.triangles();
  tris.pop_back();
  CHECK_THROWS_AS(SurfaceMesh(cube.vertices(), tris), MeshError);
}

TEST_CASE("degenerate panel is rejected") {
  std::vector<Vec3> v = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {0, 1, 0}};
  std::vector<std::array<int, 3>> t = {{0, 1, 2}, {0, 2, 3}, {0, 3, 1}, {1, 3, 2}};
  CHECK_THROWS_AS(SurfaceMesh(v, t), MeshError);
}

TEST_CASE("OFF round trip is exact") {
  const auto m = make_ellipsoid({1.0, 1.3, 1.7}, 2);
  const auto back = parse_off(format_off(m));
  REQUIRE(back.size() == m.size());
  for (std::size_t i = 0; i < m.vertices().size(); ++i) CHECK(back.vertices()[i] == m.vertices()[i]);
  CHECK(back.triangles() == m.triangles());
}

TEST_CASE("OFF comments and OBJ input") {
  const auto a = parse_off("OFF # header\n4 4 6\n0 0 0\n1 0 0\n0 1 0\n0 0 1 # apex\n3 0 2 1\n3 0 1 3\n3 0 3 2\n3 1 2 3\n");
  CHECK(a.volume() == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  const auto b = parse_obj("# tet\nv 0 0 0\nv 1 0 0\nv 0 1 0\nv 0 0 1\nf 1 3 2\nf 1/1 2/2 4/4\nf 1//1 4//4 3//3\nf 2 3 4\n");
  CHECK(b.volume() == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK_THROWS_AS(parse_off("OFF\n1 1 0\n0 0 0\n"), MeshError);
}

TEST_CASE("dilation scales moments") {
  const auto m = make_icosphere(1.0, 2);
  const Vec3 c(0.3, -0.2, 0.1);
  const auto d = m.dilated(0.1, c);
  CHECK(d.volume() == doctest::Approx(1e-3 * m.volume()).epsilon(1e-12));
  CHECK(d.area() == doctest::Approx(1e-2 * m.area()).epsilon(1e-12));
  CHECK(d.max_panel_diameter() == doctest::Approx(0.1 * m.max_panel_diameter()).epsilon(1e-12));
  CHECK((d.volume_centroid() - (c + 0.1 * (m.volume_centroid() - c))).norm() < 1e-14);
  const auto t = m.translated({1, 2, 3});
  CHECK(t.volume() == doctest::Approx(m.volume()).epsilon(1e-12));
  CHECK((t.volume_centroid() - Vec3(1, 2, 3)).norm() < 1e-12);
}

TEST_CASE("ellipsoid volume") {
  const auto m = make_ellipsoid({1.0, 1.3, 1.7}, 4);
  const double exact = 4.0 * kPi / 3.0 * 1.0 * 1.3 * 1.7;
  CHECK(std::abs(m.volume() - exact) / exact < 3e-3);
}

TEST_CASE("mesh geometry per panel") {
  const auto m = make_unit_cube();
  double total = 0;
  for (std::size_t t = 0; t < m.size(); ++t) {
    total += m.panel_area(t);
    CHECK(m.normal(t).norm() == doctest::Approx(1.0));
    // outward: normal points away from the cube center
    CHECK(m.normal(t).dot(m.centroid(t) - Vec3(0.5, 0.5, 0.5)) > 0);
  }
  CHECK(total == doctest::Approx(6.0));
  CHECK(m.max_panel_diameter() == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("icosphere basics") {
  const auto m = make_icosphere(1.0, 0);
  CHECK(m.size() == 20);
  for (const auto& v : m.vertices()) CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(make_icosphere(1.0, 8), InputError);
  CHECK_THROWS_AS(make_icosphere(-1.0, 2), InputError);
  // area order of convergence under refinement
  std::vector<double> err;
  for (int sub : {2, 3, 4}) err.push_back(std::abs(make_icosphere(1.0, sub).area() - 4 * kPi));
  CHECK(std::log2(err[0] / err[1]) >= 1.5);
  CHECK(std::log2(err[1] / err[2]) >= 1.5);
  CHECK(std::abs(make_icosphere(1.0, 3).area() - 4 * kPi) / (4 * kPi) < 5e-3);
  const auto r2 = make_icosphere(2.0, 3);
  CHECK(std::abs(r2.volume() - 32 * kPi / 3) / (32 * kPi / 3) < 1e-2);
}

TEST_CASE("translation and scaling") {
  const auto m = make_icosphere(1.0, 2);
  const auto t = m.translated({5, 5, 5});
  CHECK(t.volume() == doctest::Approx(m.volume()).epsilon(1e-12));
  CHECK(t.area() == doctest::Approx(m.area()).epsilon(1e-12));
  CHECK(t.diameter() == doctest::Approx(m.diameter()).epsilon(1e-12));
  CHECK((t.volume_centroid() - Vec3(5, 5, 5)).norm() < 1e-12);
  const double s = 0.3;
  const auto d = m.dilated(s, Vec3::Zero());
  CHECK(d.area() == doctest::Approx(s * s * m.area()).epsilon(1e-13));
  CHECK(d.volume() == doctest::Approx(s * s * s * m.volume()).epsilon(1e-13));
  CHECK(d.diameter() == doctest::Approx(s * m.diameter()).epsilon(1e-13));
}

TEST_CASE("icosphere written as OFF loads back as a valid mesh") {
  const auto m = make_icosphere(1.0, 2);
  const std::string path = (std::filesystem::temp_directory_path() / "minnaert_test_ico2.off").string();
  write_off(m, path);
  const auto back = load_mesh(path);
  CHECK(back.size() == 320);
  CHECK(back.volume() == doctest::Approx(m.volume()).epsilon(1e-15));
}
