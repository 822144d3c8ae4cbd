#include "minnaert/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>

namespace minnaert {

SurfaceMesh::SurfaceMesh(std::vector<Vec3> vertices, std::vector<std::array<int, 3>> triangles)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)) {
  const int nv = static_cast<int>(vertices_.size());
  if (triangles_.empty()) throw MeshError("mesh has no triangles");
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    for (int k : triangles_[t]) {
      if (k < 0 || k >= nv)
        throw MeshError("triangle " + std::to_string(t) + " has vertex index out of range");
    }
  }

  // each undirected edge must be used once in each direction
  std::map<std::pair<int, int>, std::pair<int, int>> edges;  // (lo,hi) -> (#lo->hi, #hi->lo)
  for (const auto& tri : triangles_) {
    for (int k = 0; k < 3; ++k) {
      int a = tri[k], b = tri[(k + 1) % 3];
      if (a == b) throw MeshError("degenerate triangle with repeated vertex " + std::to_string(a));
      auto& e = edges[{std::min(a, b), std::max(a, b)}];
      (a < b ? e.first : e.second) += 1;
    }
  }
  for (const auto& [key, use] : edges) {
    if (use.first + use.second != 2) {
      throw MeshError("non-manifold edge (" + std::to_string(key.first) + "," +
                      std::to_string(key.second) + ") shared by " +
                      std::to_string(use.first + use.second) + " triangles");
    }
    if (use.first != 1) {
      throw MeshError("inconsistent orientation across edge (" + std::to_string(key.first) +
                      "," + std::to_string(key.second) + ")");
    }
  }

  const std::size_t n = triangles_.size();
  centroids_.resize(n);
  normals_.resize(n);
  areas_.resize(n);
  diameters_.resize(n);
  area_vec_.resize(n);
  double vol = 0.0;
  Vec3 moment = Vec3::Zero();
  for (std::size_t t = 0; t < n; ++t) {
    const Vec3& a = vertices_[triangles_[t][0]];
    const Vec3& b = vertices_[triangles_[t][1]];
    const Vec3& c = vertices_[triangles_[t][2]];
    Vec3 cr = (b - a).cross(c - a);
    double twice = cr.norm();
    if (!(twice > 0.0)) throw MeshError("triangle " + std::to_string(t) + " has zero area");
    areas_[t] = 0.5 * twice;
    area_vec_[t] = areas_[t];
    normals_[t] = cr / twice;
    centroids_[t] = (a + b + c) / 3.0;
    diameters_[t] = std::max({(b - a).norm(), (c - b).norm(), (a - c).norm()});
    max_panel_diameter_ = std::max(max_panel_diameter_, diameters_[t]);
    area_ += areas_[t];
    vol += centroids_[t].dot(normals_[t]) * areas_[t] / 3.0;
    double tet = a.dot(b.cross(c)) / 6.0;
    moment += tet * (a + b + c) / 4.0;
  }
  volume_ = vol;
  if (!(volume_ > 0.0)) {
    throw MeshError("inverted orientation: signed volume " + std::to_string(volume_) +
                    " is not positive");
  }
  volume_centroid_ = moment / volume_;

  double d2 = 0.0;
  for (int i = 0; i < nv; ++i)
    for (int j = i + 1; j < nv; ++j) d2 = std::max(d2, (vertices_[i] - vertices_[j]).squaredNorm());
  diameter_ = std::sqrt(d2);
}

SurfaceMesh SurfaceMesh::dilated(double s, const Vec3& center) const {
  if (!(s > 0.0)) throw InputError("dilation factor must be positive");
  std::vector<Vec3> v(vertices_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = center + s * (vertices_[i] - center);
  return SurfaceMesh(std::move(v), triangles_);
}

SurfaceMesh SurfaceMesh::translated(const Vec3& shift) const {
  std::vector<Vec3> v(vertices_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = vertices_[i] + shift;
  return SurfaceMesh(std::move(v), triangles_);
}

Moments geometric_moments(const SurfaceMesh& mesh) {
  return {mesh.area(), mesh.volume(), mesh.diameter()};
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MeshError("cannot open mesh file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// OFF allows '#' comments anywhere.
std::istringstream strip_comments(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto h = line.find('#');
    if (h != std::string::npos) line.resize(h);
    out += line;
    out += '\n';
  }
  return std::istringstream(out);
}

}  // namespace

SurfaceMesh parse_off(const std::string& text) {
  auto in = strip_comments(text);
  std::string magic;
  if (!(in >> magic) || magic != "OFF") throw MeshError("OFF: missing header");
  long nv = 0, nf = 0, ne = 0;
  if (!(in >> nv >> nf >> ne) || nv <= 0 || nf <= 0) throw MeshError("OFF: bad counts line");
  std::vector<Vec3> v(nv);
  for (long i = 0; i < nv; ++i) {
    if (!(in >> v[i].x() >> v[i].y() >> v[i].z()))
      throw MeshError("OFF: cannot parse vertex " + std::to_string(i));
  }
  std::vector<std::array<int, 3>> tri;
  tri.reserve(nf);
  for (long f = 0; f < nf; ++f) {
    int k = 0;
    if (!(in >> k)) throw MeshError("OFF: cannot parse face " + std::to_string(f));
    if (k != 3) throw MeshError("OFF: face " + std::to_string(f) + " is not a triangle");
    std::array<int, 3> t{};
    if (!(in >> t[0] >> t[1] >> t[2])) throw MeshError("OFF: cannot parse face " + std::to_string(f));
    tri.push_back(t);
    std::string rest;
    std::getline(in, rest);  // optional colour
  }
  return SurfaceMesh(std::move(v), std::move(tri));
}

SurfaceMesh parse_obj(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<Vec3> v;
  std::vector<std::array<int, 3>> tri;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto h = line.find('#');
    if (h != std::string::npos) line.resize(h);
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "v") {
      Vec3 p;
      if (!(ls >> p.x() >> p.y() >> p.z()))
        throw MeshError("OBJ: bad vertex on line " + std::to_string(lineno));
      v.push_back(p);
    } else if (tag == "f") {
      std::vector<int> idx;
      std::string tok;
      while (ls >> tok) {
        // "i", "i/t", "i//n", "i/t/n"
        int k = std::stoi(tok.substr(0, tok.find('/')));
        if (k < 0) k = static_cast<int>(v.size()) + k + 1;
        idx.push_back(k - 1);
      }
      if (idx.size() != 3)
        throw MeshError("OBJ: face on line " + std::to_string(lineno) + " is not a triangle");
      tri.push_back({idx[0], idx[1], idx[2]});
    }
  }
  return SurfaceMesh(std::move(v), std::move(tri));
}

SurfaceMesh load_mesh(const std::string& path, MeshFormat format) {
  std::string text = read_file(path);
  return format == MeshFormat::Off ? parse_off(text) : parse_obj(text);
}

SurfaceMesh load_mesh(const std::string& path) {
  auto dot = path.rfind('.');
  std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == "off") return load_mesh(path, MeshFormat::Off);
  if (ext == "obj") return load_mesh(path, MeshFormat::Obj);
  throw MeshError("unknown mesh extension for " + path);
}

std::string format_off(const SurfaceMesh& mesh) {
  std::string out = "OFF\n" + std::to_string(mesh.vertices().size()) + " " +
                    std::to_string(mesh.size()) + " 0\n";
  char buf[96];
  for (const auto& p : mesh.vertices()) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", p.x(), p.y(), p.z());
    out += buf;
  }
  for (const auto& t : mesh.triangles()) {
    std::snprintf(buf, sizeof buf, "3 %d %d %d\n", t[0], t[1], t[2]);
    out += buf;
  }
  return out;
}

void write_off(const SurfaceMesh& mesh, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw MeshError("cannot write " + path);
  out << format_off(mesh);
}

SurfaceMesh make_icosphere(double radius, int subdivisions) {
  if (!(radius > 0.0)) throw InputError("icosphere radius must be positive");
  if (subdivisions < 0 || subdivisions > 7)
    throw InputError("icosphere subdivisions must be in [0, 7], got " + std::to_string(subdivisions));

  const double p = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> v = {{-1, p, 0}, {1, p, 0}, {-1, -p, 0}, {1, -p, 0},
                         {0, -1, p}, {0, 1, p}, {0, -1, -p}, {0, 1, -p},
                         {p, 0, -1}, {p, 0, 1}, {-p, 0, -1}, {-p, 0, 1}};
  for (auto& x : v) x.normalize();
  std::vector<std::array<int, 3>> f = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
      {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
      {3, 8, 9},  {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};

  for (int s = 0; s < subdivisions; ++s) {
    std::map<std::pair<int, int>, int> mid;
    auto midpoint = [&](int a, int b) {
      auto key = std::make_pair(std::min(a, b), std::max(a, b));
      auto it = mid.find(key);
      if (it != mid.end()) return it->second;
      v.push_back((v[a] + v[b]).normalized());
      int id = static_cast<int>(v.size()) - 1;
      mid.emplace(key, id);
      return id;
    };
    std::vector<std::array<int, 3>> g;
    g.reserve(4 * f.size());
    for (const auto& t : f) {
      int ab = midpoint(t[0], t[1]), bc = midpoint(t[1], t[2]), ca = midpoint(t[2], t[0]);
      g.push_back({t[0], ab, ca});
      g.push_back({t[1], bc, ab});
      g.push_back({t[2], ca, bc});
      g.push_back({ab, bc, ca});
    }
    f = std::move(g);
  }
  for (auto& x : v) x *= radius;
  return SurfaceMesh(std::move(v), std::move(f));
}

SurfaceMesh make_ellipsoid(const Vec3& semi_axes, int subdivisions) {
  if (!(semi_axes.minCoeff() > 0.0)) throw InputError("ellipsoid semi-axes must be positive");
  SurfaceMesh s = make_icosphere(1.0, subdivisions);
  std::vector<Vec3> v = s.vertices();
  for (auto& x : v) x = x.cwiseProduct(semi_axes);
  return SurfaceMesh(std::move(v), s.triangles());
}

SurfaceMesh make_unit_cube() {
  std::vector<Vec3> v = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
                         {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};
  std::vector<std::array<int, 3>> f = {{0, 2, 1}, {0, 3, 2}, {4, 5, 6}, {4, 6, 7},
                                       {0, 1, 5}, {0, 5, 4}, {1, 2, 6}, {1, 6, 5},
                                       {2, 3, 7}, {2, 7, 6}, {3, 0, 4}, {3, 4, 7}};
  return SurfaceMesh(std::move(v), std::move(f));
}

}  // namespace minnaert
