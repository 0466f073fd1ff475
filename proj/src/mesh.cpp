#include "nitsche/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>

namespace nitsche {

namespace {

double signed_volume(const Mesh& mesh, int c) {
  const auto cv = mesh.cell_vertices(c);
  const Point& a = mesh.vertices[static_cast<std::size_t>(cv[0])];
  if (mesh.dim == 2) {
    const Point u = mesh.vertices[static_cast<std::size_t>(cv[1])] - a;
    const Point v = mesh.vertices[static_cast<std::size_t>(cv[2])] - a;
    return 0.5 * (u[0] * v[1] - u[1] * v[0]);
  }
  const Point u = mesh.vertices[static_cast<std::size_t>(cv[1])] - a;
  const Point v = mesh.vertices[static_cast<std::size_t>(cv[2])] - a;
  const Point w = mesh.vertices[static_cast<std::size_t>(cv[3])] - a;
  return dot(u, cross(v, w)) / 6.0;
}

double cell_diameter(const Mesh& mesh, int c) {
  const auto cv = mesh.cell_vertices(c);
  double d = 0.0;
  for (std::size_t i = 0; i < cv.size(); ++i) {
    for (std::size_t j = i + 1; j < cv.size(); ++j) {
      d = std::max(d, distance(mesh.vertices[static_cast<std::size_t>(cv[i])],
                               mesh.vertices[static_cast<std::size_t>(cv[j])]));
    }
  }
  return d;
}

// Interior angles of triangle cell c (2D).
std::array<double, 3> triangle_angles(const Mesh& mesh, int c) {
  const auto cv = mesh.cell_vertices(c);
  std::array<double, 3> angles{};
  for (int i = 0; i < 3; ++i) {
    const Point& p = mesh.vertices[static_cast<std::size_t>(cv[i])];
    const Point u = mesh.vertices[static_cast<std::size_t>(cv[(i + 1) % 3])] - p;
    const Point v = mesh.vertices[static_cast<std::size_t>(cv[(i + 2) % 3])] - p;
    const double cosang = dot(u, v) / (norm(u) * norm(v));
    angles[static_cast<std::size_t>(i)] =
        std::acos(std::clamp(cosang, -1.0, 1.0));
  }
  return angles;
}

// Dihedral angles (6 per tet) of cell c (3D), measured between faces along
// their shared edge.
std::array<double, 6> tet_dihedral_angles(const Mesh& mesh, int c) {
  const auto cv = mesh.cell_vertices(c);
  std::array<Point, 4> p;
  for (int i = 0; i < 4; ++i) {
    p[static_cast<std::size_t>(i)] = mesh.vertices[static_cast<std::size_t>(cv[i])];
  }
  // Outward normal of the face opposite vertex f.
  auto face_normal = [&](int f) {
    const std::array<int, 3> idx = {(f + 1) % 4, (f + 2) % 4, (f + 3) % 4};
    Point n = cross(p[static_cast<std::size_t>(idx[1])] - p[static_cast<std::size_t>(idx[0])],
                    p[static_cast<std::size_t>(idx[2])] - p[static_cast<std::size_t>(idx[0])]);
    // Orient away from the opposite vertex.
    const Point to_opp = p[static_cast<std::size_t>(f)] - p[static_cast<std::size_t>(idx[0])];
    if (dot(n, to_opp) > 0.0) n = -1.0 * n;
    const double len = norm(n);
    return (1.0 / len) * n;
  };
  std::array<Point, 4> n;
  for (int f = 0; f < 4; ++f) n[static_cast<std::size_t>(f)] = face_normal(f);
  std::array<double, 6> angles{};
  int k = 0;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      const double c_ij = std::clamp(-dot(n[static_cast<std::size_t>(i)],
                                          n[static_cast<std::size_t>(j)]),
                                     -1.0, 1.0);
      angles[static_cast<std::size_t>(k++)] = std::acos(c_ij);
    }
  }
  return angles;
}

double inradius(const Mesh& mesh, int c) {
  const auto cv = mesh.cell_vertices(c);
  if (mesh.dim == 2) {
    const Point& a = mesh.vertices[static_cast<std::size_t>(cv[0])];
    const Point& b = mesh.vertices[static_cast<std::size_t>(cv[1])];
    const Point& d = mesh.vertices[static_cast<std::size_t>(cv[2])];
    const double per = distance(a, b) + distance(b, d) + distance(d, a);
    return 2.0 * mesh.cell_volumes[static_cast<std::size_t>(c)] / per;
  }
  double surf = 0.0;
  for (int f = 0; f < 4; ++f) {
    const std::array<int, 3> idx = {(f + 1) % 4, (f + 2) % 4, (f + 3) % 4};
    const Point& a = mesh.vertices[static_cast<std::size_t>(cv[idx[0]])];
    const Point& b = mesh.vertices[static_cast<std::size_t>(cv[idx[1]])];
    const Point& d = mesh.vertices[static_cast<std::size_t>(cv[idx[2]])];
    surf += 0.5 * norm(cross(b - a, d - a));
  }
  return 3.0 * mesh.cell_volumes[static_cast<std::size_t>(c)] / surf;
}

// Sorted vertex tuple identifying a face.
using FaceKey = std::array<int, 3>;

FaceKey face_key(const Mesh& mesh, int c, int local_face) {
  const auto cv = mesh.cell_vertices(c);
  FaceKey key = {-1, -1, -1};
  int k = 0;
  for (int i = 0; i <= mesh.dim; ++i) {
    if (i != local_face) key[static_cast<std::size_t>(k++)] = cv[i];
  }
  std::sort(key.begin(), key.begin() + mesh.dim);
  return key;
}

// Populates cell_volumes, cell_diameters and boundary_faces; checks
// orientation. Throws on inverted cells.
void finalize_mesh(Mesh& mesh) {
  const int nc = mesh.num_cells();
  mesh.cell_volumes.resize(static_cast<std::size_t>(nc));
  mesh.cell_diameters.resize(static_cast<std::size_t>(nc));
  for (int c = 0; c < nc; ++c) {
    const double vol = signed_volume(mesh, c);
    if (!(vol > 0.0)) {
      throw std::runtime_error("mesh: cell " + std::to_string(c) +
                               " has non-positive volume");
    }
    mesh.cell_volumes[static_cast<std::size_t>(c)] = vol;
    mesh.cell_diameters[static_cast<std::size_t>(c)] = cell_diameter(mesh, c);
  }

  // Face incidence: boundary faces appear in exactly one cell.
  std::map<FaceKey, std::pair<int, int>> first_owner;  // key -> (cell, local_face)
  std::map<FaceKey, int> counts;
  for (int c = 0; c < nc; ++c) {
    for (int f = 0; f <= mesh.dim; ++f) {
      const FaceKey key = face_key(mesh, c, f);
      auto [it, inserted] = counts.emplace(key, 1);
      if (inserted) {
        first_owner[key] = {c, f};
      } else {
        ++it->second;
      }
    }
  }

  mesh.boundary_faces.clear();
  // Deterministic order: ascending (cell, local_face).
  std::vector<std::pair<int, int>> boundary;
  for (const auto& [key, cnt] : counts) {
    if (cnt == 1) boundary.push_back(first_owner[key]);
  }
  std::sort(boundary.begin(), boundary.end());

  for (const auto& [c, f] : boundary) {
    BoundaryFace bf;
    bf.cell = c;
    bf.local_face = f;
    const auto cv = mesh.cell_vertices(c);
    int k = 0;
    for (int i = 0; i <= mesh.dim; ++i) {
      if (i != f) bf.vertices[static_cast<std::size_t>(k++)] = cv[i];
    }
    const Point& a = mesh.vertices[static_cast<std::size_t>(bf.vertices[0])];
    const Point& b = mesh.vertices[static_cast<std::size_t>(bf.vertices[1])];
    Point n{};
    Point face_centroid{};
    if (mesh.dim == 2) {
      const Point t = b - a;
      n = {t[1], -t[0], 0.0};
      bf.area = norm(t);
      bf.diameter = bf.area;
      face_centroid = 0.5 * (a + b);
    } else {
      const Point& d = mesh.vertices[static_cast<std::size_t>(bf.vertices[2])];
      n = cross(b - a, d - a);
      bf.area = 0.5 * norm(n);
      bf.diameter = std::max({distance(a, b), distance(b, d), distance(d, a)});
      face_centroid = (1.0 / 3.0) * (a + b + d);
    }
    const double len = norm(n);
    n = (1.0 / len) * n;
    if (dot(n, face_centroid - mesh.cell_centroid(c)) < 0.0) n = -1.0 * n;
    bf.normal = n;
    mesh.boundary_faces.push_back(bf);
  }
}

double min_mesh_angle(const Mesh& mesh) {
  double amin = std::numeric_limits<double>::max();
  for (int c = 0; c < mesh.num_cells(); ++c) {
    if (mesh.dim == 2) {
      for (double a : triangle_angles(mesh, c)) amin = std::min(amin, a);
    } else {
      for (double a : tet_dihedral_angles(mesh, c)) amin = std::min(amin, a);
    }
  }
  return amin;
}

}  // namespace

Point Mesh::cell_centroid(int c) const {
  const auto cv = cell_vertices(c);
  Point s{};
  for (int v : cv) s = s + vertices[static_cast<std::size_t>(v)];
  return (1.0 / static_cast<double>(dim + 1)) * s;
}

Mesh build_mesh(int dim, int level, double grading) {
  if (dim != 2 && dim != 3) {
    throw std::invalid_argument("build_mesh: dim must be 2 or 3");
  }
  if (level < 0) {
    throw std::invalid_argument("build_mesh: level must be >= 0");
  }
  if (!(grading >= 1.0)) {
    throw std::invalid_argument("build_mesh: grading must be >= 1");
  }
  if (level >= 62) {
    throw std::invalid_argument("build_mesh: level out of range");
  }
  const std::int64_t n64 = std::int64_t{1} << level;
  std::int64_t nv64 = 1;
  for (int i = 0; i < dim; ++i) nv64 *= (n64 + 1);
  if (nv64 > std::numeric_limits<int>::max()) {
    throw std::invalid_argument(
        "build_mesh: vertex count overflows 32-bit indices at level " +
        std::to_string(level));
  }
  const int n = static_cast<int>(n64);

  Mesh mesh;
  mesh.dim = dim;
  mesh.level = level;
  mesh.grading = grading;

  // Graded coordinate of lattice index i: (i/n)^grading. Exact at 0 and 1,
  // and exact dyadic for grading == 1.
  auto coord = [&](int i) {
    const double t = static_cast<double>(i) / static_cast<double>(n);
    return grading == 1.0 ? t : std::pow(t, grading);
  };

  if (dim == 2) {
    const int m = n + 1;
    mesh.vertices.resize(static_cast<std::size_t>(m) * static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) {
      for (int i = 0; i < m; ++i) {
        mesh.vertices[static_cast<std::size_t>(j * m + i)] = {coord(i), coord(j), 0.0};
      }
    }
    auto vid = [m](int i, int j) { return j * m + i; };
    mesh.cells.reserve(static_cast<std::size_t>(2) * static_cast<std::size_t>(n) *
                       static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        // Split along the diagonal (i,j) -> (i+1,j+1).
        mesh.cells.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), -1});
        mesh.cells.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1), -1});
      }
    }
  } else {
    const int m = n + 1;
    mesh.vertices.resize(static_cast<std::size_t>(m) * static_cast<std::size_t>(m) *
                         static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) {
      for (int j = 0; j < m; ++j) {
        for (int i = 0; i < m; ++i) {
          mesh.vertices[static_cast<std::size_t>((k * m + j) * m + i)] = {
              coord(i), coord(j), coord(k)};
        }
      }
    }
    auto vid = [m](int i, int j, int k) { return (k * m + j) * m + i; };
    // Kuhn split: one tet per permutation of the axis steps, all sharing
    // the cube's main diagonal.
    static constexpr int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                        {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    mesh.cells.reserve(static_cast<std::size_t>(6) * static_cast<std::size_t>(n) *
                       static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
      for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
          for (const auto& perm : perms) {
            std::array<int, 3> pos = {i, j, k};
            std::array<int, 4> tet{};
            tet[0] = vid(pos[0], pos[1], pos[2]);
            for (int s = 0; s < 3; ++s) {
              ++pos[static_cast<std::size_t>(perm[s])];
              tet[static_cast<std::size_t>(s + 1)] = vid(pos[0], pos[1], pos[2]);
            }
            // Permutation parity decides orientation; swap to keep the
            // signed volume positive.
            const bool even = (perm[1] == (perm[0] + 1) % 3);
            if (!even) std::swap(tet[1], tet[2]);
            mesh.cells.push_back(tet);
          }
        }
      }
    }
  }

  finalize_mesh(mesh);

  if (grading > 1.0) {
    const double floor_rad = kMinAngleFloorDegrees * std::numbers::pi / 180.0;
    const double amin = min_mesh_angle(mesh);
    if (amin < floor_rad) {
      throw std::invalid_argument(
          "build_mesh: grading " + std::to_string(grading) + " at level " +
          std::to_string(level) + " drops the minimal angle below the floor");
    }
  }
  return mesh;
}

Mesh make_mesh(int dim, std::vector<Point> vertices,
               std::vector<std::array<int, 4>> cells) {
  if (dim != 2 && dim != 3) {
    throw std::invalid_argument("make_mesh: dim must be 2 or 3");
  }
  Mesh mesh;
  mesh.dim = dim;
  mesh.level = 0;
  mesh.grading = 1.0;
  mesh.vertices = std::move(vertices);
  mesh.cells = std::move(cells);
  finalize_mesh(mesh);
  return mesh;
}

ValidationReport validate(const Mesh& mesh) {
  ValidationReport rep;

  rep.orientation_ok = true;
  CompensatedSum vol_sum;
  double shape = 0.0;
  double amin = std::numeric_limits<double>::max();
  double amax = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const double vol = signed_volume(mesh, c);
    if (!(vol > 0.0)) rep.orientation_ok = false;
    vol_sum.add(vol);
    shape = std::max(shape, mesh.cell_diameters[static_cast<std::size_t>(c)] /
                                inradius(mesh, c));
    if (mesh.dim == 2) {
      for (double a : triangle_angles(mesh, c)) {
        amin = std::min(amin, a);
        amax = std::max(amax, a);
      }
    } else {
      for (double a : tet_dihedral_angles(mesh, c)) {
        amin = std::min(amin, a);
        amax = std::max(amax, a);
      }
    }
  }
  rep.volume_sum = vol_sum.value();
  rep.shape_regularity = shape;
  rep.min_angle = amin;
  rep.max_angle = amax;
  rep.tiling_ok = std::abs(rep.volume_sum - 1.0) <= 1e-12;
  rep.max_angle_ok = amax <= std::numbers::pi / 2.0 + 1e-12;

  // Face incidence recomputed from scratch.
  std::map<FaceKey, int> counts;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    for (int f = 0; f <= mesh.dim; ++f) ++counts[face_key(mesh, c, f)];
  }
  rep.face_incidence_ok = true;
  int boundary_count = 0;
  for (const auto& [key, cnt] : counts) {
    if (cnt == 1) {
      ++boundary_count;
    } else if (cnt != 2) {
      rep.face_incidence_ok = false;
    }
  }
  if (boundary_count != static_cast<int>(mesh.boundary_faces.size())) {
    rep.face_incidence_ok = false;
  }

  rep.normals_ok = true;
  CompensatedSum closure[3];
  for (const BoundaryFace& bf : mesh.boundary_faces) {
    const double defect = std::abs(norm(bf.normal) - 1.0);
    rep.max_normal_defect = std::max(rep.max_normal_defect, defect);
    if (defect > 1e-14) rep.normals_ok = false;
    Point fc{};
    const int nfv = mesh.dim;
    for (int i = 0; i < nfv; ++i) {
      fc = fc + mesh.vertices[static_cast<std::size_t>(bf.vertices[static_cast<std::size_t>(i)])];
    }
    fc = (1.0 / nfv) * fc;
    if (dot(bf.normal, fc - mesh.cell_centroid(bf.cell)) <= 0.0) {
      rep.normals_ok = false;
    }
    for (int i = 0; i < 3; ++i) closure[i].add(bf.area * bf.normal[static_cast<std::size_t>(i)]);
  }
  rep.boundary_closure = {closure[0].value(), closure[1].value(), closure[2].value()};

  const double closure_norm = norm(rep.boundary_closure);
  rep.passed = rep.orientation_ok && rep.face_incidence_ok && rep.tiling_ok &&
               rep.normals_ok && rep.max_angle_ok && closure_norm <= 1e-12;
  return rep;
}

std::pair<double, double> mesh_size(const Mesh& mesh) {
  if (mesh.cells.empty()) {
    throw std::invalid_argument("mesh_size: empty mesh");
  }
  double hmax = 0.0;
  double hmin = std::numeric_limits<double>::max();
  for (double d : mesh.cell_diameters) {
    hmax = std::max(hmax, d);
    hmin = std::min(hmin, d);
  }
  return {hmax, hmin};
}

void write_vtk(const Mesh& mesh, const std::string& path,
               std::span<const double> vertex_values) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("write_vtk: cannot open " + path);
  }
  out << "# vtk DataFile Version 3.0\n";
  out << "nitsche mesh level " << mesh.level << "\n";
  out << "ASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.num_vertices() << " double\n";
  out.precision(17);
  for (const Point& p : mesh.vertices) {
    out << p[0] << " " << p[1] << " " << p[2] << "\n";
  }
  const int npc = mesh.dim + 1;
  out << "CELLS " << mesh.num_cells() << " "
      << static_cast<std::int64_t>(mesh.num_cells()) * (npc + 1) << "\n";
  for (int c = 0; c < mesh.num_cells(); ++c) {
    out << npc;
    for (int v : mesh.cell_vertices(c)) out << " " << v;
    out << "\n";
  }
  out << "CELL_TYPES " << mesh.num_cells() << "\n";
  const int vtk_type = mesh.dim == 2 ? 5 : 10;  // triangle / tetra
  for (int c = 0; c < mesh.num_cells(); ++c) out << vtk_type << "\n";
  if (!vertex_values.empty()) {
    if (vertex_values.size() != static_cast<std::size_t>(mesh.num_vertices())) {
      throw std::invalid_argument("write_vtk: one value per vertex required");
    }
    out << "POINT_DATA " << mesh.num_vertices() << "\n";
    out << "SCALARS u double 1\nLOOKUP_TABLE default\n";
    for (double v : vertex_values) out << v << "\n";
  }
  if (!out) {
    throw std::runtime_error("write_vtk: write failed for " + path);
  }
}

}  // namespace nitsche
