#ifndef NITSCHE_MESH_HPP
#define NITSCHE_MESH_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nitsche/point.hpp"

namespace nitsche {

/// A face of a cell that lies on the domain boundary.
///
/// `normal` is the unit outward normal, `diameter` the face diameter h_E
/// (edge length in 2D, longest edge of the triangle in 3D) and `area` the
/// (d-1)-measure of the face.
struct BoundaryFace {
  int cell = -1;
  int local_face = -1;               // index of the opposite cell vertex, 0..d
  std::array<int, 3> vertices{};     // global vertex ids; entry d..2 unused in 2D
  Point normal{};
  double diameter = 0.0;
  double area = 0.0;
};

/// Conforming simplicial mesh of the unit square/cube.
///
/// Cells store d+1 vertex indices with positive orientation. All derived
/// data (volumes, diameters, boundary faces) is computed once at
/// construction; the mesh is immutable afterwards.
struct Mesh {
  int dim = 2;
  int level = 0;        // grid spacing of the generator is 2^-level
  double grading = 1.0; // coordinate map x -> x^grading, 1 = uniform

  std::vector<Point> vertices;
  std::vector<std::array<int, 4>> cells;  // entry dim+1..3 unused in 2D
  std::vector<BoundaryFace> boundary_faces;

  std::vector<double> cell_volumes;
  std::vector<double> cell_diameters;

  int num_cells() const { return static_cast<int>(cells.size()); }
  int num_vertices() const { return static_cast<int>(vertices.size()); }

  std::span<const int> cell_vertices(int c) const {
    return {cells[static_cast<std::size_t>(c)].data(),
            static_cast<std::size_t>(dim + 1)};
  }

  Point cell_centroid(int c) const;
};

struct ValidationReport {
  double min_angle = 0.0;       // radians; interior angles in 2D, dihedral in 3D
  double max_angle = 0.0;
  double volume_sum = 0.0;
  double max_normal_defect = 0.0;        // max | ||n||_2 - 1 |
  Point boundary_closure{};              // sum of area * normal over boundary faces
  double shape_regularity = 0.0;         // max h_T / rho_T
  bool orientation_ok = false;           // all signed volumes positive
  bool face_incidence_ok = false;        // boundary faces in 1 cell, interior in 2
  bool tiling_ok = false;                // |sum of volumes - 1| <= 1e-12
  bool normals_ok = false;               // unit and outward
  bool max_angle_ok = false;             // max angle <= pi/2 + 1e-12
  bool passed = false;
};

/// Builds a structured simplicial mesh of [0,1]^dim at refinement `level`
/// (2^level cells per axis). In 2D each grid square is split along the
/// diagonal from its lower-left to its upper-right corner, so every
/// triangle has maximal interior angle exactly pi/2. In 3D each grid cube
/// is split into 6 tetrahedra sharing the main diagonal; all dihedral
/// angles stay <= pi/2.
///
/// `grading` >= 1 maps each coordinate x -> x^grading before splitting,
/// which concentrates cells toward the origin corner. Configurations whose
/// minimal interior (2D) or dihedral (3D) angle falls below the
/// shape-regularity floor are rejected.
Mesh build_mesh(int dim, int level, double grading = 1.0);

/// Wraps externally supplied vertices/cells in a Mesh and computes all
/// derived data. Intended for single-cell setups in tests and oracles.
Mesh make_mesh(int dim, std::vector<Point> vertices,
               std::vector<std::array<int, 4>> cells);

ValidationReport validate(const Mesh& mesh);

/// (max cell diameter, min cell diameter).
std::pair<double, double> mesh_size(const Mesh& mesh);

/// Writes the mesh as a legacy-ASCII VTK unstructured grid. When
/// `vertex_values` is given (one value per mesh vertex) it is attached as
/// point data named "u".
void write_vtk(const Mesh& mesh, const std::string& path,
               std::span<const double> vertex_values = {});

// Shape-regularity floor applied by build_mesh for graded meshes.
// Chosen to admit every graded configuration exercised by the study
// harness (2D grading 1.5 up to level 7 has min angle ~3.38 deg).
inline constexpr double kMinAngleFloorDegrees = 3.0;

}  // namespace nitsche

#endif
