#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>

#include "nitsche/mesh.hpp"

using namespace nitsche;

TEST_CASE("uniform level-1 meshes have the expected entity counts") {
  const Mesh m2 = build_mesh(2, 1, 1.0);
  CHECK(m2.num_vertices() == 9);
  CHECK(m2.num_cells() == 8);
  CHECK(m2.boundary_faces.size() == 8);

  const Mesh m3 = build_mesh(3, 1, 1.0);
  CHECK(m3.num_vertices() == 27);
  CHECK(m3.num_cells() == 48);
  CHECK(m3.boundary_faces.size() == 48);
}

TEST_CASE("graded mesh tiles the unit square exactly") {
  const Mesh mesh = build_mesh(2, 2, 1.5);
  const ValidationReport rep = validate(mesh);
  CHECK(std::abs(rep.volume_sum - 1.0) <= 1e-12);
  CHECK(rep.min_angle >= kMinAngleFloorDegrees * std::numbers::pi / 180.0);
  CHECK(rep.passed);
}

TEST_CASE("uniform 2D meshes have maximal interior angle exactly pi/2") {
  for (int level : {1, 2, 3}) {
    const ValidationReport rep = validate(build_mesh(2, level, 1.0));
    CHECK(rep.max_angle == std::numbers::pi / 2.0);
    CHECK(rep.passed);
  }
  // The right angle survives grading: cells stay axis-aligned rectangles.
  const ValidationReport graded = validate(build_mesh(2, 3, 1.5));
  CHECK(graded.max_angle == std::numbers::pi / 2.0);
}

TEST_CASE("3D dihedral angles never exceed pi/2") {
  for (double grading : {1.0, 1.5}) {
    const ValidationReport rep = validate(build_mesh(3, 1, grading));
    CHECK(rep.max_angle <= std::numbers::pi / 2.0 + 1e-12);
    CHECK(rep.passed);
  }
}

TEST_CASE("boundary closure: sum of area-weighted normals vanishes") {
  for (int dim : {2, 3}) {
    for (double grading : {1.0, 1.7}) {
      const Mesh mesh = build_mesh(dim, 2, grading);
      const ValidationReport rep = validate(mesh);
      CHECK(norm(rep.boundary_closure) <= 1e-12);
      CHECK(rep.max_normal_defect <= 1e-14);
    }
  }
}

TEST_CASE("mesh size halves exactly per refinement level") {
  for (int dim : {2, 3}) {
    double prev = mesh_size(build_mesh(dim, 1, 1.0)).first;
    for (int level = 2; level <= 4; ++level) {
      const double h = mesh_size(build_mesh(dim, level, 1.0)).first;
      CHECK(h == prev / 2.0);
      prev = h;
    }
  }
  CHECK(mesh_size(build_mesh(2, 1, 1.0)).first ==
        doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-15));
  CHECK(mesh_size(build_mesh(3, 1, 1.0)).first ==
        doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-15));
}

TEST_CASE("graded h_min matches direct cell enumeration") {
  const Mesh mesh = build_mesh(2, 2, 2.0);
  double hmin = 1e300;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto cv = mesh.cell_vertices(c);
    double d = 0.0;
    for (std::size_t i = 0; i < cv.size(); ++i) {
      for (std::size_t j = i + 1; j < cv.size(); ++j) {
        d = std::max(d, distance(mesh.vertices[static_cast<std::size_t>(cv[i])],
                                 mesh.vertices[static_cast<std::size_t>(cv[j])]));
      }
    }
    hmin = std::min(hmin, d);
  }
  CHECK(mesh_size(mesh).second == doctest::Approx(hmin).epsilon(1e-15));
}

TEST_CASE("boundary vertices carry an exact 0 or 1 coordinate") {
  for (int dim : {2, 3}) {
    const Mesh mesh = build_mesh(dim, 2, 1.3);
    for (const BoundaryFace& bf : mesh.boundary_faces) {
      for (int i = 0; i < dim; ++i) {
        const Point& v = mesh.vertices[static_cast<std::size_t>(
            bf.vertices[static_cast<std::size_t>(i)])];
        bool exact = false;
        for (int d = 0; d < dim; ++d) {
          if (v[static_cast<std::size_t>(d)] == 0.0 ||
              v[static_cast<std::size_t>(d)] == 1.0) {
            exact = true;
          }
        }
        CHECK(exact);
      }
    }
  }
}

TEST_CASE("boundary faces store per-face diameters") {
  const Mesh mesh = build_mesh(2, 3, 1.0);
  for (const BoundaryFace& bf : mesh.boundary_faces) {
    CHECK(bf.diameter == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(bf.area == doctest::Approx(0.125).epsilon(1e-15));
  }
}

TEST_CASE("invalid generator arguments are rejected") {
  CHECK_THROWS_AS(build_mesh(4, 1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(build_mesh(2, -1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(build_mesh(2, 1, 0.5), std::invalid_argument);
  // Vertex count overflow of the 32-bit index type.
  CHECK_THROWS_AS(build_mesh(2, 16, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(build_mesh(3, 11, 1.0), std::invalid_argument);
  // Grading strong enough to break the min-angle floor.
  CHECK_THROWS_AS(build_mesh(2, 6, 3.0), std::invalid_argument);
}

TEST_CASE("3D grading keeps tetrahedra non-obtuse until the floor rejects") {
  // Axis-aligned box splits stay path simplices, so dihedral angles never
  // exceed pi/2 for any grading; very strong grading trips the min-angle
  // floor instead.
  const Mesh mild = build_mesh(3, 2, 1.4);
  CHECK(validate(mild).max_angle <= std::numbers::pi / 2.0 + 1e-12);
  CHECK_THROWS_AS(build_mesh(3, 4, 3.0), std::invalid_argument);
}

TEST_CASE("handmade single-cell mesh exposes the reference triangle") {
  const Mesh mesh = make_mesh(
      2, {{0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}}, {{0, 1, 2, -1}});
  CHECK(mesh.num_cells() == 1);
  CHECK(mesh.boundary_faces.size() == 3);
  CHECK(mesh.cell_volumes[0] == doctest::Approx(0.5));
  // Hypotenuse face has diameter sqrt(2), the legs 1.
  std::multiset<double> diameters;
  for (const BoundaryFace& bf : mesh.boundary_faces) diameters.insert(bf.diameter);
  CHECK(*diameters.begin() == doctest::Approx(1.0));
  CHECK(*diameters.rbegin() == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("VTK export writes a parsable legacy grid") {
  for (int dim : {2, 3}) {
    const Mesh mesh = build_mesh(dim, 1, 1.0);
    std::vector<double> values(static_cast<std::size_t>(mesh.num_vertices()), 1.5);
    const std::string path = "mesh_test_out.vtk";
    write_vtk(mesh, path, values);
    std::ifstream in(path);
    REQUIRE(in.good());
    std::string line;
    std::getline(in, line);
    CHECK(line == "# vtk DataFile Version 3.0");
    int points = 0, cells = 0, cell_type = 0;
    while (std::getline(in, line)) {
      if (line.rfind("POINTS", 0) == 0) std::sscanf(line.c_str(), "POINTS %d", &points);
      if (line.rfind("CELLS", 0) == 0) std::sscanf(line.c_str(), "CELLS %d", &cells);
      if (line.rfind("CELL_TYPES", 0) == 0) {
        std::getline(in, line);
        cell_type = std::atoi(line.c_str());
      }
    }
    CHECK(points == mesh.num_vertices());
    CHECK(cells == mesh.num_cells());
    CHECK(cell_type == (dim == 2 ? 5 : 10));
    std::remove(path.c_str());
  }
  CHECK_THROWS_AS(write_vtk(build_mesh(2, 1, 1.0), "/nonexistent-dir/m.vtk"),
                  std::runtime_error);
}

TEST_CASE("validation flags an inverted cell") {
  Mesh mesh = build_mesh(2, 1, 1.0);
  std::swap(mesh.cells[0][0], mesh.cells[0][1]);
  const ValidationReport rep = validate(mesh);
  CHECK_FALSE(rep.orientation_ok);
  CHECK_FALSE(rep.passed);
}
