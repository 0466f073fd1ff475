#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>

#include "nitsche/solutions.hpp"
#include "nitsche/space.hpp"

using namespace nitsche;

TEST_CASE("DOF counts follow standard Lagrange counting") {
  const Mesh m2 = build_mesh(2, 1, 1.0);
  CHECK(build_space(m2, 1).num_dofs == 9);
  CHECK(build_space(m2, 2).num_dofs == 25);  // 9 vertices + 16 edges
  CHECK(build_space(m2, 3).num_dofs == 49);  // + 2 per edge + 1 per cell

  // 3D counts at level 1 with the six-tet cube split: 27 / 125 / 343.
  const Mesh m3 = build_mesh(3, 1, 1.0);
  CHECK(build_space(m3, 1).num_dofs == 27);
  CHECK(build_space(m3, 2).num_dofs == 125);
  CHECK(build_space(m3, 3).num_dofs == 343);
}

TEST_CASE("edge count oracle: k=2 DOFs = vertices + enumerated edges") {
  for (int dim : {2, 3}) {
    const Mesh mesh = build_mesh(dim, 2, 1.0);
    std::set<std::pair<int, int>> edges;
    for (int c = 0; c < mesh.num_cells(); ++c) {
      const auto cv = mesh.cell_vertices(c);
      for (std::size_t i = 0; i < cv.size(); ++i) {
        for (std::size_t j = i + 1; j < cv.size(); ++j) {
          edges.insert({std::min(cv[i], cv[j]), std::max(cv[i], cv[j])});
        }
      }
    }
    const DofMap space = build_space(mesh, 2);
    CHECK(space.num_dofs ==
          mesh.num_vertices() + static_cast<int>(edges.size()));
  }
}

TEST_CASE("shared entities receive identical global indices") {
  for (int dim : {2, 3}) {
    for (int k = 1; k <= 3; ++k) {
      const Mesh mesh = build_mesh(dim, dim == 2 ? 2 : 1, 1.0);
      const DofMap space = build_space(mesh, k);
      // Each global DOF must carry a single coordinate no matter which
      // cell refers to it; collect per-DOF coordinates from cell lattices.
      const ReferenceElement elem(dim, k);
      for (int c = 0; c < mesh.num_cells(); ++c) {
        const AffineMap map = cell_affine_map(mesh, c);
        const auto dofs = space.cell_dof_span(c);
        for (int i = 0; i < space.dofs_per_cell; ++i) {
          const Point x = map.apply(elem.nodes()[static_cast<std::size_t>(i)]);
          const Point& stored =
              space.dof_coords[static_cast<std::size_t>(dofs[i])];
          CHECK(distance(x, stored) < 1e-13);
        }
      }
    }
  }
}

TEST_CASE("boundary DOFs are exactly those with a coordinate in {0,1}") {
  const Mesh mesh = build_mesh(2, 2, 1.0);
  const DofMap space = build_space(mesh, 2);
  std::set<int> bset(space.boundary_dofs.begin(), space.boundary_dofs.end());
  for (int d = 0; d < space.num_dofs; ++d) {
    const Point& p = space.dof_coords[static_cast<std::size_t>(d)];
    const bool on_boundary = p[0] == 0.0 || p[0] == 1.0 || p[1] == 0.0 || p[1] == 1.0;
    CHECK(bset.count(d) == static_cast<std::size_t>(on_boundary ? 1 : 0));
  }
  // 2D level 2, k=2: 16 boundary segments, 16 boundary vertices.
  CHECK(space.boundary_dofs.size() == 32);
}

TEST_CASE("FE expansions agree from both sides of an interior face") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  for (int dim : {2, 3}) {
    for (int k = 1; k <= 3; ++k) {
      const Mesh mesh = build_mesh(dim, dim == 2 ? 2 : 1, 1.0);
      const DofMap space = build_space(mesh, k);
      const ReferenceElement elem(mesh.dim, k);
      std::vector<double> coeffs(static_cast<std::size_t>(space.num_dofs));
      for (double& c : coeffs) c = dist(rng);

      // Find an interior face: a (dim)-subset shared by two cells.
      std::map<std::vector<int>, std::vector<int>> owners;
      for (int c = 0; c < mesh.num_cells(); ++c) {
        const auto cv = mesh.cell_vertices(c);
        for (int f = 0; f <= dim; ++f) {
          std::vector<int> key;
          for (int i = 0; i <= dim; ++i) {
            if (i != f) key.push_back(cv[i]);
          }
          std::sort(key.begin(), key.end());
          owners[key].push_back(c);
        }
      }
      int checked = 0;
      for (const auto& [key, cells] : owners) {
        if (cells.size() != 2) continue;
        for (int it = 0; it < 20; ++it) {
          // Random convex combination of the face vertices.
          std::vector<double> lam(key.size());
          double s = 0.0;
          for (double& l : lam) {
            l = dist(rng) + 1e-3;
            s += l;
          }
          Point x{};
          for (std::size_t i = 0; i < key.size(); ++i) {
            x = x + (lam[i] / s) * mesh.vertices[static_cast<std::size_t>(key[i])];
          }
          const double a = evaluate_in_cell(mesh, space, elem, coeffs, cells[0], x);
          const double b = evaluate_in_cell(mesh, space, elem, coeffs, cells[1], x);
          CHECK(std::abs(a - b) < 1e-12);
        }
        if (++checked == 5) break;
      }
      REQUIRE(checked > 0);
    }
  }
}

TEST_CASE("nodal interpolation reproduces constants and linears") {
  const Mesh mesh = build_mesh(2, 2, 1.0);
  const DofMap space = build_space(mesh, 1);
  const auto ones = nodal_interpolant(space, [](const Point&) { return 1.0; });
  for (double c : ones) CHECK(c == 1.0);
  const auto xs = nodal_interpolant(space, [](const Point& p) { return p[0]; });
  for (int d = 0; d < space.num_dofs; ++d) {
    CHECK(xs[static_cast<std::size_t>(d)] ==
          space.dof_coords[static_cast<std::size_t>(d)][0]);
  }
}

TEST_CASE("nodal interpolation reproduces global P_k functions pointwise") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  for (int dim : {2, 3}) {
    for (int k = 1; k <= 3; ++k) {
      const Mesh mesh = build_mesh(dim, dim == 2 ? 2 : 1, 1.0);
      const DofMap space = build_space(mesh, k);
      const ReferenceElement elem(dim, k);
      const ExactSolution u = polynomial_solution(dim, k);
      const auto coeffs = nodal_interpolant(space, u.value);
      for (int it = 0; it < 50; ++it) {
        const int c = static_cast<int>(dist(rng) * mesh.num_cells()) %
                      mesh.num_cells();
        // Random point inside cell c via barycentric weights.
        std::array<double, 4> lam{};
        double s = 0.0;
        for (int i = 0; i <= dim; ++i) {
          lam[static_cast<std::size_t>(i)] = dist(rng) + 1e-3;
          s += lam[static_cast<std::size_t>(i)];
        }
        Point x{};
        const auto cv = mesh.cell_vertices(c);
        for (int i = 0; i <= dim; ++i) {
          x = x + (lam[static_cast<std::size_t>(i)] / s) *
                      mesh.vertices[static_cast<std::size_t>(cv[i])];
        }
        const double uh = evaluate_in_cell(mesh, space, elem, coeffs, c, x);
        CHECK(std::abs(uh - u.value(x)) < 1e-12);
      }
    }
  }
}

TEST_CASE("nodal interpolation is idempotent on V_h members") {
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const Mesh mesh = build_mesh(2, 2, 1.0);
  const DofMap space = build_space(mesh, 2);
  const ReferenceElement elem(2, 2);
  std::vector<double> coeffs(static_cast<std::size_t>(space.num_dofs));
  for (double& c : coeffs) c = dist(rng);

  // Evaluate the FE function as a callback through an owning cell per DOF.
  std::vector<int> owner(static_cast<std::size_t>(space.num_dofs), -1);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    for (int d : space.cell_dof_span(c)) owner[static_cast<std::size_t>(d)] = c;
  }
  int probe = 0;
  const auto uh = [&](const Point& x) {
    return evaluate_in_cell(mesh, space, elem, coeffs,
                            owner[static_cast<std::size_t>(probe)], x);
  };
  std::vector<double> again(coeffs.size());
  for (probe = 0; probe < space.num_dofs; ++probe) {
    again[static_cast<std::size_t>(probe)] =
        uh(space.dof_coords[static_cast<std::size_t>(probe)]);
  }
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    CHECK(std::abs(again[i] - coeffs[i]) < 1e-12);
  }
}

TEST_CASE("degree outside 1..3 is rejected") {
  const Mesh mesh = build_mesh(2, 1, 1.0);
  CHECK_THROWS_AS(build_space(mesh, 0), std::invalid_argument);
  CHECK_THROWS_AS(build_space(mesh, 4), std::invalid_argument);
}
