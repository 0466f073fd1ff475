#include "nitsche/space.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace nitsche {

namespace {

bool on_unit_box_boundary(const Point& p, int dim) {
  constexpr double tol = 1e-12;
  for (int d = 0; d < dim; ++d) {
    const double c = p[static_cast<std::size_t>(d)];
    if (std::abs(c) <= tol || std::abs(c - 1.0) <= tol) return true;
  }
  return false;
}

}  // namespace

DofMap build_space(const Mesh& mesh, int k) {
  if (k < 1 || k > 3) {
    throw std::invalid_argument("build_space: degree must be 1..3");
  }
  const ReferenceElement elem(mesh.dim, k);

  DofMap space;
  space.dim = mesh.dim;
  space.degree = k;
  space.dofs_per_cell = elem.num_nodes();
  space.cell_dofs.assign(static_cast<std::size_t>(mesh.num_cells()) *
                             static_cast<std::size_t>(space.dofs_per_cell),
                         -1);

  // Vertex DOFs first: global DOF id == vertex id.
  space.dof_coords = mesh.vertices;
  int next_dof = mesh.num_vertices();

  // Edge DOFs: k-1 interior nodes per geometric edge, keyed by the sorted
  // vertex pair, ordered along the canonical (min id -> max id) direction.
  std::map<std::pair<int, int>, int> edge_base;
  // Face DOFs (3D k == 3): single interior node per triangular face.
  std::map<std::array<int, 3>, int> face_dof;

  const auto& lattice = elem.node_lattice();
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto cv = mesh.cell_vertices(c);
    int* cell_slot = space.cell_dofs.data() +
                     static_cast<std::size_t>(c) *
                         static_cast<std::size_t>(space.dofs_per_cell);
    for (int i = 0; i < space.dofs_per_cell; ++i) {
      const auto& mi = lattice[static_cast<std::size_t>(i)];
      // Barycentric support of the lattice node.
      std::array<int, 4> sup{};
      int nsup = 0;
      for (int j = 0; j <= mesh.dim; ++j) {
        if (mi[static_cast<std::size_t>(j)] > 0) sup[static_cast<std::size_t>(nsup++)] = j;
      }
      if (nsup == 1) {
        cell_slot[i] = cv[sup[0]];
        continue;
      }
      if (nsup == 2) {
        const int ga = cv[sup[0]];
        const int gb = cv[sup[1]];
        const int wa = mi[static_cast<std::size_t>(sup[0])];
        const int wb = mi[static_cast<std::size_t>(sup[1])];
        const int gmin = std::min(ga, gb);
        const int gmax = std::max(ga, gb);
        // Parameter step along the canonical direction, 1..k-1.
        const int s = (ga < gb) ? wb : wa;
        auto [it, inserted] = edge_base.try_emplace({gmin, gmax}, next_dof);
        if (inserted) {
          next_dof += k - 1;
          const Point& pa = mesh.vertices[static_cast<std::size_t>(gmin)];
          const Point& pb = mesh.vertices[static_cast<std::size_t>(gmax)];
          for (int t = 1; t <= k - 1; ++t) {
            const double lam = static_cast<double>(t) / k;
            space.dof_coords.push_back((1.0 - lam) * pa + lam * pb);
          }
        }
        cell_slot[i] = it->second + (s - 1);
        continue;
      }
      if (nsup == 3 && mesh.dim == 3) {
        // k == 3 face node: barycentric (1,1,1) on the face, no
        // orientation ambiguity.
        std::array<int, 3> key = {cv[sup[0]], cv[sup[1]], cv[sup[2]]};
        std::sort(key.begin(), key.end());
        auto [it, inserted] = face_dof.try_emplace(key, next_dof);
        if (inserted) {
          ++next_dof;
          const Point& pa = mesh.vertices[static_cast<std::size_t>(key[0])];
          const Point& pb = mesh.vertices[static_cast<std::size_t>(key[1])];
          const Point& pc = mesh.vertices[static_cast<std::size_t>(key[2])];
          space.dof_coords.push_back((1.0 / 3.0) * (pa + pb + pc));
        }
        cell_slot[i] = it->second;
        continue;
      }
      // Cell-interior node, owned by this cell alone.
      Point p{};
      for (int j = 0; j <= mesh.dim; ++j) {
        const double lam = static_cast<double>(mi[static_cast<std::size_t>(j)]) / k;
        p = p + lam * mesh.vertices[static_cast<std::size_t>(cv[j])];
      }
      space.dof_coords.push_back(p);
      cell_slot[i] = next_dof++;
    }
  }

  space.num_dofs = next_dof;

  for (int d = 0; d < space.num_dofs; ++d) {
    if (on_unit_box_boundary(space.dof_coords[static_cast<std::size_t>(d)], mesh.dim)) {
      space.boundary_dofs.push_back(d);
    }
  }
  return space;
}

std::vector<double> nodal_interpolant(const DofMap& space, const ScalarField& u) {
  std::vector<double> coeffs(static_cast<std::size_t>(space.num_dofs));
  for (int d = 0; d < space.num_dofs; ++d) {
    coeffs[static_cast<std::size_t>(d)] =
        u(space.dof_coords[static_cast<std::size_t>(d)]);
  }
  return coeffs;
}

double evaluate_in_cell(const Mesh& mesh, const DofMap& space,
                        const ReferenceElement& elem,
                        std::span<const double> coeffs, int cell,
                        const Point& x) {
  const AffineMap map = cell_affine_map(mesh, cell);
  const Point ref = map.pull_back(x);
  const std::vector<double> vals = elem.eval_basis(ref);
  const auto dofs = space.cell_dof_span(cell);
  double s = 0.0;
  for (int i = 0; i < space.dofs_per_cell; ++i) {
    s += vals[static_cast<std::size_t>(i)] * coeffs[static_cast<std::size_t>(dofs[i])];
  }
  return s;
}

}  // namespace nitsche
