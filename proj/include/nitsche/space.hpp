#ifndef NITSCHE_SPACE_HPP
#define NITSCHE_SPACE_HPP

#include <functional>
#include <span>
#include <vector>

#include "nitsche/element.hpp"
#include "nitsche/mesh.hpp"

namespace nitsche {

using ScalarField = std::function<double(const Point&)>;

/// Global numbering of a continuous P_k Lagrange space on a simplicial
/// mesh. Vertex DOFs come first (DOF id == vertex id), then edge DOFs,
/// then face/interior DOFs, so vertex values of a coefficient vector can
/// be read off directly.
///
/// Shared mesh entities induce identical global indices from every
/// adjacent cell; edge-interior DOFs are ordered along the edge's
/// canonical direction (lower global vertex id to higher).
struct DofMap {
  int dim = 2;
  int degree = 1;
  int num_dofs = 0;
  int dofs_per_cell = 0;
  std::vector<int> cell_dofs;       // num_cells * dofs_per_cell, element node order
  std::vector<int> boundary_dofs;   // sorted; node coordinate on the unit-box boundary
  std::vector<Point> dof_coords;

  std::span<const int> cell_dof_span(int c) const {
    return {cell_dofs.data() +
                static_cast<std::size_t>(c) * static_cast<std::size_t>(dofs_per_cell),
            static_cast<std::size_t>(dofs_per_cell)};
  }
};

DofMap build_space(const Mesh& mesh, int k);

/// Coefficients of the plain nodal interpolant: u evaluated at every DOF
/// coordinate.
std::vector<double> nodal_interpolant(const DofMap& space, const ScalarField& u);

/// Evaluates the FE function given by `coeffs` at a physical point known
/// to lie in `cell`.
double evaluate_in_cell(const Mesh& mesh, const DofMap& space,
                        const ReferenceElement& elem,
                        std::span<const double> coeffs, int cell,
                        const Point& x);

}  // namespace nitsche

#endif
