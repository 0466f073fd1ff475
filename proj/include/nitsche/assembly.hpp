#ifndef NITSCHE_ASSEMBLY_HPP
#define NITSCHE_ASSEMBLY_HPP

#include <span>
#include <string>
#include <vector>

#include "nitsche/mesh.hpp"
#include "nitsche/space.hpp"

namespace nitsche {

/// Parameters of the Nitsche scheme
///   a(u,v) = (grad u, grad v) - <grad u . n, v>  + beta <u, grad v . n>
///          + c0 <h_E^{-alpha} u, v>   on Gamma,
/// with beta = +1 the non-symmetric variant and beta = -1 the classical
/// symmetric one (which requires a positive penalty).
struct NitscheConfig {
  double beta = 1.0;   // +1 or -1
  double alpha = 1.0;  // >= 1
  double c0 = 1.0;     // >= 0; 0 = penalty-free

  void check() const;

  /// Symmetric baseline with the standard sufficient penalty c0 = 10 k^2.
  static NitscheConfig symmetric_default(int k) {
    return {-1.0, 1.0, 10.0 * k * k};
  }
};

/// Compressed sparse rows with sorted, unique column indices per row.
struct CsrMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<int> row_offsets;  // size rows + 1
  std::vector<int> col_indices;
  std::vector<double> values;

  std::size_t nnz() const { return col_indices.size(); }

  /// Entry (i, j), zero if outside the pattern.
  double coeff(int i, int j) const;

  /// y = A x.
  void multiply(std::span<const double> x, std::span<double> y) const;
};

struct LinearSystem {
  CsrMatrix matrix;
  std::vector<double> rhs;
};

/// Assembles matrix and right-hand side of the scheme for load f on the
/// domain and Dirichlet data g on the boundary:
///   A_ij = a(phi_j, phi_i)
///   b_i  = (f, phi_i) + beta <g, grad phi_i . n> + c0 <h_E^{-alpha} g, phi_i>.
/// Volume and face quadrature exactness is 2k. Assembly is sequential in
/// ascending cell then face order, so identical inputs produce bit
/// identical output.
LinearSystem assemble_system(const Mesh& mesh, const DofMap& space,
                             const NitscheConfig& config, const ScalarField& f,
                             const ScalarField& g);

/// Right-hand side only; the matrix of the scheme does not depend on
/// (f, g), so multi-component runs can reuse one factorization.
std::vector<double> assemble_rhs(const Mesh& mesh, const DofMap& space,
                                 const NitscheConfig& config,
                                 const ScalarField& f, const ScalarField& g);

/// Matrix-free evaluation of a(u_h, v_h) by the same quadrature; agrees
/// with v^T A u to rounding.
double apply_form(const Mesh& mesh, const DofMap& space,
                  const NitscheConfig& config, std::span<const double> u_coeffs,
                  std::span<const double> v_coeffs);

struct StructureReport {
  double symmetry_defect = 0.0;           // max |A - A^T|
  double interior_symmetry_defect = 0.0;  // same with boundary-DOF rows/cols masked
  bool defect_on_boundary_only = false;
};

/// Reports where the matrix deviates from symmetry. For beta = -1 the
/// defect is rounding-level; for beta = +1 it is confined to entries with
/// a boundary-DOF row or column.
StructureReport structure_check(const CsrMatrix& matrix, const DofMap& space,
                                const NitscheConfig& config);

/// MatrixMarket coordinate-format dump (1-based, row-major entry order).
void write_matrix_market(const CsrMatrix& matrix, const std::string& path);

}  // namespace nitsche

#endif
