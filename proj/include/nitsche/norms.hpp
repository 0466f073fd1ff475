#ifndef NITSCHE_NORMS_HPP
#define NITSCHE_NORMS_HPP

#include <functional>
#include <span>

#include "nitsche/mesh.hpp"
#include "nitsche/space.hpp"

namespace nitsche {

/// Manufactured exact solution: value, gradient and Laplacian callbacks so
/// the load f = -lap(u) and Dirichlet data g = u|_Gamma derive from one
/// object.
struct ExactSolution {
  std::function<double(const Point&)> value;
  std::function<Point(const Point&)> gradient;
  std::function<double(const Point&)> laplacian;

  ScalarField load() const {
    return [lap = laplacian](const Point& x) { return -lap(x); };
  }
  ScalarField trace() const { return value; }
};

/// Max defects of the gradient against central finite differences of the
/// value (step 1e-6) and of the Laplacian against central differences of
/// the gradient, sampled at `n_points` quasi-random interior points.
struct FdCheck {
  double gradient_defect = 0.0;
  double laplacian_defect = 0.0;
};
FdCheck fd_consistency(const ExactSolution& u, int dim, int n_points = 50,
                       unsigned seed = 7u);

/// ||u - u_h||_{L2(Omega)} with quadrature exactness 2k + 2 + 2*quad_bump.
double l2_error(const Mesh& mesh, const DofMap& space,
                std::span<const double> coeffs, const ExactSolution& exact,
                int quad_bump = 0);

/// ||grad(u - u_h)||_{L2(Omega)}.
double h1_semi_error(const Mesh& mesh, const DofMap& space,
                     std::span<const double> coeffs, const ExactSolution& exact,
                     int quad_bump = 0);

/// Face-weighted boundary error ( sum_F h_F^{-1} ||u - u_h||^2_{L2(F)} )^{1/2}.
double boundary_weighted_error(const Mesh& mesh, const DofMap& space,
                               std::span<const double> coeffs,
                               const ExactSolution& exact, int quad_bump = 0);

/// Unweighted boundary errors of a FE function: ||u - u_h||_{L2(Gamma)} and
/// ||grad(u - u_h)||_{L2(Gamma)} (cell-side trace of the gradient).
struct BoundaryErrors {
  double value = 0.0;
  double gradient = 0.0;
};
BoundaryErrors boundary_errors(const Mesh& mesh, const DofMap& space,
                               std::span<const double> coeffs,
                               const ExactSolution& exact, int quad_bump = 0);

/// Exact-solution norms by the same quadrature (denominators of relative
/// errors).
struct ExactNorms {
  double l2 = 0.0;       // ||u||_0
  double h1_semi = 0.0;  // ||grad u||_0
};
ExactNorms exact_norms(const Mesh& mesh, const DofMap& space,
                       const ExactSolution& exact, int quad_bump = 0);

struct ErrorReport {
  double l2_abs = 0.0;
  double l2_rel = 0.0;
  double h1_abs = 0.0;
  double h1_rel = 0.0;
  double bnd_abs = 0.0;  // ||h^{-1/2}(u - u_h)||_{0,Gamma}
  double residual = 0.0; // solver residual carried through for reporting
};

ErrorReport compute_errors(const Mesh& mesh, const DofMap& space,
                           std::span<const double> coeffs,
                           const ExactSolution& exact, double residual = 0.0,
                           int quad_bump = 0);

}  // namespace nitsche

#endif
