#ifndef NITSCHE_INTERPOLATION_HPP
#define NITSCHE_INTERPOLATION_HPP

#include <memory>
#include <optional>

#include "nitsche/assembly.hpp"
#include "nitsche/norms.hpp"

namespace nitsche {

enum class ProjectionVariant {
  weighted,  // boundary moments against h_E^{-alpha}
  plain,     // unweighted boundary moments
};

/// Boundary part of the modified interpolant: the Gram matrix of boundary
/// traces under <w ., .>_Gamma with w = h_E^{-alpha} (weighted) or w = 1
/// (plain), restricted to boundary DOFs. Symmetric positive definite;
/// factorized once on construction.
class BoundaryProjection {
 public:
  BoundaryProjection(const Mesh& mesh, const DofMap& space,
                     ProjectionVariant variant, double alpha);

  ProjectionVariant variant() const { return variant_; }
  double alpha() const { return alpha_; }
  const CsrMatrix& boundary_mass() const { return mass_; }
  double condition_estimate() const { return cond_estimate_; }

  /// Solves boundary_mass * c = moments.
  std::vector<double> solve(std::span<const double> moments) const;

 private:
  ProjectionVariant variant_;
  double alpha_;
  CsrMatrix mass_;
  double cond_estimate_ = 0.0;
  struct Factorization;
  std::shared_ptr<const Factorization> factorization_;
};

/// The modified interpolant: nodal values at interior DOFs, boundary DOFs
/// fixed by the projection so that <w (u - I_h u), v_h>_Gamma = 0 for all
/// v_h. Boundary integrals use quadrature exactness 2k + 2.
std::vector<double> modified_interpolant(const Mesh& mesh, const DofMap& space,
                                         const ExactSolution& exact,
                                         const BoundaryProjection& proj);

/// max_i |<w (u - I_h u), phi_i>_Gamma| over boundary basis functions,
/// recomputed by direct quadrature of the residual at the same exactness.
/// The per-level rate study for the interpolant lives in study.hpp.
double boundary_orthogonality_residual(const Mesh& mesh, const DofMap& space,
                                       std::span<const double> coeffs,
                                       const ExactSolution& exact,
                                       const BoundaryProjection& proj);

}  // namespace nitsche

#endif
