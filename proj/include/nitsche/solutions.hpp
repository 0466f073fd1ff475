#ifndef NITSCHE_SOLUTIONS_HPP
#define NITSCHE_SOLUTIONS_HPP

#include <array>
#include <string>
#include <vector>

#include "nitsche/norms.hpp"

namespace nitsche {

/// Sparse multivariate polynomial with analytic gradient and Laplacian.
struct Polynomial {
  struct Term {
    double coeff;
    std::array<int, 3> powers;
  };
  std::vector<Term> terms;

  double value(const Point& x) const;
  Point gradient(const Point& x) const;
  double laplacian(const Point& x) const;
  ExactSolution to_exact() const;
};

/// sin(pi x) sin(pi y) + x: smooth with a nonzero Dirichlet trace.
ExactSolution sine2d();

/// Components of the 3D vector example on [0,1]^3:
///   u1 = sin(pi y) sin(pi z), u2 = sin(pi z) sin(pi x), u3 = sin(pi x) sin(pi y).
std::vector<ExactSolution> sine3d_vector();

/// A global polynomial of total degree exactly k (1..3); reproduced
/// exactly by the P_k space.
ExactSolution polynomial_solution(int dim, int k);

/// Harmonic corner solution r^lambda sin(lambda theta) about the corner
/// (1, 0) of the unit square. For non-integer lambda it lies in
/// H^{1+lambda}(Omega) and its trace in H^{lambda+1/2}(Gamma), so with
/// lambda = k + eps the k-th order boundary estimates are sharp instead of
/// being saturated by extra smoothness.
ExactSolution corner_singular2d(double lambda);

/// Regularity-limited solution for graded-mesh studies at degree k.
inline ExactSolution corner2d_for_degree(int k) {
  return corner_singular2d(k + 0.05);
}

/// Harmonic multiscale boundary layer on the edge x = 1:
///   u = sum_m kappa_m^{-(k+1/2)} exp(-kappa_m (1-x)) sin(kappa_m y),
/// kappa_m = 2^m pi, m = 1..12. Every dyadic trace mode carries equal
/// H^{k+1/2}(Gamma) weight, so refinement reveals one mode per level and
/// the observed orders are exactly k+1 (volume L2), k+1/2 (boundary L2)
/// and k-1/2 (boundary gradient) up to the truncation level.
ExactSolution boundary_layer2d(int k);

}  // namespace nitsche

#endif
