#ifndef NITSCHE_ELEMENT_HPP
#define NITSCHE_ELEMENT_HPP

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "nitsche/mesh.hpp"
#include "nitsche/point.hpp"

namespace nitsche {

/// Quadrature rule on a reference domain. `dim` is the dimension of the
/// integration domain: 1 for the unit interval (edge parametrization),
/// 2 for the reference triangle, 3 for the reference tetrahedron.
/// Weights are positive and sum to the reference measure (1, 1/2, 1/6).
struct QuadratureRule {
  int dim = 0;
  int exact_degree = 0;
  std::vector<Point> points;
  std::vector<double> weights;

  int size() const { return static_cast<int>(points.size()); }
};

/// Positive-weight rule on the reference simplex of dimension `dim`,
/// exact for all polynomials of total degree <= `degree`. Built as a
/// collapsed tensor-product Gauss rule, so any degree up to the supported
/// cap is available.
QuadratureRule volume_quadrature(int dim, int degree);

/// Rule on the reference face of a dim-simplex: the unit interval for
/// dim == 2, the reference triangle for dim == 3.
QuadratureRule face_quadrature(int dim, int degree);

/// Points of a face rule expressed in reference-cell coordinates on the
/// local face opposite vertex `local_face`.
std::vector<Point> face_points_in_cell(int dim, int local_face,
                                       const QuadratureRule& face_rule);

inline constexpr int kMaxQuadratureDegree = 32;

/// Lagrange basis of degree k on the reference simplex with equispaced
/// lattice nodes. Node i carries a barycentric multi-index (i_0,...,i_d)
/// summing to k; its reference coordinate is sum_j (i_j/k) * vertex_j.
class ReferenceElement {
 public:
  ReferenceElement(int dim, int degree);

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  const std::vector<Point>& nodes() const { return nodes_; }
  const std::vector<std::array<int, 4>>& node_lattice() const { return lattice_; }

  /// All basis values at a reference point (must lie in the simplex up to
  /// a 1e-12 barycentric tolerance). Values sum to 1.
  std::vector<double> eval_basis(const Point& x) const;

  /// All reference-coordinate basis gradients; they sum to the zero vector.
  std::vector<Point> eval_basis_grad(const Point& x) const;

 private:
  void check_inside(const Point& x) const;

  int dim_;
  int degree_;
  std::vector<Point> nodes_;
  std::vector<std::array<int, 4>> lattice_;
  std::vector<std::array<int, 3>> monomials_;
  Eigen::MatrixXd coeffs_;  // monomial-to-basis coefficients, V^{-1}
};

/// Affine cell map x = B * xhat + b. In 2D the third row/column of B is
/// the identity so determinant and inverse transpose act uniformly.
struct AffineMap {
  Eigen::Matrix3d B;
  Point offset{};
  double det = 0.0;  // d-dimensional Jacobian determinant, > 0
  Eigen::Matrix3d inv_transpose;

  Point apply(const Point& ref) const {
    Point x;
    for (int i = 0; i < 3; ++i) {
      x[static_cast<std::size_t>(i)] =
          B(i, 0) * ref[0] + B(i, 1) * ref[1] + B(i, 2) * ref[2] +
          offset[static_cast<std::size_t>(i)];
    }
    return x;
  }

  Point pull_back(const Point& x) const;

  Point push_gradient(const Point& ref_grad) const {
    Point g;
    for (int i = 0; i < 3; ++i) {
      g[static_cast<std::size_t>(i)] = inv_transpose(i, 0) * ref_grad[0] +
                                       inv_transpose(i, 1) * ref_grad[1] +
                                       inv_transpose(i, 2) * ref_grad[2];
    }
    return g;
  }
};

AffineMap cell_affine_map(const Mesh& mesh, int cell);

}  // namespace nitsche

#endif
