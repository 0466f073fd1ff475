#include "nitsche/element.hpp"

#include <cmath>
#include <stdexcept>

namespace nitsche {

namespace {

// Gauss-Legendre nodes/weights on [0,1], exact to degree 2n-1. Nodes are
// found by Newton iteration on P_n with the usual Chebyshev initial guess.
void gauss_legendre_01(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(static_cast<std::size_t>(n));
  w.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double t = std::cos(M_PI * (4.0 * i + 3.0) / (4.0 * n + 2.0));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      // Evaluate P_n(t) and P_n'(t) by the three-term recurrence.
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      const double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-16) break;
    }
    // One more derivative evaluation at the converged node.
    double p0 = 1.0, p1 = t;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (t * p1 - p0) / (t * t - 1.0);
    x[static_cast<std::size_t>(i)] = 0.5 * (t + 1.0);
    w[static_cast<std::size_t>(i)] = 1.0 / ((1.0 - t * t) * dp * dp);
  }
}

void check_degree(int degree) {
  if (degree < 0 || degree > kMaxQuadratureDegree) {
    throw std::invalid_argument("quadrature: unsupported degree " +
                                std::to_string(degree));
  }
}

// Closed-form integral of x^a y^b z^c over the reference simplex:
// a! b! c! / (a + b + c + dim)!.
double simplex_monomial(int dim, int a, int b, int c) {
  auto factorial = [](int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
  };
  return factorial(a) * factorial(b) * factorial(c) / factorial(a + b + c + dim);
}

// Every constructed rule is checked against the closed form before use.
void validate_rule(const QuadratureRule& rule, int dim) {
  for (int a = 0; a <= rule.exact_degree; ++a) {
    for (int b = 0; a + b <= rule.exact_degree; ++b) {
      for (int c = 0; a + b + c <= rule.exact_degree; ++c) {
        if (dim < 3 && c > 0) continue;
        if (dim < 2 && b > 0) continue;
        double s = 0.0;
        for (int q = 0; q < rule.size(); ++q) {
          const Point& p = rule.points[static_cast<std::size_t>(q)];
          s += rule.weights[static_cast<std::size_t>(q)] * std::pow(p[0], a) *
               std::pow(p[1], b) * std::pow(p[2], c);
        }
        if (std::abs(s - simplex_monomial(dim, a, b, c)) > 1e-13) {
          throw std::runtime_error("quadrature: self-validation failed at degree " +
                                   std::to_string(a + b + c));
        }
      }
    }
  }
}

}  // namespace

QuadratureRule volume_quadrature(int dim, int degree) {
  check_degree(degree);
  QuadratureRule rule;
  rule.dim = dim;
  rule.exact_degree = degree;
  std::vector<double> x, w;
  if (dim == 2) {
    // Duffy collapse (xi, eta) -> (xi, eta (1 - xi)); the Jacobian factor
    // 1 - xi raises the xi-degree by one.
    const int n = (degree + 3) / 2;
    gauss_legendre_01(n, x, w);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double xi = x[static_cast<std::size_t>(i)];
        const double eta = x[static_cast<std::size_t>(j)];
        rule.points.push_back({xi, eta * (1.0 - xi), 0.0});
        rule.weights.push_back(w[static_cast<std::size_t>(i)] *
                               w[static_cast<std::size_t>(j)] * (1.0 - xi));
      }
    }
  } else if (dim == 3) {
    const int n = (degree + 4) / 2;
    gauss_legendre_01(n, x, w);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          const double u = x[static_cast<std::size_t>(i)];
          const double v = x[static_cast<std::size_t>(j)];
          const double s = x[static_cast<std::size_t>(k)];
          rule.points.push_back({u, v * (1.0 - u), s * (1.0 - u) * (1.0 - v)});
          rule.weights.push_back(w[static_cast<std::size_t>(i)] *
                                 w[static_cast<std::size_t>(j)] *
                                 w[static_cast<std::size_t>(k)] *
                                 (1.0 - u) * (1.0 - u) * (1.0 - v));
        }
      }
    }
  } else {
    throw std::invalid_argument("volume_quadrature: dim must be 2 or 3");
  }
  validate_rule(rule, dim);
  return rule;
}

std::vector<Point> face_points_in_cell(int dim, int local_face,
                                       const QuadratureRule& face_rule) {
  if (local_face < 0 || local_face > dim) {
    throw std::invalid_argument("face_points_in_cell: bad local face index");
  }
  auto ref_vertex = [](int i) {
    Point p{};
    if (i > 0) p[static_cast<std::size_t>(i - 1)] = 1.0;
    return p;
  };
  std::vector<int> fv;
  for (int i = 0; i <= dim; ++i) {
    if (i != local_face) fv.push_back(i);
  }
  const Point a = ref_vertex(fv[0]);
  const Point b = ref_vertex(fv[1]);
  std::vector<Point> pts;
  pts.reserve(face_rule.points.size());
  for (const Point& q : face_rule.points) {
    if (dim == 2) {
      pts.push_back(a + q[0] * (b - a));
    } else {
      const Point c = ref_vertex(fv[2]);
      pts.push_back(a + q[0] * (b - a) + q[1] * (c - a));
    }
  }
  return pts;
}

QuadratureRule face_quadrature(int dim, int degree) {
  check_degree(degree);
  if (dim == 2) {
    QuadratureRule rule;
    rule.dim = 1;
    rule.exact_degree = degree;
    std::vector<double> x, w;
    const int n = (degree + 2) / 2;
    gauss_legendre_01(n, x, w);
    for (int i = 0; i < n; ++i) {
      rule.points.push_back({x[static_cast<std::size_t>(i)], 0.0, 0.0});
      rule.weights.push_back(w[static_cast<std::size_t>(i)]);
    }
    validate_rule(rule, 1);
    return rule;
  }
  if (dim == 3) {
    return volume_quadrature(2, degree);
  }
  throw std::invalid_argument("face_quadrature: dim must be 2 or 3");
}

ReferenceElement::ReferenceElement(int dim, int degree)
    : dim_(dim), degree_(degree) {
  if (dim != 2 && dim != 3) {
    throw std::invalid_argument("ReferenceElement: dim must be 2 or 3");
  }
  if (degree < 1 || degree > 3) {
    throw std::invalid_argument("ReferenceElement: degree must be 1..3");
  }

  const int k = degree;
  // Equispaced lattice: barycentric integers (i0,...,id) summing to k.
  if (dim == 2) {
    for (int i2 = 0; i2 <= k; ++i2) {
      for (int i1 = 0; i1 + i2 <= k; ++i1) {
        const int i0 = k - i1 - i2;
        lattice_.push_back({i0, i1, i2, 0});
        nodes_.push_back({static_cast<double>(i1) / k,
                          static_cast<double>(i2) / k, 0.0});
      }
    }
    for (int a = 0; a <= k; ++a) {
      for (int b = 0; a + b <= k; ++b) monomials_.push_back({a, b, 0});
    }
  } else {
    for (int i3 = 0; i3 <= k; ++i3) {
      for (int i2 = 0; i2 + i3 <= k; ++i2) {
        for (int i1 = 0; i1 + i2 + i3 <= k; ++i1) {
          const int i0 = k - i1 - i2 - i3;
          lattice_.push_back({i0, i1, i2, i3});
          nodes_.push_back({static_cast<double>(i1) / k,
                            static_cast<double>(i2) / k,
                            static_cast<double>(i3) / k});
        }
      }
    }
    for (int a = 0; a <= k; ++a) {
      for (int b = 0; a + b <= k; ++b) {
        for (int c = 0; a + b + c <= k; ++c) monomials_.push_back({a, b, c});
      }
    }
  }

  const int n = num_nodes();
  Eigen::MatrixXd vander(n, n);
  for (int i = 0; i < n; ++i) {
    const Point& p = nodes_[static_cast<std::size_t>(i)];
    for (int m = 0; m < n; ++m) {
      const auto& e = monomials_[static_cast<std::size_t>(m)];
      vander(i, m) = std::pow(p[0], e[0]) * std::pow(p[1], e[1]) *
                     std::pow(p[2], e[2]);
    }
  }
  coeffs_ = vander.fullPivLu().inverse();
  // Two steps of Newton refinement push the nodal-property defect to the
  // last bit at these degrees.
  for (int it = 0; it < 2; ++it) {
    coeffs_ = coeffs_ * (2.0 * Eigen::MatrixXd::Identity(n, n) - vander * coeffs_);
  }
}

void ReferenceElement::check_inside(const Point& x) const {
  constexpr double tol = 1e-12;
  double bary0 = 1.0;
  for (int i = 0; i < dim_; ++i) {
    const double c = x[static_cast<std::size_t>(i)];
    if (c < -tol) {
      throw std::domain_error("ReferenceElement: point outside simplex");
    }
    bary0 -= c;
  }
  if (bary0 < -tol) {
    throw std::domain_error("ReferenceElement: point outside simplex");
  }
}

std::vector<double> ReferenceElement::eval_basis(const Point& x) const {
  check_inside(x);
  const int n = num_nodes();
  Eigen::VectorXd mono(n);
  for (int m = 0; m < n; ++m) {
    const auto& e = monomials_[static_cast<std::size_t>(m)];
    mono(m) = std::pow(x[0], e[0]) * std::pow(x[1], e[1]) * std::pow(x[2], e[2]);
  }
  std::vector<double> vals(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int m = 0; m < n; ++m) s += coeffs_(m, i) * mono(m);
    vals[static_cast<std::size_t>(i)] = s;
  }
  return vals;
}

std::vector<Point> ReferenceElement::eval_basis_grad(const Point& x) const {
  check_inside(x);
  const int n = num_nodes();
  Eigen::MatrixXd dmono(n, 3);
  for (int m = 0; m < n; ++m) {
    const auto& e = monomials_[static_cast<std::size_t>(m)];
    for (int d = 0; d < 3; ++d) {
      if (e[static_cast<std::size_t>(d)] == 0) {
        dmono(m, d) = 0.0;
        continue;
      }
      double v = e[static_cast<std::size_t>(d)];
      for (int dd = 0; dd < 3; ++dd) {
        const int p = e[static_cast<std::size_t>(dd)] - (dd == d ? 1 : 0);
        v *= std::pow(x[static_cast<std::size_t>(dd)], p);
      }
      dmono(m, d) = v;
    }
  }
  std::vector<Point> grads(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Point g{};
    for (int m = 0; m < n; ++m) {
      for (int d = 0; d < 3; ++d) {
        g[static_cast<std::size_t>(d)] += coeffs_(m, i) * dmono(m, d);
      }
    }
    grads[static_cast<std::size_t>(i)] = g;
  }
  return grads;
}

AffineMap cell_affine_map(const Mesh& mesh, int cell) {
  const auto cv = mesh.cell_vertices(cell);
  const Point& v0 = mesh.vertices[static_cast<std::size_t>(cv[0])];
  AffineMap map;
  map.B = Eigen::Matrix3d::Identity();
  map.offset = v0;
  for (int j = 0; j < mesh.dim; ++j) {
    const Point e = mesh.vertices[static_cast<std::size_t>(cv[j + 1])] - v0;
    for (int i = 0; i < 3; ++i) map.B(i, j) = e[static_cast<std::size_t>(i)];
  }
  if (mesh.dim == 2) {
    map.B(2, 2) = 1.0;
    map.B(2, 0) = map.B(2, 1) = map.B(0, 2) = map.B(1, 2) = 0.0;
    map.det = map.B(0, 0) * map.B(1, 1) - map.B(0, 1) * map.B(1, 0);
  } else {
    map.det = map.B.determinant();
  }
  if (!(map.det > 0.0)) {
    throw std::runtime_error("cell_affine_map: non-positive Jacobian");
  }
  map.inv_transpose = map.B.inverse().transpose();
  return map;
}

Point AffineMap::pull_back(const Point& x) const {
  Point r;
  const Eigen::Matrix3d inv = inv_transpose.transpose();
  const Point d = x - offset;
  for (int i = 0; i < 3; ++i) {
    r[static_cast<std::size_t>(i)] = inv(i, 0) * d[0] + inv(i, 1) * d[1] + inv(i, 2) * d[2];
  }
  return r;
}

}  // namespace nitsche
