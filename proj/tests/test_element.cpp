#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "nitsche/element.hpp"
#include "oracles.hpp"

using namespace nitsche;

namespace {

Point random_interior_point(int dim, std::mt19937& rng) {
  // Barycentric sample strictly inside the simplex.
  std::uniform_real_distribution<double> dist(0.05, 0.95);
  for (;;) {
    Point p{};
    double s = 0.0;
    for (int d = 0; d < dim; ++d) {
      p[static_cast<std::size_t>(d)] = dist(rng);
      s += p[static_cast<std::size_t>(d)];
    }
    if (s < 0.95) return p;
  }
}

}  // namespace

TEST_CASE("quadrature weights are positive and sum to the reference measure") {
  for (int degree : {0, 1, 2, 4, 6, 8, 12}) {
    auto check_sum = [&](const QuadratureRule& rule, double measure) {
      double s = 0.0;
      for (double w : rule.weights) {
        CHECK(w > 0.0);
        s += w;
      }
      CHECK(s == doctest::Approx(measure).epsilon(1e-14));
    };
    check_sum(volume_quadrature(2, degree), 0.5);
    check_sum(volume_quadrature(3, degree), 1.0 / 6.0);
    check_sum(face_quadrature(2, degree), 1.0);
    check_sum(face_quadrature(3, degree), 0.5);
  }
}

TEST_CASE("quadrature integrates all monomials up to the stated degree") {
  for (int dim : {2, 3}) {
    for (int degree : {1, 2, 3, 4, 6, 8, 10, 12}) {
      const QuadratureRule rule = volume_quadrature(dim, degree);
      for (int a = 0; a <= degree; ++a) {
        for (int b = 0; a + b <= degree; ++b) {
          for (int c = 0; a + b + c <= degree; ++c) {
            if (dim == 2 && c > 0) continue;
            double s = 0.0;
            for (int q = 0; q < rule.size(); ++q) {
              const Point& p = rule.points[static_cast<std::size_t>(q)];
              s += rule.weights[static_cast<std::size_t>(q)] *
                   std::pow(p[0], a) * std::pow(p[1], b) * std::pow(p[2], c);
            }
            const double exact = oracles::simplex_monomial_integral(dim, a, b, c);
            CHECK(std::abs(s - exact) < 1e-13);
          }
        }
      }
    }
  }
}

TEST_CASE("reference-simplex integrals match the closed form") {
  CHECK(oracles::simplex_monomial_integral(2, 0, 0, 0) == doctest::Approx(0.5));
  CHECK(oracles::simplex_monomial_integral(2, 1, 0, 0) == doctest::Approx(1.0 / 6.0));
  CHECK(oracles::simplex_monomial_integral(3, 0, 0, 0) == doctest::Approx(1.0 / 6.0));
}

TEST_CASE("unsupported quadrature degrees are rejected") {
  CHECK_THROWS_AS(volume_quadrature(2, -1), std::invalid_argument);
  CHECK_THROWS_AS(volume_quadrature(2, kMaxQuadratureDegree + 1), std::invalid_argument);
  CHECK_THROWS_AS(face_quadrature(4, 2), std::invalid_argument);
}

TEST_CASE("nodal property of the Lagrange basis") {
  for (int dim : {2, 3}) {
    for (int k = 1; k <= 3; ++k) {
      const ReferenceElement elem(dim, k);
      const int n = elem.num_nodes();
      const int expected = dim == 2 ? (k + 1) * (k + 2) / 2
                                    : (k + 1) * (k + 2) * (k + 3) / 6;
      REQUIRE(n == expected);
      for (int j = 0; j < n; ++j) {
        const auto vals = elem.eval_basis(elem.nodes()[static_cast<std::size_t>(j)]);
        for (int i = 0; i < n; ++i) {
          const double target = i == j ? 1.0 : 0.0;
          CHECK(std::abs(vals[static_cast<std::size_t>(i)] - target) < 1e-13);
        }
      }
    }
  }
}

TEST_CASE("2D P2 basis hits the delta pattern at edge midpoints") {
  const ReferenceElement elem(2, 2);
  const std::vector<Point> midpoints = {
      {0.5, 0.0, 0.0}, {0.0, 0.5, 0.0}, {0.5, 0.5, 0.0}};
  for (const Point& m : midpoints) {
    const auto vals = elem.eval_basis(m);
    int ones = 0, zeros = 0;
    for (double v : vals) {
      if (std::abs(v - 1.0) < 1e-13) ++ones;
      if (std::abs(v) < 1e-13) ++zeros;
    }
    CHECK(ones == 1);
    CHECK(zeros == elem.num_nodes() - 1);
  }
}

TEST_CASE("partition of unity and zero gradient sum at random points") {
  std::mt19937 rng(11);
  for (int dim : {2, 3}) {
    for (int k = 1; k <= 3; ++k) {
      const ReferenceElement elem(dim, k);
      for (int it = 0; it < 10; ++it) {
        const Point p = random_interior_point(dim, rng);
        const auto vals = elem.eval_basis(p);
        double s = 0.0;
        for (double v : vals) s += v;
        CHECK(std::abs(s - 1.0) < 1e-13);
        const auto grads = elem.eval_basis_grad(p);
        Point g{};
        for (const Point& gi : grads) g = g + gi;
        CHECK(norm(g) < 1e-12);
      }
    }
  }
}

TEST_CASE("P1 gradients are the constant barycentric gradients") {
  const ReferenceElement elem(2, 1);
  const auto grads = elem.eval_basis_grad({0.3, 0.2, 0.0});
  CHECK(grads[0][0] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(grads[0][1] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(grads[1][0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(grads[1][1]) < 1e-14);
  CHECK(std::abs(grads[2][0]) < 1e-14);
  CHECK(grads[2][1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("gradients agree with central finite differences") {
  std::mt19937 rng(23);
  constexpr double step = 1e-6;
  for (int dim : {2, 3}) {
    for (int k = 1; k <= 3; ++k) {
      const ReferenceElement elem(dim, k);
      for (int it = 0; it < 5; ++it) {
        const Point p = random_interior_point(dim, rng);
        const auto grads = elem.eval_basis_grad(p);
        for (int d = 0; d < dim; ++d) {
          Point pp = p, pm = p;
          pp[static_cast<std::size_t>(d)] += step;
          pm[static_cast<std::size_t>(d)] -= step;
          const auto vp = elem.eval_basis(pp);
          const auto vm = elem.eval_basis(pm);
          for (int i = 0; i < elem.num_nodes(); ++i) {
            const double fd = (vp[static_cast<std::size_t>(i)] -
                               vm[static_cast<std::size_t>(i)]) /
                              (2.0 * step);
            CHECK(std::abs(fd - grads[static_cast<std::size_t>(i)]
                                     [static_cast<std::size_t>(d)]) < 1e-7);
          }
        }
      }
    }
  }
}

TEST_CASE("points outside the simplex are rejected") {
  const ReferenceElement elem(2, 2);
  CHECK_THROWS_AS(elem.eval_basis({-1e-6, 0.2, 0.0}), std::domain_error);
  CHECK_THROWS_AS(elem.eval_basis({0.7, 0.7, 0.0}), std::domain_error);
  CHECK_NOTHROW(elem.eval_basis({0.0, 0.0, 0.0}));
  CHECK_NOTHROW(elem.eval_basis({-1e-13, 0.5, 0.0}));
}

TEST_CASE("affine map reproduces cell vertices and round trips") {
  for (int dim : {2, 3}) {
    const Mesh mesh = build_mesh(dim, 2, 1.5);
    for (int c : {0, mesh.num_cells() / 2, mesh.num_cells() - 1}) {
      const AffineMap map = cell_affine_map(mesh, c);
      CHECK(map.det > 0.0);
      const auto cv = mesh.cell_vertices(c);
      for (int i = 0; i <= dim; ++i) {
        Point ref{};
        if (i > 0) ref[static_cast<std::size_t>(i - 1)] = 1.0;
        const Point mapped = map.apply(ref);
        const Point& vertex = mesh.vertices[static_cast<std::size_t>(cv[i])];
        CHECK(distance(mapped, vertex) < 1e-14);
        const Point back = map.pull_back(mapped);
        CHECK(distance(back, ref) < 1e-13);
      }
    }
  }
}
