#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nitsche/norms.hpp"
#include "nitsche/solutions.hpp"
#include "nitsche/solver.hpp"

using namespace nitsche;

namespace {

ExactSolution plain_sine2d() {
  const double pi = M_PI;
  return {
      [pi](const Point& x) { return std::sin(pi * x[0]) * std::sin(pi * x[1]); },
      [pi](const Point& x) {
        return Point{pi * std::cos(pi * x[0]) * std::sin(pi * x[1]),
                     pi * std::sin(pi * x[0]) * std::cos(pi * x[1]), 0.0};
      },
      [pi](const Point& x) {
        return -2.0 * pi * pi * std::sin(pi * x[0]) * std::sin(pi * x[1]);
      },
  };
}

}  // namespace

TEST_CASE("built-in solutions are internally consistent") {
  for (const auto& [u, dim] : {std::pair{sine2d(), 2},
                               std::pair{polynomial_solution(2, 3), 2},
                               std::pair{polynomial_solution(3, 2), 3},
                               std::pair{corner_singular2d(1.05), 2},
                               std::pair{boundary_layer2d(1), 2},
                               std::pair{sine3d_vector()[1], 3}}) {
    const FdCheck check = fd_consistency(u, dim);
    CHECK(check.gradient_defect < 1e-6);
    CHECK(check.laplacian_defect < 1e-4);
  }
}

TEST_CASE("interpolants of global P_k functions have rounding-level errors") {
  for (int k = 1; k <= 3; ++k) {
    const Mesh mesh = build_mesh(2, 3, 1.0);
    const DofMap space = build_space(mesh, k);
    const ExactSolution u = polynomial_solution(2, k);
    const auto coeffs = nodal_interpolant(space, u.value);
    CHECK(l2_error(mesh, space, coeffs, u) < 1e-12);
    CHECK(h1_semi_error(mesh, space, coeffs, u) < 1e-11);
    CHECK(boundary_weighted_error(mesh, space, coeffs, u) < 1e-11);
  }
}

TEST_CASE("norms of the zero function reproduce analytic values") {
  const Mesh mesh = build_mesh(2, 5, 1.0);
  const DofMap space = build_space(mesh, 2);
  const ExactSolution u = plain_sine2d();
  const std::vector<double> zero(static_cast<std::size_t>(space.num_dofs), 0.0);
  // ||sin(pi x) sin(pi y)||_0 = 1/2, |.|_1 = pi/sqrt(2).
  CHECK(l2_error(mesh, space, zero, u) == doctest::Approx(0.5).epsilon(2e-10));
  CHECK(h1_semi_error(mesh, space, zero, u) ==
        doctest::Approx(M_PI / std::sqrt(2.0)).epsilon(2e-9));
}

TEST_CASE("boundary-weighted norm of the unit mismatch is 2 * 2^(l/2)") {
  const ExactSolution one = {
      [](const Point&) { return 1.0; },
      [](const Point&) { return Point{0.0, 0.0, 0.0}; },
      [](const Point&) { return 0.0; },
  };
  for (int level : {2, 3, 4}) {
    const Mesh mesh = build_mesh(2, level, 1.0);
    const DofMap space = build_space(mesh, 1);
    const std::vector<double> zero(static_cast<std::size_t>(space.num_dofs), 0.0);
    const double expected = 2.0 * std::pow(2.0, 0.5 * level);
    CHECK(boundary_weighted_error(mesh, space, zero, one) ==
          doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("two-level halving ratios sit at the expected orders") {
  // Modified-interpolant style check on plain nodal interpolation of a
  // smooth function: L2 ratio ~ 2^(k+1), H1 ratio ~ 2^k.
  const ExactSolution u = plain_sine2d();
  for (int k = 1; k <= 2; ++k) {
    const Mesh coarse = build_mesh(2, 4, 1.0);
    const Mesh fine = build_mesh(2, 5, 1.0);
    const DofMap sc = build_space(coarse, k);
    const DofMap sf = build_space(fine, k);
    const auto cc = nodal_interpolant(sc, u.value);
    const auto cf = nodal_interpolant(sf, u.value);

    const double l2_ratio =
        l2_error(coarse, sc, cc, u) / l2_error(fine, sf, cf, u);
    CHECK(l2_ratio == doctest::Approx(std::pow(2.0, k + 1)).epsilon(0.15));

    const double h1_ratio =
        h1_semi_error(coarse, sc, cc, u) / h1_semi_error(fine, sf, cf, u);
    CHECK(h1_ratio == doctest::Approx(std::pow(2.0, k)).epsilon(0.10));
  }
  // The weighted boundary norm ratio ~ 2^k needs a trace with exactly
  // H^{k+1/2} regularity; a smooth trace is approximated half an order
  // better.
  for (int k = 1; k <= 2; ++k) {
    const ExactSolution s = boundary_layer2d(k);
    const Mesh coarse = build_mesh(2, 4, 1.0);
    const Mesh fine = build_mesh(2, 5, 1.0);
    const DofMap sc = build_space(coarse, k);
    const DofMap sf = build_space(fine, k);
    const double ratio =
        boundary_weighted_error(coarse, sc, nodal_interpolant(sc, s.value), s) /
        boundary_weighted_error(fine, sf, nodal_interpolant(sf, s.value), s);
    CHECK(ratio == doctest::Approx(std::pow(2.0, k)).epsilon(0.15));
  }
}

TEST_CASE("raising the error quadrature degree barely moves the numbers") {
  const ExactSolution u = sine2d();
  for (int k = 1; k <= 3; ++k) {
    for (const NitscheConfig config :
         {NitscheConfig{1.0, 1.0, 1.0}, NitscheConfig{1.0, 2.0, 1.0},
          NitscheConfig{1.0, 1.0, 0.0}}) {
      const Mesh mesh = build_mesh(2, 3, 1.0);
      const DofMap space = build_space(mesh, k);
      const LinearSystem sys =
          assemble_system(mesh, space, config, u.load(), u.trace());
      const auto [coeffs, stats] = solve_direct(sys);

      const double base = l2_error(mesh, space, coeffs, u, 0);
      const double bumped = l2_error(mesh, space, coeffs, u, 1);
      CHECK(std::abs(base - bumped) / base < 1e-3);

      const double hbase = h1_semi_error(mesh, space, coeffs, u, 0);
      const double hbumped = h1_semi_error(mesh, space, coeffs, u, 1);
      CHECK(std::abs(hbase - hbumped) / hbase < 1e-3);

      const double bbase = boundary_weighted_error(mesh, space, coeffs, u, 0);
      const double bbumped = boundary_weighted_error(mesh, space, coeffs, u, 1);
      CHECK(std::abs(bbase - bbumped) / std::max(bbase, 1e-30) < 1e-3);
    }
  }
}

TEST_CASE("error of an average is below the averaged errors") {
  const Mesh mesh = build_mesh(2, 3, 1.0);
  const DofMap space = build_space(mesh, 1);
  const ExactSolution u = sine2d();
  const auto a = nodal_interpolant(space, u.value);
  std::vector<double> b(a.size(), 0.0);
  std::vector<double> mid(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) mid[i] = 0.5 * (a[i] + b[i]);
  const double ea = l2_error(mesh, space, a, u);
  const double eb = l2_error(mesh, space, b, u);
  const double em = l2_error(mesh, space, mid, u);
  CHECK(em <= 0.5 * (ea + eb) + 1e-12);
}

TEST_CASE("relative errors share the quadrature with the denominators") {
  const Mesh mesh = build_mesh(2, 4, 1.0);
  const DofMap space = build_space(mesh, 1);
  const ExactSolution u = plain_sine2d();
  const std::vector<double> zero(static_cast<std::size_t>(space.num_dofs), 0.0);
  const ErrorReport rep = compute_errors(mesh, space, zero, u, 0.0);
  // coeffs = 0 makes the absolute error the exact norm itself.
  CHECK(rep.l2_rel == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(rep.h1_rel == doctest::Approx(1.0).epsilon(1e-13));
}
