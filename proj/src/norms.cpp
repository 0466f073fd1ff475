#include "nitsche/norms.hpp"

#include <cmath>
#include <random>

#include "nitsche/element.hpp"

namespace nitsche {

namespace {

struct VolumeEval {
  VolumeEval(const Mesh& mesh, const DofMap& space, int quad_bump)
      : elem(mesh.dim, space.degree),
        rule(volume_quadrature(mesh.dim, 2 * space.degree + 2 + 2 * quad_bump)) {
    for (const Point& p : rule.points) {
      values.push_back(elem.eval_basis(p));
      grads.push_back(elem.eval_basis_grad(p));
    }
  }
  ReferenceElement elem;
  QuadratureRule rule;
  std::vector<std::vector<double>> values;
  std::vector<std::vector<Point>> grads;
};

struct FaceEval {
  FaceEval(const Mesh& mesh, const DofMap& space, int quad_bump)
      : elem(mesh.dim, space.degree),
        rule(face_quadrature(mesh.dim, 2 * space.degree + 2 + 2 * quad_bump)),
        scale_ref(mesh.dim == 2 ? 1.0 : 2.0) {
    for (int f = 0; f <= mesh.dim; ++f) {
      std::vector<Point> pts = face_points_in_cell(mesh.dim, f, rule);
      std::vector<std::vector<double>> v;
      std::vector<std::vector<Point>> g;
      for (const Point& p : pts) {
        v.push_back(elem.eval_basis(p));
        g.push_back(elem.eval_basis_grad(p));
      }
      ref_points.push_back(std::move(pts));
      values.push_back(std::move(v));
      grads.push_back(std::move(g));
    }
  }
  ReferenceElement elem;
  QuadratureRule rule;
  double scale_ref;
  std::vector<std::vector<Point>> ref_points;               // [face][point]
  std::vector<std::vector<std::vector<double>>> values;     // [face][point][basis]
  std::vector<std::vector<std::vector<Point>>> grads;       // [face][point][basis]
};

// Accumulates sum_T int_T integrand over cells in ascending order.
template <typename Integrand>
double volume_accumulate(const Mesh& mesh, const DofMap& space,
                         const VolumeEval& ev, Integrand&& integrand) {
  CompensatedSum acc;
  const int npc = space.dofs_per_cell;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const AffineMap map = cell_affine_map(mesh, c);
    const auto dofs = space.cell_dof_span(c);
    for (int q = 0; q < ev.rule.size(); ++q) {
      const double w = ev.rule.weights[static_cast<std::size_t>(q)] * map.det;
      const Point x = map.apply(ev.rule.points[static_cast<std::size_t>(q)]);
      acc.add(w * integrand(x, map, dofs, npc, q));
    }
  }
  return acc.value();
}

}  // namespace

FdCheck fd_consistency(const ExactSolution& u, int dim, int n_points,
                       unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(0.05, 0.95);
  constexpr double step = 1e-6;
  FdCheck check;
  for (int it = 0; it < n_points; ++it) {
    Point x{};
    for (int d = 0; d < dim; ++d) x[static_cast<std::size_t>(d)] = dist(rng);
    const Point grad = u.gradient(x);
    double lap_fd = 0.0;
    for (int d = 0; d < dim; ++d) {
      Point xp = x, xm = x;
      xp[static_cast<std::size_t>(d)] += step;
      xm[static_cast<std::size_t>(d)] -= step;
      const double g_fd = (u.value(xp) - u.value(xm)) / (2.0 * step);
      check.gradient_defect = std::max(
          check.gradient_defect, std::abs(g_fd - grad[static_cast<std::size_t>(d)]));
      lap_fd += (u.gradient(xp)[static_cast<std::size_t>(d)] -
                 u.gradient(xm)[static_cast<std::size_t>(d)]) /
                (2.0 * step);
    }
    check.laplacian_defect =
        std::max(check.laplacian_defect, std::abs(lap_fd - u.laplacian(x)));
  }
  return check;
}

double l2_error(const Mesh& mesh, const DofMap& space,
                std::span<const double> coeffs, const ExactSolution& exact,
                int quad_bump) {
  const VolumeEval ev(mesh, space, quad_bump);
  const double s = volume_accumulate(
      mesh, space, ev,
      [&](const Point& x, const AffineMap&, std::span<const int> dofs, int npc,
          int q) {
        double uh = 0.0;
        for (int i = 0; i < npc; ++i) {
          uh += coeffs[static_cast<std::size_t>(dofs[i])] *
                ev.values[static_cast<std::size_t>(q)][static_cast<std::size_t>(i)];
        }
        const double e = exact.value(x) - uh;
        return e * e;
      });
  return std::sqrt(std::max(0.0, s));
}

double h1_semi_error(const Mesh& mesh, const DofMap& space,
                     std::span<const double> coeffs, const ExactSolution& exact,
                     int quad_bump) {
  const VolumeEval ev(mesh, space, quad_bump);
  const double s = volume_accumulate(
      mesh, space, ev,
      [&](const Point& x, const AffineMap& map, std::span<const int> dofs,
          int npc, int q) {
        Point gh{};
        for (int i = 0; i < npc; ++i) {
          const Point g = map.push_gradient(
              ev.grads[static_cast<std::size_t>(q)][static_cast<std::size_t>(i)]);
          gh = gh + coeffs[static_cast<std::size_t>(dofs[i])] * g;
        }
        const Point e = exact.gradient(x) - gh;
        return dot(e, e);
      });
  return std::sqrt(std::max(0.0, s));
}

double boundary_weighted_error(const Mesh& mesh, const DofMap& space,
                               std::span<const double> coeffs,
                               const ExactSolution& exact, int quad_bump) {
  const FaceEval ev(mesh, space, quad_bump);
  CompensatedSum acc;
  const int npc = space.dofs_per_cell;
  for (const BoundaryFace& bf : mesh.boundary_faces) {
    const AffineMap map = cell_affine_map(mesh, bf.cell);
    const auto dofs = space.cell_dof_span(bf.cell);
    const auto f = static_cast<std::size_t>(bf.local_face);
    const double scale = bf.area * ev.scale_ref / bf.diameter;
    for (int q = 0; q < ev.rule.size(); ++q) {
      const double w = ev.rule.weights[static_cast<std::size_t>(q)] * scale;
      const Point x = map.apply(ev.ref_points[f][static_cast<std::size_t>(q)]);
      double uh = 0.0;
      for (int i = 0; i < npc; ++i) {
        uh += coeffs[static_cast<std::size_t>(dofs[i])] *
              ev.values[f][static_cast<std::size_t>(q)][static_cast<std::size_t>(i)];
      }
      const double e = exact.value(x) - uh;
      acc.add(w * e * e);
    }
  }
  return std::sqrt(std::max(0.0, acc.value()));
}

BoundaryErrors boundary_errors(const Mesh& mesh, const DofMap& space,
                               std::span<const double> coeffs,
                               const ExactSolution& exact, int quad_bump) {
  const FaceEval ev(mesh, space, quad_bump);
  CompensatedSum val_acc, grad_acc;
  const int npc = space.dofs_per_cell;
  for (const BoundaryFace& bf : mesh.boundary_faces) {
    const AffineMap map = cell_affine_map(mesh, bf.cell);
    const auto dofs = space.cell_dof_span(bf.cell);
    const auto f = static_cast<std::size_t>(bf.local_face);
    const double scale = bf.area * ev.scale_ref;
    for (int q = 0; q < ev.rule.size(); ++q) {
      const double w = ev.rule.weights[static_cast<std::size_t>(q)] * scale;
      const Point x = map.apply(ev.ref_points[f][static_cast<std::size_t>(q)]);
      double uh = 0.0;
      Point gh{};
      for (int i = 0; i < npc; ++i) {
        const double ci = coeffs[static_cast<std::size_t>(dofs[i])];
        uh += ci * ev.values[f][static_cast<std::size_t>(q)][static_cast<std::size_t>(i)];
        gh = gh + ci * map.push_gradient(
                      ev.grads[f][static_cast<std::size_t>(q)][static_cast<std::size_t>(i)]);
      }
      const double e = exact.value(x) - uh;
      const Point ge = exact.gradient(x) - gh;
      val_acc.add(w * e * e);
      grad_acc.add(w * dot(ge, ge));
    }
  }
  return {std::sqrt(std::max(0.0, val_acc.value())),
          std::sqrt(std::max(0.0, grad_acc.value()))};
}

ExactNorms exact_norms(const Mesh& mesh, const DofMap& space,
                       const ExactSolution& exact, int quad_bump) {
  const VolumeEval ev(mesh, space, quad_bump);
  CompensatedSum l2, h1;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const AffineMap map = cell_affine_map(mesh, c);
    for (int q = 0; q < ev.rule.size(); ++q) {
      const double w = ev.rule.weights[static_cast<std::size_t>(q)] * map.det;
      const Point x = map.apply(ev.rule.points[static_cast<std::size_t>(q)]);
      const double u = exact.value(x);
      const Point g = exact.gradient(x);
      l2.add(w * u * u);
      h1.add(w * dot(g, g));
    }
  }
  return {std::sqrt(std::max(0.0, l2.value())), std::sqrt(std::max(0.0, h1.value()))};
}

ErrorReport compute_errors(const Mesh& mesh, const DofMap& space,
                           std::span<const double> coeffs,
                           const ExactSolution& exact, double residual,
                           int quad_bump) {
  ErrorReport rep;
  rep.l2_abs = l2_error(mesh, space, coeffs, exact, quad_bump);
  rep.h1_abs = h1_semi_error(mesh, space, coeffs, exact, quad_bump);
  rep.bnd_abs = boundary_weighted_error(mesh, space, coeffs, exact, quad_bump);
  const ExactNorms norms = exact_norms(mesh, space, exact, quad_bump);
  rep.l2_rel = norms.l2 > 0.0 ? rep.l2_abs / norms.l2 : rep.l2_abs;
  rep.h1_rel = norms.h1_semi > 0.0 ? rep.h1_abs / norms.h1_semi : rep.h1_abs;
  rep.residual = residual;
  return rep;
}

}  // namespace nitsche
