#include "nitsche/interpolation.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "nitsche/element.hpp"

namespace nitsche {

namespace {

// Boundary-face quadrature context at exactness 2k + 2 (exact for the
// degree-2k mass integrand; the extra margin serves the u-moments).
struct FaceContext {
  FaceContext(const Mesh& mesh, const DofMap& space)
      : elem(mesh.dim, space.degree),
        rule(face_quadrature(mesh.dim, 2 * space.degree + 2)),
        scale_ref(mesh.dim == 2 ? 1.0 : 2.0) {
    for (int f = 0; f <= mesh.dim; ++f) {
      std::vector<Point> pts = face_points_in_cell(mesh.dim, f, rule);
      std::vector<std::vector<double>> v;
      for (const Point& p : pts) v.push_back(elem.eval_basis(p));
      ref_points.push_back(std::move(pts));
      values.push_back(std::move(v));
    }
  }

  double face_weight(const BoundaryFace& bf, ProjectionVariant variant,
                     double alpha) const {
    return variant == ProjectionVariant::weighted
               ? std::pow(bf.diameter, -alpha)
               : 1.0;
  }

  ReferenceElement elem;
  QuadratureRule rule;
  double scale_ref;
  std::vector<std::vector<Point>> ref_points;
  std::vector<std::vector<std::vector<double>>> values;
};

}  // namespace

struct BoundaryProjection::Factorization {
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  std::vector<int> global_to_local;  // -1 for non-boundary DOFs
  std::vector<int> local_to_global;
};

BoundaryProjection::BoundaryProjection(const Mesh& mesh, const DofMap& space,
                                       ProjectionVariant variant, double alpha)
    : variant_(variant), alpha_(alpha) {
  if (variant == ProjectionVariant::weighted && !(alpha >= 1.0)) {
    throw std::invalid_argument("BoundaryProjection: alpha must be >= 1");
  }
  const FaceContext ctx(mesh, space);
  auto fact = std::make_shared<Factorization>();
  fact->global_to_local.assign(static_cast<std::size_t>(space.num_dofs), -1);
  fact->local_to_global = space.boundary_dofs;
  const int nb = static_cast<int>(space.boundary_dofs.size());
  for (int l = 0; l < nb; ++l) {
    fact->global_to_local[static_cast<std::size_t>(space.boundary_dofs[static_cast<std::size_t>(l)])] = l;
  }

  // Gram entries <w phi_i, phi_j>_Gamma accumulated face by face.
  std::map<std::pair<int, int>, double> entries;
  const int npc = space.dofs_per_cell;
  for (const BoundaryFace& bf : mesh.boundary_faces) {
    const auto dofs = space.cell_dof_span(bf.cell);
    const auto f = static_cast<std::size_t>(bf.local_face);
    const double wface = ctx.face_weight(bf, variant, alpha);
    for (int q = 0; q < ctx.rule.size(); ++q) {
      const double w =
          ctx.rule.weights[static_cast<std::size_t>(q)] * bf.area * ctx.scale_ref * wface;
      const auto& vals = ctx.values[f][static_cast<std::size_t>(q)];
      for (int i = 0; i < npc; ++i) {
        const int li = fact->global_to_local[static_cast<std::size_t>(dofs[i])];
        if (li < 0 || vals[static_cast<std::size_t>(i)] == 0.0) continue;
        for (int j = 0; j < npc; ++j) {
          const int lj = fact->global_to_local[static_cast<std::size_t>(dofs[j])];
          if (lj < 0) continue;
          entries[{li, lj}] += w * vals[static_cast<std::size_t>(i)] *
                               vals[static_cast<std::size_t>(j)];
        }
      }
    }
  }

  mass_.rows = mass_.cols = nb;
  mass_.row_offsets.assign(static_cast<std::size_t>(nb) + 1, 0);
  for (const auto& [key, val] : entries) {
    ++mass_.row_offsets[static_cast<std::size_t>(key.first) + 1];
  }
  for (int i = 0; i < nb; ++i) {
    mass_.row_offsets[static_cast<std::size_t>(i) + 1] +=
        mass_.row_offsets[static_cast<std::size_t>(i)];
  }
  mass_.col_indices.resize(entries.size());
  mass_.values.resize(entries.size());
  {
    std::vector<int> cursor(mass_.row_offsets.begin(), mass_.row_offsets.end() - 1);
    for (const auto& [key, val] : entries) {
      const int p = cursor[static_cast<std::size_t>(key.first)]++;
      mass_.col_indices[static_cast<std::size_t>(p)] = key.second;
      mass_.values[static_cast<std::size_t>(p)] = val;
    }
  }

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(entries.size());
  for (const auto& [key, val] : entries) {
    trips.emplace_back(key.first, key.second, val);
  }
  Eigen::SparseMatrix<double> M(nb, nb);
  M.setFromTriplets(trips.begin(), trips.end());
  fact->ldlt.compute(M);
  if (fact->ldlt.info() != Eigen::Success) {
    throw std::runtime_error("BoundaryProjection: factorization failed");
  }
  const Eigen::VectorXd d = fact->ldlt.vectorD();
  const double dmax = d.maxCoeff();
  const double dmin = d.minCoeff();
  if (!(dmin > 0.0)) {
    throw std::runtime_error("BoundaryProjection: boundary mass not positive definite");
  }
  cond_estimate_ = dmax / dmin;
  if (cond_estimate_ > 1e14) {
    throw std::runtime_error("BoundaryProjection: conditioning exceeds 1e14");
  }
  factorization_ = std::move(fact);
}

std::vector<double> BoundaryProjection::solve(std::span<const double> moments) const {
  if (moments.size() != static_cast<std::size_t>(mass_.rows)) {
    throw std::invalid_argument("BoundaryProjection::solve: size mismatch");
  }
  Eigen::Map<const Eigen::VectorXd> b(moments.data(),
                                      static_cast<Eigen::Index>(moments.size()));
  const Eigen::VectorXd x = factorization_->ldlt.solve(b);
  return std::vector<double>(x.data(), x.data() + x.size());
}

std::vector<double> modified_interpolant(const Mesh& mesh, const DofMap& space,
                                         const ExactSolution& exact,
                                         const BoundaryProjection& proj) {
  std::vector<double> coeffs = nodal_interpolant(space, exact.value);

  const FaceContext ctx(mesh, space);
  const int nb = static_cast<int>(space.boundary_dofs.size());
  std::vector<int> global_to_local(static_cast<std::size_t>(space.num_dofs), -1);
  for (int l = 0; l < nb; ++l) {
    global_to_local[static_cast<std::size_t>(space.boundary_dofs[static_cast<std::size_t>(l)])] = l;
  }

  std::vector<double> moments(static_cast<std::size_t>(nb), 0.0);
  const int npc = space.dofs_per_cell;
  for (const BoundaryFace& bf : mesh.boundary_faces) {
    const AffineMap map = cell_affine_map(mesh, bf.cell);
    const auto dofs = space.cell_dof_span(bf.cell);
    const auto f = static_cast<std::size_t>(bf.local_face);
    const double wface = ctx.face_weight(bf, proj.variant(), proj.alpha());
    for (int q = 0; q < ctx.rule.size(); ++q) {
      const double w =
          ctx.rule.weights[static_cast<std::size_t>(q)] * bf.area * ctx.scale_ref * wface;
      const Point x = map.apply(ctx.ref_points[f][static_cast<std::size_t>(q)]);
      const double ux = exact.value(x);
      const auto& vals = ctx.values[f][static_cast<std::size_t>(q)];
      for (int i = 0; i < npc; ++i) {
        const int li = global_to_local[static_cast<std::size_t>(dofs[i])];
        if (li < 0) continue;
        moments[static_cast<std::size_t>(li)] += w * ux * vals[static_cast<std::size_t>(i)];
      }
    }
  }

  const std::vector<double> bnd_coeffs = proj.solve(moments);
  for (int l = 0; l < nb; ++l) {
    coeffs[static_cast<std::size_t>(space.boundary_dofs[static_cast<std::size_t>(l)])] =
        bnd_coeffs[static_cast<std::size_t>(l)];
  }
  return coeffs;
}

double boundary_orthogonality_residual(const Mesh& mesh, const DofMap& space,
                                       std::span<const double> coeffs,
                                       const ExactSolution& exact,
                                       const BoundaryProjection& proj) {
  const FaceContext ctx(mesh, space);
  const int nb = static_cast<int>(space.boundary_dofs.size());
  std::vector<int> global_to_local(static_cast<std::size_t>(space.num_dofs), -1);
  for (int l = 0; l < nb; ++l) {
    global_to_local[static_cast<std::size_t>(space.boundary_dofs[static_cast<std::size_t>(l)])] = l;
  }

  std::vector<double> residual(static_cast<std::size_t>(nb), 0.0);
  const int npc = space.dofs_per_cell;
  for (const BoundaryFace& bf : mesh.boundary_faces) {
    const AffineMap map = cell_affine_map(mesh, bf.cell);
    const auto dofs = space.cell_dof_span(bf.cell);
    const auto f = static_cast<std::size_t>(bf.local_face);
    const double wface = ctx.face_weight(bf, proj.variant(), proj.alpha());
    for (int q = 0; q < ctx.rule.size(); ++q) {
      const double w =
          ctx.rule.weights[static_cast<std::size_t>(q)] * bf.area * ctx.scale_ref * wface;
      const Point x = map.apply(ctx.ref_points[f][static_cast<std::size_t>(q)]);
      const auto& vals = ctx.values[f][static_cast<std::size_t>(q)];
      double ih = 0.0;
      for (int i = 0; i < npc; ++i) {
        ih += coeffs[static_cast<std::size_t>(dofs[i])] * vals[static_cast<std::size_t>(i)];
      }
      const double defect = exact.value(x) - ih;
      for (int i = 0; i < npc; ++i) {
        const int li = global_to_local[static_cast<std::size_t>(dofs[i])];
        if (li < 0) continue;
        residual[static_cast<std::size_t>(li)] += w * defect * vals[static_cast<std::size_t>(i)];
      }
    }
  }
  double rmax = 0.0;
  for (double r : residual) rmax = std::max(rmax, std::abs(r));
  return rmax;
}

}  // namespace nitsche
