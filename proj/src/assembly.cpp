#include "nitsche/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "nitsche/element.hpp"

namespace nitsche {

namespace {

// Basis values and reference gradients tabulated at a set of reference
// points.
struct Tabulation {
  std::vector<Point> ref_points;
  std::vector<std::vector<double>> values;  // [point][basis]
  std::vector<std::vector<Point>> grads;    // [point][basis]
};

Tabulation tabulate(const ReferenceElement& elem, const std::vector<Point>& pts) {
  Tabulation tab;
  tab.ref_points = pts;
  tab.values.reserve(pts.size());
  tab.grads.reserve(pts.size());
  for (const Point& p : pts) {
    tab.values.push_back(elem.eval_basis(p));
    tab.grads.push_back(elem.eval_basis_grad(p));
  }
  return tab;
}

// Shared state for matrix, rhs and matrix-free passes.
struct Kernel {
  Kernel(const Mesh& mesh, const DofMap& space)
      : elem(mesh.dim, space.degree),
        volume_rule(volume_quadrature(mesh.dim, 2 * space.degree)),
        face_rule(face_quadrature(mesh.dim, 2 * space.degree)),
        volume_tab(tabulate(elem, volume_rule.points)),
        face_scale_ref(mesh.dim == 2 ? 1.0 : 2.0) {
    // Face-rule points mapped into the reference cell, one tabulation per
    // local face.
    face_tabs.reserve(static_cast<std::size_t>(mesh.dim) + 1);
    for (int f = 0; f <= mesh.dim; ++f) {
      face_tabs.push_back(
          tabulate(elem, face_points_in_cell(mesh.dim, f, face_rule)));
    }
  }

  ReferenceElement elem;
  QuadratureRule volume_rule;
  QuadratureRule face_rule;
  Tabulation volume_tab;
  std::vector<Tabulation> face_tabs;
  double face_scale_ref;  // physical area multiplier: area * this
};

std::vector<char> boundary_flags(const DofMap& space) {
  std::vector<char> flag(static_cast<std::size_t>(space.num_dofs), 0);
  for (int d : space.boundary_dofs) flag[static_cast<std::size_t>(d)] = 1;
  return flag;
}

void check_config_and_sizes(const DofMap& space, const NitscheConfig& config,
                            std::span<const double> u, std::span<const double> v) {
  config.check();
  if (u.size() != static_cast<std::size_t>(space.num_dofs) ||
      v.size() != static_cast<std::size_t>(space.num_dofs)) {
    throw std::invalid_argument("apply_form: coefficient length mismatch");
  }
}

}  // namespace

void NitscheConfig::check() const {
  if (beta != 1.0 && beta != -1.0) {
    throw std::invalid_argument("NitscheConfig: beta must be +1 or -1");
  }
  if (!(alpha >= 1.0)) {
    throw std::invalid_argument("NitscheConfig: alpha must be >= 1");
  }
  if (!(c0 >= 0.0)) {
    throw std::invalid_argument("NitscheConfig: c0 must be >= 0");
  }
  if (beta == -1.0 && !(c0 > 0.0)) {
    throw std::invalid_argument(
        "NitscheConfig: symmetric mode (beta = -1) requires c0 > 0");
  }
}

double CsrMatrix::coeff(int i, int j) const {
  const int begin = row_offsets[static_cast<std::size_t>(i)];
  const int end = row_offsets[static_cast<std::size_t>(i) + 1];
  const auto first = col_indices.begin() + begin;
  const auto last = col_indices.begin() + end;
  const auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return 0.0;
  return values[static_cast<std::size_t>(it - col_indices.begin())];
}

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  for (int i = 0; i < rows; ++i) {
    double s = 0.0;
    for (int p = row_offsets[static_cast<std::size_t>(i)];
         p < row_offsets[static_cast<std::size_t>(i) + 1]; ++p) {
      s += values[static_cast<std::size_t>(p)] *
           x[static_cast<std::size_t>(col_indices[static_cast<std::size_t>(p)])];
    }
    y[static_cast<std::size_t>(i)] = s;
  }
}

LinearSystem assemble_system(const Mesh& mesh, const DofMap& space,
                             const NitscheConfig& config, const ScalarField& f,
                             const ScalarField& g) {
  config.check();
  const Kernel kernel(mesh, space);
  const int npc = space.dofs_per_cell;

  // Symbolic pass: all DOF pairs of a cell couple (face terms touch only
  // DOFs of the adjacent cell, so cell coupling covers them).
  std::vector<std::vector<int>> pattern(static_cast<std::size_t>(space.num_dofs));
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto dofs = space.cell_dof_span(c);
    for (int i = 0; i < npc; ++i) {
      auto& row = pattern[static_cast<std::size_t>(dofs[i])];
      row.insert(row.end(), dofs.begin(), dofs.end());
    }
  }

  LinearSystem sys;
  CsrMatrix& A = sys.matrix;
  A.rows = A.cols = space.num_dofs;
  A.row_offsets.assign(static_cast<std::size_t>(space.num_dofs) + 1, 0);
  for (int i = 0; i < space.num_dofs; ++i) {
    auto& row = pattern[static_cast<std::size_t>(i)];
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    A.row_offsets[static_cast<std::size_t>(i) + 1] =
        A.row_offsets[static_cast<std::size_t>(i)] + static_cast<int>(row.size());
  }
  A.col_indices.reserve(static_cast<std::size_t>(A.row_offsets.back()));
  for (auto& row : pattern) {
    A.col_indices.insert(A.col_indices.end(), row.begin(), row.end());
  }
  A.values.assign(A.col_indices.size(), 0.0);
  sys.rhs.assign(static_cast<std::size_t>(space.num_dofs), 0.0);

  auto scatter = [&](int gi, int gj, double v) {
    const int begin = A.row_offsets[static_cast<std::size_t>(gi)];
    const int end = A.row_offsets[static_cast<std::size_t>(gi) + 1];
    const auto it = std::lower_bound(A.col_indices.begin() + begin,
                                     A.col_indices.begin() + end, gj);
    A.values[static_cast<std::size_t>(it - A.col_indices.begin())] += v;
  };

  std::vector<double> local(static_cast<std::size_t>(npc) *
                            static_cast<std::size_t>(npc));
  std::vector<double> local_rhs(static_cast<std::size_t>(npc));
  std::vector<Point> phys_grad(static_cast<std::size_t>(npc));

  // Volume terms, ascending cell order.
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const AffineMap map = cell_affine_map(mesh, c);
    std::fill(local.begin(), local.end(), 0.0);
    std::fill(local_rhs.begin(), local_rhs.end(), 0.0);
    for (int q = 0; q < kernel.volume_rule.size(); ++q) {
      const double w = kernel.volume_rule.weights[static_cast<std::size_t>(q)] * map.det;
      for (int i = 0; i < npc; ++i) {
        phys_grad[static_cast<std::size_t>(i)] = map.push_gradient(
            kernel.volume_tab.grads[static_cast<std::size_t>(q)][static_cast<std::size_t>(i)]);
      }
      for (int i = 0; i < npc; ++i) {
        for (int j = 0; j < npc; ++j) {
          local[static_cast<std::size_t>(i * npc + j)] +=
              w * dot(phys_grad[static_cast<std::size_t>(i)],
                      phys_grad[static_cast<std::size_t>(j)]);
        }
      }
      const Point x = map.apply(
          kernel.volume_tab.ref_points[static_cast<std::size_t>(q)]);
      const double fx = f(x);
      for (int i = 0; i < npc; ++i) {
        local_rhs[static_cast<std::size_t>(i)] +=
            w * fx *
            kernel.volume_tab.values[static_cast<std::size_t>(q)][static_cast<std::size_t>(i)];
      }
    }
    const auto dofs = space.cell_dof_span(c);
    for (int i = 0; i < npc; ++i) {
      for (int j = 0; j < npc; ++j) {
        scatter(dofs[i], dofs[j], local[static_cast<std::size_t>(i * npc + j)]);
      }
      sys.rhs[static_cast<std::size_t>(dofs[i])] += local_rhs[static_cast<std::size_t>(i)];
    }
  }

  // Boundary terms, ascending face order.
  for (const BoundaryFace& bf : mesh.boundary_faces) {
    const AffineMap map = cell_affine_map(mesh, bf.cell);
    const Tabulation& tab = kernel.face_tabs[static_cast<std::size_t>(bf.local_face)];
    const double scale = bf.area * kernel.face_scale_ref;
    const double penalty = config.c0 * std::pow(bf.diameter, -config.alpha);
    std::fill(local.begin(), local.end(), 0.0);
    std::fill(local_rhs.begin(), local_rhs.end(), 0.0);
    for (int q = 0; q < kernel.face_rule.size(); ++q) {
      const double w = kernel.face_rule.weights[static_cast<std::size_t>(q)] * scale;
      const auto& vals = tab.values[static_cast<std::size_t>(q)];
      for (int i = 0; i < npc; ++i) {
        phys_grad[static_cast<std::size_t>(i)] =
            map.push_gradient(tab.grads[static_cast<std::size_t>(q)][static_cast<std::size_t>(i)]);
      }
      for (int i = 0; i < npc; ++i) {
        const double dn_i = dot(phys_grad[static_cast<std::size_t>(i)], bf.normal);
        for (int j = 0; j < npc; ++j) {
          const double dn_j = dot(phys_grad[static_cast<std::size_t>(j)], bf.normal);
          // A_ij = a(phi_j, phi_i): trial j, test i.
          local[static_cast<std::size_t>(i * npc + j)] +=
              w * (-dn_j * vals[static_cast<std::size_t>(i)] +
                   config.beta * vals[static_cast<std::size_t>(j)] * dn_i +
                   penalty * vals[static_cast<std::size_t>(j)] *
                       vals[static_cast<std::size_t>(i)]);
        }
      }
      const Point x = map.apply(tab.ref_points[static_cast<std::size_t>(q)]);
      const double gx = g(x);
      for (int i = 0; i < npc; ++i) {
        const double dn_i = dot(phys_grad[static_cast<std::size_t>(i)], bf.normal);
        local_rhs[static_cast<std::size_t>(i)] +=
            w * gx * (config.beta * dn_i + penalty * vals[static_cast<std::size_t>(i)]);
      }
    }
    const auto dofs = space.cell_dof_span(bf.cell);
    for (int i = 0; i < npc; ++i) {
      for (int j = 0; j < npc; ++j) {
        scatter(dofs[i], dofs[j], local[static_cast<std::size_t>(i * npc + j)]);
      }
      sys.rhs[static_cast<std::size_t>(dofs[i])] += local_rhs[static_cast<std::size_t>(i)];
    }
  }

  return sys;
}

std::vector<double> assemble_rhs(const Mesh& mesh, const DofMap& space,
                                 const NitscheConfig& config,
                                 const ScalarField& f, const ScalarField& g) {
  config.check();
  const Kernel kernel(mesh, space);
  const int npc = space.dofs_per_cell;
  std::vector<double> rhs(static_cast<std::size_t>(space.num_dofs), 0.0);
  std::vector<Point> phys_grad(static_cast<std::size_t>(npc));

  for (int c = 0; c < mesh.num_cells(); ++c) {
    const AffineMap map = cell_affine_map(mesh, c);
    const auto dofs = space.cell_dof_span(c);
    for (int q = 0; q < kernel.volume_rule.size(); ++q) {
      const double w = kernel.volume_rule.weights[static_cast<std::size_t>(q)] * map.det;
      const Point x = map.apply(kernel.volume_tab.ref_points[static_cast<std::size_t>(q)]);
      const double fx = f(x);
      for (int i = 0; i < npc; ++i) {
        rhs[static_cast<std::size_t>(dofs[i])] +=
            w * fx *
            kernel.volume_tab.values[static_cast<std::size_t>(q)][static_cast<std::size_t>(i)];
      }
    }
  }
  for (const BoundaryFace& bf : mesh.boundary_faces) {
    const AffineMap map = cell_affine_map(mesh, bf.cell);
    const Tabulation& tab = kernel.face_tabs[static_cast<std::size_t>(bf.local_face)];
    const double scale = bf.area * kernel.face_scale_ref;
    const double penalty = config.c0 * std::pow(bf.diameter, -config.alpha);
    const auto dofs = space.cell_dof_span(bf.cell);
    for (int q = 0; q < kernel.face_rule.size(); ++q) {
      const double w = kernel.face_rule.weights[static_cast<std::size_t>(q)] * scale;
      const auto& vals = tab.values[static_cast<std::size_t>(q)];
      const Point x = map.apply(tab.ref_points[static_cast<std::size_t>(q)]);
      const double gx = g(x);
      for (int i = 0; i < npc; ++i) {
        const Point grad = map.push_gradient(
            tab.grads[static_cast<std::size_t>(q)][static_cast<std::size_t>(i)]);
        rhs[static_cast<std::size_t>(dofs[i])] +=
            w * gx * (config.beta * dot(grad, bf.normal) +
                      penalty * vals[static_cast<std::size_t>(i)]);
      }
    }
  }
  return rhs;
}

double apply_form(const Mesh& mesh, const DofMap& space,
                  const NitscheConfig& config, std::span<const double> u_coeffs,
                  std::span<const double> v_coeffs) {
  check_config_and_sizes(space, config, u_coeffs, v_coeffs);
  const Kernel kernel(mesh, space);
  const int npc = space.dofs_per_cell;
  CompensatedSum acc;

  for (int c = 0; c < mesh.num_cells(); ++c) {
    const AffineMap map = cell_affine_map(mesh, c);
    const auto dofs = space.cell_dof_span(c);
    for (int q = 0; q < kernel.volume_rule.size(); ++q) {
      const double w = kernel.volume_rule.weights[static_cast<std::size_t>(q)] * map.det;
      Point gu{}, gv{};
      for (int i = 0; i < npc; ++i) {
        const Point g = map.push_gradient(
            kernel.volume_tab.grads[static_cast<std::size_t>(q)][static_cast<std::size_t>(i)]);
        gu = gu + u_coeffs[static_cast<std::size_t>(dofs[i])] * g;
        gv = gv + v_coeffs[static_cast<std::size_t>(dofs[i])] * g;
      }
      acc.add(w * dot(gu, gv));
    }
  }
  for (const BoundaryFace& bf : mesh.boundary_faces) {
    const AffineMap map = cell_affine_map(mesh, bf.cell);
    const Tabulation& tab = kernel.face_tabs[static_cast<std::size_t>(bf.local_face)];
    const double scale = bf.area * kernel.face_scale_ref;
    const double penalty = config.c0 * std::pow(bf.diameter, -config.alpha);
    const auto dofs = space.cell_dof_span(bf.cell);
    for (int q = 0; q < kernel.face_rule.size(); ++q) {
      const double w = kernel.face_rule.weights[static_cast<std::size_t>(q)] * scale;
      const auto& vals = tab.values[static_cast<std::size_t>(q)];
      double u = 0.0, v = 0.0;
      Point gu{}, gv{};
      for (int i = 0; i < npc; ++i) {
        const double uc = u_coeffs[static_cast<std::size_t>(dofs[i])];
        const double vc = v_coeffs[static_cast<std::size_t>(dofs[i])];
        u += uc * vals[static_cast<std::size_t>(i)];
        v += vc * vals[static_cast<std::size_t>(i)];
        const Point g = map.push_gradient(
            tab.grads[static_cast<std::size_t>(q)][static_cast<std::size_t>(i)]);
        gu = gu + uc * g;
        gv = gv + vc * g;
      }
      acc.add(w * (-dot(gu, bf.normal) * v + config.beta * u * dot(gv, bf.normal) +
                   penalty * u * v));
    }
  }
  return acc.value();
}

StructureReport structure_check(const CsrMatrix& matrix, const DofMap& space,
                                const NitscheConfig& config) {
  config.check();
  const std::vector<char> on_boundary = boundary_flags(space);
  StructureReport rep;
  for (int i = 0; i < matrix.rows; ++i) {
    for (int p = matrix.row_offsets[static_cast<std::size_t>(i)];
         p < matrix.row_offsets[static_cast<std::size_t>(i) + 1]; ++p) {
      const int j = matrix.col_indices[static_cast<std::size_t>(p)];
      if (j < i) continue;  // pattern is structurally symmetric
      const double d =
          std::abs(matrix.values[static_cast<std::size_t>(p)] - matrix.coeff(j, i));
      rep.symmetry_defect = std::max(rep.symmetry_defect, d);
      if (!on_boundary[static_cast<std::size_t>(i)] &&
          !on_boundary[static_cast<std::size_t>(j)]) {
        rep.interior_symmetry_defect = std::max(rep.interior_symmetry_defect, d);
      }
    }
  }
  rep.defect_on_boundary_only = rep.interior_symmetry_defect <= 1e-12;
  return rep;
}

void write_matrix_market(const CsrMatrix& matrix, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("write_matrix_market: cannot open " + path);
  }
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << matrix.rows << " " << matrix.cols << " " << matrix.nnz() << "\n";
  char buf[64];
  for (int i = 0; i < matrix.rows; ++i) {
    for (int p = matrix.row_offsets[static_cast<std::size_t>(i)];
         p < matrix.row_offsets[static_cast<std::size_t>(i) + 1]; ++p) {
      std::snprintf(buf, sizeof(buf), "%d %d %.17g\n", i + 1,
                    matrix.col_indices[static_cast<std::size_t>(p)] + 1,
                    matrix.values[static_cast<std::size_t>(p)]);
      out << buf;
    }
  }
  if (!out) {
    throw std::runtime_error("write_matrix_market: write failed for " + path);
  }
}

}  // namespace nitsche
