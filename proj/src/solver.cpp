#include "nitsche/solver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace nitsche {

namespace {

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

Eigen::SparseMatrix<double> to_eigen(const CsrMatrix& matrix) {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(matrix.nnz());
  for (int i = 0; i < matrix.rows; ++i) {
    for (int p = matrix.row_offsets[static_cast<std::size_t>(i)];
         p < matrix.row_offsets[static_cast<std::size_t>(i) + 1]; ++p) {
      trips.emplace_back(i, matrix.col_indices[static_cast<std::size_t>(p)],
                         matrix.values[static_cast<std::size_t>(p)]);
    }
  }
  Eigen::SparseMatrix<double> A(matrix.rows, matrix.cols);
  A.setFromTriplets(trips.begin(), trips.end());
  A.makeCompressed();
  return A;
}

}  // namespace

double relative_residual(const CsrMatrix& matrix, std::span<const double> x,
                         std::span<const double> b) {
  std::vector<double> r(b.begin(), b.end());
  std::vector<double> ax(static_cast<std::size_t>(matrix.rows));
  matrix.multiply(x, ax);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= ax[i];
  const double nb = norm2(b);
  if (nb == 0.0) return norm2(r) == 0.0 ? 0.0 : norm2(r);
  return norm2(r) / nb;
}

struct DirectSolver::Impl {
  Eigen::SparseMatrix<double> A;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
};

DirectSolver::DirectSolver(const CsrMatrix& matrix) : impl_(new Impl) {
  if (matrix.rows != matrix.cols) {
    throw std::invalid_argument("DirectSolver: matrix must be square");
  }
  impl_->A = to_eigen(matrix);
  impl_->lu.compute(impl_->A);
  if (impl_->lu.info() != Eigen::Success) {
    throw std::runtime_error("DirectSolver: factorization failed (" +
                             impl_->lu.lastErrorMessage() + ")");
  }
}

DirectSolver::~DirectSolver() = default;
DirectSolver::DirectSolver(DirectSolver&&) noexcept = default;
DirectSolver& DirectSolver::operator=(DirectSolver&&) noexcept = default;

std::vector<double> DirectSolver::solve(std::span<const double> rhs) const {
  Eigen::Map<const Eigen::VectorXd> b(rhs.data(),
                                      static_cast<Eigen::Index>(rhs.size()));
  const Eigen::VectorXd x = impl_->lu.solve(b);
  if (impl_->lu.info() != Eigen::Success) {
    throw std::runtime_error("DirectSolver: back substitution failed");
  }
  return std::vector<double>(x.data(), x.data() + x.size());
}

std::pair<std::vector<double>, SolveStats> solve_direct(const LinearSystem& system) {
  const auto t0 = std::chrono::steady_clock::now();
  SolveStats stats;
  stats.method = SolveMethod::direct;

  std::vector<double> x(system.rhs.size(), 0.0);
  if (norm2(system.rhs) != 0.0) {
    const DirectSolver solver(system.matrix);
    x = solver.solve(system.rhs);
  }
  stats.residual = relative_residual(system.matrix, x, system.rhs);
  stats.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {std::move(x), stats};
}

std::pair<std::vector<double>, SolveStats> solve_krylov(const LinearSystem& system,
                                                        double tol, int max_iter,
                                                        int restart) {
  if (!(tol > 0.0)) {
    throw std::invalid_argument("solve_krylov: tol must be > 0");
  }
  if (restart < 1) {
    throw std::invalid_argument("solve_krylov: restart must be >= 1");
  }
  const auto t0 = std::chrono::steady_clock::now();
  const CsrMatrix& A = system.matrix;
  const int n = A.rows;

  SolveStats stats;
  stats.method = SolveMethod::krylov;

  std::vector<double> x(static_cast<std::size_t>(n), 0.0);
  const double nb = norm2(system.rhs);
  if (nb == 0.0) {
    stats.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {std::move(x), stats};
  }

  // Jacobi right preconditioner.
  std::vector<double> dinv(static_cast<std::size_t>(n), 1.0);
  for (int i = 0; i < n; ++i) {
    const double d = A.coeff(i, i);
    if (d != 0.0) dinv[static_cast<std::size_t>(i)] = 1.0 / d;
  }

  const int m = restart;
  std::vector<std::vector<double>> V(static_cast<std::size_t>(m) + 1);
  std::vector<std::vector<double>> H(static_cast<std::size_t>(m) + 1,
                                     std::vector<double>(static_cast<std::size_t>(m), 0.0));
  std::vector<double> cs(static_cast<std::size_t>(m)), sn(static_cast<std::size_t>(m)),
      gamma(static_cast<std::size_t>(m) + 1);
  std::vector<double> w(static_cast<std::size_t>(n)), z(static_cast<std::size_t>(n));

  int total_iters = 0;
  while (total_iters < max_iter) {
    // r = b - A x
    A.multiply(x, w);
    std::vector<double> r(system.rhs);
    for (int i = 0; i < n; ++i) r[static_cast<std::size_t>(i)] -= w[static_cast<std::size_t>(i)];
    const double beta = norm2(r);
    if (beta / nb <= tol) break;

    V[0] = r;
    for (double& v : V[0]) v /= beta;
    std::fill(gamma.begin(), gamma.end(), 0.0);
    gamma[0] = beta;

    int j = 0;
    for (; j < m && total_iters < max_iter; ++j, ++total_iters) {
      // w = A M^{-1} v_j
      for (int i = 0; i < n; ++i) {
        z[static_cast<std::size_t>(i)] =
            dinv[static_cast<std::size_t>(i)] * V[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
      }
      A.multiply(z, w);
      // Modified Gram-Schmidt.
      for (int i = 0; i <= j; ++i) {
        double h = 0.0;
        for (int l = 0; l < n; ++l) {
          h += w[static_cast<std::size_t>(l)] *
               V[static_cast<std::size_t>(i)][static_cast<std::size_t>(l)];
        }
        H[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = h;
        for (int l = 0; l < n; ++l) {
          w[static_cast<std::size_t>(l)] -=
              h * V[static_cast<std::size_t>(i)][static_cast<std::size_t>(l)];
        }
      }
      const double hnext = norm2(w);
      H[static_cast<std::size_t>(j) + 1][static_cast<std::size_t>(j)] = hnext;
      if (hnext > 0.0) {
        V[static_cast<std::size_t>(j) + 1] = w;
        for (double& v : V[static_cast<std::size_t>(j) + 1]) v /= hnext;
      }
      // Apply accumulated Givens rotations to the new column.
      for (int i = 0; i < j; ++i) {
        const double t = cs[static_cast<std::size_t>(i)] *
                             H[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +
                         sn[static_cast<std::size_t>(i)] *
                             H[static_cast<std::size_t>(i) + 1][static_cast<std::size_t>(j)];
        H[static_cast<std::size_t>(i) + 1][static_cast<std::size_t>(j)] =
            -sn[static_cast<std::size_t>(i)] *
                H[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +
            cs[static_cast<std::size_t>(i)] *
                H[static_cast<std::size_t>(i) + 1][static_cast<std::size_t>(j)];
        H[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = t;
      }
      const double hjj = H[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)];
      const double hj1 = H[static_cast<std::size_t>(j) + 1][static_cast<std::size_t>(j)];
      const double denom = std::hypot(hjj, hj1);
      cs[static_cast<std::size_t>(j)] = denom == 0.0 ? 1.0 : hjj / denom;
      sn[static_cast<std::size_t>(j)] = denom == 0.0 ? 0.0 : hj1 / denom;
      H[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)] = denom;
      H[static_cast<std::size_t>(j) + 1][static_cast<std::size_t>(j)] = 0.0;
      gamma[static_cast<std::size_t>(j) + 1] =
          -sn[static_cast<std::size_t>(j)] * gamma[static_cast<std::size_t>(j)];
      gamma[static_cast<std::size_t>(j)] =
          cs[static_cast<std::size_t>(j)] * gamma[static_cast<std::size_t>(j)];
      if (std::abs(gamma[static_cast<std::size_t>(j) + 1]) / nb <= tol) {
        ++j;
        ++total_iters;
        break;
      }
      if (hnext == 0.0) {  // lucky breakdown
        ++j;
        ++total_iters;
        break;
      }
    }

    // Back substitution for the Hessenberg least squares, then update x.
    std::vector<double> y(static_cast<std::size_t>(j), 0.0);
    for (int i = j - 1; i >= 0; --i) {
      double s = gamma[static_cast<std::size_t>(i)];
      for (int l = i + 1; l < j; ++l) {
        s -= H[static_cast<std::size_t>(i)][static_cast<std::size_t>(l)] *
             y[static_cast<std::size_t>(l)];
      }
      y[static_cast<std::size_t>(i)] = s / H[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
    }
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int l = 0; l < j; ++l) {
        s += V[static_cast<std::size_t>(l)][static_cast<std::size_t>(i)] *
             y[static_cast<std::size_t>(l)];
      }
      x[static_cast<std::size_t>(i)] += dinv[static_cast<std::size_t>(i)] * s;
    }
  }

  stats.iterations = total_iters;
  stats.residual = relative_residual(A, x, system.rhs);
  stats.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (stats.residual > tol) {
    throw std::runtime_error("solve_krylov: no convergence after " +
                             std::to_string(total_iters) + " iterations (residual " +
                             std::to_string(stats.residual) + ")");
  }
  return {std::move(x), stats};
}

}  // namespace nitsche
