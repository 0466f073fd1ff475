#ifndef NITSCHE_SOLVER_HPP
#define NITSCHE_SOLVER_HPP

#include <memory>
#include <span>
#include <vector>

#include "nitsche/assembly.hpp"

namespace nitsche {

enum class SolveMethod { direct, krylov };

struct SolveStats {
  SolveMethod method = SolveMethod::direct;
  int iterations = 0;
  double residual = 0.0;  // ||b - A x||_2 / ||b||_2, recomputed from the CSR data
  double elapsed_seconds = 0.0;
};

/// ||b - A x||_2 / ||b||_2 (0 for b = 0), computed directly from the CSR
/// matrix so reported residuals are independent of the solver backend.
double relative_residual(const CsrMatrix& matrix, std::span<const double> x,
                         std::span<const double> b);

/// Sparse LU factorization reusable across right-hand sides.
class DirectSolver {
 public:
  explicit DirectSolver(const CsrMatrix& matrix);
  ~DirectSolver();
  DirectSolver(DirectSolver&&) noexcept;
  DirectSolver& operator=(DirectSolver&&) noexcept;

  std::vector<double> solve(std::span<const double> rhs) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::pair<std::vector<double>, SolveStats> solve_direct(const LinearSystem& system);

/// Restarted GMRES with a diagonal (Jacobi) right preconditioner. Throws
/// on non-convergence after `max_iter` total iterations; callers may fall
/// back to the direct path.
std::pair<std::vector<double>, SolveStats> solve_krylov(const LinearSystem& system,
                                                        double tol = 1e-12,
                                                        int max_iter = 10000,
                                                        int restart = 50);

}  // namespace nitsche

#endif
