#ifndef NITSCHE_STUDY_HPP
#define NITSCHE_STUDY_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "nitsche/assembly.hpp"
#include "nitsche/interpolation.hpp"
#include "nitsche/norms.hpp"
#include "nitsche/solver.hpp"

namespace nitsche {

enum class SolutionKind {
  sine2d,         // sin(pi x) sin(pi y) + x
  sine3d_vector,  // three-component 3D example, one solve per component
  polynomial_k,   // global degree-k polynomial (Galerkin-exact)
  corner2d,       // harmonic r^lambda sin(lambda theta), lambda = k + 0.05
  custom,         // components supplied in StudyConfig::custom_components
};

struct StudyConfig {
  int dim = 2;
  int degree = 1;
  double beta = 1.0;
  double alpha = 1.0;
  double c0 = 1.0;
  int level_min = 1;
  int level_max = 5;
  double grading = 1.0;
  SolutionKind solution = SolutionKind::sine2d;
  SolveMethod solver = SolveMethod::direct;
  double tol = 1e-12;      // krylov tolerance
  int max_iter = 10000;
  int restart = 50;
  int quad_bump = 0;       // raises error-norm quadrature degree by 2 per unit
  bool timings = false;    // off by default so emitted tables are reproducible
  std::vector<ExactSolution> custom_components;

  void check() const;
};

/// One refinement level of a convergence study. `h` is the generator grid
/// spacing 2^-level; rates are pairwise log2 ratios and NaN where
/// undefined (first row, or non-positive errors).
struct StudyRow {
  int level = 0;
  double h = 0.0;
  long long dofs = 0;
  double l2_rel = 0.0;
  double l2_rate = 0.0;
  double h1_rel = 0.0;
  double h1_rate = 0.0;
  double bnd_abs = 0.0;
  double bnd_rate = 0.0;
  double residual = 0.0;
  double elapsed = 0.0;
};

struct StudyTable {
  std::vector<StudyRow> rows;
};

/// Runs mesh -> space -> assemble -> solve -> errors over the level range.
/// Vector solutions share one factorization across components and report
/// root-sum-of-square errors; deterministic end to end.
StudyTable run_study(const StudyConfig& cfg);

/// rates[i] = log2(errors[i-1] / errors[i]); NaN for the first entry and
/// wherever an error is not positive.
std::vector<double> compute_rates(const std::vector<double>& errors);

/// CSV with exactly the columns
/// level,h,dofs,l2_rel,l2_rate,h1_rel,h1_rate,bnd_abs,bnd_rate,residual,elapsed
/// and shortest round-trip number formatting; NaN rates are left empty.
void emit_csv(const StudyTable& table, std::ostream& out);
void emit_csv(const StudyTable& table, const std::string& path);

/// Human-readable table with paired error/rate columns.
void emit_markdown(const StudyTable& table, std::ostream& out);
void emit_markdown(const StudyTable& table, const std::string& path);

/// Parses a CSV produced by emit_csv back into a table.
StudyTable parse_csv(std::istream& in);

/// Convergence of the modified interpolant on uniform meshes:
///   l2 columns:  ||u - I_h u||_0 (relative),        target rate k+1
///   h1 columns:  ||grad(u - I_h u)||_{0,Gamma},     target rate k-1/2
///   bnd columns: ||u - I_h u||_{0,Gamma},           target rate k+1/2
///   residual:    boundary orthogonality defect.
/// The default solution (the multiscale boundary layer for the given
/// degree) has exactly the trace regularity for which these orders are
/// sharp; a smoother choice saturates the boundary orders at k+1.
StudyTable interpolation_rate_study(int dim, int k, int level_min, int level_max,
                                    double alpha, ProjectionVariant variant,
                                    const ExactSolution* solution = nullptr);

}  // namespace nitsche

#endif
