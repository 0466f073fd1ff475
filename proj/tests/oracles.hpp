#ifndef NITSCHE_TESTS_ORACLES_HPP
#define NITSCHE_TESTS_ORACLES_HPP

// Independent brute-force checks used by the test suites. Everything here
// recomputes quantities through its own quadrature/route so the library
// code paths it validates stay uninvolved.

#include <string>
#include <vector>

#include "nitsche/assembly.hpp"
#include "nitsche/mesh.hpp"
#include "nitsche/space.hpp"

namespace nitsche::oracles {

struct OracleResult {
  std::string name;
  double max_abs_discrepancy = 0.0;
  double budget = 0.0;
  bool pass = false;
};

/// Exact integral of x^a y^b z^c over the reference d-simplex:
/// a! b! c! / (a + b + c + d)! (trailing exponents zero below dimension d).
double simplex_monomial_integral(int dim, int a, int b, int c);

/// Rebuilds the full matrix of the scheme on a single-grid-cell mesh
/// (level 0) with quadrature exactness 2k + 6 through an independent
/// integration routine and compares every entry against assemble_system.
/// Budget: 1e-12 relative to the largest entry.
OracleResult oracle_local_matrices(int k, int dim);

/// Least-squares slope of log(error) against log(h). Must have >= 3
/// levels; degenerate fits throw.
double oracle_rate_fit(const std::vector<double>& errors,
                       const std::vector<double>& h_list);

/// Independent evaluation of ||grad v_h||^2 + (beta - 1) <dn v_h, v_h>_Gamma
/// + c0 ||h^{-alpha/2} v_h||^2_Gamma, the quadratic form the assembled
/// matrix realizes; for beta = +1 the cross term vanishes and this is the
/// energy. Quadrature exactness 2k (same integrals as assembly).
double discrete_energy(const Mesh& mesh, const DofMap& space,
                       const NitscheConfig& config,
                       std::span<const double> coeffs);

/// Direct sum of c0 h_F^{-alpha} |F| over boundary faces (the value of the
/// form on constant functions).
double penalty_on_constants(const Mesh& mesh, const NitscheConfig& config);

/// v^T A u straight from the CSR arrays.
double csr_bilinear(const CsrMatrix& matrix, std::span<const double> u,
                    std::span<const double> v);

}  // namespace nitsche::oracles

#endif
