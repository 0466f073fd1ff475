#include "nitsche/study.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "nitsche/solutions.hpp"

namespace nitsche {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<ExactSolution> solution_components(const StudyConfig& cfg) {
  switch (cfg.solution) {
    case SolutionKind::sine2d:
      if (cfg.dim != 2) {
        throw std::invalid_argument("run_study: sine2d requires dim = 2");
      }
      return {sine2d()};
    case SolutionKind::sine3d_vector:
      if (cfg.dim != 3) {
        throw std::invalid_argument("run_study: sine3d_vector requires dim = 3");
      }
      return sine3d_vector();
    case SolutionKind::polynomial_k:
      return {polynomial_solution(cfg.dim, cfg.degree)};
    case SolutionKind::corner2d:
      if (cfg.dim != 2) {
        throw std::invalid_argument("run_study: corner2d requires dim = 2");
      }
      return {corner2d_for_degree(cfg.degree)};
    case SolutionKind::custom:
      if (cfg.custom_components.empty()) {
        throw std::invalid_argument("run_study: custom solution has no components");
      }
      return cfg.custom_components;
  }
  throw std::invalid_argument("run_study: unknown solution kind");
}

// Shortest representation that parses back to the identical double.
std::string format_double(double v) {
  if (std::isnan(v)) return {};
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string format_fixed(double v, const char* fmt) {
  if (std::isnan(v)) return "-";
  char buf[48];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

double rate_or_nan(double prev, double curr) {
  if (!(prev > 0.0) || !(curr > 0.0)) return kNaN;
  return std::log2(prev / curr);
}

}  // namespace

void StudyConfig::check() const {
  NitscheConfig{beta, alpha, c0}.check();
  if (dim != 2 && dim != 3) {
    throw std::invalid_argument("StudyConfig: dim must be 2 or 3");
  }
  if (degree < 1 || degree > 3) {
    throw std::invalid_argument("StudyConfig: degree must be 1..3");
  }
  if (level_min < 0 || level_max <= level_min) {
    throw std::invalid_argument(
        "StudyConfig: level range must satisfy 0 <= level_min < level_max");
  }
  if (!(grading >= 1.0)) {
    throw std::invalid_argument("StudyConfig: grading must be >= 1");
  }
}

StudyTable run_study(const StudyConfig& cfg) {
  cfg.check();
  const NitscheConfig scheme{cfg.beta, cfg.alpha, cfg.c0};
  const std::vector<ExactSolution> components = solution_components(cfg);

  StudyTable table;
  for (int level = cfg.level_min; level <= cfg.level_max; ++level) {
    const auto t0 = std::chrono::steady_clock::now();
    const Mesh mesh = build_mesh(cfg.dim, level, cfg.grading);
    const DofMap space = build_space(mesh, cfg.degree);

    double l2_abs2 = 0.0, l2_den2 = 0.0;
    double h1_abs2 = 0.0, h1_den2 = 0.0;
    double bnd_abs2 = 0.0;
    double residual = 0.0;

    try {
      // Identical operator for every component: one matrix, many rhs.
      LinearSystem sys = assemble_system(mesh, space, scheme,
                                         components[0].load(),
                                         components[0].trace());
      std::optional<DirectSolver> direct;
      if (cfg.solver == SolveMethod::direct) direct.emplace(sys.matrix);

      for (std::size_t comp = 0; comp < components.size(); ++comp) {
        const ExactSolution& exact = components[comp];
        if (comp > 0) {
          sys.rhs = assemble_rhs(mesh, space, scheme, exact.load(), exact.trace());
        }
        std::vector<double> coeffs;
        if (cfg.solver == SolveMethod::direct) {
          coeffs = direct->solve(sys.rhs);
        } else {
          coeffs = solve_krylov({sys.matrix, sys.rhs}, cfg.tol, cfg.max_iter,
                                cfg.restart)
                       .first;
        }
        residual = std::max(residual,
                            relative_residual(sys.matrix, coeffs, sys.rhs));

        const double l2 = l2_error(mesh, space, coeffs, exact, cfg.quad_bump);
        const double h1 = h1_semi_error(mesh, space, coeffs, exact, cfg.quad_bump);
        const double bnd =
            boundary_weighted_error(mesh, space, coeffs, exact, cfg.quad_bump);
        const ExactNorms norms = exact_norms(mesh, space, exact, cfg.quad_bump);
        l2_abs2 += l2 * l2;
        h1_abs2 += h1 * h1;
        bnd_abs2 += bnd * bnd;
        l2_den2 += norms.l2 * norms.l2;
        h1_den2 += norms.h1_semi * norms.h1_semi;
      }
    } catch (const std::exception& e) {
      throw std::runtime_error("run_study: level " + std::to_string(level) +
                               " failed: " + e.what());
    }

    StudyRow row;
    row.level = level;
    row.h = std::ldexp(1.0, -level);
    row.dofs = space.num_dofs;
    row.l2_rel = l2_den2 > 0.0 ? std::sqrt(l2_abs2 / l2_den2) : std::sqrt(l2_abs2);
    row.h1_rel = h1_den2 > 0.0 ? std::sqrt(h1_abs2 / h1_den2) : std::sqrt(h1_abs2);
    row.bnd_abs = std::sqrt(bnd_abs2);
    row.residual = residual;
    row.l2_rate = row.h1_rate = row.bnd_rate = kNaN;
    if (!table.rows.empty()) {
      const StudyRow& prev = table.rows.back();
      row.l2_rate = rate_or_nan(prev.l2_rel, row.l2_rel);
      row.h1_rate = rate_or_nan(prev.h1_rel, row.h1_rel);
      row.bnd_rate = rate_or_nan(prev.bnd_abs, row.bnd_abs);
    }
    row.elapsed =
        cfg.timings
            ? std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                  .count()
            : 0.0;
    table.rows.push_back(row);
  }
  return table;
}

std::vector<double> compute_rates(const std::vector<double>& errors) {
  std::vector<double> rates(errors.size(), kNaN);
  for (std::size_t i = 1; i < errors.size(); ++i) {
    rates[i] = rate_or_nan(errors[i - 1], errors[i]);
  }
  return rates;
}

void emit_csv(const StudyTable& table, std::ostream& out) {
  out << "level,h,dofs,l2_rel,l2_rate,h1_rel,h1_rate,bnd_abs,bnd_rate,residual,"
         "elapsed\n";
  for (const StudyRow& r : table.rows) {
    out << r.level << ',' << format_double(r.h) << ',' << r.dofs << ','
        << format_double(r.l2_rel) << ',' << format_double(r.l2_rate) << ','
        << format_double(r.h1_rel) << ',' << format_double(r.h1_rate) << ','
        << format_double(r.bnd_abs) << ',' << format_double(r.bnd_rate) << ','
        << format_double(r.residual) << ',' << format_double(r.elapsed) << '\n';
  }
}

void emit_csv(const StudyTable& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("emit_csv: cannot open " + path);
  emit_csv(table, out);
  if (!out) throw std::runtime_error("emit_csv: write failed for " + path);
}

void emit_markdown(const StudyTable& table, std::ostream& out) {
  out << "| level | h | DOF | L2 error | rate | H1 error | rate | boundary | "
         "rate | residual |\n";
  out << "|---:|---:|---:|---:|---:|---:|---:|---:|---:|---:|\n";
  for (const StudyRow& r : table.rows) {
    out << "| " << r.level << " | 2^-" << r.level << " | " << r.dofs << " | "
        << format_fixed(r.l2_rel, "%.2e") << " | " << format_fixed(r.l2_rate, "%.2f")
        << " | " << format_fixed(r.h1_rel, "%.2e") << " | "
        << format_fixed(r.h1_rate, "%.2f") << " | " << format_fixed(r.bnd_abs, "%.2e")
        << " | " << format_fixed(r.bnd_rate, "%.2f") << " | "
        << format_fixed(r.residual, "%.2e") << " |\n";
  }
}

void emit_markdown(const StudyTable& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("emit_markdown: cannot open " + path);
  emit_markdown(table, out);
  if (!out) throw std::runtime_error("emit_markdown: write failed for " + path);
}

StudyTable parse_csv(std::istream& in) {
  StudyTable table;
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("parse_csv: missing header");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    while (fields.size() < 11) fields.emplace_back();
    auto num = [](const std::string& s) {
      if (s.empty()) return kNaN;
      return std::strtod(s.c_str(), nullptr);
    };
    StudyRow r;
    r.level = static_cast<int>(std::strtol(fields[0].c_str(), nullptr, 10));
    r.h = num(fields[1]);
    r.dofs = std::strtoll(fields[2].c_str(), nullptr, 10);
    r.l2_rel = num(fields[3]);
    r.l2_rate = num(fields[4]);
    r.h1_rel = num(fields[5]);
    r.h1_rate = num(fields[6]);
    r.bnd_abs = num(fields[7]);
    r.bnd_rate = num(fields[8]);
    r.residual = num(fields[9]);
    r.elapsed = num(fields[10]);
    table.rows.push_back(r);
  }
  return table;
}

StudyTable interpolation_rate_study(int dim, int k, int level_min, int level_max,
                                    double alpha, ProjectionVariant variant,
                                    const ExactSolution* solution) {
  if (level_min < 0 || level_max - level_min + 1 < 3) {
    throw std::invalid_argument(
        "interpolation_rate_study: at least 3 levels required");
  }
  ExactSolution owned;
  if (solution == nullptr) {
    if (dim != 2) {
      throw std::invalid_argument(
          "interpolation_rate_study: pass a solution explicitly for dim != 2");
    }
    owned = boundary_layer2d(k);
    solution = &owned;
  }

  StudyTable table;
  for (int level = level_min; level <= level_max; ++level) {
    const Mesh mesh = build_mesh(dim, level, 1.0);
    const DofMap space = build_space(mesh, k);
    const BoundaryProjection proj(mesh, space, variant, alpha);
    const std::vector<double> coeffs =
        modified_interpolant(mesh, space, *solution, proj);

    const double l2 = l2_error(mesh, space, coeffs, *solution);
    const ExactNorms norms = exact_norms(mesh, space, *solution);
    const BoundaryErrors bnd = boundary_errors(mesh, space, coeffs, *solution);

    StudyRow row;
    row.level = level;
    row.h = std::ldexp(1.0, -level);
    row.dofs = space.num_dofs;
    row.l2_rel = norms.l2 > 0.0 ? l2 / norms.l2 : l2;
    row.h1_rel = bnd.gradient;  // boundary gradient error, target rate k - 1/2
    row.bnd_abs = bnd.value;    // boundary L2 error, target rate k + 1/2
    row.residual =
        boundary_orthogonality_residual(mesh, space, coeffs, *solution, proj);
    row.l2_rate = row.h1_rate = row.bnd_rate = kNaN;
    if (!table.rows.empty()) {
      const StudyRow& prev = table.rows.back();
      row.l2_rate = rate_or_nan(prev.l2_rel, row.l2_rel);
      row.h1_rate = rate_or_nan(prev.h1_rel, row.h1_rel);
      row.bnd_rate = rate_or_nan(prev.bnd_abs, row.bnd_abs);
    }
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace nitsche
