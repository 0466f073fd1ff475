#include "nitsche/solutions.hpp"

#include <cmath>
#include <stdexcept>

namespace nitsche {

namespace {

double int_pow(double x, int p) {
  double r = 1.0;
  for (int i = 0; i < p; ++i) r *= x;
  return r;
}

}  // namespace

double Polynomial::value(const Point& x) const {
  double s = 0.0;
  for (const Term& t : terms) {
    s += t.coeff * int_pow(x[0], t.powers[0]) * int_pow(x[1], t.powers[1]) *
         int_pow(x[2], t.powers[2]);
  }
  return s;
}

Point Polynomial::gradient(const Point& x) const {
  Point g{};
  for (const Term& t : terms) {
    for (int d = 0; d < 3; ++d) {
      const int p = t.powers[static_cast<std::size_t>(d)];
      if (p == 0) continue;
      double v = t.coeff * p;
      for (int dd = 0; dd < 3; ++dd) {
        const int pp = t.powers[static_cast<std::size_t>(dd)] - (dd == d ? 1 : 0);
        v *= int_pow(x[static_cast<std::size_t>(dd)], pp);
      }
      g[static_cast<std::size_t>(d)] += v;
    }
  }
  return g;
}

double Polynomial::laplacian(const Point& x) const {
  double s = 0.0;
  for (const Term& t : terms) {
    for (int d = 0; d < 3; ++d) {
      const int p = t.powers[static_cast<std::size_t>(d)];
      if (p < 2) continue;
      double v = t.coeff * p * (p - 1);
      for (int dd = 0; dd < 3; ++dd) {
        const int pp = t.powers[static_cast<std::size_t>(dd)] - (dd == d ? 2 : 0);
        v *= int_pow(x[static_cast<std::size_t>(dd)], pp);
      }
      s += v;
    }
  }
  return s;
}

ExactSolution Polynomial::to_exact() const {
  return {
      [p = *this](const Point& x) { return p.value(x); },
      [p = *this](const Point& x) { return p.gradient(x); },
      [p = *this](const Point& x) { return p.laplacian(x); },
  };
}

ExactSolution sine2d() {
  const double pi = M_PI;
  return {
      [pi](const Point& x) { return std::sin(pi * x[0]) * std::sin(pi * x[1]) + x[0]; },
      [pi](const Point& x) {
        return Point{pi * std::cos(pi * x[0]) * std::sin(pi * x[1]) + 1.0,
                     pi * std::sin(pi * x[0]) * std::cos(pi * x[1]), 0.0};
      },
      [pi](const Point& x) {
        return -2.0 * pi * pi * std::sin(pi * x[0]) * std::sin(pi * x[1]);
      },
  };
}

std::vector<ExactSolution> sine3d_vector() {
  const double pi = M_PI;
  // Component c depends on the two coordinates other than c.
  auto component = [pi](int c) -> ExactSolution {
    const int a = (c + 1) % 3;
    const int b = (c + 2) % 3;
    return {
        [pi, a, b](const Point& x) {
          return std::sin(pi * x[static_cast<std::size_t>(a)]) *
                 std::sin(pi * x[static_cast<std::size_t>(b)]);
        },
        [pi, a, b](const Point& x) {
          Point g{};
          g[static_cast<std::size_t>(a)] =
              pi * std::cos(pi * x[static_cast<std::size_t>(a)]) *
              std::sin(pi * x[static_cast<std::size_t>(b)]);
          g[static_cast<std::size_t>(b)] =
              pi * std::sin(pi * x[static_cast<std::size_t>(a)]) *
              std::cos(pi * x[static_cast<std::size_t>(b)]);
          return g;
        },
        [pi, a, b](const Point& x) {
          return -2.0 * pi * pi * std::sin(pi * x[static_cast<std::size_t>(a)]) *
                 std::sin(pi * x[static_cast<std::size_t>(b)]);
        },
    };
  };
  return {component(0), component(1), component(2)};
}

ExactSolution polynomial_solution(int dim, int k) {
  if (dim != 2 && dim != 3) {
    throw std::invalid_argument("polynomial_solution: dim must be 2 or 3");
  }
  Polynomial p;
  if (dim == 2) {
    switch (k) {
      case 1:
        p.terms = {{2.0, {1, 0, 0}}, {-1.0, {0, 1, 0}}, {1.0, {0, 0, 0}}};
        break;
      case 2:
        p.terms = {{1.0, {2, 0, 0}}, {-1.0, {1, 1, 0}}, {1.0, {0, 2, 0}},
                   {1.0, {1, 0, 0}}, {-1.0, {0, 0, 0}}};
        break;
      case 3:
        p.terms = {{1.0, {3, 0, 0}}, {-2.0, {2, 1, 0}}, {1.0, {0, 3, 0}},
                   {1.0, {2, 0, 0}}, {-1.0, {0, 1, 0}}, {2.0, {0, 0, 0}}};
        break;
      default:
        throw std::invalid_argument("polynomial_solution: degree must be 1..3");
    }
  } else {
    switch (k) {
      case 1:
        p.terms = {{1.0, {1, 0, 0}}, {-1.0, {0, 1, 0}}, {2.0, {0, 0, 1}},
                   {1.0, {0, 0, 0}}};
        break;
      case 2:
        p.terms = {{1.0, {2, 0, 0}}, {1.0, {0, 2, 0}}, {1.0, {0, 0, 2}},
                   {-1.0, {1, 1, 0}}, {1.0, {1, 0, 0}}};
        break;
      case 3:
        p.terms = {{1.0, {3, 0, 0}}, {1.0, {0, 3, 0}}, {1.0, {0, 0, 3}},
                   {-1.0, {1, 1, 1}}, {1.0, {2, 0, 0}}, {-1.0, {0, 1, 0}}};
        break;
      default:
        throw std::invalid_argument("polynomial_solution: degree must be 1..3");
    }
  }
  return p.to_exact();
}

ExactSolution corner_singular2d(double lambda) {
  if (!(lambda > 1.0)) {
    throw std::invalid_argument("corner_singular2d: lambda must be > 1");
  }
  // u = Im(w^lambda) with w = (1 - x) + i y: harmonic, singular only at
  // the corner (1, 0). Keeping the singular corner away from the origin
  // matters for graded runs, whose cells shrink toward the origin; an
  // origin singularity would be resolved by the grading and the limited
  // trace regularity would stop being visible in the rates.
  auto value = [lambda](const Point& x) {
    const double r = std::hypot(1.0 - x[0], x[1]);
    if (r == 0.0) return 0.0;
    const double theta = std::atan2(x[1], 1.0 - x[0]);
    return std::pow(r, lambda) * std::sin(lambda * theta);
  };
  auto gradient = [lambda](const Point& x) -> Point {
    const double r = std::hypot(1.0 - x[0], x[1]);
    if (r == 0.0) return {0.0, 0.0, 0.0};
    const double theta = std::atan2(x[1], 1.0 - x[0]);
    const double m = lambda * std::pow(r, lambda - 1.0);
    return {-m * std::sin((lambda - 1.0) * theta),
            m * std::cos((lambda - 1.0) * theta), 0.0};
  };
  auto laplacian = [](const Point&) { return 0.0; };
  return {value, gradient, laplacian};
}

ExactSolution boundary_layer2d(int k) {
  if (k < 1 || k > 3) {
    throw std::invalid_argument("boundary_layer2d: degree must be 1..3");
  }
  constexpr int n_modes = 12;
  struct Mode {
    double kappa;
    double amp;
  };
  std::vector<Mode> modes;
  for (int m = 1; m <= n_modes; ++m) {
    const double kappa = std::ldexp(1.0, m) * M_PI;
    // The 2^{-m/10} taper keeps the volume H^{k+1} sum convergent (no log
    // factor in the L2 rate) at the cost of shifting the boundary orders
    // by 0.1, still within the verification windows.
    modes.push_back({kappa, std::pow(kappa, -(k + 0.5)) * std::pow(2.0, -0.1 * m)});
  }
  auto value = [modes](const Point& x) {
    double s = 0.0;
    for (const Mode& mode : modes) {
      s += mode.amp * std::exp(-mode.kappa * (1.0 - x[0])) *
           std::sin(mode.kappa * x[1]);
    }
    return s;
  };
  auto gradient = [modes](const Point& x) -> Point {
    Point g{};
    for (const Mode& mode : modes) {
      const double e = std::exp(-mode.kappa * (1.0 - x[0]));
      g[0] += mode.amp * mode.kappa * e * std::sin(mode.kappa * x[1]);
      g[1] += mode.amp * mode.kappa * e * std::cos(mode.kappa * x[1]);
    }
    return g;
  };
  auto laplacian = [](const Point&) { return 0.0; };
  return {value, gradient, laplacian};
}

}  // namespace nitsche
