#pragma once

#include <cmath>
#include <string>

#include "potex/errors.hpp"

namespace potex {

enum class ProblemKind { dirichlet, neumann, robin };

inline const char* problem_name(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::dirichlet: return "dirichlet";
    case ProblemKind::neumann: return "neumann";
    case ProblemKind::robin: return "robin";
  }
  return "?";
}

/// Exterior boundary-value problem for the unit ball, truncated at degree
/// k_max. The Robin condition is a w + b dw/dr = h on the unit sphere;
/// (a, b) are ignored for the Dirichlet and Neumann kinds.
struct ProblemSpec {
  ProblemKind kind = ProblemKind::dirichlet;
  double a = 1.0;
  double b = 0.0;
  int k_max = 0;

  static ProblemSpec dirichlet(int k_max);
  static ProblemSpec neumann(int k_max);
  static ProblemSpec robin(double a, double b, int k_max);
};

/// Robin mode denominator a - b(k+1); the degree-k solution coefficient is
/// h_hat(m,k) divided by this.
inline double robin_denominator(const ProblemSpec& p, int k) {
  return p.a - p.b * (k + 1);
}

/// Throws admissibility_error if some retained degree makes the Robin
/// denominator vanish relative to its own scale |a| + |b|(k+1).
inline void check_admissible(const ProblemSpec& p) {
  if (p.k_max < 0) throw domain_error("ProblemSpec: k_max must be >= 0");
  if (p.kind != ProblemKind::robin) return;
  for (int k = 0; k <= p.k_max; ++k) {
    const double den = robin_denominator(p, k);
    const double scale = std::abs(p.a) + std::abs(p.b) * (k + 1);
    if (std::abs(den) <= 1e-12 * scale)
      throw admissibility_error("robin denominator a - b(k+1) = " + std::to_string(den) +
                                " vanishes at degree k = " + std::to_string(k));
  }
}

inline ProblemSpec ProblemSpec::dirichlet(int k_max) {
  ProblemSpec p{ProblemKind::dirichlet, 1.0, 0.0, k_max};
  check_admissible(p);
  return p;
}

inline ProblemSpec ProblemSpec::neumann(int k_max) {
  ProblemSpec p{ProblemKind::neumann, 0.0, 1.0, k_max};
  check_admissible(p);
  return p;
}

inline ProblemSpec ProblemSpec::robin(double a, double b, int k_max) {
  ProblemSpec p{ProblemKind::robin, a, b, k_max};
  check_admissible(p);
  return p;
}

/// Spectral offset c in the generator -(k + c): 1 for Dirichlet, 2 for
/// Neumann. The Robin trace family is not a semigroup and has no generator.
inline int generator_offset(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::dirichlet: return 1;
    case ProblemKind::neumann: return 2;
    case ProblemKind::robin: break;
  }
  throw unsupported_problem_error(
      "the Robin trace family is not a semigroup and has no generator");
}

}  // namespace potex
