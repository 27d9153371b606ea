#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "potex/errors.hpp"
#include "potex/problem.hpp"
#include "potex/spectrum.hpp"

namespace potex {

/// Degree-diagonal operator on SphericalSpectrum: multiplies every order-m
/// coefficient of degree k by the same real multiplier sigma_k.
struct DiagonalOperator {
  std::vector<double> multipliers;  // sigma_k, k = 0 .. k_max

  int k_max() const { return static_cast<int>(multipliers.size()) - 1; }

  SphericalSpectrum apply(const SphericalSpectrum& s) const {
    if (s.k_max > k_max())
      throw domain_error("DiagonalOperator::apply: spectrum truncation exceeds operator");
    SphericalSpectrum out = s;
    for (int k = 0; k <= s.k_max; ++k) {
      const double sk = multipliers[static_cast<std::size_t>(k)];
      for (int m = -k; m <= k; ++m) out.coeffs[SphericalSpectrum::index(k, m)] *= sk;
    }
    return out;
  }

  /// Operator norm on L^2(S): max_k |sigma_k|.
  double norm() const {
    double mx = 0.0;
    for (double s : multipliers) mx = std::max(mx, std::abs(s));
    return mx;
  }
};

/// Entrywise product: (compose(A, B) h)_hat = sigma^A_k sigma^B_k h_hat.
inline DiagonalOperator compose(const DiagonalOperator& lhs, const DiagonalOperator& rhs) {
  if (lhs.multipliers.size() != rhs.multipliers.size())
    throw domain_error("compose: operator truncations differ");
  DiagonalOperator out = lhs;
  for (std::size_t i = 0; i < out.multipliers.size(); ++i)
    out.multipliers[i] *= rhs.multipliers[i];
  return out;
}

namespace detail {

template <class Fn>
DiagonalOperator make_diagonal(const ProblemSpec& spec, Fn&& mode_multiplier) {
  if (spec.k_max < 0) throw domain_error("ProblemSpec: k_max must be >= 0");
  DiagonalOperator op;
  op.multipliers.resize(static_cast<std::size_t>(spec.k_max) + 1);
  for (int k = 0; k <= spec.k_max; ++k)
    op.multipliers[static_cast<std::size_t>(k)] = mode_multiplier(k);
  return op;
}

inline void require_time(const char* who, double t) {
  if (!(t >= 0.0)) throw domain_error(std::string(who) + ": time must be >= 0");
}

inline void require_lambda(const char* who, double lambda) {
  if (!(lambda > 0.0)) throw domain_error(std::string(who) + ": lambda must be > 0");
}

}  // namespace detail

/// Trace semigroup at time t = log r: sigma_k = e^{-(k+c) t}, c = 1 (Dirichlet
/// trace of the solution) or c = 2 (Neumann trace of the normal derivative).
inline DiagonalOperator semigroup(const ProblemSpec& spec, double t) {
  const int c = generator_offset(spec.kind);
  detail::require_time("semigroup", t);
  return detail::make_diagonal(spec, [&](int k) { return std::exp(-(k + c) * t); });
}

/// Infinitesimal generator A of the trace semigroup: sigma_k = -(k + c).
inline DiagonalOperator generator(const ProblemSpec& spec) {
  const int c = generator_offset(spec.kind);
  return detail::make_diagonal(spec, [&](int k) { return -static_cast<double>(k + c); });
}

/// A^{-1}: sigma_k = -1/(k + c). Bounded (norm 1/c), unlike A.
inline DiagonalOperator inverse_generator(const ProblemSpec& spec) {
  const int c = generator_offset(spec.kind);
  return detail::make_diagonal(spec, [&](int k) { return -1.0 / (k + c); });
}

/// Semigroup generated by A^{-1}: sigma_k = e^{-t/(k + c)}.
inline DiagonalOperator inverse_semigroup(const ProblemSpec& spec, double t) {
  const int c = generator_offset(spec.kind);
  detail::require_time("inverse_semigroup", t);
  return detail::make_diagonal(spec, [&](int k) { return std::exp(-t / (k + c)); });
}

enum class Generator { A, A_inverse };

/// Resolvent R(lambda; A) = 1/(lambda + k + c) or
/// R(lambda; A^{-1}) = (k + c)/(lambda (k + c) + 1), real lambda > 0.
inline DiagonalOperator resolvent(const ProblemSpec& spec, Generator which, double lambda) {
  const int c = generator_offset(spec.kind);
  detail::require_lambda("resolvent", lambda);
  if (which == Generator::A)
    return detail::make_diagonal(spec, [&](int k) { return 1.0 / (lambda + (k + c)); });
  return detail::make_diagonal(
      spec, [&](int k) { return (k + c) / (lambda * (k + c) + 1.0); });
}

/// Abel mean lambda R(lambda; .): tends to the identity as the spectral
/// parameter runs to the boundary (lambda -> infinity for A, lambda -> 0+
/// for A^{-1} after the lambda-weighting flips accordingly).
inline DiagonalOperator abel_mean(const ProblemSpec& spec, Generator which, double lambda) {
  DiagonalOperator op = resolvent(spec, which, lambda);
  for (double& s : op.multipliers) s *= lambda;
  return op;
}

/// Logarithmic ergodic mean of the A^{-1} semigroup, parameterized by
/// L = log r > 0: sigma_k = (1/L) integral_1^r rho^{-1/(k+c) - 1} d rho
///             = (k + c) (1 - e^{-L/(k+c)}) / L.
/// Exposed in terms of log r so that probes with r beyond double range work.
inline DiagonalOperator ergodic_mean_log(const ProblemSpec& spec, double log_r) {
  const int c = generator_offset(spec.kind);
  if (!(log_r > 0.0)) throw domain_error("ergodic_mean: need r > 1");
  return detail::make_diagonal(spec, [&](int k) {
    return -(k + c) * std::expm1(-log_r / (k + c)) / log_r;
  });
}

inline DiagonalOperator ergodic_mean(const ProblemSpec& spec, double r) {
  if (!(r > 1.0)) throw domain_error("ergodic_mean: need r > 1");
  return ergodic_mean_log(spec, std::log(r));
}

/// Robin trace family at t = log r:
/// sigma_k(t) = (a e^{-(k+1)t} - b (k+1) e^{-(k+2)t}) / (a - b (k+1)).
/// sigma(0) = identity, but sigma(s) sigma(t) != sigma(s+t) in general; see
/// semigroup_defect.
inline DiagonalOperator robin_trace(const ProblemSpec& spec, double t) {
  if (spec.kind != ProblemKind::robin)
    throw domain_error("robin_trace: problem kind must be robin");
  check_admissible(spec);
  detail::require_time("robin_trace", t);
  return detail::make_diagonal(spec, [&](int k) {
    const double num =
        spec.a * std::exp(-(k + 1) * t) - spec.b * (k + 1) * std::exp(-(k + 2) * t);
    return num / robin_denominator(spec, k);
  });
}

/// Boundary trace family of the problem at t = log r: the Dirichlet/Neumann
/// semigroup, or the Robin non-semigroup family.
inline DiagonalOperator trace_family(const ProblemSpec& spec, double t) {
  return spec.kind == ProblemKind::robin ? robin_trace(spec, t) : semigroup(spec, t);
}

/// max_k |sigma_k(s) sigma_k(t) - sigma_k(s+t)| for the problem's trace
/// family. Identically zero (to rounding) for Dirichlet and Neumann; bounded
/// away from zero for genuinely Robin coefficients.
inline double semigroup_defect(const ProblemSpec& spec, double s, double t) {
  const DiagonalOperator fs = trace_family(spec, s);
  const DiagonalOperator ft = trace_family(spec, t);
  const DiagonalOperator fst = trace_family(spec, s + t);
  double mx = 0.0;
  for (std::size_t i = 0; i < fst.multipliers.size(); ++i)
    mx = std::max(mx, std::abs(fs.multipliers[i] * ft.multipliers[i] - fst.multipliers[i]));
  return mx;
}

/// Norm of lambda R(lambda; A^{-1}) h - h + lambda^{-1} R(lambda^{-1}; A) h.
/// The two Abel means are algebraically complementary, so this is pure
/// floating-point noise, O(eps ||h||).
inline double interconnection_residual(const ProblemSpec& spec, double lambda,
                                       const SphericalSpectrum& h) {
  detail::require_lambda("interconnection_residual", lambda);
  if (h.k_max > spec.k_max)
    throw domain_error("interconnection_residual: spectrum truncation exceeds problem");
  ProblemSpec at_h = spec;
  at_h.k_max = h.k_max;
  const SphericalSpectrum lhs = abel_mean(at_h, Generator::A_inverse, lambda).apply(h);
  const SphericalSpectrum back = abel_mean(at_h, Generator::A, 1.0 / lambda).apply(h);
  return parseval_norm(lhs - h + back);
}

/// Quadratic K-functional variant for the pair (L^2(S), D(A)):
/// Ktilde(t, h)^2 = sum_k w2_k t^2 mu_k^2 / (1 + t^2 mu_k^2), mu_k = k + c.
/// This is the exact infimum of (||h - g||^2 + t^2 ||A g||^2)^{1/2} over g.
inline double quadratic_k_functional(const ProblemSpec& spec, const std::vector<double>& w2,
                                     double t) {
  const int c = generator_offset(spec.kind);
  if (!(t > 0.0)) throw domain_error("k_functional: t must be > 0");
  double acc = 0.0;
  for (std::size_t k = 0; k < w2.size(); ++k) {
    const double x = t * (static_cast<double>(k) + c);
    acc += w2[k] * (x * x) / (1.0 + x * x);
  }
  return std::sqrt(acc);
}

struct KFunctionalResult {
  double t = 0.0;
  double quadratic_k = 0.0;
  double upper_k = 0.0;  // best ||h - g|| + t ||A g|| found over the family below
  // Optimal smoothing multipliers: g_hat = sigma_k h_hat with
  // sigma_k = 1/(1 + c* mu_k^2) at the minimizing c*.
  std::vector<double> minimizer_multiplier;
};

/// K(t, h) = inf_g (||h - g|| + t ||A g||), estimated over the one-parameter
/// family g_c with g_c_hat = h_hat/(1 + c mu^2), c >= 0. The family contains
/// the quadratic variant's exact minimizer at c = t^2, which pins the result
/// inside [Ktilde, sqrt(2) Ktilde]; a golden-section refinement around the
/// best grid candidate then drives single-mode cases to the true infimum.
inline KFunctionalResult k_functional(const ProblemSpec& spec, const SphericalSpectrum& h,
                                      double t) {
  const int c_off = generator_offset(spec.kind);
  if (!(t > 0.0)) throw domain_error("k_functional: t must be > 0");
  if (h.k_max > spec.k_max)
    throw domain_error("k_functional: spectrum truncation exceeds problem");
  const std::vector<double> w2 = degree_power(h);

  const auto objective = [&](double c) {
    double dist2 = 0.0;  // ||h - g_c||^2
    double grad2 = 0.0;  // ||A g_c||^2
    for (std::size_t k = 0; k < w2.size(); ++k) {
      const double mu = static_cast<double>(k) + c_off;
      const double den = 1.0 + c * mu * mu;
      const double away = c * mu * mu / den;
      dist2 += w2[k] * away * away;
      grad2 += w2[k] * (mu / den) * (mu / den);
    }
    return std::sqrt(dist2) + t * std::sqrt(grad2);
  };

  KFunctionalResult res;
  res.t = t;
  res.quadratic_k = quadratic_k_functional(spec, w2, t);

  // Candidate grid: c = 0 plus t^2 2^j. The j range is generous enough that
  // the endpoints behave like c = 0 and c = infinity to double precision.
  double best_c = t * t;
  double best_f = objective(best_c);
  int best_j = 0;
  for (int j = -60; j <= 60; ++j) {
    const double c = t * t * std::ldexp(1.0, j);
    const double f = objective(c);
    if (f < best_f) {
      best_f = f;
      best_c = c;
      best_j = j;
    }
  }
  {
    const double f0 = objective(0.0);
    if (f0 < best_f) {
      best_f = f0;
      best_c = 0.0;
    }
  }

  if (best_c > 0.0) {
    // Golden-section shrink of the bracket around the winning grid point.
    double lo = t * t * std::ldexp(1.0, std::max(best_j - 1, -61));
    double hi = t * t * std::ldexp(1.0, std::min(best_j + 1, 61));
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - gr * (hi - lo);
    double x2 = lo + gr * (hi - lo);
    double f1 = objective(x1);
    double f2 = objective(x2);
    for (int iter = 0; iter < 160 && (hi - lo) > 1e-15 * hi; ++iter) {
      if (f1 <= f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - gr * (hi - lo);
        f1 = objective(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + gr * (hi - lo);
        f2 = objective(x2);
      }
    }
    const double xm = 0.5 * (lo + hi);
    const double fm = objective(xm);
    if (fm < best_f) {
      best_f = fm;
      best_c = xm;
    }
  }

  res.upper_k = best_f;
  res.minimizer_multiplier.resize(w2.size());
  for (std::size_t k = 0; k < w2.size(); ++k) {
    const double mu = static_cast<double>(k) + c_off;
    res.minimizer_multiplier[k] = 1.0 / (1.0 + best_c * mu * mu);
  }
  return res;
}

}  // namespace potex
