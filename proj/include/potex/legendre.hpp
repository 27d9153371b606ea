#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "potex/errors.hpp"

namespace potex {

namespace detail {

inline void require_unit_interval(const char* who, double t) {
  if (!(t >= -1.0 && t <= 1.0))
    throw domain_error(std::string(who) + ": argument outside [-1, 1]");
}

}  // namespace detail

/// Legendre polynomial P_k(t) via the three-term recurrence
/// k P_k = (2k-1) t P_{k-1} - (k-1) P_{k-2}, P_0 = 1, P_1 = t.
inline double legendre_p(int k, double t) {
  if (k < 0) throw domain_error("legendre_p: degree must be nonnegative");
  detail::require_unit_interval("legendre_p", t);
  if (k == 0) return 1.0;
  double p_prev = 1.0;
  double p = t;
  for (int j = 2; j <= k; ++j) {
    const double p_next = ((2 * j - 1) * t * p - (j - 1) * p_prev) / j;
    p_prev = p;
    p = p_next;
  }
  return p;
}

/// Associated Legendre function P_k^m(t) = (1-t^2)^{m/2} (d/dt)^m P_k(t),
/// positive square root, no Condon-Shortley sign. Requires 0 <= m <= k.
inline double assoc_legendre(int k, int m, double t) {
  if (k < 0 || m < 0 || m > k)
    throw domain_error("assoc_legendre: need 0 <= m <= k");
  detail::require_unit_interval("assoc_legendre", t);
  const double s = std::sqrt((1.0 - t) * (1.0 + t));
  double pmm = 1.0;  // P_m^m = (2m-1)!! s^m
  for (int i = 1; i <= m; ++i) pmm *= (2 * i - 1) * s;
  if (k == m) return pmm;
  double below = pmm;
  double p = (2 * m + 1) * t * pmm;  // P_{m+1}^m
  for (int j = m + 2; j <= k; ++j) {
    const double next = ((2 * j - 1) * t * p - (j - 1 + m) * below) / (j - m);
    below = p;
    p = next;
  }
  return p;
}

/// Index of (k, m), 0 <= m <= k, in a triangular table: k(k+1)/2 + m.
inline constexpr std::size_t tri_index(int k, int m) {
  return static_cast<std::size_t>(k) * (k + 1) / 2 + static_cast<std::size_t>(m);
}

namespace detail {

// sqrt(1/4pi), the normalized P_0^0.
inline constexpr double kP00 = 0.28209479177387814347403972578;

// Degree step for normalized values: Pbar_k^m = a_k (t Pbar_{k-1}^m - Pbar_{k-2}^m / a_{k-1}).
inline double pbar_step_coeff(int k, int m) {
  return std::sqrt((4.0 * k * k - 1.0) / (static_cast<double>(k) * k - static_cast<double>(m) * m));
}

}  // namespace detail

// Fully normalized associated Legendre Pbar_k^m(t): includes the factor
// sqrt((2k+1)(k-m)!/(4pi (k+m)!)), so Y_k^m(phi, theta) = Pbar_k^{|m|}(cos phi) e^{im theta}
// comes out orthonormal on the sphere. The recurrence runs on the normalized
// values themselves, which keeps every intermediate O(1); raw factorials would
// overflow long before k = 64.
inline double normalized_assoc(int k, int m, double t) {
  if (k < 0 || m < 0 || m > k)
    throw domain_error("normalized_assoc: need 0 <= m <= k");
  detail::require_unit_interval("normalized_assoc", t);
  const double s = std::sqrt((1.0 - t) * (1.0 + t));
  double diag = detail::kP00;
  for (int i = 1; i <= m; ++i) diag *= std::sqrt((2.0 * i + 1.0) / (2.0 * i)) * s;
  if (k == m) return diag;
  double below = diag;
  double p = std::sqrt(2.0 * m + 3.0) * t * diag;
  for (int j = m + 2; j <= k; ++j) {
    const double aj = detail::pbar_step_coeff(j, m);
    const double ajm1 = detail::pbar_step_coeff(j - 1, m);
    const double next = aj * (t * p - below / ajm1);
    below = p;
    p = next;
  }
  return p;
}

/// Triangular table of Pbar_k^m(t), 0 <= m <= k <= k_max, laid out at tri_index(k, m).
inline std::vector<double> normalized_assoc_table(int k_max, double t) {
  if (k_max < 0) throw domain_error("normalized_assoc_table: k_max must be >= 0");
  detail::require_unit_interval("normalized_assoc_table", t);
  std::vector<double> table(tri_index(k_max, k_max) + 1);
  const double s = std::sqrt((1.0 - t) * (1.0 + t));
  double diag = detail::kP00;
  for (int m = 0; m <= k_max; ++m) {
    if (m > 0) diag *= std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s;
    table[tri_index(m, m)] = diag;
    if (m + 1 <= k_max) table[tri_index(m + 1, m)] = std::sqrt(2.0 * m + 3.0) * t * diag;
    for (int k = m + 2; k <= k_max; ++k) {
      const double ak = detail::pbar_step_coeff(k, m);
      const double akm1 = detail::pbar_step_coeff(k - 1, m);
      table[tri_index(k, m)] =
          ak * (t * table[tri_index(k - 1, m)] - table[tri_index(k - 2, m)] / akm1);
    }
  }
  return table;
}

}  // namespace potex
