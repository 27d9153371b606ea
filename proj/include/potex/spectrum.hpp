#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "potex/errors.hpp"

namespace potex {

/// Truncated spherical-harmonic expansion. Coefficients are stored packed by
/// degree, index(k, m) = k^2 + k + m, so degree k occupies the contiguous run
/// [k^2, (k+1)^2) and the total size is (k_max+1)^2.
struct SphericalSpectrum {
  int k_max = 0;
  std::vector<std::complex<double>> coeffs;

  SphericalSpectrum() : coeffs(1) {}

  explicit SphericalSpectrum(int kmax) : k_max(kmax) {
    if (kmax < 0) throw domain_error("SphericalSpectrum: k_max must be >= 0");
    coeffs.assign(static_cast<std::size_t>(kmax + 1) * (kmax + 1), {});
  }

  static constexpr std::size_t index(int k, int m) {
    return static_cast<std::size_t>(k) * k + static_cast<std::size_t>(k + m);
  }

  void check_mode(int k, int m) const {
    if (k < 0 || k > k_max || m < -k || m > k)
      throw domain_error("SphericalSpectrum: mode (" + std::to_string(k) + ", " +
                         std::to_string(m) + ") outside truncation");
  }

  std::complex<double> at(int k, int m) const {
    check_mode(k, m);
    return coeffs[index(k, m)];
  }

  std::complex<double>& at(int k, int m) {
    check_mode(k, m);
    return coeffs[index(k, m)];
  }
};

inline SphericalSpectrum operator+(SphericalSpectrum lhs, const SphericalSpectrum& rhs) {
  if (lhs.k_max != rhs.k_max)
    throw domain_error("spectrum +: truncation mismatch");
  for (std::size_t i = 0; i < lhs.coeffs.size(); ++i) lhs.coeffs[i] += rhs.coeffs[i];
  return lhs;
}

inline SphericalSpectrum operator-(SphericalSpectrum lhs, const SphericalSpectrum& rhs) {
  if (lhs.k_max != rhs.k_max)
    throw domain_error("spectrum -: truncation mismatch");
  for (std::size_t i = 0; i < lhs.coeffs.size(); ++i) lhs.coeffs[i] -= rhs.coeffs[i];
  return lhs;
}

inline SphericalSpectrum operator*(std::complex<double> a, SphericalSpectrum s) {
  for (auto& c : s.coeffs) c *= a;
  return s;
}

inline SphericalSpectrum operator*(double a, SphericalSpectrum s) {
  return std::complex<double>(a, 0.0) * std::move(s);
}

/// L^2(S) norm of the expansion: sqrt(sum |g_hat(m,k)|^2). Orthonormality of
/// the basis makes this equal to the surface integral norm.
inline double parseval_norm(const SphericalSpectrum& s) {
  double acc = 0.0;
  for (const auto& c : s.coeffs) acc += std::norm(c);
  return std::sqrt(acc);
}

/// Per-degree power w2[k] = sum_m |g_hat(m,k)|^2. Every multiplier-operator
/// norm in this library reduces to a weighted sum over this profile.
inline std::vector<double> degree_power(const SphericalSpectrum& s) {
  std::vector<double> w2(static_cast<std::size_t>(s.k_max) + 1, 0.0);
  for (int k = 0; k <= s.k_max; ++k) {
    double acc = 0.0;
    for (int m = -k; m <= k; ++m) acc += std::norm(s.coeffs[SphericalSpectrum::index(k, m)]);
    w2[static_cast<std::size_t>(k)] = acc;
  }
  return w2;
}

}  // namespace potex
