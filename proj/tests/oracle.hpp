#pragma once

// Test-side reference implementations, kept separate from the library so the
// suite has something independent to compare against: extended-precision
// Legendre recurrences, brute-force Simpson quadrature, and seeded random
// spectra shared by several test files.

#include <cmath>
#include <complex>
#include <filesystem>
#include <random>
#include <string>

#include "potex/spectrum.hpp"

namespace oracle {

// Unnormalized associated Legendre in long double, same definitional
// recurrences evaluated in extended precision.
inline long double assoc_unnorm_ld(int k, int m, long double t) {
  const long double s = std::sqrt((1.0L - t) * (1.0L + t));
  long double pmm = 1.0L;
  for (int i = 1; i <= m; ++i) pmm *= (2 * i - 1) * s;
  if (k == m) return pmm;
  long double below = pmm;
  long double p = (2 * m + 1) * t * pmm;
  for (int j = m + 2; j <= k; ++j) {
    const long double next = ((2 * j - 1) * t * p - (j - 1 + m) * below) / (j - m);
    below = p;
    p = next;
  }
  return p;
}

// sqrt((2k+1)(k-m)!/(4pi (k+m)!)) as a running product in long double.
inline long double norm_factor_ld(int k, int m) {
  const long double pi = 3.14159265358979323846264338327950288L;
  long double ratio = 1.0L;  // (k-m)!/(k+m)!
  for (int i = k - m + 1; i <= k + m; ++i) ratio /= i;
  return std::sqrt((2 * k + 1) * ratio / (4.0L * pi));
}

inline long double assoc_norm_ld(int k, int m, long double t) {
  return norm_factor_ld(k, m) * assoc_unnorm_ld(k, m, t);
}

inline std::complex<long double> ynm_ld(int k, int m, long double phi, long double theta) {
  const int ma = m < 0 ? -m : m;
  const long double pbar = assoc_norm_ld(k, ma, std::cos(phi));
  return pbar * std::complex<long double>(std::cos(m * theta), std::sin(m * theta));
}

// Composite Simpson with n (even) panels.
template <class F>
long double simpson(F f, long double a, long double b, int n) {
  const long double h = (b - a) / n;
  long double acc = f(a) + f(b);
  for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4.0L : 2.0L);
  return acc * h / 3.0L;
}

inline potex::SphericalSpectrum random_spectrum(std::mt19937& rng, int k_max) {
  std::normal_distribution<double> gauss;
  potex::SphericalSpectrum s(k_max);
  for (auto& c : s.coeffs) c = {gauss(rng), gauss(rng)};
  return s;
}

// Scratch directory that cleans up after itself; unique per test binary run.
struct TempDir {
  std::filesystem::path path;

  explicit TempDir(const std::string& tag) {
    path = std::filesystem::temp_directory_path() /
           ("potex_" + tag + "_" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(path);
  }

  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }

  std::filesystem::path file(const std::string& name) const { return path / name; }
};

}  // namespace oracle
