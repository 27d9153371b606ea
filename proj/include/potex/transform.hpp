#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "potex/errors.hpp"
#include "potex/grid.hpp"
#include "potex/legendre.hpp"
#include "potex/spectrum.hpp"

namespace potex {

/// Orthonormal spherical harmonic Y_k^m(phi, theta) = Pbar_k^{|m|}(cos phi) e^{im theta}.
/// No Condon-Shortley sign, so Y_k^{-m} = conj(Y_k^m) with no extra phase.
inline std::complex<double> ynm_eval(int k, int m, double phi, double theta) {
  if (k < 0 || m < -k || m > k) throw domain_error("ynm_eval: need |m| <= k");
  if (!(phi >= 0.0 && phi <= std::numbers::pi))
    throw domain_error("ynm_eval: phi outside [0, pi]");
  const double pbar = normalized_assoc(k, m < 0 ? -m : m, std::cos(phi));
  return pbar * std::complex<double>(std::cos(m * theta), std::sin(m * theta));
}

namespace detail {

inline void check_samples_shape(const GridSamples& samples, const char* who) {
  if (samples.values.size() != samples.grid.node_count())
    throw domain_error(std::string(who) + ": sample count does not match grid");
}

}  // namespace detail

/// Forward transform: quadrature inner products g_hat(m,k) = <g, Y_k^m> over
/// the product grid. Exact (to rounding) for inputs band-limited to k_max when
/// the grid satisfies n_phi >= k_max+1 and n_theta >= 2 k_max+2; the integrand
/// g conj(Y) then has polynomial degree <= 2 k_max in t, within Gauss-Legendre
/// exactness, and every longitude frequency below the aliasing threshold.
inline SphericalSpectrum analyze(const GridSamples& samples, int k_max) {
  if (k_max < 0) throw domain_error("analyze: k_max must be >= 0");
  detail::check_samples_shape(samples, "analyze");
  const SphereGrid& g = samples.grid;
  if (g.n_phi < k_max + 1 || g.n_theta < 2 * k_max + 2)
    throw grid_error("analyze: grid too coarse for degree " + std::to_string(k_max) +
                     " (need n_phi >= " + std::to_string(k_max + 1) +
                     ", n_theta >= " + std::to_string(2 * k_max + 2) + ")");

  // Longitude moments G(m, i) = sum_j g(i, j) e^{-im theta_j} (2pi/n_theta).
  const int n_m = 2 * k_max + 1;
  std::vector<std::complex<double>> moments(static_cast<std::size_t>(n_m) * g.n_phi);
  const double tw = g.theta_weight();
  for (int i = 0; i < g.n_phi; ++i) {
    for (int j = 0; j < g.n_theta; ++j) {
      const std::complex<double> v =
          tw * samples.values[static_cast<std::size_t>(i) * g.n_theta + j];
      const double th = g.theta_nodes[static_cast<std::size_t>(j)];
      const std::complex<double> step(std::cos(th), -std::sin(th));  // e^{-i theta_j}
      std::complex<double> phase(1.0, 0.0);
      for (int m = 0; m <= k_max; ++m) {
        moments[static_cast<std::size_t>(m + k_max) * g.n_phi + i] += v * phase;
        if (m < k_max)
          moments[static_cast<std::size_t>(k_max - m - 1) * g.n_phi + i] +=
              v * std::conj(phase * step);
        phase *= step;
      }
    }
  }

  // Latitude quadrature against the normalized Legendre table per node.
  SphericalSpectrum out(k_max);
  for (int i = 0; i < g.n_phi; ++i) {
    const double t = std::cos(g.phi_nodes[static_cast<std::size_t>(i)]);
    const double wi = g.phi_weights[static_cast<std::size_t>(i)];
    const std::vector<double> table = normalized_assoc_table(k_max, t);
    for (int k = 0; k <= k_max; ++k) {
      for (int m = -k; m <= k; ++m) {
        const double pbar = table[tri_index(k, m < 0 ? -m : m)];
        out.coeffs[SphericalSpectrum::index(k, m)] +=
            wi * pbar * moments[static_cast<std::size_t>(m + k_max) * g.n_phi + i];
      }
    }
  }
  return out;
}

/// Inverse transform: pointwise evaluation of the expansion on the grid.
inline GridSamples synthesize(const SphericalSpectrum& s, const SphereGrid& grid) {
  GridSamples out;
  out.grid = grid;
  out.values.assign(grid.node_count(), {});
  const int k_max = s.k_max;

  // Collapse degrees first: S(m, i) = sum_k g_hat(m,k) Pbar_k^{|m|}(t_i).
  const int n_m = 2 * k_max + 1;
  std::vector<std::complex<double>> lat(static_cast<std::size_t>(n_m) * grid.n_phi);
  for (int i = 0; i < grid.n_phi; ++i) {
    const double t = std::cos(grid.phi_nodes[static_cast<std::size_t>(i)]);
    const std::vector<double> table = normalized_assoc_table(k_max, t);
    for (int k = 0; k <= k_max; ++k)
      for (int m = -k; m <= k; ++m)
        lat[static_cast<std::size_t>(m + k_max) * grid.n_phi + i] +=
            s.coeffs[SphericalSpectrum::index(k, m)] * table[tri_index(k, m < 0 ? -m : m)];
  }

  for (int i = 0; i < grid.n_phi; ++i) {
    for (int j = 0; j < grid.n_theta; ++j) {
      const double th = grid.theta_nodes[static_cast<std::size_t>(j)];
      const std::complex<double> step(std::cos(th), std::sin(th));  // e^{+i theta_j}
      std::complex<double> phase(1.0, 0.0);
      std::complex<double> acc =
          lat[static_cast<std::size_t>(k_max) * grid.n_phi + i];  // m = 0 term
      for (int m = 1; m <= k_max; ++m) {
        phase *= step;
        acc += lat[static_cast<std::size_t>(k_max + m) * grid.n_phi + i] * phase;
        acc += lat[static_cast<std::size_t>(k_max - m) * grid.n_phi + i] * std::conj(phase);
      }
      out.values[static_cast<std::size_t>(i) * grid.n_theta + j] = acc;
    }
  }
  return out;
}

/// Quadrature L^2(S) norm of grid samples; matches parseval_norm of the
/// analyzed spectrum for band-limited data.
inline double grid_norm(const GridSamples& samples) {
  detail::check_samples_shape(samples, "grid_norm");
  const SphereGrid& g = samples.grid;
  const double tw = g.theta_weight();
  double acc = 0.0;
  for (int i = 0; i < g.n_phi; ++i) {
    double row = 0.0;
    for (int j = 0; j < g.n_theta; ++j)
      row += std::norm(samples.values[static_cast<std::size_t>(i) * g.n_theta + j]);
    acc += g.phi_weights[static_cast<std::size_t>(i)] * tw * row;
  }
  return std::sqrt(acc);
}

}  // namespace potex
