#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "potex/errors.hpp"
#include "potex/legendre.hpp"

namespace potex {

/// Product quadrature grid on the unit sphere: Gauss-Legendre in t = cos(phi),
/// uniform in theta. Longitude nodes all carry the same weight 2pi/n_theta.
struct SphereGrid {
  int n_phi = 0;
  int n_theta = 0;
  std::vector<double> phi_nodes;    // colatitudes in (0, pi), ascending
  std::vector<double> phi_weights;  // Gauss-Legendre weights, sum to 2
  std::vector<double> theta_nodes;  // uniform in (-pi, pi]

  std::size_t node_count() const {
    return static_cast<std::size_t>(n_phi) * static_cast<std::size_t>(n_theta);
  }

  double theta_weight() const { return 2.0 * std::numbers::pi / n_theta; }
};

/// Complex samples over a SphereGrid, row-major: value at (phi_i, theta_j)
/// lives at values[i * n_theta + j].
struct GridSamples {
  SphereGrid grid;
  std::vector<std::complex<double>> values;
};

namespace detail {

// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration on P_n. Roots
// come out in descending t order; initial guesses are the Chebyshev-like
// estimates cos(pi (i + 3/4)/(n + 1/2)), which converge in a handful of steps.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(static_cast<std::size_t>(n), 0.0);
  w.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double xi = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    if (2 * i + 1 == n) xi = 0.0;  // middle root of an odd-degree P_n
    for (int iter = 0; iter < 64; ++iter) {
      const double p = legendre_p(n, xi);
      const double pm = legendre_p(n - 1, xi);
      const double dp = (xi * xi == 1.0) ? 0.0 : n * (xi * p - pm) / (xi * xi - 1.0);
      if (dp == 0.0) break;
      const double dx = p / dp;
      xi -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double p = legendre_p(n, xi);
    const double pm = legendre_p(n - 1, xi);
    const double dp = n * (xi * p - pm) / (xi * xi - 1.0);
    const double wi = 2.0 / ((1.0 - xi * xi) * dp * dp);
    x[static_cast<std::size_t>(i)] = xi;
    w[static_cast<std::size_t>(i)] = wi;
    x[static_cast<std::size_t>(n - 1 - i)] = -xi;
    w[static_cast<std::size_t>(n - 1 - i)] = wi;
  }
}

}  // namespace detail

/// Smallest product grid whose quadrature recovers coefficients exactly
/// (up to rounding) for data band-limited to degree k_max: k_max+1 latitudes,
/// 2k_max+2 longitudes. make_grid(0) is the 1 x 2 grid with phi weight 2.
inline SphereGrid make_grid(int k_max) {
  if (k_max < 0) throw domain_error("make_grid: k_max must be >= 0");
  SphereGrid g;
  g.n_phi = k_max + 1;
  g.n_theta = 2 * k_max + 2;
  std::vector<double> x, w;
  detail::gauss_legendre(g.n_phi, x, w);
  g.phi_nodes.resize(x.size());
  g.phi_weights = std::move(w);
  for (std::size_t i = 0; i < x.size(); ++i) g.phi_nodes[i] = std::acos(x[i]);
  g.theta_nodes.resize(static_cast<std::size_t>(g.n_theta));
  for (int j = 0; j < g.n_theta; ++j)
    g.theta_nodes[static_cast<std::size_t>(j)] =
        -std::numbers::pi + 2.0 * std::numbers::pi * (j + 1) / g.n_theta;
  return g;
}

}  // namespace potex
