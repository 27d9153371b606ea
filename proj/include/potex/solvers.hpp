#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "potex/errors.hpp"
#include "potex/grid.hpp"
#include "potex/operators.hpp"
#include "potex/problem.hpp"
#include "potex/spectrum.hpp"
#include "potex/transform.hpp"

namespace potex {

/// Exterior harmonic field w(r, phi, theta) = sum c_hat(m,k) r^{-(k+1)} Y_k^m
/// determined by boundary data h on the unit sphere. radial_constants holds
/// the c_hat; the degree-k multiplier taking h to c is 1 (Dirichlet),
/// -1/(k+1) (Neumann), or 1/(a - b(k+1)) (Robin).
struct ExteriorField {
  ProblemSpec spec;
  SphericalSpectrum boundary;          // the data h
  SphericalSpectrum radial_constants;  // c_hat = S h_hat

  /// Expansion coefficients of w(r, .) on the sphere of radius r > 1.
  SphericalSpectrum spectrum_at(double r) const {
    if (!(r > 1.0)) throw domain_error("ExteriorField: need r > 1");
    const double log_r = std::log(r);
    SphericalSpectrum out = radial_constants;
    for (int k = 0; k <= out.k_max; ++k) {
      const double decay = std::exp(-(k + 1) * log_r);
      for (int m = -k; m <= k; ++m) out.coeffs[SphericalSpectrum::index(k, m)] *= decay;
    }
    return out;
  }
};

/// Solve the exterior problem for boundary data h. The data truncation must
/// fit inside the problem truncation.
inline ExteriorField solve(const ProblemSpec& spec, const SphericalSpectrum& h) {
  check_admissible(spec);
  if (h.k_max > spec.k_max)
    throw domain_error("solve: data truncation exceeds problem truncation");
  ExteriorField field;
  field.spec = spec;
  field.boundary = h;
  field.radial_constants = h;
  for (int k = 0; k <= h.k_max; ++k) {
    double s;
    switch (spec.kind) {
      case ProblemKind::dirichlet: s = 1.0; break;
      case ProblemKind::neumann: s = -1.0 / (k + 1); break;
      default: s = 1.0 / robin_denominator(spec, k); break;
    }
    for (int m = -k; m <= k; ++m)
      field.radial_constants.coeffs[SphericalSpectrum::index(k, m)] *= s;
  }
  return field;
}

/// Pointwise field values on the sphere of radius r > 1.
inline GridSamples eval_field(const ExteriorField& field, const SphereGrid& grid, double r) {
  return synthesize(field.spectrum_at(r), grid);
}

/// ||B_r h - h||: how far the solved field's boundary trace at radius r has
/// drifted from the data. B_r is the problem's trace family at t = log r, so
/// this is exactly the semigroup (or Robin family) deviation norm and tends
/// to 0 as r decreases to 1.
inline double boundary_error(const ProblemSpec& spec, const SphericalSpectrum& h, double r) {
  if (!(r > 1.0)) throw domain_error("boundary_error: need r > 1");
  if (h.k_max > spec.k_max)
    throw domain_error("boundary_error: data truncation exceeds problem truncation");
  ProblemSpec at_h = spec;
  at_h.k_max = h.k_max;
  const DiagonalOperator trace = trace_family(at_h, std::log(r));
  double acc = 0.0;
  const std::vector<double> w2 = degree_power(h);
  for (std::size_t k = 0; k < w2.size(); ++k) {
    const double d = trace.multipliers[k] - 1.0;
    acc += d * d * w2[k];
  }
  return std::sqrt(acc);
}

/// Max-norm Laplacian residual of the field at radius r, discretizing the
/// radial part with centered differences of step dr and applying the exact
/// spectral angular part (the degree-k eigenvalue -k(k+1)):
///   w_rr + (2/r) w_r + (1/r^2) Delta_S w.
/// Second-order: halving dr divides the residual of a harmonic field by ~4
/// (degrees k >= 1; the k = 0 mode's difference quotients cancel exactly).
inline double laplace_residual(const ExteriorField& field, const SphereGrid& grid, double r,
                               double dr) {
  if (!(dr > 0.0)) throw domain_error("laplace_residual: dr must be > 0");
  if (!(r - dr > 1.0)) throw domain_error("laplace_residual: need r - dr > 1");
  const GridSamples lo = eval_field(field, grid, r - dr);
  const GridSamples mid = eval_field(field, grid, r);
  const GridSamples hi = eval_field(field, grid, r + dr);

  SphericalSpectrum beltrami = field.spectrum_at(r);
  for (int k = 0; k <= beltrami.k_max; ++k) {
    const double eig = -static_cast<double>(k) * (k + 1);
    for (int m = -k; m <= k; ++m)
      beltrami.coeffs[SphericalSpectrum::index(k, m)] *= eig;
  }
  const GridSamples ang = synthesize(beltrami, grid);

  double mx = 0.0;
  for (std::size_t i = 0; i < mid.values.size(); ++i) {
    const std::complex<double> radial =
        (hi.values[i] - 2.0 * mid.values[i] + lo.values[i]) / (dr * dr) +
        (hi.values[i] - lo.values[i]) / (2.0 * dr) * (2.0 / r);
    const std::complex<double> res = radial + ang.values[i] / (r * r);
    mx = std::max(mx, std::abs(res));
  }
  return mx;
}

}  // namespace potex
