#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "potex/errors.hpp"
#include "potex/operators.hpp"
#include "potex/problem.hpp"
#include "potex/spectrum.hpp"

namespace potex {

/// The five rate probes. All take a common parameter u > 0 mapped so that a
/// smoothness class of order alpha shows up as slope +alpha on every probe:
///   boundary     ||T(u) h - h||                       semigroup deviation
///   abel_A       ||lambda R(lambda; A) h - h||        at lambda = 1/u
///   ergodic      ||C(r) h||                           at log r = 1/u
///   abel_Ainv    ||lambda R(lambda; A^{-1}) h||       at lambda = u
///   kfunctional  quadratic K-functional at t = u
enum class Probe { boundary, abel_A, ergodic, abel_Ainv, kfunctional };

inline constexpr std::array<Probe, 5> kAllProbes = {
    Probe::boundary, Probe::abel_A, Probe::ergodic, Probe::abel_Ainv, Probe::kfunctional};

inline const char* probe_name(Probe p) {
  switch (p) {
    case Probe::boundary: return "boundary";
    case Probe::abel_A: return "abel_A";
    case Probe::ergodic: return "ergodic";
    case Probe::abel_Ainv: return "abel_Ainv";
    case Probe::kfunctional: return "kfunctional";
  }
  return "?";
}

struct RateProbe {
  Probe which = Probe::boundary;
  ProblemSpec spec;
  SphericalSpectrum h;
  std::vector<double> params;  // strictly increasing, >= 8 points, >= 2 decades
};

struct RateReport {
  Probe which = Probe::boundary;
  std::vector<double> params;
  std::vector<double> norms;
  bool slope_defined = false;  // false when h = 0 leaves nothing to fit
  double slope = std::numeric_limits<double>::quiet_NaN();
  double slope_stderr = std::numeric_limits<double>::quiet_NaN();
  double saturation_ratio = std::numeric_limits<double>::quiet_NaN();
};

/// n logarithmically spaced points on [lo, hi], endpoints exact.
inline std::vector<double> geometric_grid(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2)
    throw domain_error("geometric_grid: need 0 < lo < hi and n >= 2");
  std::vector<double> g(static_cast<std::size_t>(n));
  const double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < n; ++i)
    g[static_cast<std::size_t>(i)] = std::exp(llo + (lhi - llo) * i / (n - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

namespace detail {

inline void check_probe_grid(const std::vector<double>& params) {
  if (params.size() < 8) throw domain_error("rate grid: need at least 8 points");
  if (!(params.front() > 0.0)) throw domain_error("rate grid: parameters must be > 0");
  for (std::size_t i = 1; i < params.size(); ++i)
    if (!(params[i] > params[i - 1]))
      throw domain_error("rate grid: parameters must be strictly increasing");
  if (std::log10(params.back() / params.front()) < 2.0 - 1e-9)
    throw domain_error("rate grid: must span at least two decades");
}

inline double weighted_deviation_norm(const DiagonalOperator& op,
                                      const std::vector<double>& w2) {
  double acc = 0.0;
  for (std::size_t k = 0; k < w2.size(); ++k) {
    const double d = op.multipliers[k] - 1.0;
    acc += d * d * w2[k];
  }
  return std::sqrt(acc);
}

inline double weighted_apply_norm(const DiagonalOperator& op, const std::vector<double>& w2) {
  double acc = 0.0;
  for (std::size_t k = 0; k < w2.size(); ++k)
    acc += op.multipliers[k] * op.multipliers[k] * w2[k];
  return std::sqrt(acc);
}

/// One probe norm at parameter u, evaluated from the per-degree power profile.
inline double probe_norm(Probe which, const ProblemSpec& spec, const std::vector<double>& w2,
                         double u) {
  switch (which) {
    case Probe::boundary:
      return weighted_deviation_norm(semigroup(spec, u), w2);
    case Probe::abel_A:
      return weighted_deviation_norm(abel_mean(spec, Generator::A, 1.0 / u), w2);
    case Probe::ergodic:
      return weighted_apply_norm(ergodic_mean_log(spec, 1.0 / u), w2);
    case Probe::abel_Ainv:
      return weighted_apply_norm(abel_mean(spec, Generator::A_inverse, u), w2);
    case Probe::kfunctional:
      return quadratic_k_functional(spec, w2, u);
  }
  throw domain_error("probe_norm: unknown probe");
}

struct LogLogFit {
  bool defined = false;
  double slope = std::numeric_limits<double>::quiet_NaN();
  double stderr_ = std::numeric_limits<double>::quiet_NaN();
};

/// Least squares of log(norm) on log(param); samples with norm <= 0 drop out.
inline LogLogFit fit_loglog(const std::vector<double>& params,
                            const std::vector<double>& norms) {
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (norms[i] > 0.0) {
      xs.push_back(std::log(params[i]));
      ys.push_back(std::log(norms[i]));
    }
  }
  LogLogFit fit;
  const std::size_t n = xs.size();
  if (n < 2) return fit;
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) return fit;
  fit.slope = sxy / sxx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = ys[i] - my - fit.slope * (xs[i] - mx);
    ssr += e * e;
  }
  fit.stderr_ = n > 2 ? std::sqrt(ssr / (static_cast<double>(n) - 2) / sxx) : 0.0;
  fit.defined = true;
  return fit;
}

inline RateReport measure_profile(Probe which, const ProblemSpec& spec,
                                  const std::vector<double>& w2,
                                  const std::vector<double>& params) {
  check_probe_grid(params);
  RateReport rep;
  rep.which = which;
  rep.params = params;
  rep.norms.resize(params.size());
  for (std::size_t i = 0; i < params.size(); ++i)
    rep.norms[i] = probe_norm(which, spec, w2, params[i]);
  const LogLogFit fit = fit_loglog(rep.params, rep.norms);
  rep.slope_defined = fit.defined;
  rep.slope = fit.slope;
  rep.slope_stderr = fit.stderr_;
  if (fit.defined) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (std::size_t i = 0; i < params.size(); ++i) {
      if (!(rep.norms[i] > 0.0)) continue;
      const double q = rep.norms[i] / std::pow(params[i], fit.slope);
      lo = std::min(lo, q);
      hi = std::max(hi, q);
    }
    rep.saturation_ratio = hi / lo;
  }
  return rep;
}

}  // namespace detail

/// Evaluate one probe across its parameter grid and fit the log-log slope.
/// Zero data yields slope_defined = false rather than an error.
inline RateReport measure(const RateProbe& probe) {
  generator_offset(probe.spec.kind);  // probes need a genuine semigroup
  if (probe.h.k_max > probe.spec.k_max)
    throw domain_error("measure: data truncation exceeds problem truncation");
  return detail::measure_profile(probe.which, probe.spec, degree_power(probe.h),
                                 probe.params);
}

/// Zonal data h_hat(0, k) = (k+1)^{-alpha - 1/2}, the classical witness whose
/// probe norms scale like u^alpha until truncation bites. Requires
/// 0 < alpha < 1 and k_max >= 64 so at least a couple of decades resolve.
inline SphericalSpectrum extremal_h(double alpha, int k_max) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw domain_error("extremal_h: need 0 < alpha < 1");
  if (k_max < 64) throw domain_error("extremal_h: need k_max >= 64");
  SphericalSpectrum h(k_max);
  for (int k = 0; k <= k_max; ++k)
    h.coeffs[SphericalSpectrum::index(k, 0)] = std::pow(k + 1.0, -alpha - 0.5);
  return h;
}

struct EquivalenceReport {
  std::array<RateReport, 5> probes;  // indexed in kAllProbes order
  double max_pairwise_delta = std::numeric_limits<double>::quiet_NaN();
  // max over the grid of | ||lam R(lam;A^{-1})h|| - ||h - lam^{-1}... || |,
  // i.e. the two Abel probes evaluated through their defining identity,
  // relative to ||h||.
  double identity_residual = std::numeric_limits<double>::quiet_NaN();
};

/// Run all five probes on a common parameter grid and compare the fitted
/// slopes pairwise. Also reports the exact pointwise identity residual tying
/// the two Abel means together.
inline EquivalenceReport equivalence_battery(const ProblemSpec& spec,
                                             const SphericalSpectrum& h,
                                             const std::vector<double>& params) {
  generator_offset(spec.kind);
  if (h.k_max > spec.k_max)
    throw domain_error("equivalence_battery: data truncation exceeds problem truncation");
  const double h_norm = parseval_norm(h);
  if (!(h_norm > 0.0)) throw domain_error("equivalence_battery: data must be nonzero");
  const std::vector<double> w2 = degree_power(h);

  EquivalenceReport rep;
  for (std::size_t p = 0; p < kAllProbes.size(); ++p)
    rep.probes[p] = detail::measure_profile(kAllProbes[p], spec, w2, params);

  double mx = 0.0;
  bool any = false;
  for (std::size_t i = 0; i < rep.probes.size(); ++i)
    for (std::size_t j = i + 1; j < rep.probes.size(); ++j)
      if (rep.probes[i].slope_defined && rep.probes[j].slope_defined) {
        mx = std::max(mx, std::abs(rep.probes[i].slope - rep.probes[j].slope));
        any = true;
      }
  if (any) rep.max_pairwise_delta = mx;

  double res = 0.0;
  for (double u : params) {
    const double n1 =
        detail::weighted_apply_norm(abel_mean(spec, Generator::A_inverse, u), w2);
    const double n2 =
        detail::weighted_deviation_norm(abel_mean(spec, Generator::A, 1.0 / u), w2);
    res = std::max(res, std::abs(n1 - n2));
  }
  rep.identity_residual = res / h_norm;
  return rep;
}

}  // namespace potex
