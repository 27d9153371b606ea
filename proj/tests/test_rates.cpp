#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "potex/rates.hpp"

#include "oracle.hpp"

using namespace potex;
using Catch::Approx;

TEST_CASE("geometric_grid") {
  const std::vector<double> g = geometric_grid(1e-3, 1e-1, 9);
  REQUIRE(g.size() == 9);
  CHECK(g.front() == 1e-3);
  CHECK(g.back() == 1e-1);
  CHECK(g[4] == Approx(1e-2).epsilon(1e-12));
  for (std::size_t i = 1; i < g.size(); ++i)
    CHECK(g[i] / g[i - 1] == Approx(g[1] / g[0]).epsilon(1e-12));
  CHECK_THROWS_AS(geometric_grid(0.0, 1.0, 5), domain_error);
  CHECK_THROWS_AS(geometric_grid(1.0, 0.1, 5), domain_error);
}

TEST_CASE("extremal_h") {
  const SphericalSpectrum h = extremal_h(0.5, 128);
  CHECK(h.k_max == 128);
  CHECK(h.at(0, 0).real() == 1.0);
  // (k+1)^{-alpha-1/2} at k = 3: 4^{-1} = 0.25.
  CHECK(h.at(3, 0).real() == Approx(0.25).margin(1e-15));
  CHECK(h.at(5, 1) == std::complex<double>{});  // zonal: only m = 0 filled

  CHECK_THROWS_AS(extremal_h(0.0, 128), domain_error);
  CHECK_THROWS_AS(extremal_h(1.0, 128), domain_error);
  CHECK_THROWS_AS(extremal_h(0.5, 32), domain_error);
}

TEST_CASE("log-log fit recovers an exact power law") {
  const std::vector<double> params = geometric_grid(1e-3, 1e-1, 12);
  std::vector<double> norms(params.size());
  for (std::size_t i = 0; i < params.size(); ++i)
    norms[i] = 3.7 * std::pow(params[i], 0.42);
  const detail::LogLogFit fit = detail::fit_loglog(params, norms);
  REQUIRE(fit.defined);
  CHECK(fit.slope == Approx(0.42).margin(1e-12));
  CHECK(fit.stderr_ <= 1e-10);
}

TEST_CASE("measure: grid validation") {
  const ProblemSpec spec = ProblemSpec::dirichlet(64);
  SphericalSpectrum h(64);
  h.at(0, 0) = 1.0;

  auto probe = [&](std::vector<double> grid) {
    return RateProbe{Probe::boundary, spec, h, std::move(grid)};
  };
  CHECK_THROWS_AS(measure(probe({1e-3, 1e-2, 1e-1})), domain_error);  // too few
  CHECK_THROWS_AS(measure(probe(geometric_grid(1e-2, 1e-1, 8))), domain_error);  // 1 decade
  std::vector<double> nonmono = geometric_grid(1e-3, 1e-1, 8);
  std::swap(nonmono[2], nonmono[3]);
  CHECK_THROWS_AS(measure(probe(nonmono)), domain_error);
  CHECK_NOTHROW(measure(probe(geometric_grid(1e-3, 1e-1, 8))));

  CHECK_THROWS_AS(
      measure(RateProbe{Probe::boundary, ProblemSpec::robin(1.0, -1.0, 64), h,
                        geometric_grid(1e-3, 1e-1, 8)}),
      unsupported_problem_error);
}

TEST_CASE("measure: zero data reports an undefined slope") {
  const RateReport rep = measure(RateProbe{Probe::abel_A, ProblemSpec::dirichlet(64),
                                           SphericalSpectrum(64),
                                           geometric_grid(1e-3, 1e-1, 8)});
  CHECK_FALSE(rep.slope_defined);
  CHECK(std::isnan(rep.slope));
  for (double n : rep.norms) CHECK(n == 0.0);
}

TEST_CASE("measure: data in the generator domain has slope 1") {
  // Finite spectra are always in D(A); every probe then saturates at rate 1.
  // The grid sits at small parameters so curvature effects stay negligible.
  std::mt19937 rng(404);
  const int k_max = 16;
  const SphericalSpectrum h = oracle::random_spectrum(rng, k_max);
  const ProblemSpec spec = ProblemSpec::neumann(k_max);
  const std::vector<double> grid = geometric_grid(1e-5, 1e-3, 16);
  for (Probe p : kAllProbes) {
    const RateReport rep = measure({p, spec, h, grid});
    REQUIRE(rep.slope_defined);
    CHECK(rep.slope == Approx(1.0).margin(0.02));
  }
}

TEST_CASE("measure: extremal data reproduces its order") {
  const std::vector<double> grid = geometric_grid(1e-3, 1e-1, 24);

  SECTION("alpha = 0.5 boundary probe against a brute-force oracle") {
    // Oracle: direct summation of sum_k (1 - e^{-(k+1)t})^2 (k+1)^{-2 alpha - 1}
    // at k_max = 1e5, effectively the untruncated norm on this grid.
    const int big = 100000;
    std::vector<double> oracle_norms(grid.size(), 0.0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      long double acc = 0.0L;
      for (int k = 0; k <= big; ++k) {
        const long double d = -std::expm1(-(k + 1.0L) * grid[i]);
        acc += d * d * std::pow(k + 1.0L, -2.0L);
      }
      oracle_norms[i] = static_cast<double>(std::sqrt(acc));
    }
    const detail::LogLogFit oracle_fit = detail::fit_loglog(grid, oracle_norms);
    REQUIRE(oracle_fit.defined);
    CHECK(oracle_fit.slope == Approx(0.5).margin(0.05));

    const RateReport rep = measure(
        {Probe::boundary, ProblemSpec::dirichlet(4096), extremal_h(0.5, 4096), grid});
    REQUIRE(rep.slope_defined);
    CHECK(rep.slope == Approx(0.5).margin(0.05));
    // Truncated norms agree with the oracle wherever truncation is invisible
    // (larger t; small t loses a little tail mass).
    CHECK(rep.norms.back() == Approx(oracle_norms.back()).epsilon(5e-3));
  }

  SECTION("alpha = 0.3 boundary probe with saturation control") {
    const RateReport rep = measure(
        {Probe::boundary, ProblemSpec::dirichlet(4096), extremal_h(0.3, 4096), grid});
    REQUIRE(rep.slope_defined);
    CHECK(rep.slope == Approx(0.3).margin(0.05));
    CHECK(rep.saturation_ratio <= 4.0);
  }
}

TEST_CASE("measure: slope is stable under grid refinement") {
  const SphericalSpectrum h = extremal_h(0.5, 512);
  const ProblemSpec spec = ProblemSpec::dirichlet(512);
  const RateReport coarse =
      measure({Probe::abel_A, spec, h, geometric_grid(1e-3, 1e-1, 12)});
  const RateReport fine =
      measure({Probe::abel_A, spec, h, geometric_grid(1e-3, 1e-1, 24)});
  REQUIRE(coarse.slope_defined);
  REQUIRE(fine.slope_defined);
  CHECK(std::abs(coarse.slope - fine.slope) <= 0.01);
}

TEST_CASE("equivalence battery") {
  const std::vector<double> grid = geometric_grid(1e-3, 1e-1, 24);

  SECTION("extremal data: all five probes agree pairwise") {
    for (double alpha : {0.3, 0.7}) {
      const EquivalenceReport rep = equivalence_battery(ProblemSpec::dirichlet(1024),
                                                        extremal_h(alpha, 1024), grid);
      for (const RateReport& p : rep.probes) REQUIRE(p.slope_defined);
      CHECK(rep.max_pairwise_delta <= 0.1);
      CHECK(rep.identity_residual <= 1e-13);
      // The two Abel probes are tied by an exact identity, so their slopes
      // are equal to rounding.
      CHECK(std::abs(rep.probes[1].slope - rep.probes[3].slope) <= 1e-12);
    }
  }

  SECTION("generator-domain data: every probe reports slope 1") {
    std::mt19937 rng(505);
    const SphericalSpectrum h = oracle::random_spectrum(rng, 12);
    const EquivalenceReport rep = equivalence_battery(
        ProblemSpec::dirichlet(12), h, geometric_grid(1e-5, 1e-3, 16));
    for (const RateReport& p : rep.probes) {
      REQUIRE(p.slope_defined);
      CHECK(p.slope == Approx(1.0).margin(0.02));
    }
    CHECK(rep.max_pairwise_delta <= 0.02);
  }

  CHECK_THROWS_AS(equivalence_battery(ProblemSpec::dirichlet(64), SphericalSpectrum(64), grid),
                  domain_error);
  CHECK_THROWS_AS(
      equivalence_battery(ProblemSpec::robin(1.0, -1.0, 64), extremal_h(0.5, 64), grid),
      unsupported_problem_error);
}

TEST_CASE("saturation ratio flags a flat tail") {
  // Past the resolution of a small truncation, boundary-probe norms flatten;
  // the fitted slope drops and the deviation-from-power-law ratio grows well
  // past the well-resolved case.
  const std::vector<double> wide = geometric_grid(1e-3, 10.0, 24);
  const RateReport flat =
      measure({Probe::boundary, ProblemSpec::dirichlet(64), extremal_h(0.5, 64), wide});
  const RateReport clean = measure(
      {Probe::boundary, ProblemSpec::dirichlet(4096), extremal_h(0.5, 4096),
       geometric_grid(1e-3, 1e-1, 24)});
  REQUIRE(flat.slope_defined);
  REQUIRE(clean.slope_defined);
  CHECK(flat.saturation_ratio > 2.0 * clean.saturation_ratio);
  CHECK(clean.saturation_ratio <= 2.0);
}
