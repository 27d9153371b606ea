#pragma once

#include <charconv>
#include <complex>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "potex/errors.hpp"
#include "potex/grid.hpp"
#include "potex/rates.hpp"
#include "potex/solvers.hpp"
#include "potex/spectrum.hpp"

namespace potex {

namespace detail {

/// Shortest round-trip decimal form of a double; keeps CSV output
/// byte-identical across runs.
inline std::string format_double(double v) {
  char buf[64];
  const std::to_chars_result r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

inline std::ofstream open_output(const std::filesystem::path& path, const char* what) {
  std::ofstream out(path);
  if (!out) throw io_error(std::string("cannot open ") + what + " for writing: " + path.string());
  return out;
}

}  // namespace detail

/// Spectrum file: {"k_max": K, "coeffs": [{"k":, "m":, "re":, "im":}, ...]}.
/// Modes not listed are zero; a repeated (k, m) keeps the last entry.
inline SphericalSpectrum read_spectrum_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open spectrum file: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw io_error("malformed spectrum JSON in " + path.string() + ": " + e.what());
  }
  try {
    if (!j.is_object() || !j.contains("k_max"))
      throw io_error("spectrum JSON must be an object with a k_max field");
    const int k_max = j.at("k_max").get<int>();
    if (k_max < 0) throw io_error("spectrum JSON: k_max must be >= 0");
    SphericalSpectrum s(k_max);
    for (const auto& entry : j.value("coeffs", nlohmann::json::array())) {
      const int k = entry.at("k").get<int>();
      const int m = entry.at("m").get<int>();
      if (k < 0 || k > k_max || m < -k || m > k)
        throw io_error("spectrum JSON: mode (" + std::to_string(k) + ", " +
                       std::to_string(m) + ") outside truncation k_max = " +
                       std::to_string(k_max));
      s.coeffs[SphericalSpectrum::index(k, m)] = {entry.value("re", 0.0),
                                                  entry.value("im", 0.0)};
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw io_error("invalid spectrum JSON in " + path.string() + ": " + e.what());
  }
}

inline void write_spectrum_json(const std::filesystem::path& path,
                                const SphericalSpectrum& s) {
  nlohmann::json j;
  j["k_max"] = s.k_max;
  nlohmann::json coeffs = nlohmann::json::array();
  for (int k = 0; k <= s.k_max; ++k)
    for (int m = -k; m <= k; ++m) {
      const std::complex<double> c = s.coeffs[SphericalSpectrum::index(k, m)];
      if (c == std::complex<double>{}) continue;
      coeffs.push_back({{"k", k}, {"m", m}, {"re", c.real()}, {"im", c.imag()}});
    }
  j["coeffs"] = std::move(coeffs);
  auto out = detail::open_output(path, "spectrum JSON");
  out << j.dump(2) << '\n';
}

/// Samples CSV, one row per grid node in row-major (phi outer, theta inner)
/// order: "phi,theta,re,im".
inline void write_samples_csv(const std::filesystem::path& path, const GridSamples& samples) {
  if (samples.values.size() != samples.grid.node_count())
    throw domain_error("write_samples_csv: sample count does not match grid");
  auto out = detail::open_output(path, "samples CSV");
  out << "phi,theta,re,im\n";
  const SphereGrid& g = samples.grid;
  for (int i = 0; i < g.n_phi; ++i)
    for (int j = 0; j < g.n_theta; ++j) {
      const std::complex<double> v =
          samples.values[static_cast<std::size_t>(i) * g.n_theta + j];
      out << detail::format_double(g.phi_nodes[static_cast<std::size_t>(i)]) << ','
          << detail::format_double(g.theta_nodes[static_cast<std::size_t>(j)]) << ','
          << detail::format_double(v.real()) << ',' << detail::format_double(v.imag())
          << '\n';
    }
}

/// Field export CSV: "phi,theta,r,re,im", radii outermost, then row-major
/// grid order within each radius block.
inline void write_field_csv(const std::filesystem::path& path, const ExteriorField& field,
                            const SphereGrid& grid, const std::vector<double>& radii) {
  auto out = detail::open_output(path, "field CSV");
  out << "phi,theta,r,re,im\n";
  for (double r : radii) {
    const GridSamples samples = eval_field(field, grid, r);
    for (int i = 0; i < grid.n_phi; ++i)
      for (int j = 0; j < grid.n_theta; ++j) {
        const std::complex<double> v =
            samples.values[static_cast<std::size_t>(i) * grid.n_theta + j];
        out << detail::format_double(grid.phi_nodes[static_cast<std::size_t>(i)]) << ','
            << detail::format_double(grid.theta_nodes[static_cast<std::size_t>(j)]) << ','
            << detail::format_double(r) << ',' << detail::format_double(v.real()) << ','
            << detail::format_double(v.imag()) << '\n';
      }
  }
}

/// Rate-probe CSV: "param,norm" per grid point.
inline void write_rate_csv(const std::filesystem::path& path, const RateReport& report) {
  auto out = detail::open_output(path, "rate CSV");
  out << "param,norm\n";
  for (std::size_t i = 0; i < report.params.size(); ++i)
    out << detail::format_double(report.params[i]) << ','
        << detail::format_double(report.norms[i]) << '\n';
}

inline nlohmann::json probe_report_json(const RateReport& report) {
  nlohmann::json j;
  j["slope_defined"] = report.slope_defined;
  if (report.slope_defined) {
    j["slope"] = report.slope;
    j["stderr"] = report.slope_stderr;
    j["saturation_ratio"] = report.saturation_ratio;
  } else {
    j["slope"] = nullptr;
    j["stderr"] = nullptr;
    j["saturation_ratio"] = nullptr;
  }
  return j;
}

inline nlohmann::json battery_json(const EquivalenceReport& report) {
  nlohmann::json probes;
  for (std::size_t p = 0; p < kAllProbes.size(); ++p)
    probes[probe_name(kAllProbes[p])] = probe_report_json(report.probes[p]);
  nlohmann::json deltas;
  for (std::size_t i = 0; i < kAllProbes.size(); ++i)
    for (std::size_t j = i + 1; j < kAllProbes.size(); ++j) {
      const RateReport& a = report.probes[i];
      const RateReport& b = report.probes[j];
      const std::string key =
          std::string(probe_name(kAllProbes[i])) + "-" + probe_name(kAllProbes[j]);
      if (a.slope_defined && b.slope_defined)
        deltas[key] = std::abs(a.slope - b.slope);
      else
        deltas[key] = nullptr;
    }
  nlohmann::json j;
  j["probes"] = std::move(probes);
  j["pairwise_deltas"] = std::move(deltas);
  j["max_pairwise_delta"] = report.max_pairwise_delta;
  j["identity_residual"] = report.identity_residual;
  return j;
}

}  // namespace potex
