#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <json.hpp>

#include "potex/io.hpp"

#include "oracle.hpp"

using namespace potex;

namespace {

std::string binary() {
  const char* p = std::getenv("POTEX_BIN");
  REQUIRE(p != nullptr);
  return p;
}

// Runs the tool with stdout/stderr captured into files under dir.
int run(const oracle::TempDir& dir, const std::string& args) {
  const std::string cmd = binary() + " " + args + " > " +
                          dir.file("stdout.txt").string() + " 2> " +
                          dir.file("stderr.txt").string();
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path write_small_spectrum(const oracle::TempDir& dir) {
  SphericalSpectrum h(3);
  h.at(0, 0) = 1.0;
  h.at(2, 1) = {0.5, -0.25};
  h.at(2, -1) = {0.5, 0.25};
  const auto path = dir.file("h.json");
  write_spectrum_json(path, h);
  return path;
}

}  // namespace

TEST_CASE("cli version and missing subcommand") {
  oracle::TempDir tmp("cli");
  CHECK(run(tmp, "--version") == 0);
  CHECK(slurp(tmp.file("stdout.txt")).find("0.1.0") != std::string::npos);
  CHECK(run(tmp, "") == 2);
}

TEST_CASE("cli solve writes a field") {
  oracle::TempDir tmp("cli");
  const auto coeffs = write_small_spectrum(tmp);
  const auto out = tmp.file("field.csv");
  const int code = run(tmp, "solve --problem dirichlet --coeffs " + coeffs.string() +
                                " --r 2 --r 4 --out " + out.string());
  CHECK(code == 0);
  REQUIRE(std::filesystem::exists(out));
  const std::string field = slurp(out);
  CHECK(field.rfind("phi,theta,r,re,im\n", 0) == 0);
  const std::string log = slurp(tmp.file("stdout.txt"));
  CHECK(log.find("r,boundary_error") != std::string::npos);
}

TEST_CASE("cli exit codes name the failure class") {
  oracle::TempDir tmp("cli");
  const auto coeffs = write_small_spectrum(tmp);

  SECTION("inadmissible robin pair") {
    const int code = run(tmp, "solve --problem robin --a 1 --b 1 --coeffs " +
                                  coeffs.string() + " --r 2 --out " +
                                  tmp.file("f.csv").string());
    CHECK(code == 3);
    CHECK(slurp(tmp.file("stderr.txt")).find("admissib") != std::string::npos);
  }

  SECTION("unreadable input") {
    const int code =
        run(tmp, "solve --problem dirichlet --coeffs " + tmp.file("nope.json").string() +
                     " --r 2 --out " + tmp.file("f.csv").string());
    CHECK(code == 4);
  }

  SECTION("invalid probe grid") {
    const int code = run(tmp, "rates --coeffs " + coeffs.string() +
                                  " --tmin 0.1 --tmax 0.001 --points 8 --out " +
                                  tmp.file("b.json").string());
    CHECK(code == 2);
  }

  SECTION("unknown verify suite") {
    CHECK(run(tmp, "verify --suite bogus") == 2);
    CHECK(slurp(tmp.file("stderr.txt")).find("bogus") != std::string::npos);
  }

  SECTION("bad flag value") {
    CHECK(run(tmp, "solve --problem helmholtz --coeffs " + coeffs.string()) == 2);
  }
}

TEST_CASE("cli verify robin defect") {
  oracle::TempDir tmp("cli");
  const auto report = tmp.file("report.json");
  const int code = run(tmp, "verify --suite robin-defect --out " + report.string());
  CHECK(code == 0);
  CHECK(slurp(tmp.file("stdout.txt")).find("[PASS]") != std::string::npos);
  const nlohmann::json j = nlohmann::json::parse(slurp(report));
  CHECK(j["pass"].get<bool>());
  const auto& chk = j["checks"]["robin-defect"];
  CHECK(chk["pass"].get<bool>());
  CHECK(chk["inverted"].get<bool>());
  CHECK(chk["measured"].get<double>() == 0.015625);
}

TEST_CASE("cli verify full suite passes") {
  oracle::TempDir tmp("cli");
  const auto report = tmp.file("report.json");
  const int code = run(tmp, "verify --kmax 8 --out " + report.string());
  CHECK(code == 0);
  const nlohmann::json j = nlohmann::json::parse(slurp(report));
  CHECK(j["pass"].get<bool>());
  CHECK(j["checks"].size() == 7);
}

TEST_CASE("cli rates on zero data reports undefined slopes") {
  oracle::TempDir tmp("cli");
  SphericalSpectrum zero(4);
  const auto coeffs = tmp.file("zero.json");
  write_spectrum_json(coeffs, zero);
  const auto out = tmp.file("battery.json");
  const int code = run(tmp, "rates --coeffs " + coeffs.string() +
                                " --tmin 1e-3 --tmax 1e-1 --points 8 --out " +
                                out.string());
  CHECK(code == 0);
  const nlohmann::json j = nlohmann::json::parse(slurp(out));
  for (const auto& [name, probe] : j["probes"].items()) {
    INFO(name);
    CHECK_FALSE(probe["slope_defined"].get<bool>());
    CHECK(probe["slope"].is_null());
  }
}

TEST_CASE("cli rates extremal run is deterministic") {
  oracle::TempDir tmp("cli");
  const auto out = tmp.file("battery.json");
  const std::string args = "rates --extremal 0.5 --kmax 64 --problem neumann "
                           "--tmin 1e-3 --tmax 1e-1 --points 8 --format json --out " +
                           out.string();

  REQUIRE(run(tmp, args) == 0);
  const std::string battery1 = slurp(out);
  const std::string stdout1 = slurp(tmp.file("stdout.txt"));
  const std::string probe_csv = slurp(tmp.file("battery_boundary.csv"));

  REQUIRE(run(tmp, args) == 0);
  CHECK(slurp(out) == battery1);
  CHECK(slurp(tmp.file("stdout.txt")) == stdout1);
  CHECK(slurp(tmp.file("battery_boundary.csv")) == probe_csv);

  const nlohmann::json j = nlohmann::json::parse(battery1);
  CHECK(j["probes"]["boundary"]["slope_defined"].get<bool>());
  CHECK(j["max_pairwise_delta"].get<double>() < 1.0);
  CHECK(probe_csv.rfind("param,norm\n", 0) == 0);
}

TEST_CASE("cli extremal writes readable data") {
  oracle::TempDir tmp("cli");
  const auto out = tmp.file("ext.json");
  REQUIRE(run(tmp, "extremal --alpha 0.5 --kmax 64 --out " + out.string()) == 0);
  const SphericalSpectrum h = read_spectrum_json(out);
  CHECK(h.k_max == 64);
  CHECK(h.at(0, 0).real() == 1.0);
  CHECK(h.at(3, 0).real() == 0.25);
  CHECK(h.at(3, 1) == std::complex<double>{});

  SECTION("alpha outside (0,1) is rejected") {
    CHECK(run(tmp, "extremal --alpha 1.5 --kmax 64 --out " + out.string()) == 2);
  }
}
