#include <doctest.h>

#include "finsler/error.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "cli.hpp"

namespace {

const std::string kData = FINSLER_DATA_DIR;

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("finsler_cli_" + name)).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(std::vector<std::string> args) { return finsler::cli::run(args); }

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("validate reports a bad Randers metric") {
    const std::string out = temp_path("bad.json");
    CHECK(run({"validate", "--metric", kData + "/bad-randers.json", "--out", out}) == finsler::cli::kExitCheckFailed);
    const auto report = nlohmann::json::parse(slurp(out));
    CHECK(report.at("pass") == false);
    CHECK(run({"validate", "--metric", kData + "/funk2.json", "--out", out}) == finsler::cli::kExitPass);
  }

  TEST_CASE("invalid invocations") {
    CHECK(run({"validate", "--no-such-flag"}) == finsler::cli::kExitInvalid);
    CHECK(run({"frobnicate"}) == finsler::cli::kExitInvalid);
    CHECK(run({"validate", "--metric", kData + "/missing.json"}) == finsler::cli::kExitInvalid);
    CHECK(run({"curvature", "scan", "--builtin", "no_such_metric"}) == finsler::cli::kExitInvalid);
  }

  TEST_CASE("curvature scan of the Funk metric is reproducible") {
    const std::string a = temp_path("scan_a.csv");
    const std::string b = temp_path("scan_b.csv");
    CHECK(run({"curvature", "scan", "--metric", kData + "/funk2.json", "--samples", "100", "--expect", "-0.25", "--out",
               a}) == finsler::cli::kExitPass);
    CHECK(run({"curvature", "scan", "--metric", kData + "/funk2.json", "--samples", "100", "--expect", "-0.25", "--out",
               b}) == finsler::cli::kExitPass);
    const std::string text = slurp(a);
    CHECK(!text.empty());
    CHECK(text == slurp(b));
    CHECK(text.rfind("x1,x2,y1,y2,X1,X2,K", 0) == 0);
    CHECK(run({"curvature", "scan", "--builtin", "funk2", "--samples", "20", "--expect", "1", "--out", a}) ==
          finsler::cli::kExitCheckFailed);
  }

  TEST_CASE("classify") {
    const std::string out = temp_path("classify.json");
    CHECK(run({"classify", "--phi", "-(rho - 0)", "--rho0", "-1", "--drho0", "0", "--span", "0,4", "--out", out}) ==
          finsler::cli::kExitPass);
    const auto report = nlohmann::json::parse(slurp(out));
    CHECK(report.at("case") == "c");
    CHECK(run({"classify", "--phi", "-rho", "--rho0", "-1", "--drho0", "0", "--span", "0,10", "--out", out}) ==
          finsler::cli::kExitCheckFailed);
  }

  TEST_CASE("sphere construction needs a constant-curvature base") {
    const std::string out = temp_path("sphere.json");
    CHECK(run({"construct", "sphere", "--K", "1", "--base-builtin", "randers_var2", "--samples", "30", "--out", out}) ==
          finsler::cli::kExitCheckFailed);
    CHECK(run({"construct", "sphere", "--K", "1", "--base", kData + "/sphere2.json", "--samples", "30", "--out", out}) ==
          finsler::cli::kExitPass);
    const auto spec = nlohmann::json::parse(slurp(out));
    CHECK(spec.at("kind") == "sphere_construction");
  }

  TEST_CASE("geodesic trace and adapted verification") {
    const std::string out = temp_path("geo.csv");
    CHECK(run({"geodesic", "trace", "--builtin", "euclidean2", "--x0", "0,0", "--y0", "1,0", "--t-span", "1", "--out",
               out}) == finsler::cli::kExitPass);
    CHECK(run({"verify", "adapted", "--metric", kData + "/warped-sin-s2.json", "--samples", "5", "--out", out}) ==
          finsler::cli::kExitPass);
  }
}
