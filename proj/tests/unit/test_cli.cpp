#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "slat/cli.hpp"
#include "slat/config.hpp"
#include "slat/reports.hpp"

using namespace slat;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string cfg(const std::string& name) { return std::string(SLAT_SOURCE_DIR) + "/configs/" + name + ".json"; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args, const fs::path& dir) {
  args.push_back("--out");
  args.push_back(dir.string());
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("slat-cli-test-" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("sha256 known vector") {
    CHECK(report::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(report::sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  }

  TEST_CASE("exit codes") {
    const fs::path d = scratch("codes");
    CHECK(run({"validate", cfg("free_line")}, d).code == 0);
    CHECK(run({"validate", cfg("bad_target")}, d).code == 1);
    CHECK(run({"hvz", cfg("bad_meet")}, d).code == 1);
    CHECK(run({"validate", cfg("does_not_exist")}, d).code == 2);
    CHECK(run({"frobnicate", cfg("free_line")}, d).code == 2);
    CHECK(run({"validate"}, d).code == 2);
    CHECK(run({"algebra-verify", cfg("free_line")}, d).code == 1);

    const fs::path bad = d / "broken.json";
    fs::create_directories(d);
    std::ofstream(bad) << "{\"kind\": ";
    const Result r = run({"validate", bad.string()}, d);
    CHECK(r.code == 2);
    const json e = json::parse(r.err);
    CHECK(e["schema_version"] == kSchemaVersion);
    CHECK(e["error"]["type"] == "input_error");
  }

  TEST_CASE("diagnostics carry paths") {
    const fs::path d = scratch("diag");
    const Result r = run({"validate", cfg("bad_meet")}, d);
    CHECK(r.code == 1);
    const json j = json::parse(r.out);
    CHECK_FALSE(j["valid"].get<bool>());
    REQUIRE(!j["diagnostics"].empty());
    CHECK(j["diagnostics"][0]["path"].get<std::string>().rfind("/semilattice", 0) == 0);
  }

  TEST_CASE("manifest hashes the config bytes") {
    const fs::path d = scratch("manifest");
    REQUIRE(run({"hvz", cfg("free_line")}, d).code == 0);
    const json m = json::parse(slurp(d / "manifest.json"));
    CHECK(m["config"]["sha256"] == report::sha256_hex(slurp(cfg("free_line"))));
    CHECK(m["command"] == "hvz");
    CHECK(fs::exists(d / "hvz.json"));
  }

  TEST_CASE("reports are deterministic") {
    const fs::path a = scratch("det-a"), b = scratch("det-b");
    REQUIRE(run({"thresholds", cfg("free_line"), "--eps", "1e-3"}, a).code == 0);
    REQUIRE(run({"thresholds", cfg("free_line"), "--eps", "1e-3"}, b).code == 0);
    for (const char* f : {"thresholds.json", "rho_hat.csv", "rho_hat.dat"}) CHECK(slurp(a / f) == slurp(b / f));
  }

  TEST_CASE("algebra-verify reports a corrupted identity") {
    const fs::path d = scratch("corrupt");
    CHECK(run({"algebra-verify", cfg("z4_chain")}, d).code == 0);
    const Result r = run({"algebra-verify", cfg("z4_corrupt")}, d);
    CHECK(r.code == 1);
    const json j = json::parse(r.out);
    CHECK_FALSE(j["passed"].get<bool>());
    CHECK(slurp(d / "checks.csv").find("hyz") != std::string::npos);
  }
}
