#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "dgmm/cli.hpp"
#include <json.hpp>

using namespace dgmm;
using json = nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

// A scratch file removed at scope exit.
struct TempFile {
  std::filesystem::path path;
  explicit TempFile(const std::string& name, const std::string& text)
      : path(std::filesystem::temp_directory_path() / ("dgmm_test_" + name)) {
    std::ofstream(path) << text;
  }
  ~TempFile() { std::filesystem::remove(path); }
  std::string str() const { return path.string(); }
};

}  // namespace

TEST_CASE("exit codes", "[cli]") {
  CHECK(run({"circle", "--fixture", "s4_hopf"}).code == 0);
  CHECK(run({"verify", "--fixture", "cp2"}).code == 0);
  // Too small a window to see H^4 of the total space.
  CHECK(run({"circle", "--fixture", "flow_s4", "--max-degree", "6"}).code == 3);
  CHECK(run({"circle", "--fixture", "flow_s4", "--max-degree", "12"}).code == 0);
  Run r = run({"circle", "--fixture", "s4_hopf", "--max-degree", "2"});
  CHECK(r.code == 1);
  CHECK_FALSE(r.err.empty());
  CHECK(run({"circle", "--fixture", "nope"}).code == 1);
  CHECK(run({"frobnicate"}).code == 1);
  CHECK(run({"circle", "--fixture", "s4_cohomology"}).code == 1);
  CHECK(run({"minmodel"}).code == 1);
}

TEST_CASE("precondition failures exit with 2", "[cli]") {
  Run ex = run({"export", "--fixture", "s4_hopf", "--max-degree", "6"});
  REQUIRE(ex.code == 0);
  json doc = json::parse(ex.out);
  doc["action"]["fixed_set_empty"] = true;
  TempFile f("empty_fixed.json", doc.dump());
  Run r = run({"circle", "--input", f.str()});
  CHECK(r.code == 2);
  CHECK(r.err.find("precondition") != std::string::npos);
}

TEST_CASE("unparsable input is a validation error", "[cli]") {
  TempFile f("broken.json", "{\"algebra\": ");
  Run r = run({"verify", "--input", f.str()});
  CHECK(r.code == 1);
  CHECK(r.err.find("parse error") != std::string::npos);
  CHECK(run({"verify", "--input", "/nonexistent/dgmm.json"}).code == 1);
}

TEST_CASE("an empty document verifies", "[cli]") {
  Run r = run({"verify"});
  CHECK(r.code == 0);
  CHECK(r.out.find("status: pass") != std::string::npos);
  TempFile f("empty.json", "{}");
  CHECK(run({"verify", "--input", f.str(), "--format", "machine"}).code == 0);
}

TEST_CASE("a broken module is reported with a witness", "[cli]") {
  // x, a x, y over Lambda(a) with d(a x) = y: Leibniz wants d(a x) = -a dx = 0.
  json doc = json::parse(R"({
    "algebra": {"generators": [{"name": "a", "degree": 3, "d": "0"}]},
    "modules": {"X": {"kind": "tabulated", "cap": 6,
      "basis": [["x"], [], [], ["ax"], ["y"], [], []],
      "d": [[], [], [[]], [["0"]], [], []],
      "action": {"a": [[["1"]], [[]], [], []]}}}
  })");
  TempFile good("good.json", doc.dump());
  REQUIRE(run({"verify", "--input", good.str()}).code == 0);

  doc["modules"]["X"]["d"][3][0][0] = "1";
  TempFile bad("bad.json", doc.dump());
  Run r = run({"verify", "--input", bad.str(), "--format", "machine"});
  CHECK(r.code == 1);
  json j = json::parse(r.out);
  CHECK(j["status"] == "fail");
  bool named = false;
  for (const auto& c : j["checks"])
    if (c["object"] == "module X") {
      CHECK(c["ok"] == false);
      named = c["violations"].dump().find("Leibniz") != std::string::npos;
    }
  CHECK(named);
  CHECK(run({"minmodel", "--input", bad.str()}).code == 1);
  CHECK(run({"minmodel", "--input", good.str()}).code == 0);
}

TEST_CASE("export round trips byte for byte", "[cli]") {
  for (std::string fixture : {"s4_hopf", "cp2", "s4_cohomology", "s4_tabulated", "almost_free_hopf"}) {
    Run first = run({"export", "--fixture", fixture, "--max-degree", "8"});
    REQUIRE(first.code == 0);
    TempFile f(fixture + ".json", first.out);
    Run again = run({"export", "--input", f.str()});
    INFO(fixture);
    REQUIRE(again.code == 0);
    CHECK(again.out == first.out);
  }
  Run models = run({"export", "--fixture", "s4_hopf", "--what", "models", "--max-degree", "6"});
  REQUIRE(models.code == 0);
  TempFile f("models.json", models.out);
  CHECK(run({"export", "--input", f.str(), "--max-degree", "6"}).out == models.out);
  CHECK(run({"verify", "--input", f.str(), "--max-degree", "6"}).code == 0);
}

TEST_CASE("exported minimal model reproduces the run", "[cli]") {
  Run ex = run({"export", "--fixture", "s4_cohomology", "--what", "minmodel", "--max-degree", "8"});
  REQUIRE(ex.code == 0);
  json doc = json::parse(ex.out);
  CHECK(doc["modules"].contains("model"));
  TempFile f("mm.json", ex.out);
  CHECK(run({"verify", "--input", f.str(), "--max-degree", "8"}).code == 0);
}

TEST_CASE("machine output is deterministic", "[cli]") {
  for (std::string fixture : {"s4_hopf", "flow_s4", "semifree_s3"}) {
    Run a = run({"circle", "--fixture", fixture, "--format", "machine"});
    Run b = run({"circle", "--fixture", fixture, "--format", "machine"});
    REQUIRE(a.code == b.code);
    CHECK(a.out == b.out);
    CHECK(json::accept(a.out));
  }
  Run m = run({"minmodel", "--fixture", "s4_cohomology", "--format", "machine", "--max-degree", "8"});
  REQUIRE(m.code == 0);
  json j = json::parse(m.out);
  CHECK(j.dump() == json::parse(run({"minmodel", "--fixture", "s4_cohomology", "--format", "machine", "--max-degree", "8"}).out).dump());
}

TEST_CASE("circle machine report", "[cli]") {
  Run r = run({"circle", "--fixture", "s4_hopf", "--format", "machine"});
  REQUIRE(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["status"] == "pass");
  const json& gens = j["total_space"]["generators"];
  REQUIRE(gens.size() >= 2);
  CHECK(gens[1]["name"] == "c0");
  CHECK(gens[1]["degree"] == 2);
  CHECK(gens[1]["d"] == "a");
  CHECK(j["extension_of_scalars"]["ok"] == true);
}

TEST_CASE("seeded runs give the same verdicts", "[cli]") {
  Run plain = run({"circle", "--fixture", "s4_tabulated", "--max-degree", "10"});
  Run seeded = run({"circle", "--fixture", "s4_tabulated", "--max-degree", "10", "--seed", "7"});
  CHECK(plain.code == 0);
  CHECK(seeded.code == 0);
}
