#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <nlohmann/json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "cospec/report.hpp"

using namespace cospec;

namespace {

std::string spec_path(const std::string& name) { return std::string(SPEC_DIR) + "/" + name; }

int run_cli(const std::string& args, const std::string& out_path) {
  std::string cmd = std::string(CLI_BIN) + " " + args + " --out " + out_path + " 2>/dev/null";
  int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  return Json::parse(in);
}

}  // namespace

TEST_CASE("spec file loading keeps rational entries exact") {
  SpecFile file = load_spec_file(spec_path("simple2.json"));
  REQUIRE(file.spec.exact());
  CHECK(file.spec.rational_matrices()[0](0, 0) == 2);
  CHECK(file.spec.rational_matrices()[1](1, 1) == 2);
  REQUIRE(file.periodic_word.has_value());
  CHECK(*file.periodic_word == std::vector<int>{0});
  CHECK(file.homoclinic_l == 1);
}

TEST_CASE("spec parsing rejects unknown schemas") {
  Json j;
  j["schema"] = "something-else/9";
  j["matrices"] = Json::array();
  CHECK_THROWS(parse_spec_json(j));
}

TEST_CASE("float entries flip the spec out of exact mode") {
  Json j;
  j["schema"] = kSpecSchema;
  j["matrices"] = Json::array({Json::array({Json::array({1.5, 0.0}), Json::array({0.0, 1.0})})});
  j["measure"] = Json{{"bernoulli", {1.0}}};
  SpecFile file = parse_spec_json(j);
  CHECK_FALSE(file.spec.exact());
  CHECK(file.spec.dim() == 2);
}

TEST_CASE("verdict serialization carries both certificates") {
  SpecFile file = load_spec_file(spec_path("simple2.json"));
  SimplicityVerdict v =
      check_simple(file.spec, *file.periodic_word, *file.homoclinic_insert, file.homoclinic_l);
  Json j = to_json(v);
  CHECK(j["simple"] == true);
  CHECK(j["pinching"]["ok"] == true);
  CHECK(j["twisting"]["ok"] == true);
  CHECK(j["twisting"]["witness"].is_null());
}

TEST_CASE("induced system export schema") {
  MarkovMeasure mu = MarkovMeasure::bernoulli({0.5, 0.5});
  InducedSystem ind = build_induced(mu, Word{{0}}, 4);
  Json j = to_json(ind);
  CHECK(j["base"] == Json::array({0}));
  CHECK(j["return_words"].size() == 4);
  CHECK(j["return_words"][0]["r"] == 1);
  CHECK(j["captured_mass"].get<double>() > 0.9);
}

TEST_CASE("cli exit codes distinguish verdicts from errors") {
  CHECK(run_cli("simplicity --spec " + spec_path("simple2.json"), "/tmp/cospec_t1.json") == 0);
  CHECK(run_cli("simplicity --spec " + spec_path("identity2.json"), "/tmp/cospec_t2.json") == 1);
  CHECK(run_cli("simplicity --spec " + spec_path("tie2.json"), "/tmp/cospec_t3.json") == 1);
  CHECK(run_cli("simplicity --spec /nonexistent.json", "/tmp/cospec_t4.json") == 2);
  Json tie = read_json("/tmp/cospec_t3.json");
  CHECK(tie["results"]["pinching"]["ok"] == false);
}

TEST_CASE("cli reports echo the full effective config") {
  REQUIRE(run_cli("vandermonde --m 0,1,3 --x 1,2,3 --seed 9", "/tmp/cospec_t5.json") == 0);
  Json j = read_json("/tmp/cospec_t5.json");
  CHECK(j["schema"] == kReportSchema);
  CHECK(j["config"]["seed"] == 9);
  CHECK(j["config"].contains("iters"));
  CHECK(j["config"].contains("tol"));
  CHECK(j["config"].contains("threads"));
  CHECK(j["results"]["det"] == "12");
  CHECK(j["results"]["schur_part"] == "6");
}

TEST_CASE("rotation control run exits zero with a negative conclusion") {
  REQUIRE(run_cli("dirac --spec " + spec_path("rotation2.json") + " --steps 80 --atoms 30",
                  "/tmp/cospec_t6.json") == 0);
  Json j = read_json("/tmp/cospec_t6.json");
  CHECK(j["results"]["dirac"]["converged"] == false);
}

TEST_CASE("holonomy command on a locally constant spec returns the identity") {
  REQUIRE(run_cli("holonomy --spec " + spec_path("simple2.json"), "/tmp/cospec_t7.json") == 0);
  Json j = read_json("/tmp/cospec_t7.json");
  CHECK(j["results"]["stable"]["residual"] == 0.0);
  CHECK(j["results"]["stable"]["iterations_used"] == 0);
}

TEST_CASE("reruns with one config are byte-identical up to wall time") {
  std::string args = "zorich --d 2 --iters 3000 --seed 31";
  REQUIRE(run_cli(args, "/tmp/cospec_r1.json") == 0);
  REQUIRE(run_cli(args, "/tmp/cospec_r2.json") == 0);
  Json a = read_json("/tmp/cospec_r1.json");
  Json b = read_json("/tmp/cospec_r2.json");
  a.erase("wall_time_ms");
  b.erase("wall_time_ms");
  CHECK(a.dump() == b.dump());
}

TEST_CASE("threads do not change the report") {
  std::string base = "zorich --d 3 --iters 2000 --seed 17 --streams 3";
  REQUIRE(run_cli(base + " --threads 1", "/tmp/cospec_p1.json") == 0);
  REQUIRE(run_cli(base + " --threads 2", "/tmp/cospec_p2.json") == 0);
  Json a = read_json("/tmp/cospec_p1.json");
  Json b = read_json("/tmp/cospec_p2.json");
  a.erase("wall_time_ms");
  b.erase("wall_time_ms");
  a["config"].erase("threads");
  b["config"].erase("threads");
  CHECK(a.dump() == b.dump());
}
