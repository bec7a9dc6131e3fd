#include "doctest.h"

#include <fstream>

#include "cli_run.hpp"
#include "json.hpp"

using namespace equislice::testgen;
using Json = nlohmann::ordered_json;

TEST_CASE("exit codes distinguish success, verified failure and input errors") {
  CHECK(run_cli({"hypertoric", "leaves", "[[1],[1]]"}).code == 0);
  CHECK(run_cli({"poisson", "jacobi", "@sl2"}).code == 0);
  CHECK(run_cli({"poisson", "jacobi", "@cyclic"}).code == 1);
  CHECK(run_cli({"darboux", "normalize", "@counterex1"}).code == 0);

  CliResult bad = run_cli({"poisson", "jacobi", "{\"bad"});
  CHECK(bad.code == 2);
  CHECK(bad.out.empty());
  CHECK(bad.err.find("byte") != std::string::npos);

  CliResult var = run_cli({"poisson", "jacobi", R"({"variables":["x"],"brackets":[["x","q","1"]]})"});
  CHECK(var.code == 2);
  CHECK(var.err.find("/brackets/0/1") != std::string::npos);

  CHECK(run_cli({"poisson", "jacobi", "/nonexistent/input.json"}).err.find("cannot open file") != std::string::npos);
  CHECK(run_cli({"poisson", "jacobi", "@nosuchfixture"}).code == 2);
  CHECK(run_cli({"poisson", "jacobi"}).code == 2);
  CHECK(run_cli({"poisson", "frobnicate", "@sl2"}).code == 2);
  CHECK(run_cli({"--order", "0", "poisson", "jacobi", "@sl2"}).code == 2);
}

TEST_CASE("every report is a JSON object with command and status") {
  for (auto& args : every_command()) {
    CAPTURE(args[0]);
    CliResult r = run_cli(args);
    REQUIRE(r.code <= 1);
    Json j = Json::parse(r.out);
    CHECK(j.contains("command"));
    CHECK(j["status"] == (r.code == 0 ? "pass" : "fail"));
    CHECK(j.contains("report"));
  }
}

TEST_CASE("pretty output renders the same report") {
  CliResult json = run_cli({"poisson", "degree", "@sl2"});
  CliResult pretty = run_cli({"--pretty", "poisson", "degree", "@sl2"});
  CHECK(json.code == pretty.code);
  CHECK(pretty.out.find("degree: -1") != std::string::npos);
  CHECK(run_cli({"--json", "--pretty", "poisson", "degree", "@sl2"}).code == 2);
}

TEST_CASE("output file matches stdout") {
  const std::string path = "cli_contract_report.json";
  CliResult a = run_cli({"-o", path, "hypertoric", "leaves", "@hyper-4x2"});
  CliResult b = run_cli({"hypertoric", "leaves", "@hyper-4x2"});
  std::ifstream in(path);
  std::string file((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(a.code == 0);
  CHECK(file == b.out);
  std::remove(path.c_str());
}

TEST_CASE("the rewrite budget is enforced and validated") {
  CliResult small = run_cli({"quantize", "central", "@sl2q"}, "EQUISLICE_MAX_STEPS=1");
  CHECK(small.code == 1);
  CHECK(small.out.find("budget") != std::string::npos);
  CHECK(run_cli({"quantize", "central", "@sl2q"}, "EQUISLICE_MAX_STEPS=abc").code == 2);
  CHECK(run_cli({"quantize", "central", "@sl2q"}, "EQUISLICE_MAX_STEPS=100000000").code == 0);
}

TEST_CASE("selftest matrix is stable across orders and detects corruption") {
  CliResult six = run_cli({"--pretty", "selftest"});
  CliResult eight = run_cli({"--pretty", "--order", "8", "selftest"});
  CHECK(six.code == 0);
  CHECK(six.out == eight.out);
  CHECK(run_cli({"selftest", "--corrupt", "sl2"}).code == 1);
}

TEST_CASE("seeded scrambles are reproducible") {
  std::vector<std::string> args{"darboux", "normalize", "@standard:2,2", "--scramble", "2", "--seed", "9", "--order", "5"};
  CHECK(run_cli(args).out == run_cli(args).out);
}

TEST_CASE("shipped fixture files load and give the documented verdicts") {
  const std::string dir = EQUISLICE_FIXTURES;
  struct Run {
    std::vector<std::string> args;
    int code;
  };
  std::vector<Run> runs{
      {{"poisson", "jacobi", dir + "/sl2.json"}, 0},
      {{"poisson", "jacobi", dir + "/cyclic.json"}, 1},
      {{"poisson", "hp0", dir + "/kleinian2.json"}, 0},
      {{"poisson", "center", dir + "/counterex1.json", "--weight-min", "1", "--weight-max", "1"}, 0},
      {{"--order", "5", "darboux", "normalize", dir + "/standard_x_kleinian3.json"}, 0},
      {{"hypertoric", "verify", dir + "/hyper_4x2.json"}, 0},
      {{"quotient", "parabolics", dir + "/z4.json"}, 0},
      {{"quotient", "slice", dir + "/klein4.json"}, 0},
      {{"quantize", "slice", dir + "/d12_weyl22.json"}, 0},
      {{"quantize", "slice", dir + "/sl2_localized.json"}, 0},
  };
  for (auto& r : runs) {
    CAPTURE(r.args[2]);
    CHECK(run_cli(r.args).code == r.code);
  }
  Json center = Json::parse(run_cli(runs[3].args).out);
  CHECK(center["report"]["blocks"][0]["basis"][0] ==
        "t - t*z + 1/2*t*z^2 - 1/6*t*z^3 + 1/24*t*z^4 - 1/120*t*z^5");
  Json par = Json::parse(run_cli(runs[6].args).out);
  CHECK(par["report"]["count"] == 2);
}
