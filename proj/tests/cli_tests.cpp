#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

#ifndef LOGANOM_CLI_PATH
#error "LOGANOM_CLI_PATH must name the CLI binary"
#endif

const std::string kCli = LOGANOM_CLI_PATH;

int run(const std::string& args) {
  const std::string cmd = kCli + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("loganom_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("generate then detect then report runs end to end") {
  const fs::path gen = fresh_dir("gen");
  const fs::path det = fresh_dir("det");
  const fs::path rep = fresh_dir("rep");

  REQUIRE(run("generate -n 400 --outliers 0.02 --seed 42 -o " +
              gen.string()) == 0);
  CHECK(fs::exists(gen / "records.ndjson"));
  CHECK(fs::exists(gen / "truth.csv"));

  REQUIRE(run("detect -i " + (gen / "records.ndjson").string() + " --seed 42 -o " +
              det.string()) == 0);
  CHECK(fs::exists(det / "report.json"));
  CHECK(fs::exists(det / "flags.csv"));
  CHECK(fs::exists(det / "embedding.csv"));

  const auto report = nlohmann::json::parse(slurp(det / "report.json"));
  CHECK(report.at("schema_version").get<int>() == 1);
  CHECK(report.at("verdicts").size() == 4);
  CHECK(report.at("consensus_flags").size() == 400);

  REQUIRE(run("report --report " + (det / "report.json").string() + " --truth " +
              (gen / "truth.csv").string() + " -o " + rep.string()) == 0);
}

TEST_CASE("detect output is byte-identical across runs") {
  const fs::path gen = fresh_dir("det_gen");
  REQUIRE(run("generate -n 300 --outliers 0.03 --seed 7 -o " + gen.string()) == 0);

  const fs::path a = fresh_dir("det_a");
  const fs::path b = fresh_dir("det_b");
  const std::string base =
      "detect -i " + (gen / "records.ndjson").string() + " --seed 9 -o ";
  REQUIRE(run(base + a.string()) == 0);
  REQUIRE(run(base + b.string()) == 0);
  for (const char* name : {"report.json", "flags.csv", "embedding.csv"})
    CHECK(slurp(a / name) == slurp(b / name));
}

TEST_CASE("config file fills in what flags leave unset") {
  const fs::path gen = fresh_dir("cfg_gen");
  REQUIRE(run("generate -n 200 --outliers 0.02 --seed 3 -o " + gen.string()) == 0);

  const fs::path dir = fresh_dir("cfg");
  const fs::path cfg_path = dir / "detect.json";
  {
    std::ofstream out(cfg_path);
    out << R"({"detectors": ["knn"], "vote": "union", "seed": 11})";
  }
  const fs::path out_dir = fresh_dir("cfg_out");
  REQUIRE(run("detect -i " + (gen / "records.ndjson").string() + " --config " +
              cfg_path.string() + " -o " + out_dir.string()) == 0);
  const auto report = nlohmann::json::parse(slurp(out_dir / "report.json"));
  CHECK(report.at("verdicts").size() == 1);
  CHECK(report.at("verdicts")[0].at("config").at("kind").get<std::string>() ==
        "knn");
  CHECK(report.at("config").at("seed").get<std::uint64_t>() == 11);
}

TEST_CASE("usage errors exit 2") {
  CHECK(run("") == 2);
  CHECK(run("frobnicate") == 2);
  CHECK(run("generate -n 50 --outliers 0.9 -o /tmp/loganom_cli_bad") == 2);
  CHECK(run("detect -i /dev/null --dims 7 -o /tmp/loganom_cli_bad") == 2);
}

TEST_CASE("missing input exits 3") {
  CHECK(run("detect -i /nonexistent/no.ndjson -o /tmp/loganom_cli_io") == 3);
  CHECK(run("report --report /nonexistent/report.json") == 3);
}

TEST_CASE("pipeline failures exit 4") {
  // Too few rows to standardize: strict-mode parse succeeds, pipeline cannot.
  const fs::path dir = fresh_dir("pipe");
  const fs::path ndjson = dir / "one.ndjson";
  {
    std::ofstream out(ndjson);
    out << R"({"event_timestamp":"2017-09-27T04:45:27+0200","client_user":"a"})"
        << "\n";
  }
  CHECK(run("detect -i " + ndjson.string() + " -o " + dir.string()) == 4);
}
