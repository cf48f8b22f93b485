#include "fixtures.hpp"

#include "omin/cli.hpp"
#include "omin/routing.hpp"

#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace {

struct Result {
  int status;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int status = omin::cli::run(args, out, err);
  return {status, out.str(), err.str()};
}

std::string temp_file(const std::string &name, const std::string &text) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << text;
  return path.string();
}

} // namespace

TEST_CASE("cli schedule exact on the worked example") {
  const auto perm = temp_file("omin_worked.perm", fixtures::kWorkedExampleText);
  const auto r = run({"schedule", "--size", "8", "--perm", perm, "--budget", "0",
                      "--algorithm", "exact"});
  REQUIRE(r.status == 0);
  CHECK(r.out.find("pass count: 3\n") != std::string::npos);
  const auto json_text = r.out.substr(0, r.out.find("pass count"));
  const auto j = nlohmann::ordered_json::parse(json_text);
  CHECK(j["passes"].size() == 3);
  CHECK(j["topology"] == "omega");

  const auto unl = run({"schedule", "--size", "8", "--perm", perm, "--budget",
                        "unlimited", "--algorithm", "greedy"});
  CHECK(unl.out.find("pass count: 1\n") != std::string::npos);
}

TEST_CASE("cli schedule writes JSON to --output") {
  const auto perm = temp_file("omin_worked2.perm", fixtures::kWorkedExampleText);
  const auto out_path =
      (std::filesystem::temp_directory_path() / "omin_sched.json").string();
  const auto r = run({"schedule", "--size", "8", "--perm", perm, "--budget", "1",
                      "--output", out_path});
  REQUIRE(r.status == 0);
  CHECK(r.out == "pass count: 2\n");
  std::ifstream in(out_path);
  const auto j = nlohmann::ordered_json::parse(in);
  CHECK(j["passes"].dump() == "[[0,1,2,3],[4,5,6,7]]");
}

TEST_CASE("cli analytic bandwidth row") {
  const auto r = run({"bandwidth", "--sizes", "4", "--mode", "analytic", "--load", "1.0"});
  REQUIRE(r.status == 0);
  CHECK(r.out == "size,mode,bw,stderr\n4,analytic,2.4375,0\n");

  const auto many = run({"bandwidth", "--sizes", "4,8,16,32,64", "--mode", "analytic"});
  CHECK(many.out == "size,mode,bw,stderr\n"
                    "4,analytic,2.4375,0\n"
                    "8,analytic,4.13232,0\n"
                    "16,analytic,7.19739,0\n"
                    "32,analytic,12.776,0\n"
                    "64,analytic,23.0015,0\n");
}

TEST_CASE("cli simulated bandwidth") {
  const auto r = run({"bandwidth", "--sizes", "8,16", "--mode", "simulate",
                      "--crosstalk", "allow,budget=1,free", "--trials", "500",
                      "--seed", "9"});
  REQUIRE(r.status == 0);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "size,mode,bw,stderr");
  int rows = 0;
  while (std::getline(lines, line))
    ++rows;
  CHECK(rows == 6);
  CHECK(r.out.find("\n8,budget=1,") != std::string::npos);

  const auto j = run({"bandwidth", "--sizes", "8", "--mode", "simulate",
                      "--crosstalk", "allow", "--trials", "100", "--format", "json"});
  REQUIRE(j.status == 0);
  const auto parsed = nlohmann::ordered_json::parse(j.out);
  std::vector<std::string> keys;
  for (auto it = parsed[0].begin(); it != parsed[0].end(); ++it)
    keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"size", "topology", "load", "mode", "trials",
                                         "seed", "mean_bw", "stderr", "passability"});
}

TEST_CASE("cli simulate report") {
  const auto r = run({"simulate", "--size", "8", "--random-perms", "200", "--seed",
                      "4", "--budget", "1"});
  REQUIRE(r.status == 0);
  const auto j = nlohmann::ordered_json::parse(r.out);
  REQUIRE(j["results"].size() == 3);
  CHECK(j["results"][0]["mode"] == "allow");
  CHECK(j["results"][1]["mode"] == "budget=1");
  CHECK(j["results"][2]["mode"] == "free");
  std::uint64_t total = 0;
  for (const auto &h : j["schedule"]["pass_histogram"])
    total += h["count"].get<std::uint64_t>();
  CHECK(total == 200);
}

TEST_CASE("cli route and conflicts") {
  const auto perm = temp_file("omin_worked3.perm", fixtures::kWorkedExampleText);
  const auto route = run({"route", "--size", "8", "--perm", perm});
  REQUIRE(route.status == 0);
  CHECK(route.out.rfind("message,source,destination,stage,switch,in_port,out_port\n"
                        "0,0,7,1,0,0,1\n0,0,7,2,1,0,1\n0,0,7,3,3,0,1\n",
                        0) == 0);

  const auto conflicts = run({"conflicts", "--size", "8", "--perm", perm});
  REQUIRE(conflicts.status == 0);
  std::istringstream lines(conflicts.out);
  std::string line;
  int rows = -1;
  while (std::getline(lines, line))
    ++rows;
  CHECK(rows == 12);

  const auto baseline =
      run({"route", "--size", "8", "--topology", "baseline", "--random", "3"});
  CHECK(baseline.status == 0);
}

TEST_CASE("cli generate round-trips") {
  const auto r = run({"generate", "--size", "16", "--seed", "5"});
  REQUIRE(r.status == 0);
  const auto net = omin::build_network(16, omin::Topology::Omega);
  const auto perm = omin::parse_permutation(r.out, net);
  CHECK_FALSE(perm.partial());
  CHECK(omin::format_permutation(perm) == r.out);
  CHECK(run({"generate", "--size", "16", "--seed", "5"}).out == r.out);
}

TEST_CASE("cli input errors exit with 2") {
  const auto missing = run({"schedule", "--size", "8", "--perm", "missing.perm",
                            "--budget", "0", "--algorithm", "exact"});
  CHECK(missing.status == 2);
  CHECK(missing.err.find("--perm") != std::string::npos);
  CHECK(std::count(missing.err.begin(), missing.err.end(), '\n') == 1);

  CHECK(run({"bandwidth", "--sizes", "6", "--mode", "analytic"}).status == 2);
  CHECK(run({"route", "--size", "8", "--topology", "mesh", "--random", "1"}).status == 2);
  CHECK(run({"route", "--size", "8"}).status == 2);
  CHECK(run({"bogus"}).status == 2);
  CHECK(run({"bandwidth", "--load", "abc"}).status == 2);

  const auto bad = temp_file("omin_bad.perm", "0 1\n1 oops\n");
  const auto parse = run({"conflicts", "--size", "8", "--perm", bad});
  CHECK(parse.status == 2);
  CHECK(parse.err.find("line 2") != std::string::npos);

  const auto big = run({"schedule", "--size", "32", "--random", "1", "--algorithm",
                        "exact"});
  CHECK(big.status == 2);
  CHECK(big.err.find("TooLarge") != std::string::npos);
}
