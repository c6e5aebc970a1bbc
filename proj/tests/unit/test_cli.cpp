#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "pmds/io.hpp"
#include "pmds_cli/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int rc;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int rc = pmds::cli::run_cli(args, out, err);
  return {rc, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "pmds_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("construct and verify round trip") {
  const auto set = scratch("s2.json"), mat = scratch("s2_matrix.json");
  const auto r = run({"construct", "s2", "--m", "4", "--q", "19", "--preset", "paper", "--policy", "paper", "--out",
                      set.string(), "--matrix", mat.string()});
  CHECK(r.rc == 0);
  CHECK(nlohmann::json::parse(r.out).at("admissibility").at("verdict") == "ok");
  CHECK(run({"verify", "admissible", "--in", set.string()}).rc == 0);
  CHECK(run({"verify", "pmds", "--in", mat.string()}).rc == 0);
  CHECK(run({"verify", "pmds", "--in", set.string(), "--jobs", "3"}).rc == 0);
  const auto text = scratch("s2.txt");
  CHECK(run({"export", "--in", set.string(), "--format", "text", "--out", text.string()}).rc == 0);
  CHECK(run({"verify", "pmds", "--text", text.string(), "--q", "19", "--blocks", "5,5,5,5", "--localities",
             "2,2,2,2", "--s", "2"})
            .rc == 0);
  // Re-emitted JSON parses back to the same set.
  const auto again = scratch("s2_again.json");
  run({"construct", "s2", "--m", "4", "--q", "19", "--preset", "paper", "--policy", "paper", "--no-verify", "--out",
       again.string()});
  CHECK(slurp(again) == slurp(set));
}

TEST_CASE("verification failures exit with 2") {
  const auto r = run({"verify", "pmds", "--in", PMDS_TEST_DATA "/golden_f19_matrix.json"});
  CHECK(r.rc == 2);
  CHECK(nlohmann::json::parse(r.out).at("verdict") == "uncorrectable");

  // Duplicated column inside a block.
  const auto dup = scratch("dup.json");
  {
    std::ofstream f(dup);
    f << R"({"field":{"p":7,"e":1,"modulus":[0,1]},"rows":2,"cols":4,
             "entries":[[1,1,0,1],[0,0,1,2]],"blocks":[2,2],"localities":[2,2],"s":2})";
  }
  const auto d = run({"verify", "pmds", "--in", dup.string()});
  CHECK(d.rc == 2);
  CHECK(nlohmann::json::parse(d.out).at("verdict") == "local_not_mds");
}

TEST_CASE("errors exit with 1") {
  CHECK(run({"construct", "s1", "--localities", "2,2", "--q", "3"}).rc == 1);
  const auto r = run({"construct", "s1", "--localities", "2,2", "--q", "3"});
  CHECK(r.err.find("FieldTooSmall") != std::string::npos);
  const auto u = run({"circuits", "--m", "4", "--s", "3", "--q", "7", "--bogus"});
  CHECK(u.rc == 1);
  CHECK(u.err.find("--help") != std::string::npos);
  CHECK(run({}).rc == 1);
  CHECK(run({"trials", "--m", "3", "--s", "2", "--q", "31"}).rc == 1);
  CHECK(run({"verify", "admissible", "--in", "/nonexistent/file.json"}).rc == 1);
  const auto set = scratch("s1.json");
  run({"construct", "s1", "--localities", "2,2,2", "--q", "13", "--no-verify", "--out", set.string()});
  const auto big = run({"verify", "admissible", "--in", set.string(), "--budget", "10"});
  CHECK(big.rc == 1);
  CHECK(big.err.find("InstanceTooLarge") != std::string::npos);
  setenv("PMDS_BUDGET", "10", 1);
  CHECK(run({"verify", "admissible", "--in", set.string()}).rc == 1);
  CHECK(run({"verify", "admissible", "--in", set.string(), "--budget", "100000000"}).rc == 0);  // the flag wins
  unsetenv("PMDS_BUDGET");
  CHECK(run({"construct", "s1", "--localities", "2,2,2", "--q", "13", "--keep", "4"}).rc == 0);
}

TEST_CASE("circuits and trials") {
  const auto r = run({"circuits", "--m", "4", "--s", "3", "--q", "7"});
  REQUIRE(r.rc == 0);
  const auto j = nlohmann::json::parse(r.out);
  REQUIRE(j.at("circuits").size() == 2);
  CHECK(j.at("circuits").at(0).at("u") == 3);
  CHECK(j.at("circuits").at(0).at("count") <= 4);
  CHECK(j.at("count_bound").at("3") == 4);
  const auto u4 = run({"circuits", "--m", "4", "--s", "3", "--q", "7", "--u", "4"});
  CHECK(nlohmann::json::parse(u4.out).at("circuits").at(0).at("circuits").size() == 53);
  const auto text = run({"circuits", "--m", "4", "--s", "3", "--q", "7", "--u", "4", "--format", "text"});
  CHECK(text.rc == 0);
  CHECK(std::count(text.out.begin(), text.out.end(), '\n') == 53);
  CHECK(text.out.rfind("u=4 ids ", 0) == 0);

  const std::vector<std::string> args{"trials", "--mode", "alteration", "--m", "3", "--s", "2",
                                      "--q", "31", "--trials", "40", "--seed", "5", "--verify", "5"};
  const auto a = run(args), b = run(args);
  CHECK(a.rc == 0);
  CHECK(a.out == b.out);
  auto jobs = args;
  jobs.insert(jobs.end(), {"--jobs", "3"});
  CHECK(run(jobs).out == a.out);
  const auto pure = run({"trials", "--mode", "pure", "--m", "3", "--s", "2", "--q", "163", "--eps", "0.5",
                         "--trials", "5", "--seed", "1", "--no-records"});
  CHECK(pure.rc == 0);
  CHECK_FALSE(nlohmann::json::parse(pure.out).contains("records"));
}

TEST_CASE("greedy subcommand") {
  const auto r = run({"construct", "greedy", "--localities", "2,2,2", "--s", "2", "--q", "16", "--target", "4",
                      "--verify-steps", "--format", "text"});
  CHECK(r.rc == 0);
}
