#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "szego/core.hpp"
#include "szego/lab.hpp"

using namespace szego;
using namespace szego::lab;

namespace {

RunConfig config(const std::string& command) {
  RunConfig c;
  c.command = command;
  return c;
}

}  // namespace

TEST_CASE("k list parsing") {
  CHECK(parse_k_list("10,20,30") == std::vector<long>{10, 20, 30});
  CHECK(parse_k_list("10:30:10") == std::vector<long>{10, 20, 30});
  CHECK(parse_k_list("3:5") == std::vector<long>{3, 4, 5});
  CHECK(parse_int_list("1,-1,0") == std::vector<int>{1, -1, 0});
  CHECK_THROWS_AS(parse_k_list(""), ConfigError);
  CHECK_THROWS_AS(parse_k_list("10:5:1"), ConfigError);
  CHECK_THROWS_AS(parse_k_list("1:5:0"), ConfigError);
  CHECK_THROWS_AS(parse_k_list("1,x"), ConfigError);
  CHECK_THROWS_AS(parse_k_list("-2,3"), ConfigError);
}

TEST_CASE("command table") {
  const auto& names = commands();
  CHECK(names.size() == 14);
  CHECK(std::find(names.begin(), names.end(), "suite") != names.end());
  CHECK_THROWS_AS(run(config("bogus")), ConfigError);
}

TEST_CASE("report structure") {
  auto c = config("dims");
  c.weights = "1,2";
  c.k_max = 10;
  const auto rep = run(c);
  const auto j = rep.to_json();
  CHECK(j["schema_version"] == "1");
  CHECK(j["command"] == "dims");
  CHECK(j.contains("config"));
  CHECK(j.contains("results"));
  CHECK(j.contains("verdicts"));
  CHECK_FALSE(j.contains("timing_seconds"));
  CHECK(exit_code(rep) == 0);
  std::istringstream csv(rep.csv_text());
  std::string line;
  std::getline(csv, line);
  CHECK(line == "k,value,fit,residual");
  std::size_t rows = 0;
  while (std::getline(csv, line)) ++rows;
  CHECK(rows == rep.series.size());
  CHECK(rep.csv_text().find("\n7,4,") != std::string::npos);
}

TEST_CASE("reports are deterministic") {
  auto c = config("embed");
  c.weights = "1,2";
  c.k_max = 3;
  c.samples = 50;
  c.seed = 9;
  CHECK(run(c).json_text() == run(c).json_text());
  c.timing = true;
  CHECK(run(c).to_json().contains("timing_seconds"));
}

TEST_CASE("failed tolerance gives exit code 4") {
  auto c = config("calibrate");
  c.tol = 1e-30;
  const auto rep = run(c);
  CHECK_FALSE(rep.all_pass());
  CHECK(exit_code(rep) == 4);
  for (const auto& v : rep.verdicts) CHECK(verdict_line(v).rfind(v.pass() ? "PASS " : "FAIL ", 0) == 0);
}

TEST_CASE("configuration errors") {
  auto c = config("dims");
  c.weights = "1,0";
  CHECK_THROWS_AS(run(c), ConfigError);
  c.weights = "1,2";
  c.k_max = -1;
  CHECK_THROWS_AS(run(c), ConfigError);
  auto r = config("reduce");
  r.b = "1,1,1";
  CHECK_THROWS_AS(run(r), ConfigError);
}

TEST_CASE("atomic writes") {
  const auto dir = std::filesystem::temp_directory_path() / "szego_lab_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "out.json").string();
  write_atomic(path, "abc\n");
  std::ifstream in(path);
  std::string s;
  std::getline(in, s);
  CHECK(s == "abc");
  std::filesystem::remove_all(dir);
  CHECK_THROWS_AS(write_atomic("/nonexistent_dir/x/out.json", "x"), ConfigError);
}
