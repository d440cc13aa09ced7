#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace szego::lab {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1";

/// Parsed command line. Unset optionals fall back to per-command defaults.
struct RunConfig {
  std::string command;
  std::optional<std::string> weights;
  std::optional<long> k_max;
  std::optional<std::vector<long>> k_list;
  std::optional<std::size_t> samples;
  std::uint64_t seed = 1;
  std::optional<double> tol;
  std::optional<std::string> out;
  std::optional<std::string> csv;
  bool quick = false;
  bool timing = false;
  std::optional<int> n;                    // calibrate: round sphere dimension
  std::optional<int> m;                    // cyclic group order
  std::optional<std::string> action;       // cyclic action weights
  std::optional<std::string> b;            // auxiliary circle weights
  std::optional<std::string> metric;       // sphere_measure | euclidean | euclidean_unit_dz
  std::optional<std::string> quadrature;   // montecarlo | product1d
};

/// One measured quantity against its threshold.
struct Check {
  std::string name;
  double measured = 0.0;
  double threshold = 0.0;
  std::string relation;  // "<=", "<", ">=", ">", "=="
  bool pass = false;
};

struct Verdict {
  std::string id;
  std::string title;
  std::vector<Check> checks;
  std::string error;  // set when the computation itself failed
  bool pass() const;
};

struct CsvRow {
  long k = 0;
  double value = 0.0;
  double fit = 0.0;
  double residual = 0.0;
};

struct Report {
  std::string command;
  Json config = Json::object();
  Json results = Json::object();
  std::vector<Verdict> verdicts;
  std::vector<CsvRow> series;
  std::optional<double> timing_seconds;

  bool all_pass() const;
  Json to_json() const;
  std::string json_text() const;
  std::string csv_text() const;
};

/// The commands understood by run().
const std::vector<std::string>& commands();

/// Executes one command. Throws szego::Error subclasses on bad input or numerical failure.
Report run(const RunConfig& config);

/// Acceptance criteria 1-9 (and 10 when check_determinism is set).
Report acceptance_suite(std::uint64_t seed, bool quick, bool check_determinism = true);

/// Process exit code for a finished report: 0 or 4 (any FAIL).
int exit_code(const Report& report);

/// One line per verdict: "PASS <id> <title> | name=measured rel threshold; ...".
std::string verdict_line(const Verdict& v);

/// Writes through a temporary file and rename. Throws ConfigError when the path is unwritable.
void write_atomic(const std::string& path, const std::string& content);

/// "10,20,30" or "10:200:10" (start:stop:step).
std::vector<long> parse_k_list(const std::string& text);
std::vector<int> parse_int_list(const std::string& text);

}  // namespace szego::lab
