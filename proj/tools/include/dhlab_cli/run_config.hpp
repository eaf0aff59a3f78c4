#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dhlab/function_space.hpp"
#include "dhlab/operators.hpp"
#include "dhlab_cli/report.hpp"

namespace dhlab::cli {

/// Everything a report depends on. After normalize() every field the command
/// uses holds an explicit value, so the echo alone reproduces the run.
struct RunConfig {
  std::string command;  // moments | apply | carleson | experiment
  std::string op;       // apply: dh | hilbert | integral
  std::string measure;
  std::string function;
  std::string theorem;
  int order = 10;
  int N = 64;
  std::optional<double> alpha;
  std::optional<double> s;
  double beta = 0.0;
  int k_max = 40;
  std::vector<cd> z;
  std::string space = "bmoa";
  bool check_equivalence = false;
  std::vector<double> b_ladder = {0.9, 0.99, 0.999, 0.9999};
  int grid_nr = 48;
  int grid_ntheta = 128;
  int a_angles = 2;
  std::optional<double> r;
  std::string format = "json";
  std::string out;
};

/// Fills command-dependent defaults and checks every numeric override before
/// any computation. Throws ParseError for malformed values and
/// PreconditionError for values outside an operation's domain.
RunConfig normalize(RunConfig config);

/// Keys in fixed order, only those the command uses.
Json to_json(const RunConfig& config);

/// Strict: unknown keys and wrong types are parse errors.
RunConfig config_from_json(const Json& doc);

/// From the `config.*` lines of a CSV report (key without the prefix).
RunConfig config_from_flat(const std::map<std::string, std::string>& fields);

/// "x", "yi", "x+yi", "x-yi".
cd parse_complex(const std::string& text);
std::string format_complex(cd z);

/// "bmoa" or "bloch:<alpha>".
Space parse_space(const std::string& text);

/// Points used when --z is not given.
std::vector<cd> default_z_grid();

}  // namespace dhlab::cli
