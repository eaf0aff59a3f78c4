#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "dhlab_cli/report.hpp"
#include "dhlab_cli/run_config.hpp"

namespace dhlab::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUnexpected = 1;
inline constexpr int kExitParse = 2;
inline constexpr int kExitPrecondition = 3;
inline constexpr int kExitNonConvergence = 4;

/// Runs a normalized config. Throws dhlab::Error on failure.
Report run(const RunConfig& config);

/// Report text in the config's format.
std::string render(const Report& report, const std::string& format);

/// Reads the config embedded in a JSON or CSV report.
RunConfig config_from_report(const std::string& text);

/// Entry point without argv[0]. Reports go to `out` unless --out is given;
/// diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dhlab::cli
