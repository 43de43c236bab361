#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cpflow/flow.hpp"

namespace cpflow::cli {

enum class Command { gen, check, flow, newton, exhaust, validate };

Command parse_command(const std::string& name);
std::string to_string(Command command);

/// Exit codes: 0 success / converged, 1 input error, 2 non-convergence or failed check.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitNotConverged = 2;

/// One CLI invocation.
struct RunSpec {
  Command command = Command::flow;
  std::optional<std::filesystem::path> input;

  std::string kind = "triangular-disk";
  int n = 3;
  std::optional<int> n_min;  ///< exhaust: smallest ball (default window_radius + 1)
  int window_radius = 2;
  double theta_const = 1.5707963267948966;

  std::optional<double> target_const;
  std::optional<std::filesystem::path> target_file;
  std::optional<double> r0_const;
  std::optional<std::filesystem::path> r0_file;

  std::optional<double> dt;
  std::optional<double> t_end;
  std::optional<double> tol;
  std::optional<std::string> integrator;
  std::optional<std::size_t> max_iter;
  bool freeze_boundary = true;

  std::filesystem::path out_dir = ".";
};

/// Builds a RunSpec from argv. Throws Error on malformed flags; `--help`
/// output is written to `out` and std::nullopt is returned.
std::optional<RunSpec> parse_args(int argc, const char* const* argv, std::ostream& out);

/// Dispatches the command and writes its artifacts into spec.out_dir.
/// Diagnostics go to `log`; returns the process exit code.
int run(const RunSpec& spec, std::ostream& log);

}  // namespace cpflow::cli
