#ifndef DSAIR_CLI_COMMANDS_HPP
#define DSAIR_CLI_COMMANDS_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dsair/cli/config.hpp"

namespace dsair::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitValidation = 2,
  kExitUnsupportedPair = 3,
  kExitIo = 4,
};

// With `out` set, each command writes <out> (CSV) and <out>.meta.json and
// prints a short summary; otherwise the CSV goes to `os`.
void cmd_payoffs(const ExperimentConfig& cfg, const std::optional<std::string>& out, std::ostream& os);
void cmd_evolve(const ExperimentConfig& cfg, const std::optional<std::string>& out, std::ostream& os);
void cmd_sweep(const ExperimentConfig& cfg, const std::optional<std::string>& out, std::ostream& os,
               unsigned threads);
void cmd_simulate(const ExperimentConfig& cfg, const std::optional<std::string>& out, std::ostream& os);
// Also writes <out>.curves.csv with the threshold polylines.
void cmd_regions(const ExperimentConfig& cfg, const std::optional<std::string>& out, std::ostream& os);

// DSAIR_THREADS, or 0 (automatic) when unset.
unsigned threads_from_env();

// Full command line entry point; args[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& os, std::ostream& err);

}  // namespace dsair::cli

#endif  // DSAIR_CLI_COMMANDS_HPP
