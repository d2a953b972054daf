#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "selfex/experiments/config.hpp"

namespace selfex {

struct RunContext {
  std::filesystem::path out_dir = "out";
  unsigned threads = 1;
  bool verbose = false;
};

struct CommandResult {
  std::vector<std::string> outputs;        // file names written under out_dir
  std::map<std::string, double> metrics;   // headline numbers, also in the CSVs
  std::vector<std::string> failed_checks;  // only filled when cfg.check is set
};

// Each command writes its files plus manifest.json into ctx.out_dir.
CommandResult cmd_simulate(const ExperimentConfig& cfg, const RunContext& ctx);
CommandResult cmd_pde(const ExperimentConfig& cfg, const RunContext& ctx);
CommandResult cmd_steady(const ExperimentConfig& cfg, const RunContext& ctx);
CommandResult cmd_converge(const ExperimentConfig& cfg, const RunContext& ctx);
CommandResult cmd_coupling(const ExperimentConfig& cfg, const RunContext& ctx);
CommandResult cmd_figures(const ExperimentConfig& cfg, const RunContext& ctx);
CommandResult cmd_slant_mean(const ExperimentConfig& cfg, const RunContext& ctx);

CommandResult run_experiment(const ExperimentConfig& cfg, const RunContext& ctx);

// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitConfig = 2,
  kExitNumerical = 3,
  kExitThreshold = 4,
  kExitIo = 5,
};

}  // namespace selfex
