// selfex <subcommand> --config <path> [--out <dir>] [--seed <u64>] [--threads <n>]
//
// Exit codes: 0 ok, 1 usage, 2 config, 3 numerical failure,
// 4 acceptance threshold failed (config key check = true), 5 I/O.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "selfex/core/error.hpp"
#include "selfex/core/parallel.hpp"
#include "selfex/experiments/commands.hpp"

namespace {

int exit_code_for(selfex::ErrorCode code) {
  using selfex::ErrorCode;
  switch (code) {
    case ErrorCode::ConfigError:
    case ErrorCode::InvalidArgument:
    case ErrorCode::IncompatibleDrift:
    case ErrorCode::DegenerateParams:
      return selfex::kExitConfig;
    case ErrorCode::IoError:
      return selfex::kExitIo;
    case ErrorCode::NonFiniteState:
    case ErrorCode::NoConvergence:
    case ErrorCode::CflViolation:
    case ErrorCode::DomainOverflow:
    case ErrorCode::DegenerateInput:
      return selfex::kExitNumerical;
  }
  return selfex::kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-exciting opinion dynamics experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(selfex::kArtifactVersion));

  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  unsigned threads = selfex::default_thread_count();
  bool verbose = false;

  const char* names[] = {"simulate", "pde", "steady", "converge", "coupling", "figures", "slant-mean"};
  for (const char* name : names) {
    auto* sub = app.add_subcommand(name, std::string("run the ") + name + " experiment");
    sub->add_option("--config", config_path, "experiment config (JSON, flat keys)")->required();
    sub->add_option("--out", out_dir, "output directory")->capture_default_str();
    sub->add_option("--seed", seed, "override the config seed");
    sub->add_option("--threads", threads, "worker threads (default: SELFEX_THREADS or all cores)")
        ->check(CLI::PositiveNumber);
    sub->add_flag("-v,--verbose", verbose, "progress on stderr");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? selfex::kExitOk : selfex::kExitUsage;
  }
  const std::string sub = app.get_subcommands().front()->get_name();

  try {
    selfex::ExperimentConfig cfg = selfex::load_config(config_path);
    if (selfex::to_string(cfg.experiment) != sub) {
      selfex::fail(selfex::ErrorCode::ConfigError,
                   "config is for '" + selfex::to_string(cfg.experiment) + "', not '" + sub + "'");
    }
    if (seed) cfg.seed = *seed;
    const selfex::RunContext ctx{out_dir, threads, verbose};
    const auto result = selfex::run_experiment(cfg, ctx);
    for (const auto& f : result.outputs) std::cout << (ctx.out_dir / f).string() << '\n';
    if (!result.failed_checks.empty()) {
      for (const auto& f : result.failed_checks) std::cerr << "selfex: check failed: " << f << '\n';
      return selfex::kExitThreshold;
    }
    return selfex::kExitOk;
  } catch (const selfex::Error& e) {
    std::cerr << "selfex: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "selfex: " << e.what() << '\n';
    return selfex::kExitNumerical;
  }
}
