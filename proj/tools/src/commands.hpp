#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "config.hpp"
#include "report.hpp"

namespace geophase::cli {

struct CommandContext {
  std::string out_dir = ".";
  unsigned jobs = 1;
  std::ostream* log = nullptr;  // progress and warnings; may be null
};

inline const std::vector<std::string>& subcommand_names() {
  static const std::vector<std::string> names{"derive", "cycle", "ramsey", "sweep", "validate", "analytic"};
  return names;
}

// Report builders, usable without touching the file system.
Json derive_report(const RunConfig& cfg);
Json analytic_report(const RunConfig& cfg);
Json cycle_report(const RunConfig& cfg);
Json ramsey_report(const RunConfig& cfg);
CsvTable ramsey_fringe_table(const RunConfig& cfg, unsigned jobs, FringeCurve* curve = nullptr);
CsvTable sweep_table(const RunConfig& cfg, unsigned jobs);
Json validate_report(const RunConfig& cfg, unsigned jobs, std::ostream* log = nullptr);

/// Runs one subcommand and writes its artifacts under ctx.out_dir. Returns the written paths.
std::vector<std::string> run_subcommand(const std::string& name, const RunConfig& cfg, const CommandContext& ctx);

}  // namespace geophase::cli
