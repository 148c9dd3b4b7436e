#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config.hpp"
#include "geophase/error.hpp"
#include "report.hpp"

namespace {

using geophase::ErrorKind;

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfig:
    case ErrorKind::kInvalidArgument:
      return 2;
    case ErrorKind::kNumeric:
      return 3;
    case ErrorKind::kRegime:
      return 4;
  }
  return 3;
}

const char* kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfig: return "config";
    case ErrorKind::kInvalidArgument: return "invalid_argument";
    case ErrorKind::kNumeric: return "numeric";
    case ErrorKind::kRegime: return "regime";
  }
  return "unknown";
}

// One JSON object on stderr so that callers can parse failures.
int report_error(const std::string& subcommand, const char* kind, const std::string& message, int code) {
  geophase::cli::Json j;
  geophase::cli::Json& e = j.set("error", geophase::cli::Json::object());
  e.set("kind", kind);
  e.set("subcommand", subcommand);
  e.set("message", message);
  e.set("exit_code", code);
  std::cerr << j.dump(0);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reservoir-engineered geometric phase: derivations, simulations and reports"};
  app.require_subcommand(1, 1);

  std::string config_path, out_dir = ".";
  unsigned jobs = 1;
  bool seedless = false;
  for (const auto& name : geophase::cli::subcommand_names()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "YAML run configuration")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--jobs", jobs, "worker threads for sweeps")->check(CLI::PositiveNumber);
    // Nothing is random; accepted for interface compatibility.
    sub->add_flag("--seedless-deterministic", seedless, "no-op: every run is deterministic");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("", "usage", e.what(), 2);
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    const geophase::cli::RunConfig cfg = geophase::cli::load_config(config_path);
    geophase::cli::CommandContext ctx;
    ctx.out_dir = out_dir;
    ctx.jobs = jobs;
    ctx.log = &std::cerr;
    for (const auto& path : geophase::cli::run_subcommand(name, cfg, ctx)) std::cout << path << "\n";
    return 0;
  } catch (const geophase::Error& e) {
    return report_error(name, kind_name(e.kind()), e.what(), exit_code(e.kind()));
  } catch (const std::exception& e) {
    return report_error(name, "internal", e.what(), 3);
  }
}
