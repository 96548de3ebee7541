// SPDX-License-Identifier: Apache-2.0
//
//   spinsqueeze run <config> [--out <csv>] [--seed <n>] [--threads <n>]
//   spinsqueeze validate <config>
//
// Exit status: 0 success, 1 validation failure, 2 runtime failure.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "spinsqueeze/config.hpp"
#include "spinsqueeze/experiments.hpp"

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

bool read_file(const std::string& path, std::string& text) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream buf;
  buf << in.rdbuf();
  text = buf.str();
  return true;
}

std::optional<spinsqueeze::ExperimentConfig> load(const std::string& path) {
  std::string text;
  if (!read_file(path, text)) {
    std::cerr << "error: cannot read config '" << path << "'\n";
    return std::nullopt;
  }
  auto parsed = spinsqueeze::parse_config(text);
  for (const auto& issue : parsed.issues) std::cerr << path << ": " << issue.describe() << '\n';
  return parsed.config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Measurement-induced spin squeezing simulator"};
  app.require_subcommand(1);

  std::string run_config;
  std::string out_path;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  auto* run = app.add_subcommand("run", "Run an experiment and write CSV");
  run->add_option("config", run_config, "Config file (key=value lines)")->required();
  run->add_option("--out", out_path, "CSV output path (default: stdout)");
  auto* seed_opt = run->add_option("--seed", seed, "Override the config seed");
  run->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);

  std::string validate_config;
  auto* validate = app.add_subcommand("validate", "Check a config without running it");
  validate->add_option("config", validate_config, "Config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  if (*validate) {
    const auto config = load(validate_config);
    if (!config) return kExitValidation;
    std::cout << validate_config << ": ok (experiment=" << spinsqueeze::to_string(config->experiment)
              << ")\n";
    return 0;
  }

  const auto config = load(run_config);
  if (!config) return kExitValidation;

  spinsqueeze::RunOptions options;
  options.threads = threads;
  if (*seed_opt) options.seed_override = seed;

  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!out_path.empty()) {
    file.open(out_path, std::ios::binary | std::ios::trunc);
    if (!file) {
      std::cerr << "error: cannot open '" << out_path << "' for writing\n";
      return kExitRuntime;
    }
    out = &file;
  }
  try {
    spinsqueeze::run_experiment(*config, *out, options);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
