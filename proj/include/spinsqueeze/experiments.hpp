// SPDX-License-Identifier: Apache-2.0
//
// Experiment orchestration and CSV emission.
//
// Output layout:
//   # spinsqueeze_version=...
//   # rng_algorithm=philox4x32-10
//   # <config key>=<value>        (one line per set key, seed always present)
//   header row
//   data rows
// Everything below the metadata block is the data section. It depends only on
// the config, never on the worker count.
#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "spinsqueeze/config.hpp"

namespace spinsqueeze {

inline constexpr std::string_view kVersion = "0.1.0";

struct RunOptions {
  unsigned threads = 1;
  std::optional<std::uint64_t> seed_override;
};

/// A downstream operation failed. Rows completed before the failure have
/// already been written and flushed.
class RunFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Runs a validated config and streams CSV to `out`. Throws
/// std::invalid_argument if the config does not validate and RunFailure on
/// errors during the run.
void run_experiment(const ExperimentConfig& config, std::ostream& out,
                    const RunOptions& options = {});

/// Convenience wrapper returning the whole CSV text.
std::string run_experiment_to_string(const ExperimentConfig& config,
                                     const RunOptions& options = {});

/// The part of a CSV document after the metadata comment block.
std::string data_section(std::string_view csv);

/// Re-parses the config echoed into a CSV metadata block.
ParseResult config_from_metadata(std::string_view csv);

}  // namespace spinsqueeze
