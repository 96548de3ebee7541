// SPDX-License-Identifier: Apache-2.0
//
// Flat key=value experiment configuration.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace spinsqueeze {

enum class ExperimentKind {
  ProjectionNoise,
  HomodyneCheck,
  SingleProbe,
  DualProbe,
  Conditional,
  Optimize,
  DetuningInvariance,
  OracleCheck,
};

std::string_view to_string(ExperimentKind kind) noexcept;
std::optional<ExperimentKind> parse_experiment_kind(std::string_view text) noexcept;

enum class SweepScale { Linear, Log };

struct SweepSpec {
  std::string param;
  double start = 0.0;
  double stop = 0.0;
  std::int64_t points = 1;
  SweepScale scale = SweepScale::Linear;

  /// Points in order; a single point yields {start}.
  std::vector<double> values() const;
  friend bool operator==(const SweepSpec&, const SweepSpec&) = default;
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::ProjectionNoise;
  std::optional<std::int64_t> n_atoms;
  std::optional<std::int64_t> trials;
  std::optional<std::uint64_t> seed;
  std::optional<double> n_r;
  std::optional<double> n_p;
  std::optional<double> m_r;
  std::optional<double> m_p;
  std::optional<double> mean_k;
  std::optional<double> var_k;
  std::optional<double> mean_phi0;
  std::optional<double> var_phi0;
  std::optional<double> c_constant;
  std::optional<double> detuning;
  std::optional<double> linewidth;
  std::optional<double> detuning_std;
  std::optional<double> gamma;
  std::optional<SweepSpec> sweep;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// One problem found while parsing or validating. line is 1-based; 0 when
/// the problem is not tied to a line (e.g. a missing key).
struct ConfigIssue {
  int line = 0;
  std::string key;
  std::string message;

  std::string describe() const;
};

struct ParseResult {
  std::optional<ExperimentConfig> config;  // set only when issues is empty
  std::vector<ConfigIssue> issues;

  bool ok() const noexcept { return config.has_value(); }
};

/// Parses and fully validates; every violation is reported, not just the
/// first.
ParseResult parse_config(std::string_view text);

/// Validation of an already-built config (also applied to every sweep point).
std::vector<ConfigIssue> validate_config(const ExperimentConfig& config);

/// Canonical key=value lines for every set key, in the documented key
/// order. parse_config(serialize_config(c)) reproduces c exactly.
std::vector<std::string> serialize_config(const ExperimentConfig& config);

/// Keys accepted in a config file, in canonical order.
const std::vector<std::string_view>& config_keys();

/// Whether `key` names a numeric parameter a sweep may vary.
bool is_sweepable(std::string_view key);

/// Copy of config with `key` set to value (integers are rounded). Throws
/// std::invalid_argument for keys that are not sweepable.
ExperimentConfig with_parameter(const ExperimentConfig& config, std::string_view key,
                                double value);

}  // namespace spinsqueeze
