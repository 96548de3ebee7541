// SPDX-License-Identifier: Apache-2.0
#include "spinsqueeze/config.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <climits>
#include <cmath>
#include <map>
#include <stdexcept>

#include "spinsqueeze/metrology_optimizer.hpp"
#include "spinsqueeze/probe_schemes.hpp"

namespace spinsqueeze {

namespace {

constexpr std::array<std::pair<ExperimentKind, std::string_view>, 8> kKindNames{{
    {ExperimentKind::ProjectionNoise, "projection-noise"},
    {ExperimentKind::HomodyneCheck, "homodyne-check"},
    {ExperimentKind::SingleProbe, "single-probe"},
    {ExperimentKind::DualProbe, "dual-probe"},
    {ExperimentKind::Conditional, "conditional"},
    {ExperimentKind::Optimize, "optimize"},
    {ExperimentKind::DetuningInvariance, "detuning-invariance"},
    {ExperimentKind::OracleCheck, "oracle-check"},
}};

using RealField = std::optional<double> ExperimentConfig::*;

struct RealKey {
  std::string_view name;
  RealField field;
};

constexpr std::array<RealKey, 13> kRealKeys{{
    {"n_r", &ExperimentConfig::n_r},
    {"n_p", &ExperimentConfig::n_p},
    {"m_r", &ExperimentConfig::m_r},
    {"m_p", &ExperimentConfig::m_p},
    {"mean_k", &ExperimentConfig::mean_k},
    {"var_k", &ExperimentConfig::var_k},
    {"mean_phi0", &ExperimentConfig::mean_phi0},
    {"var_phi0", &ExperimentConfig::var_phi0},
    {"c_constant", &ExperimentConfig::c_constant},
    {"detuning", &ExperimentConfig::detuning},
    {"linewidth", &ExperimentConfig::linewidth},
    {"detuning_std", &ExperimentConfig::detuning_std},
    {"gamma", &ExperimentConfig::gamma},
}};

const RealKey* find_real(std::string_view key) {
  for (const auto& k : kRealKeys) {
    if (k.name == key) return &k;
  }
  return nullptr;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::optional<double> parse_real(std::string_view text) {
  double value = 0.0;
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty()) return std::nullopt;
  return value;
}

std::optional<std::int64_t> parse_integer(std::string_view text) {
  std::int64_t value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec == std::errc{} && ptr == end && !text.empty()) return value;
  // Accept integral values written in floating notation, e.g. 1e5.
  const auto real = parse_real(text);
  if (real && std::isfinite(*real) && *real == std::round(*real) && std::abs(*real) < 9.0e15) {
    return static_cast<std::int64_t>(*real);
  }
  return std::nullopt;
}

std::optional<std::uint64_t> parse_unsigned(std::string_view text) {
  std::uint64_t value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty()) return std::nullopt;
  return value;
}

std::string format_real(double x) { return fmt::format("{}", x); }

class IssueList {
 public:
  void add(std::string key, std::string message) {
    issues_.push_back(ConfigIssue{0, std::move(key), std::move(message)});
  }
  std::vector<ConfigIssue> take() { return std::move(issues_); }
  bool empty() const { return issues_.empty(); }

 private:
  std::vector<ConfigIssue> issues_;
};

bool has_coupling(const ExperimentConfig& c) { return c.mean_k || c.c_constant; }

void require(IssueList& issues, bool present, std::string_view key, ExperimentKind kind) {
  if (!present) {
    issues.add(std::string(key), fmt::format("required by experiment={}", to_string(kind)));
  }
}

void check_nonneg(IssueList& issues, const std::optional<double>& v, std::string_view key) {
  if (v && !(std::isfinite(*v) && *v >= 0.0)) {
    issues.add(std::string(key), fmt::format("must be finite and >= 0, got {}", *v));
  }
}

void check_positive(IssueList& issues, const std::optional<double>& v, std::string_view key) {
  if (v && !(std::isfinite(*v) && *v > 0.0)) {
    issues.add(std::string(key), fmt::format("must be finite and > 0, got {}", *v));
  }
}

void check_finite(IssueList& issues, const std::optional<double>& v, std::string_view key) {
  if (v && !std::isfinite(*v)) issues.add(std::string(key), "must be finite");
}

void validate_point(const ExperimentConfig& c, IssueList& issues) {
  if (c.n_atoms && *c.n_atoms < 1) {
    issues.add("n_atoms", fmt::format("must satisfy n_atoms >= 1, got {}", *c.n_atoms));
  }
  if (c.trials && *c.trials < 2) {
    issues.add("trials", fmt::format("must be >= 2, got {}", *c.trials));
  }
  for (const auto* key : {"n_r", "n_p", "m_r", "m_p", "mean_k", "var_k", "var_phi0",
                          "detuning_std"}) {
    check_nonneg(issues, c.*(find_real(key)->field), key);
  }
  check_finite(issues, c.mean_phi0, "mean_phi0");
  check_finite(issues, c.c_constant, "c_constant");
  check_positive(issues, c.linewidth, "linewidth");
  check_positive(issues, c.gamma, "gamma");
  if (c.detuning && !(std::isfinite(*c.detuning) && *c.detuning != 0.0)) {
    issues.add("detuning", "must be finite and non-zero");
  }

  // Dispersive validity of the coupling and the scattering model.
  if (c.detuning && std::isfinite(*c.detuning) && *c.detuning != 0.0) {
    for (auto [value, name] : {std::pair{c.linewidth, "linewidth"}, std::pair{c.gamma, "gamma"}}) {
      if (value && *value > 0.0 && std::abs(*c.detuning) < kDefaultDispersiveRatio * *value) {
        issues.add("detuning",
                   fmt::format("dispersive validity requires |detuning| >= {} x {}; "
                               "got |detuning| / {} = {}",
                               kDefaultDispersiveRatio, name, name,
                               std::abs(*c.detuning) / *value));
      }
    }
  }

  if (c.mean_k && c.c_constant) {
    issues.add("c_constant", "coupling is ambiguous: give either mean_k or c_constant");
  }
  if (c.c_constant && c.var_k) {
    issues.add("var_k", "var_k is derived from detuning_std when c_constant is given");
  }
  if (c.c_constant && !c.detuning) {
    issues.add("detuning", "c_constant needs detuning to define k = c_constant / detuning");
  }
  if (c.c_constant && !c.linewidth && !c.gamma) {
    issues.add("linewidth", "c_constant needs linewidth (or gamma) for the dispersive check");
  }
  if (c.c_constant && c.detuning && *c.detuning != 0.0 && *c.c_constant / *c.detuning < 0.0) {
    issues.add("c_constant", "c_constant / detuning must be >= 0 (mean_k >= 0)");
  }

  const auto kind = c.experiment;
  const bool monte_carlo = kind == ExperimentKind::ProjectionNoise ||
                           kind == ExperimentKind::HomodyneCheck ||
                           kind == ExperimentKind::SingleProbe ||
                           kind == ExperimentKind::DualProbe ||
                           kind == ExperimentKind::Conditional;
  if (monte_carlo) require(issues, c.trials.has_value(), "trials", kind);

  switch (kind) {
    case ExperimentKind::ProjectionNoise:
      require(issues, c.n_atoms.has_value(), "n_atoms", kind);
      break;
    case ExperimentKind::HomodyneCheck:
      require(issues, c.n_r.has_value(), "n_r", kind);
      require(issues, c.n_p.has_value(), "n_p", kind);
      if (c.var_phi0 && *c.var_phi0 > 0.0 && c.mean_phi0 && *c.mean_phi0 != 0.0) {
        issues.add("mean_phi0", "a fluctuating phase (var_phi0 > 0) must have mean_phi0 = 0");
      }
      break;
    case ExperimentKind::SingleProbe:
    case ExperimentKind::DualProbe:
    case ExperimentKind::Conditional:
      require(issues, c.n_atoms.has_value(), "n_atoms", kind);
      require(issues, c.n_r.has_value(), "n_r", kind);
      require(issues, c.n_p.has_value(), "n_p", kind);
      require(issues, has_coupling(c), "mean_k", kind);
      if (kind != ExperimentKind::SingleProbe) {
        require(issues, c.m_r.has_value(), "m_r", kind);
        require(issues, c.m_p.has_value(), "m_p", kind);
        if (c.n_r && c.n_p && c.m_r && c.m_p) {
          const double up = *c.n_r * *c.n_p;
          const double down = *c.m_r * *c.m_p;
          if (std::abs(up - down) > kDualProbeMatchTolerance * std::max(up, down)) {
            issues.add("m_p", fmt::format("two-color probing requires n_r n_p = m_r m_p; got "
                                          "{} vs {}",
                                          up, down));
          }
        }
      }
      if (kind == ExperimentKind::Conditional && c.n_r && c.n_p && c.m_r && c.m_p &&
          *c.n_r + *c.n_p + *c.m_r + *c.m_p <= 0.0) {
        issues.add("n_r", "shot noise n_r + n_p + m_r + m_p must be > 0");
      }
      break;
    case ExperimentKind::Optimize:
      require(issues, c.n_atoms.has_value(), "n_atoms", kind);
      require(issues, has_coupling(c), "mean_k", kind);
      require(issues, c.detuning.has_value(), "detuning", kind);
      require(issues, c.gamma || c.linewidth, "gamma", kind);
      if (c.mean_k && *c.mean_k == 0.0) {
        issues.add("mean_k", "optimize needs mean_k > 0");
      }
      if (c.n_p && c.detuning && *c.detuning != 0.0 && (c.gamma || c.linewidth)) {
        const double g = c.gamma ? *c.gamma : *c.linewidth;
        const double k = c.mean_k ? *c.mean_k : (c.c_constant ? *c.c_constant / *c.detuning : 0.0);
        const double eta_value = g * k / std::abs(*c.detuning) * *c.n_p;
        if (eta_value >= 1.0) {
          issues.add("n_p", fmt::format("eta = {} >= 1 at n_p = {}; invalid operating point",
                                        eta_value, *c.n_p));
        }
      }
      break;
    case ExperimentKind::DetuningInvariance:
      require(issues, c.n_atoms.has_value(), "n_atoms", kind);
      require(issues, c.c_constant.has_value(), "c_constant", kind);
      require(issues, c.detuning.has_value(), "detuning", kind);
      require(issues, c.gamma || c.linewidth, "gamma", kind);
      if (c.mean_k) issues.add("mean_k", "detuning-invariance derives k from c_constant");
      break;
    case ExperimentKind::OracleCheck:
      break;
  }
}

}  // namespace

std::string_view to_string(ExperimentKind kind) noexcept {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

std::optional<ExperimentKind> parse_experiment_kind(std::string_view text) noexcept {
  for (const auto& [k, name] : kKindNames) {
    if (name == text) return k;
  }
  return std::nullopt;
}

std::vector<double> SweepSpec::values() const {
  std::vector<double> out;
  if (points <= 1) {
    out.push_back(start);
    return out;
  }
  out.reserve(static_cast<std::size_t>(points));
  const double steps = static_cast<double>(points - 1);
  for (std::int64_t i = 0; i < points; ++i) {
    const double t = static_cast<double>(i) / steps;
    if (scale == SweepScale::Log) {
      out.push_back(std::exp(std::log(start) + t * (std::log(stop) - std::log(start))));
    } else {
      out.push_back(start + t * (stop - start));
    }
  }
  // Endpoints exactly as configured.
  out.front() = start;
  out.back() = stop;
  return out;
}

std::string ConfigIssue::describe() const {
  const std::string where = line > 0 ? fmt::format("line {}", line) : std::string("config");
  if (key.empty()) return fmt::format("{}: {}", where, message);
  return fmt::format("{}: {}: {}", where, key, message);
}

const std::vector<std::string_view>& config_keys() {
  static const std::vector<std::string_view> keys{
      "experiment", "n_atoms",     "trials",       "seed",         "n_r",         "n_p",
      "m_r",        "m_p",         "mean_k",       "var_k",        "mean_phi0",   "var_phi0",
      "c_constant", "detuning",    "linewidth",    "detuning_std", "gamma",       "sweep_param",
      "sweep_start", "sweep_stop", "sweep_points", "sweep_scale"};
  return keys;
}

bool is_sweepable(std::string_view key) {
  return key == "n_atoms" || key == "trials" || find_real(key) != nullptr;
}

ExperimentConfig with_parameter(const ExperimentConfig& config, std::string_view key,
                                double value) {
  ExperimentConfig out = config;
  if (key == "n_atoms") {
    out.n_atoms = static_cast<std::int64_t>(std::llround(value));
  } else if (key == "trials") {
    out.trials = static_cast<std::int64_t>(std::llround(value));
  } else if (const auto* rk = find_real(key)) {
    out.*(rk->field) = value;
  } else {
    throw std::invalid_argument(fmt::format("'{}' is not a sweepable parameter", key));
  }
  return out;
}

std::vector<ConfigIssue> validate_config(const ExperimentConfig& config) {
  IssueList issues;
  validate_point(config, issues);
  if (config.sweep) {
    const auto& s = *config.sweep;
    bool sweep_ok = true;
    if (!is_sweepable(s.param)) {
      issues.add("sweep_param", fmt::format("'{}' is not a sweepable numeric key", s.param));
      sweep_ok = false;
    }
    if (s.points < 1) {
      issues.add("sweep_points", "must be >= 1");
      sweep_ok = false;
    }
    if (!std::isfinite(s.start) || !std::isfinite(s.stop)) {
      issues.add("sweep_start", "sweep bounds must be finite");
      sweep_ok = false;
    }
    if (s.scale == SweepScale::Log && !(s.start > 0.0 && s.stop > 0.0)) {
      issues.add("sweep_scale", "log sweeps need sweep_start > 0 and sweep_stop > 0");
      sweep_ok = false;
    }
    if (sweep_ok && issues.empty()) {
      const auto values = s.values();
      for (std::size_t i = 0; i < values.size(); ++i) {
        IssueList point;
        validate_point(with_parameter(config, s.param, values[i]), point);
        for (auto& issue : point.take()) {
          issues.add(issue.key, fmt::format("at sweep point {} ({}={}): {}", i, s.param,
                                            values[i], issue.message));
        }
      }
    }
  }
  return issues.take();
}

std::vector<std::string> serialize_config(const ExperimentConfig& c) {
  std::vector<std::string> lines;
  lines.push_back(fmt::format("experiment={}", to_string(c.experiment)));
  if (c.n_atoms) lines.push_back(fmt::format("n_atoms={}", *c.n_atoms));
  if (c.trials) lines.push_back(fmt::format("trials={}", *c.trials));
  if (c.seed) lines.push_back(fmt::format("seed={}", *c.seed));
  for (const auto& k : kRealKeys) {
    if (const auto& v = c.*(k.field)) lines.push_back(fmt::format("{}={}", k.name, format_real(*v)));
  }
  if (c.sweep) {
    lines.push_back(fmt::format("sweep_param={}", c.sweep->param));
    lines.push_back(fmt::format("sweep_start={}", format_real(c.sweep->start)));
    lines.push_back(fmt::format("sweep_stop={}", format_real(c.sweep->stop)));
    lines.push_back(fmt::format("sweep_points={}", c.sweep->points));
    lines.push_back(
        fmt::format("sweep_scale={}", c.sweep->scale == SweepScale::Log ? "log" : "linear"));
  }
  return lines;
}

ParseResult parse_config(std::string_view text) {
  ParseResult result;
  auto& issues = result.issues;
  ExperimentConfig config;
  std::map<std::string, int, std::less<>> seen;  // key -> line

  std::optional<std::string> sweep_param;
  std::optional<double> sweep_start;
  std::optional<double> sweep_stop;
  std::optional<std::int64_t> sweep_points;
  std::optional<SweepScale> sweep_scale;

  auto bad_value = [&](int line, std::string_view key, std::string_view expected,
                       std::string_view value) {
    issues.push_back(ConfigIssue{line, std::string(key),
                                 fmt::format("expected {}, got '{}'", expected, value)});
  };

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto raw = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    auto line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      issues.push_back(ConfigIssue{line_no, "", fmt::format("expected key=value, got '{}'", line)});
      continue;
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    const auto& known = config_keys();
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      issues.push_back(ConfigIssue{line_no, std::string(key), "unknown key"});
      continue;
    }
    if (const auto it = seen.find(key); it != seen.end()) {
      issues.push_back(ConfigIssue{line_no, std::string(key),
                                   fmt::format("duplicate key (first set on line {})", it->second)});
      continue;
    }
    seen.emplace(std::string(key), line_no);

    if (key == "experiment") {
      if (const auto kind = parse_experiment_kind(value)) {
        config.experiment = *kind;
      } else {
        bad_value(line_no, key,
                  "one of projection-noise, homodyne-check, single-probe, dual-probe, "
                  "conditional, optimize, detuning-invariance, oracle-check",
                  value);
      }
    } else if (key == "n_atoms" || key == "trials" || key == "sweep_points") {
      const auto v = parse_integer(value);
      if (!v) {
        bad_value(line_no, key, "an integer", value);
      } else if (key == "n_atoms") {
        config.n_atoms = *v;
      } else if (key == "trials") {
        config.trials = *v;
      } else {
        sweep_points = *v;
      }
    } else if (key == "seed") {
      if (const auto v = parse_unsigned(value)) {
        config.seed = *v;
      } else {
        bad_value(line_no, key, "an unsigned 64-bit integer", value);
      }
    } else if (key == "sweep_param") {
      sweep_param = std::string(value);
    } else if (key == "sweep_scale") {
      if (value == "linear") {
        sweep_scale = SweepScale::Linear;
      } else if (value == "log") {
        sweep_scale = SweepScale::Log;
      } else {
        bad_value(line_no, key, "linear or log", value);
      }
    } else {
      const auto v = parse_real(value);
      if (!v) {
        bad_value(line_no, key, "a real number", value);
      } else if (key == "sweep_start") {
        sweep_start = *v;
      } else if (key == "sweep_stop") {
        sweep_stop = *v;
      } else {
        config.*(find_real(key)->field) = *v;
      }
    }
  }

  if (!seen.contains("experiment")) {
    issues.push_back(ConfigIssue{0, "experiment", "missing required key"});
  }
  const bool any_sweep = sweep_param || sweep_start || sweep_stop || sweep_points || sweep_scale;
  if (any_sweep) {
    const bool complete = sweep_param && sweep_start && sweep_stop && sweep_points;
    if (!complete) {
      for (auto [present, name] :
           {std::pair{sweep_param.has_value(), "sweep_param"},
            std::pair{sweep_start.has_value(), "sweep_start"},
            std::pair{sweep_stop.has_value(), "sweep_stop"},
            std::pair{sweep_points.has_value(), "sweep_points"}}) {
        if (!present) {
          issues.push_back(ConfigIssue{0, name, "required when any sweep_* key is given"});
        }
      }
    } else {
      config.sweep = SweepSpec{*sweep_param, *sweep_start, *sweep_stop, *sweep_points,
                               sweep_scale.value_or(SweepScale::Linear)};
    }
  }

  // Invariants are checked on whatever parsed; keys that already failed to
  // parse are not reported twice.
  const bool kind_known =
      std::none_of(issues.begin(), issues.end(),
                   [](const ConfigIssue& i) { return i.key == "experiment"; });
  if (kind_known) {
    std::vector<std::string> failed;
    for (const auto& i : issues) failed.push_back(i.key);
    for (auto& issue : validate_config(config)) {
      if (std::find(failed.begin(), failed.end(), issue.key) != failed.end()) continue;
      if (const auto it = seen.find(issue.key); it != seen.end()) issue.line = it->second;
      issues.push_back(std::move(issue));
    }
  }
  // File order; issues not tied to a line go last.
  std::stable_sort(issues.begin(), issues.end(), [](const ConfigIssue& a, const ConfigIssue& b) {
    const auto rank = [](int line) { return line > 0 ? line : INT_MAX; };
    return rank(a.line) < rank(b.line);
  });
  if (issues.empty()) result.config = std::move(config);
  return result;
}

}  // namespace spinsqueeze
