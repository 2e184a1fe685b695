#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qns/grid.hpp"
#include "qns/params.hpp"
#include "qns/state.hpp"
#include "qns/timeloop.hpp"

namespace qns {

enum ExitCode : int { kExitOk = 0, kExitCheckFailure = 1, kExitConfigError = 2, kExitPositivityFailure = 3 };

/// Environment variable that overrides the output directory of a config file.
inline constexpr const char* kOutputEnv = "QNSLAB_OUT";

/// Run configuration document (JSON). Top-level keys: scenario | snapshot,
/// grid {dim, n, length}, params {...}, integrator {...}, output, mode, sweep.
struct RunConfig {
  std::string scenario;
  /// Snapshot file with records "rho" and "m" (momentum) or "u" (velocity).
  std::filesystem::path snapshot;
  Grid grid;
  QnsParams params;
  IntegratorConfig integrator;
  std::filesystem::path output = "qnslab-out";
  ParamMode mode = ParamMode::Desk;
  /// Sweep axes over nu, kappa, r0, r1, eps; values combine as a Cartesian product.
  std::vector<std::pair<std::string, std::vector<double>>> sweep;

  /// Parameters after applying the mode (paper constants in paper mode).
  QnsParams effective_params() const;
};

/// Throws ConfigError on malformed documents, unknown keys or invalid values.
/// Relative snapshot paths resolve against `base_dir`.
RunConfig parse_run_config(const std::string& text, const std::filesystem::path& base_dir = ".");
RunConfig load_run_config(const std::filesystem::path& path);

/// Initial u-form state. Snapshot data with vacuum nodes is mollified.
State build_initial_state(const RunConfig& config, const QnsParams& params);

struct CliOptions {
  std::optional<std::filesystem::path> config;
  std::optional<std::filesystem::path> out;
  std::optional<ParamMode> mode;
  /// Overrides the suite config's thread count; sweeps default to 1.
  std::optional<int> threads;
};

/// --out, then QNSLAB_OUT, then the config's output entry.
std::filesystem::path resolve_output(const CliOptions& opts, const std::filesystem::path& configured);

int cmd_run(const CliOptions& opts, std::ostream& out, std::ostream& err);
int cmd_verify(const CliOptions& opts, std::ostream& out, std::ostream& err);
int cmd_sweep(const CliOptions& opts, std::ostream& out, std::ostream& err);
/// `opts.config` names a monitor CSV or a directory containing monitor.csv files.
int cmd_report(const CliOptions& opts, std::ostream& out, std::ostream& err);

/// Columns of a monitor CSV.
struct MonitorTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::vector<double> column(const std::string& name) const;
};

MonitorTable read_monitor_csv(const std::filesystem::path& path);

}  // namespace qns
