#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace qns {

enum class SuiteKind { Identity, Inequality, Dynamics };

const char* to_string(SuiteKind k);
SuiteKind parse_suite_kind(const std::string& s);

struct GridSpec {
  int dim = 1;
  int n = 128;
};

struct SuiteConfig {
  std::vector<std::uint64_t> seeds;
  std::vector<GridSpec> grids;
  /// Field generator: random_smooth_positive(grid, seed, modes, floor, amplitude),
  /// velocities from random_smooth_vector with the same modes and amplitude.
  int modes = 2;
  double floor = 1.0;
  double amplitude = 0.3;
  std::vector<std::string> checks;
  /// Identity and bound checks pass when the error is within rel_tol
  /// (plus abs_tol); inequalities allow lhs <= rhs (1 + rel_tol) + abs_tol.
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  /// Perturbs the third Bohm form by 1e-3 grad(rho) (suite sensitivity probe).
  bool inject_canary = false;
  int threads = 1;

  /// Throws ConfigError: empty seeds/grids/checks, unknown check names,
  /// unusable grids or generator settings.
  void validate(SuiteKind kind) const;
};

/// Check names each suite understands.
const std::vector<std::string>& suite_checks(SuiteKind kind);

/// 100 seeds; identity: 1D n=128 and 2D n=64 with gentle fields;
/// inequality: 1D n=128, 2D and 3D n=32 with rougher fields.
SuiteConfig default_suite_config(SuiteKind kind);

/// One evaluated check, with everything needed to rerun it in isolation.
struct CheckRecord {
  std::string check;
  GridSpec grid;
  std::uint64_t seed = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool passed = false;
  std::string detail;
};

struct CheckAggregate {
  std::string check;
  std::size_t count = 0;
  std::size_t failures = 0;
  double worst_margin = 0.0;
  std::uint64_t worst_seed = 0;
  GridSpec worst_grid;
};

struct SuiteReport {
  SuiteKind kind = SuiteKind::Identity;
  std::vector<CheckAggregate> aggregates;
  /// Ordered by (check, grid, seed).
  std::vector<CheckRecord> records;
  bool passed = false;
  double seconds = 0.0;

  const CheckAggregate* find(const std::string& check) const;
  std::size_t failures() const;
};

SuiteReport run_identity_suite(const SuiteConfig& config);
SuiteReport run_inequality_suite(const SuiteConfig& config);
/// Seeds and grids are not used: every dynamics check fixes its own scenario.
SuiteReport run_dynamics_suite(const SuiteConfig& config);
SuiteReport run_suite(SuiteKind kind, const SuiteConfig& config);

/// Reproduces a single record of the identity or inequality suites.
CheckRecord rerun_check(SuiteKind kind, const SuiteConfig& config, const std::string& check, GridSpec grid,
                        std::uint64_t seed);

std::string report_json(const SuiteReport& report, int indent = 2);
/// One JSON object per record.
void write_jsonl(std::ostream& os, const SuiteReport& report);

/// Parses a suite config document. Keys: suite, seeds (list) or seed_count,
/// grids ([{dim, n}]), modes, floor, amplitude, checks, rel_tol, abs_tol,
/// inject_canary, threads. Missing keys keep the suite defaults.
/// Throws ConfigError.
std::pair<SuiteKind, SuiteConfig> parse_suite_config(const std::string& text);

}  // namespace qns
