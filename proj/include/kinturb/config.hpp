#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kinturb/field.hpp"
#include "kinturb/grid.hpp"
#include "kinturb/scenario.hpp"
#include "kinturb/solver.hpp"

namespace kinturb {

/// A fully parameterized batch run. Parsed from a line-based `key = value`
/// file; see the CLI help for the key reference and defaults.
struct Config {
  // space grid
  double L1 = 1.0;
  double L2 = 1.0;
  int M1 = 33;
  int M2 = 33;
  // velocity grid
  double ah1 = 0.5;
  double ah2 = 0.5;
  int MR1 = 2;
  int PR1 = 2;
  int MR2 = 2;
  int PR2 = 2;
  // time grid
  double T = 5.0;
  int N = 300;
  // model
  double nu = 0.005;
  double kappa = 1.0;
  double eps_div = 1e-12;
  // solver
  double s = 0.0;  // 0 = auto (1/d)
  double tol_linear = 1e-10;
  int max_linear_iters = 500;
  double tol_picard = 1e-8;
  int max_picard_iters = 50;
  // scenario
  std::string scenario = "collision";
  double uniform_value = 1.0;
  CollisionParams collision;
  // outputs
  std::vector<int> snapshots;
  int snapshot_every = 0;
  std::string output_dir = "out";
  int threads = 0;  // 0 = all available
};

/// Parses and validates a config. Diagnostics name the offending key and
/// line. Unknown keys are rejected.
Config parse_config(const std::string& text);
Config parse_config_file(const std::string& path);

/// Applies one `key = value` assignment to an existing config and
/// revalidates. Used for command-line overrides.
void config_set(Config& cfg, const std::string& key, const std::string& value);

/// Re-runs the cross-key validation; throws ConfigError on violations.
void validate(const Config& cfg);

/// Resolved configuration and derived quantities as deterministic text.
std::string describe(const Config& cfg);

/// FNV-1a hash of the resolved configuration text.
std::uint64_t config_hash(const Config& cfg);

SpaceGrid space_grid(const Config& cfg);
VelocityGrid velocity_grid(const Config& cfg);
TimeGrid time_grid(const Config& cfg);
SolverSettings solver_settings(const Config& cfg);

/// Scenario boundary data; time levels are capped at N.
BoundaryData boundary_data(const Config& cfg, const SpaceGrid& sg,
                           const VelocityGrid& vg);
DensityField initial_field(const Config& cfg, const SpaceGrid& sg,
                           const VelocityGrid& vg);

/// Sorted unique snapshot steps from `snapshots` and `snapshot_every`.
std::vector<int> snapshot_steps(const Config& cfg);

/// The per-step problem bundle for the solver.
Problem build_problem(const Config& cfg);

}  // namespace kinturb
