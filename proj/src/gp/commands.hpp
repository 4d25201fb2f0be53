#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gp/dynamics.hpp"
#include "gp/errors.hpp"
#include "gp/reduce.hpp"

namespace gp {

/// Exit-code classes shared by the C API and the CLI.
enum ExitCode : int { kExitOk = 0, kExitCheckFailed = 1, kExitConfigError = 2, kExitNumerical = 3 };

int exit_code_for(ErrorCode code) noexcept;

struct Tolerances {
  double antisymmetry = 1e-12;
  double jacobi = 1e-4;
  double leibniz = 5e-5;
  double casimir = 1e-6;
  double equivalence = 5e-5;
  double covariance = 1e-6;
  double hamiltonian = 5e-5;
  double drift = 1e-8;
  double casimir_drift = 1e-7;
  double rank = kRankTolerance;
};

struct RunConfig {
  nlohmann::json algebra = "so3";
  std::optional<nlohmann::json> potential;
  std::optional<nlohmann::json> f_spec;
  std::optional<std::vector<double>> reduce_point;
  std::optional<nlohmann::json> gauge_map;
  std::optional<WongState> initial_state;
  double dt = 1e-3;
  int steps = 1000;
  Tolerances tol;
  std::uint64_t seed = 20240611;
  int samples = 6;
  std::filesystem::path output_dir = ".";
  std::string report_name;  // empty: per-command default
  std::string trajectory_name = "trajectory.csv";

  /// Throws ConfigParseError.
  static RunConfig from_json(const nlohmann::json& j);
  /// Throws IoError when the file is missing, ConfigParseError when malformed.
  static RunConfig from_file(const std::filesystem::path& path);
};

AlgebraPtr config_algebra(const RunConfig& c, Validation validation = Validation::Full);
/// The configured potential, or zero on R^n with n taken from the initial
/// state (3 when absent).
VectorPotential config_potential(const RunConfig& c, const LieAlgebra& L);

struct CommandResult {
  int exit_code = kExitOk;
  nlohmann::json report;
  std::string summary;
  std::vector<std::filesystem::path> written;
};

/// Seeded property suite over the configured algebra, brackets, potential
/// and dynamics. Exit 1 when any check fails.
CommandResult cmd_verify(const RunConfig& c);

/// Bracket of two expressions at a point given as JSON
/// {"x": [...], "q": [...], "p": [...], "I": [...], "z": [...],
///  "g": [[[re, im], ...], ...] or "g_exp": [...], "level": c}.
/// Engines: lie_poisson, orbit, tstar, gauged, cartan, cartan_gauged.
double cmd_bracket(const RunConfig& c, const std::string& engine, const std::string& f, const std::string& g,
                   const nlohmann::json& point);

/// omega_f rank report {rank, kernel_dim, kernel_basis, orbit_dim_check}.
CommandResult cmd_reduce(const RunConfig& c);

/// Integrates the configured initial state, writes the trajectory CSV and
/// a drift report. Exit 1 on drift failure, 3 on blow-up.
CommandResult cmd_simulate(const RunConfig& c);

CommandResult cmd_rootsys(const RunConfig& c);

/// Parses a point JSON for the given algebra (group entries need a matrix basis).
PhasePoint parse_point(const AlgebraPtr& L, const nlohmann::json& j);

}  // namespace gp
