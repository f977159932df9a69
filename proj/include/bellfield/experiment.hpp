#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bellfield/inequalities.hpp"
#include "bellfield/phase_statistics.hpp"
#include "bellfield/phasor_optics.hpp"
#include "bellfield/photon_counts.hpp"

namespace bellfield {

enum class RunMode { continuous, counts, inequalities, locality, full };

std::string to_string(RunMode mode);
RunMode run_mode_from_string(const std::string& name);  // ValidationError

// External configuration. Angles arrive in degrees and are converted to
// radians exactly once, in interferometer().
struct ExperimentConfig {
  double alpha = 1.0;
  double beta = 2.0;
  double theta1_deg = 0.0;
  double theta2_deg = 0.0;
  bool hidden_uniform = true;
  double hidden_fixed_deg = 0.0;
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 42;
  RunMode mode = RunMode::full;

  InterferometerConfig interferometer() const;
};

// JSON text with keys exactly: alpha, beta, theta1_deg, theta2_deg,
// hidden_phase ("uniform" | {"fixed_deg": x}), samples, seed, mode.
// alpha..theta2_deg are required; the rest default to 1e6 / 42 / uniform /
// full. Unknown keys are rejected.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

struct DataRow {
  std::int64_t run = 0;
  double theta_rad = 0.0;
  double i1 = 0.0, i2 = 0.0, i3 = 0.0, i4 = 0.0;
  std::optional<int> x;  // +-1; empty in continuous mode
  std::optional<int> y;
};

struct DataTable {
  std::vector<DataRow> rows;
};

// CSV with header run,theta_rad,I1,I2,I3,I4,x,y. Floats carry 17
// significant digits so a round trip preserves every bit; absent counts
// serialize as empty fields. write(read(f)) reproduces f byte for byte.
std::string render_table_csv(const DataTable& table);
DataTable parse_table_csv(const std::string& text);
void write_table(const DataTable& table, const std::filesystem::path& path);
DataTable read_table(const std::filesystem::path& path);

// Plain-text correlation matrix: one row per line, whitespace-separated.
CorrelationMatrix read_correlation_matrix(const std::filesystem::path& path);
CorrelationMatrix parse_correlation_matrix(const std::string& text);

struct LocalityCheckResult {
  double max_residual = 0.0;
  bool vacuous = false;  // alpha*beta == 0: all expectations identically 0
  std::string note;
};

// Largest change of E(X|theta1, theta2, theta) when the distant setting
// theta2 sweeps a uniform grid while (theta, theta1) stay fixed (36-point
// theta grid), plus the mirrored check of E(Y) against theta1. Both
// expectations come from the propagated network, so a wiring fault that
// leaks the distant setting shows up as a nonzero residual.
LocalityCheckResult locality_check(const ExperimentConfig& config,
                                   int theta2_grid_points = 360);

// Seam for fault-injection tests: same check over a custom network.
using NetworkFn =
    std::function<DetectorFields(const InterferometerConfig&, double)>;
LocalityCheckResult locality_check_network(const InterferometerConfig& config,
                                           const NetworkFn& network,
                                           int distant_grid_points = 360,
                                           int theta_grid_points = 36);

// Batched Monte Carlo CHSH: estimates all four correlations from a common
// hidden-phase stream and combines them into S, with a batch-means
// standard error for the combination.
MomentEstimate mc_estimate_chsh(const InterferometerConfig& base,
                                const std::array<double, 4>& angles,
                                std::uint64_t samples, std::uint64_t seed);

struct CorrelationSection {
  double analytic = 0.0;    // -sin(theta1 - theta2)
  double quadrature = 0.0;  // intensity_correlation()
  std::optional<MomentEstimate> mc;
};

struct ChshSection {
  std::array<double, 4> angles_deg{};  // theta1, theta2, theta1', theta2'
  double rho_12 = 0.0, rho_12p = 0.0, rho_1p2 = 0.0, rho_1p2p = 0.0;
  double s_value = 0.0;
  bool violated = false;
  std::optional<MomentEstimate> mc_s;
  CompletionResult completion;
};

struct MatrixSection {
  std::vector<double> angles_deg;
  Eigen::MatrixXd matrix;
  double bell3 = 0.0;
  bool bell3_satisfied = false;
  std::vector<double> eigenvalues;
  double determinant = 0.0;
  bool joint_exists = false;
  double psd_tolerance = kPsdTolerance;
  std::optional<bool> discrete_feasible;
  double lp_tolerance = 1e-9;
};

struct CountsSection {
  double visibility = 0.0;
  double analytic_value = 0.0;
  double closed_form = 0.0;
  std::optional<MomentEstimate> mc;
};

struct LocalitySection {
  double max_residual = 0.0;
  double threshold = 1e-12;
  bool pass = false;
  bool vacuous = false;
  std::string note;
};

struct RunReport {
  ExperimentConfig config;
  std::optional<CorrelationSection> correlation;
  std::optional<ChshSection> chsh;
  std::optional<MatrixSection> bell3_matrix;    // settings 0, 45, 90 degrees
  std::optional<MatrixSection> counterexample;  // settings 0, 30, 45 degrees
  std::optional<CountsSection> counts;
  std::optional<LocalitySection> locality;
  std::vector<std::string> notes;
};

struct RunOutput {
  DataTable table;
  RunReport report;
};

// Executes the configured mode. Deterministic: identical configs produce
// byte-identical tables and reports. Degenerate setups (fixed hidden
// phase, alpha*beta == 0) downgrade the affected sections to notes
// instead of failing the run.
RunOutput run_experiment(const ExperimentConfig& config);

enum class ReportFormat { text, json };

std::string render_report(const RunReport& report, ReportFormat format);

}  // namespace bellfield
