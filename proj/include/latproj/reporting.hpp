#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "latproj/analysis.hpp"
#include "latproj/fourier.hpp"
#include "latproj/geometry.hpp"

#include <json.hpp>

namespace latproj {

// Exit codes shared by run() and the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitBudgetError = 3;
inline constexpr int kExitThresholdFailure = 4;

enum class ExperimentKind { Count, Converge, RotateAverage, FourierDecay, VerifyIdentity, Theory };

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Count;
  int n = 2;
  std::string body = "ball";  // ball | ellipsoid | superellipsoid | polygon | square | density-body
  std::vector<double> axes{2.0, 1.0};
  int k = 2;
  std::vector<double> polygon_normals;  // flattened (x, y) pairs
  std::vector<double> polygon_offsets;
  std::string density = "from-body";  // builtin id, or radial^n of the body
  std::string f = "one";
  double rho = 10.0;  // single-rho count
  double rho_start = 4.0, rho_stop = 64.0;
  int per_octave = 8;
  std::uint64_t jitter_seed = 1;
  int rotations = 0;    // ensemble size; 0 = identity rotation
  std::optional<double> angle;  // fixed 2-D rotation angle
  std::uint64_t seed = 12345;
  std::string out = "run";
  int workers = 1;
  std::int64_t mc_samples = 10'000'000;
  std::string transform = "surface";  // surface | shell
  double r_start = 16.0, r_stop = 256.0;
  double r_step = 0.2;
  int directions = 4;
  std::string method = "dyadic-envelope";  // dyadic-envelope | all-points
};

// Returns a diagnostic for an invalid config, or nullopt when it validates.
std::optional<std::string> validate(const ExperimentConfig& cfg);

// Flat key=value file; '#' starts a comment. Unknown keys are rejected.
ExperimentConfig load_config_file(const std::string& path);
void apply_key_value(ExperimentConfig& cfg, const std::string& key, const std::string& value);

struct RunRecord {
  nlohmann::json j;
};

// Dispatches the configured experiment, writes <out>.csv and <out>.json, and
// returns a process exit code.
int run(const ExperimentConfig& cfg, RunRecord* record = nullptr);

// 17 significant digits, enough to round-trip a double.
std::string fmt17(double v);

void write_residual_csv(const std::string& path, const ResidualSeries& series);
void write_profile_csv(const std::string& path, const std::vector<DecayProfile>& profiles);

// Plot-ready files from a run record holding a residual series or decay
// profile: (log10 rho, log10 |R|) data, a two-point fitted line, and a
// summary naming the theoretical exponent.
void emit_plot_data(const RunRecord& record, const std::string& out_base);

StarBody body_from_config(const ExperimentConfig& cfg);
SphereField density_from_config(const ExperimentConfig& cfg, const StarBody& body);
SphereField test_function_from_config(const std::string& id);

std::string theory_summary(const TheoryExponents& t);

}  // namespace latproj
