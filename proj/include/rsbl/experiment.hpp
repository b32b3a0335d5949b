#pragma once

#include "rsbl/forward_models.hpp"
#include "rsbl/solver.hpp"
#include "rsbl/transforms.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace rsbl {

struct ModelSpec {
  ModelKind kind = ModelKind::identity;
  double gamma = 0.0;  // blur
  double ratio = 0.0;  // subsample, partial_fourier
  std::uint64_t mask_seed = 0;
  double snr_db = 20.0;
  std::uint64_t noise_seed = 0;
};

struct PriorSpec {
  TransformKind kind = TransformKind::residual;
  int p = 0;
  double zeta = 0.25;
  double vartheta = 1e-4;
};

enum class Pairing {
  per_signal,  // signal i is observed by measurement i only
  all          // every signal is observed by every measurement
};

struct UqSpec {
  bool enabled = false;
  double level = 0.99;
  int samples = 0;
  std::uint64_t seed = 0;
};

/// One experiment matrix. Replicate t (0-based) adds t to every mask and noise seed.
struct ExperimentConfig {
  std::string name = "experiment";
  int dims = 1;
  int n = 128;
  std::vector<std::string> signals;  // f1..f6, mixed1..3 (dims 1) or h1..h3 (dims 2)
  std::optional<std::filesystem::path> image_file;
  bool crop = false;
  std::vector<ModelSpec> measurements;
  Pairing pairing = Pairing::per_signal;
  std::vector<PriorSpec> priors;
  HyperParams hyper;
  bool separate = true;
  bool joint = false;
  int replicates = 1;
  UqSpec uq;
  bool write_files = true;
};

/// Parses JSON text; unknown keys and missing seeds are errors.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Bundled suites: "single_f123", "single_f456", "joint_f3", "images_h123".
ExperimentConfig bundled_suite(const std::string& name);

struct CellResult {
  std::string signal;
  PriorSpec prior;
  std::string mode;  // "separate" or "joint"
  int replicate = 0;
  /// Mean abs error averaged over the measurements of this cell.
  double mean_abs = 0.0;
  /// Per measurement.
  std::vector<double> member_mean_abs;
  std::vector<Eigen::VectorXd> estimates;
  Eigen::VectorXd truth;
  PosteriorResult posterior;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<CellResult> cells;

  /// Replicate-averaged mean abs error of one (signal, prior kind, mode), NaN if absent.
  double average(const std::string& signal, TransformKind prior, const std::string& mode) const;
};

std::string prior_label(const PriorSpec& prior);

/// Runs the full matrix. When out_dir is set and config.write_files is true, writes
/// per-cell CSVs (and PGMs in 2D), traces, credible bands and summary.txt.
ExperimentResult run_experiment(const ExperimentConfig& config,
                                const std::optional<std::filesystem::path>& out_dir = std::nullopt,
                                std::ostream* log = nullptr);

/// key=value lines, one per cell plus replicate averages.
void write_summary(std::ostream& out, const ExperimentResult& result);

/// Builds the measurement operator for a spec at the given replicate.
LinearForwardModel make_model(const ModelSpec& spec, int n, int dims, int replicate);

}  // namespace rsbl
