#pragma once

#include "parityprobe/metrics/metrics.hpp"
#include "parityprobe/protocol/device.hpp"
#include "parityprobe/protocol/simulate.hpp"
#include "parityprobe/serialize.hpp"
#include "parityprobe/tomo/estimators.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace parityprobe {

/// Config file did not validate against the schema.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

enum class HeraldSetting { Off, On, Both };

struct ExperimentConfig {
  DeviceParams device = DeviceParams::reference();
  bool noise = true;
  std::vector<SubsetParitySpec> operators;
  std::int64_t shots_per_rotation = 0;  // 0 = exact probabilities
  HeraldSetting herald = HeraldSetting::Off;
  std::uint64_t seed = 1;
  std::string output_dir = "results";
  double step_ns = 2.0;
  std::int64_t scan_shots = 0;  // preparation-scan sampling; 0 = exact
  int scan_points = 17;         // angles per scanned qubit
  int s_restarts = 32;          // restarts for worst-case optimizers
  bool instrument_s_measures = false;

  void validate() const;
  static ExperimentConfig from_json(const Json& j);
  Json to_json() const;
};

Json device_to_json(const DeviceParams& p);
DeviceParams device_from_json(const Json& j);

/// All figures of merit for one operator x herald combination.
struct MetricReport {
  std::string op;
  bool herald = false;
  double herald_probability = 1.0;
  double tp_defect = 0.0;
  AssignmentFit assignment;
  SpecificityReport spec_report;
  double det_f_j = 0.0, det_d_j = 0.0;  // detector channel vs ideal
  double det_f_s = 0.0, det_d_s = 0.0;  // worst-case detector measures
  double qi_f_j = 0.0, qi_d_j = 0.0;    // instrument channel vs ideal
  std::optional<double> qi_f_s, qi_d_s;
  FitDiagnostics detector_fit;
  FitDiagnostics instrument_fit;

  Json to_json() const;
  static MetricReport from_json(const Json& j);
};

/// One angle-scan sample: product preparation with `angle` on `qubit`
/// (others at zero) and the observed click statistics.
struct ScanRow {
  int qubit = 0;
  double angle = 0.0;
  double frequency = 0.0;
  std::int64_t shots = 0;  // 0 = exact probability
};

struct RunArtifacts {
  std::string op;
  bool herald = false;
  std::filesystem::path dir;
  MetricReport report;
  std::vector<ScanRow> scan;
};

/// Simulate -> tomograph -> metrics for every operator x herald setting in
/// the config; writes all artifacts under config.output_dir plus a manifest
/// with the config hash and seed. Jobs run on a worker pool capped by
/// PARITYPROBE_THREADS.
std::vector<RunArtifacts> run_experiment(const ExperimentConfig& config);

/// Re-emit the four figure-of-merit tables and the preparation-scan CSV
/// from a results directory written by run_experiment. Returns the paths
/// written; missing artifacts are listed on stderr and skipped.
std::vector<std::filesystem::path> write_report_tables(
    const std::filesystem::path& results_dir);

struct ScheduleDiagnostics {
  std::string op;
  double window_ns = 0.0;
  std::array<double, 3> partial_echo_ns{};
  double overlap = 0.0;         // residual even/odd pointer overlap
  double tail_mass = 0.0;       // Fock-truncation leakage bound
  double max_mean_photon = 0.0;
  double estimated_seconds = 0.0;
  bool overlap_warning = false;  // overlap > 1e-2
  bool tail_failure = false;     // tail mass > 1e-8
};

/// Static schedule checks for every operator in the config (no
/// simulation). Used by the validate command.
std::vector<ScheduleDiagnostics> validate_experiment(
    const ExperimentConfig& config);

}  // namespace parityprobe
