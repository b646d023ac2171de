#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tqst/core.hpp"
#include "tqst/mle.hpp"
#include "tqst/settings.hpp"
#include "tqst/simulator.hpp"
#include "tqst/threshold.hpp"

namespace tqst {

enum class StateKind : std::uint8_t { W, Ghz, ColorCode0, ColorCode1, Random };

StateKind parse_state_kind(const std::string& name);
std::string to_string(StateKind kind);

struct StateSpec {
  StateKind kind = StateKind::W;
  /// Ignored for the color-code states, which are always 7 qubits.
  int n_qubits = 0;
  double filling = 0.5;
};

/// Random states draw from `seed`; the others ignore it.
DensityMatrix make_state(const StateSpec& spec, std::uint64_t seed);

struct ThresholdSpec {
  bool automatic = false;
  double value = 0.0;
  std::optional<double> noise_multiplier;
  /// Noisy diagonal replicas simulated for the automatic threshold.
  int runs = 20;
};

/// "auto" or a literal in [0, 1].
ThresholdSpec parse_threshold(const std::string& text);

struct PipelineConfig {
  std::optional<StateSpec> state;
  std::optional<std::filesystem::path> diag_file;
  std::optional<std::filesystem::path> counts_file;
  /// Automatic threshold from files: ideal probabilities plus noisy diagonal runs.
  std::optional<std::filesystem::path> ideal_file;
  std::vector<std::filesystem::path> run_files;
  /// Reference state for the fidelity report when counts are ingested.
  std::optional<std::filesystem::path> target_file;

  std::optional<ThresholdSpec> threshold;
  std::int64_t shots = 8192;
  std::uint64_t seed = 0;
  double depolarizing = 0.0;
  Sampling sampling = Sampling::Multinomial;
  MleOptions mle;

  /// Throws std::invalid_argument on inconsistent combinations.
  void validate() const;
};

struct FidelityReport {
  double root_fidelity = 0.0;
  double fidelity = 0.0;
  double trace_distance = 0.0;
  double purity_target = 0.0;
  double purity_estimate = 0.0;
  int rank_target = 0;
  int rank_estimate = 0;
  std::optional<double> fidelity_bound;
};

FidelityReport compare_states(const DensityMatrix& target, const DensityMatrix& estimate);
std::string report_to_json(const FidelityReport& report);

struct PipelineResult {
  std::optional<DensityMatrix> target;
  DiagonalRecord diagonal;
  std::optional<ThresholdEstimate> threshold_estimate;
  std::optional<double> threshold;
  /// Absent when counts were ingested from files.
  std::optional<MeasurementPlan> plan;
  /// Diagonal records in index order, then off-diagonal records. This is the MLE input.
  std::vector<CountRecord> records;
  std::vector<PauliSetting> settings;
  ReconstructionResult reconstruction;
  std::optional<FidelityReport> report;
  /// Worst-case fidelity for the applied threshold, rank taken from the estimate.
  std::optional<double> fidelity_bound;

  /// 0 on success, 3 when the optimizer did not converge.
  int exit_status() const { return reconstruction.converged ? 0 : 3; }
  /// Off-diagonal records only.
  std::vector<CountRecord> offdiagonal_records() const;
};

/// Diagonal measurement or ingest, threshold, plan, off-diagonal measurement or
/// ingest, reconstruction, in that order.
PipelineResult run_pipeline(const PipelineConfig& config);

/// plan.csv (when a plan exists), counts.csv, diag.csv, rho.json,
/// diagnostics.json, settings.csv and fidelity.json (when a target is known).
void write_artifacts(const PipelineResult& result, const std::filesystem::path& dir);

/// Records fed to the reconstruction for files written by write_artifacts or `simulate`.
std::vector<CountRecord> load_records(const std::filesystem::path& diag_file, const std::filesystem::path& counts_file);

}  // namespace tqst
