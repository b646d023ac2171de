#pragma once

#include <optional>
#include <span>
#include <vector>

#include "tqst/core.hpp"

namespace tqst {

/// Computational-basis counts from one diagonal measurement run.
class DiagonalRecord {
 public:
  /// Throws unless counts are non-negative, 2^n long and sum to `shots`.
  DiagonalRecord(std::vector<std::int64_t> counts, std::int64_t shots);

  const std::vector<std::int64_t>& counts() const { return counts_; }
  std::int64_t shots() const { return shots_; }
  int n_qubits() const { return n_qubits_; }
  Index dim() const { return static_cast<Index>(counts_.size()); }

  /// Raw relative frequencies counts / shots.
  RealVector probabilities() const;

 private:
  std::vector<std::int64_t> counts_;
  std::int64_t shots_;
  int n_qubits_;
};

struct PlanTarget {
  MatrixElementIndex element;
  ProductProjector projector;
};

struct MeasurementPlan {
  int n_qubits = 0;
  double threshold = 0.0;
  /// All 2^n diagonal targets in index order, then selected (re, im) pairs.
  std::vector<PlanTarget> targets;

  std::size_t size() const { return targets.size(); }
  std::size_t offdiagonal_pairs() const;
};

/// Keeps every pair i < j with sqrt(p_i p_j) >= t (inclusive), p from the
/// diagonal record. t = 0 keeps every pair.
MeasurementPlan select_offdiagonal(const DiagonalRecord& diag, double threshold);
MeasurementPlan select_offdiagonal(const RealVector& probabilities, double threshold);

struct ThresholdEstimate {
  double t0 = 0.0;        ///< noise threshold, in counts
  double t_signal = 0.0;  ///< signal threshold, in counts
  double t = 0.0;         ///< max(t0, t_signal) / n_s
  bool favorable = false; ///< t_signal > t0
};

/// Thresholds from the count extremes: t0 = c0 + k sqrt(c0), t_signal = c - k sqrt(c).
ThresholdEstimate threshold_from_extremes(double c0_max, double c_min, double noise_multiplier, std::int64_t shots);

/// Circuit-specific threshold from an ideal diagonal and noisy replicas. Entries
/// of `ideal` below 1e-12 are expected to vanish. The noise multiplier defaults
/// to the qubit count.
ThresholdEstimate estimate_threshold(const RealVector& ideal, std::span<const DiagonalRecord> noisy_runs,
                                     int n_qubits, std::optional<double> noise_multiplier = std::nullopt);

}  // namespace tqst
