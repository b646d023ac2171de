#include "tqst/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "tqst/projectors.hpp"

namespace tqst {

DiagonalRecord::DiagonalRecord(std::vector<std::int64_t> counts, std::int64_t shots)
    : counts_(std::move(counts)), shots_(shots), n_qubits_(qubits_for_dimension(static_cast<Index>(counts_.size()))) {
  if (shots_ <= 0) throw std::invalid_argument("diagonal record needs positive shots");
  std::int64_t total = 0;
  for (auto c : counts_) {
    if (c < 0) throw std::invalid_argument("negative diagonal count");
    total += c;
  }
  if (total != shots_) {
    throw std::invalid_argument("diagonal counts sum to " + std::to_string(total) + ", expected " +
                                std::to_string(shots_));
  }
}

RealVector DiagonalRecord::probabilities() const {
  RealVector p(dim());
  for (Index k = 0; k < dim(); ++k) p(k) = double(counts_[static_cast<std::size_t>(k)]) / double(shots_);
  return p;
}

std::size_t MeasurementPlan::offdiagonal_pairs() const {
  std::size_t re = 0;
  for (const auto& t : targets) re += t.element.part == ElementPart::Re;
  return re;
}

MeasurementPlan select_offdiagonal(const RealVector& p, double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw std::invalid_argument("threshold must lie in [0, 1]");
  const int n = qubits_for_dimension(p.size());
  MeasurementPlan plan;
  plan.n_qubits = n;
  plan.threshold = threshold;
  const Index dim = p.size();
  plan.targets.reserve(static_cast<std::size_t>(dim));
  for (Index k = 0; k < dim; ++k) {
    plan.targets.push_back({{k, k, ElementPart::Diag}, ProductProjector::basis(n, k)});
  }
  for (Index i = 0; i < dim; ++i) {
    for (Index j = i + 1; j < dim; ++j) {
      if (std::sqrt(std::max(0.0, p(i) * p(j))) < threshold) continue;
      for (auto part : {ElementPart::Re, ElementPart::Im}) {
        const MatrixElementIndex idx{i, j, part};
        plan.targets.push_back({idx, projector_for(n, idx)});
      }
    }
  }
  return plan;
}

MeasurementPlan select_offdiagonal(const DiagonalRecord& diag, double threshold) {
  return select_offdiagonal(diag.probabilities(), threshold);
}

ThresholdEstimate threshold_from_extremes(double c0_max, double c_min, double noise_multiplier, std::int64_t shots) {
  if (shots <= 0) throw std::invalid_argument("shots must be positive");
  ThresholdEstimate e;
  e.t0 = c0_max + noise_multiplier * std::sqrt(c0_max);
  e.t_signal = c_min - noise_multiplier * std::sqrt(c_min);
  e.t = std::max(e.t0, e.t_signal) / double(shots);
  e.favorable = e.t_signal > e.t0;
  return e;
}

ThresholdEstimate estimate_threshold(const RealVector& ideal, std::span<const DiagonalRecord> noisy_runs,
                                     int n_qubits, std::optional<double> noise_multiplier) {
  constexpr double kZero = 1e-12;
  if (noisy_runs.size() < 2) throw std::invalid_argument("threshold estimation needs at least two noisy runs");
  if (std::abs(ideal.sum() - 1.0) > 1e-9) throw std::invalid_argument("ideal diagonal must sum to one");
  const std::int64_t shots = noisy_runs.front().shots();
  for (const auto& run : noisy_runs) {
    if (run.shots() != shots) throw std::invalid_argument("noisy runs must share the shot count");
    if (run.dim() != ideal.size()) throw std::invalid_argument("noisy run dimension differs from ideal");
  }

  double smallest = std::numeric_limits<double>::infinity();
  for (Index k = 0; k < ideal.size(); ++k) {
    if (ideal(k) >= kZero) smallest = std::min(smallest, ideal(k));
  }
  if (!std::isfinite(smallest)) throw std::invalid_argument("ideal diagonal has no expected-nonzero entries");

  std::int64_t c0_max = 0;
  std::int64_t c_min = std::numeric_limits<std::int64_t>::max();
  for (const auto& run : noisy_runs) {
    for (Index k = 0; k < ideal.size(); ++k) {
      const auto c = run.counts()[static_cast<std::size_t>(k)];
      if (ideal(k) < kZero) {
        c0_max = std::max(c0_max, c);
      } else if (ideal(k) <= smallest * (1.0 + 1e-9)) {
        // Ties for the smallest expected entry are all taken into account.
        c_min = std::min(c_min, c);
      }
    }
  }
  return threshold_from_extremes(double(c0_max), double(c_min), noise_multiplier.value_or(double(n_qubits)), shots);
}

}  // namespace tqst
