#pragma once

#include <cstdint>
#include <vector>

#include "tqst/core.hpp"
#include "tqst/random.hpp"
#include "tqst/threshold.hpp"

namespace tqst {

enum class Sampling : std::uint8_t { Exact, Multinomial };

struct NoiseModel {
  double depolarizing = 0.0;
  Sampling sampling = Sampling::Multinomial;
  std::uint64_t seed = 0;
};

/// (1/sqrt n) sum_k |0..1_k..0>.
DensityMatrix w_state(int n_qubits);

/// (|0..0> + |1..1>) / sqrt 2.
DensityMatrix ghz_state(int n_qubits);

/// Seven-qubit color-code logical codeword |0bar> or |1bar>.
DensityMatrix color_code_state(int logical);

/// Basis indices of the color-code codeword components, leftmost ket symbol most significant.
std::vector<Index> color_code_support(int logical);

/// Random pure state on ceil(filling * 2^n) uniformly chosen basis indices with
/// complex Gaussian amplitudes. Deterministic per seed.
DensityMatrix random_filled_state(int n_qubits, double filling, std::uint64_t seed);

/// (1 - lambda) rho + lambda I / 2^n.
DensityMatrix apply_depolarizing(const DensityMatrix& rho, double lambda);

/// Diagonal of the noisy state, sampled once as a multinomial (or apportioned
/// exactly by largest remainders so the counts still sum to `shots`).
DiagonalRecord sample_diagonal(const DensityMatrix& rho, std::int64_t shots, const NoiseModel& noise);

struct SampledCounts {
  DiagonalRecord diagonal;
  /// One record per plan target, in plan order.
  std::vector<CountRecord> records;
};

/// Diagonal targets take their counts from the diagonal record; every
/// off-diagonal target is an independent binomial keyed by its element, so a
/// given seed yields the same count for that element in any plan.
SampledCounts sample_counts(const DensityMatrix& rho, const MeasurementPlan& plan, std::int64_t shots,
                            const NoiseModel& noise);

/// Multinomial draw over `probabilities` (normalized internally).
std::vector<std::int64_t> sample_multinomial(const RealVector& probabilities, std::int64_t shots, Rng& rng);

/// Largest-remainder apportionment of `shots` to `probabilities`.
std::vector<std::int64_t> apportion_exact(const RealVector& probabilities, std::int64_t shots);

}  // namespace tqst
