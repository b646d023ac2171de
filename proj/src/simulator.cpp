#include "tqst/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace tqst {

namespace {

void check_qubits(int n_qubits, int max_qubits = 16) {
  if (n_qubits < 1 || n_qubits > max_qubits) {
    throw std::invalid_argument("qubit count must lie in [1, " + std::to_string(max_qubits) + "]");
  }
}

Vector ket_from_bits(int n_qubits, std::span<const char* const> bitstrings) {
  Vector ket = Vector::Zero(Index{1} << n_qubits);
  for (const char* bits : bitstrings) ket(std::stoll(bits, nullptr, 2)) = 1.0;
  return ket / ket.norm();
}

constexpr const char* kColorZero[] = {"1010101", "1100011", "0101101", "0011011",
                                      "1001110", "0110110", "1111000", "0000000"};
constexpr const char* kColorOne[] = {"0101010", "1010010", "0011100", "1100100",
                                     "0110001", "1001001", "0000111", "1111111"};

std::span<const char* const> color_code_bits(int logical) {
  if (logical == 0) return kColorZero;
  if (logical == 1) return kColorOne;
  throw std::invalid_argument("color-code logical value must be 0 or 1");
}

std::uint64_t target_seed(std::uint64_t seed, const MatrixElementIndex& idx) {
  std::uint64_t s = derive_seed(seed, kStreamTargetBase);
  s = derive_seed(s, static_cast<std::uint64_t>(idx.i));
  return derive_seed(s, 3 * static_cast<std::uint64_t>(idx.j) + static_cast<std::uint64_t>(idx.part));
}

}  // namespace

DensityMatrix w_state(int n_qubits) {
  check_qubits(n_qubits);
  Vector ket = Vector::Zero(Index{1} << n_qubits);
  for (int k = 0; k < n_qubits; ++k) ket(Index{1} << k) = 1.0;
  return DensityMatrix::pure(ket);
}

DensityMatrix ghz_state(int n_qubits) {
  check_qubits(n_qubits);
  Vector ket = Vector::Zero(Index{1} << n_qubits);
  ket(0) = 1.0;
  ket(ket.size() - 1) = 1.0;
  return DensityMatrix::pure(ket);
}

std::vector<Index> color_code_support(int logical) {
  std::vector<Index> out;
  for (const char* bits : color_code_bits(logical)) out.push_back(std::stoll(bits, nullptr, 2));
  return out;
}

DensityMatrix color_code_state(int logical) { return DensityMatrix::pure(ket_from_bits(7, color_code_bits(logical))); }

DensityMatrix random_filled_state(int n_qubits, double filling, std::uint64_t seed) {
  check_qubits(n_qubits);
  if (!(filling > 0.0 && filling <= 1.0)) throw std::invalid_argument("filling must lie in (0, 1]");
  const Index dim = Index{1} << n_qubits;
  const Index support = std::clamp<Index>(static_cast<Index>(std::ceil(filling * double(dim) - 1e-9)), 1, dim);

  Rng rng = make_rng(seed, kStreamState);
  std::vector<Index> indices(static_cast<std::size_t>(dim));
  std::iota(indices.begin(), indices.end(), Index{0});
  std::shuffle(indices.begin(), indices.end(), rng);

  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector ket = Vector::Zero(dim);
  for (Index k = 0; k < support; ++k) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    ket(indices[static_cast<std::size_t>(k)]) = Complex(re, im);
  }
  return DensityMatrix::pure(ket);
}

DensityMatrix apply_depolarizing(const DensityMatrix& rho, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("depolarizing strength must lie in [0, 1]");
  const Index d = rho.dim();
  Matrix out = (1.0 - lambda) * rho.matrix();
  out.diagonal().array() += lambda / double(d);
  return DensityMatrix(std::move(out), rho.tolerance());
}

std::vector<std::int64_t> sample_multinomial(const RealVector& probabilities, std::int64_t shots, Rng& rng) {
  if (shots < 0) throw std::invalid_argument("shots must be non-negative");
  std::vector<std::int64_t> counts(static_cast<std::size_t>(probabilities.size()), 0);
  double remaining_mass = 0.0;
  for (Index k = 0; k < probabilities.size(); ++k) remaining_mass += std::max(0.0, probabilities(k));
  std::int64_t remaining = shots;
  // Sequential conditional binomials.
  for (Index k = 0; k < probabilities.size() && remaining > 0; ++k) {
    const double p = std::max(0.0, probabilities(k));
    if (k == probabilities.size() - 1 || remaining_mass <= 0.0) {
      counts[static_cast<std::size_t>(k)] = p > 0.0 || remaining_mass <= 0.0 ? remaining : 0;
      remaining -= counts[static_cast<std::size_t>(k)];
      break;
    }
    const double cond = std::clamp(p / remaining_mass, 0.0, 1.0);
    std::binomial_distribution<std::int64_t> draw(remaining, cond);
    const std::int64_t c = cond > 0.0 ? draw(rng) : 0;
    counts[static_cast<std::size_t>(k)] = c;
    remaining -= c;
    remaining_mass -= p;
  }
  if (remaining > 0) {
    // Round-off left mass unassigned; give it to the most likely outcome.
    Index best = 0;
    probabilities.maxCoeff(&best);
    counts[static_cast<std::size_t>(best)] += remaining;
  }
  return counts;
}

std::vector<std::int64_t> apportion_exact(const RealVector& probabilities, std::int64_t shots) {
  const Index d = probabilities.size();
  std::vector<std::int64_t> counts(static_cast<std::size_t>(d));
  std::vector<std::pair<double, Index>> remainders;
  const double total = probabilities.cwiseMax(0.0).sum();
  std::int64_t assigned = 0;
  for (Index k = 0; k < d; ++k) {
    const double share = total > 0.0 ? std::max(0.0, probabilities(k)) / total * double(shots) : 0.0;
    const auto whole = static_cast<std::int64_t>(std::floor(share));
    counts[static_cast<std::size_t>(k)] = whole;
    assigned += whole;
    remainders.emplace_back(share - double(whole), k);
  }
  // Largest remainder first; ties go to the lower index.
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t k = 0; assigned < shots && k < remainders.size(); ++k, ++assigned) {
    ++counts[static_cast<std::size_t>(remainders[k].second)];
  }
  return counts;
}

DiagonalRecord sample_diagonal(const DensityMatrix& rho, std::int64_t shots, const NoiseModel& noise) {
  if (shots < 1) throw std::invalid_argument("shots must be at least 1");
  const DensityMatrix noisy = apply_depolarizing(rho, noise.depolarizing);
  const RealVector probs = noisy.diagonal().cwiseMax(0.0);
  if (noise.sampling == Sampling::Exact) return DiagonalRecord(apportion_exact(probs, shots), shots);
  Rng rng = make_rng(noise.seed, kStreamDiagonal);
  return DiagonalRecord(sample_multinomial(probs, shots, rng), shots);
}

SampledCounts sample_counts(const DensityMatrix& rho, const MeasurementPlan& plan, std::int64_t shots,
                            const NoiseModel& noise) {
  if (shots < 1) throw std::invalid_argument("shots must be at least 1");
  if (plan.n_qubits != rho.n_qubits()) throw std::invalid_argument("plan and state have different qubit counts");
  const DensityMatrix noisy = apply_depolarizing(rho, noise.depolarizing);
  SampledCounts out{sample_diagonal(rho, shots, noise), {}};
  out.records.reserve(plan.targets.size());
  for (const auto& target : plan.targets) {
    if (target.projector.size() != plan.n_qubits) throw std::invalid_argument("plan projector has wrong length");
    std::int64_t observed = 0;
    if (target.element.part == ElementPart::Diag) {
      observed = out.diagonal.counts()[static_cast<std::size_t>(target.element.i)];
    } else {
      const double p = std::clamp(expectation(noisy, target.projector), 0.0, 1.0);
      if (noise.sampling == Sampling::Exact) {
        observed = static_cast<std::int64_t>(std::llround(p * double(shots)));
      } else {
        Rng rng(target_seed(noise.seed, target.element));
        std::binomial_distribution<std::int64_t> draw(shots, p);
        observed = draw(rng);
      }
    }
    out.records.push_back(CountRecord::make(target.projector, observed, shots));
  }
  return out;
}

}  // namespace tqst
