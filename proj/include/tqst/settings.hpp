#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tqst/core.hpp"
#include "tqst/threshold.hpp"

namespace tqst {

enum class PauliBasis : std::uint8_t { X, Y, Z };

char to_char(PauliBasis b);
PauliBasis pauli_basis_from_char(char c);

/// Per-qubit Pauli basis word; qubit 0 is the most significant outcome bit.
class PauliSetting {
 public:
  PauliSetting() = default;
  explicit PauliSetting(std::vector<PauliBasis> bases) : bases_(std::move(bases)) {}

  static PauliSetting from_word(std::string_view word);
  std::string word() const;
  int size() const { return static_cast<int>(bases_.size()); }
  const std::vector<PauliBasis>& bases() const { return bases_; }
  Index outcome_count() const { return Index{1} << size(); }

  /// Product eigenvector for outcome k: bit 0 on a qubit selects H, D or R.
  ProductProjector outcome_projector(Index k) const;

  friend bool operator==(const PauliSetting&, const PauliSetting&) = default;
  friend auto operator<=>(const PauliSetting&, const PauliSetting&) = default;

 private:
  std::vector<PauliBasis> bases_;
};

/// H/V -> Z, D/A -> X, R/L -> Y.
PauliSetting setting_of(const ProductProjector& p);

/// Settings of every plan target, first occurrence order, no repeats.
std::vector<PauliSetting> settings_for_plan(const MeasurementPlan& plan);

/// Outcome distribution <v_k|rho|v_k>, k = 0 .. 2^n - 1.
RealVector outcome_probabilities(const Matrix& rho, const PauliSetting& s);

/// sum_k (-1)^popcount(k) <v_k|rho|v_k>.
double pauli_correlator(const Matrix& rho, const PauliSetting& s);
double pauli_correlator(const DensityMatrix& rho, const PauliSetting& s);

/// Seeded multinomial histogram over the 2^n outcomes.
std::vector<std::int64_t> sample_setting_counts(const DensityMatrix& rho, const PauliSetting& s, std::int64_t shots,
                                                std::uint64_t seed);

/// Parity-weighted empirical average of a histogram.
double correlator_from_histogram(const std::vector<std::int64_t>& histogram);

}  // namespace tqst
