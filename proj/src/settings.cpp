#include "tqst/settings.hpp"

#include <algorithm>
#include <bit>
#include <set>

#include "tqst/random.hpp"
#include "tqst/simulator.hpp"

namespace tqst {

char to_char(PauliBasis b) {
  switch (b) {
    case PauliBasis::X: return 'X';
    case PauliBasis::Y: return 'Y';
    case PauliBasis::Z: return 'Z';
  }
  throw std::logic_error("unknown Pauli basis");
}

PauliBasis pauli_basis_from_char(char c) {
  switch (c) {
    case 'X': return PauliBasis::X;
    case 'Y': return PauliBasis::Y;
    case 'Z': return PauliBasis::Z;
    default: throw std::invalid_argument(std::string("invalid Pauli basis '") + c + "'");
  }
}

PauliSetting PauliSetting::from_word(std::string_view word) {
  if (word.empty()) throw std::invalid_argument("empty setting word");
  std::vector<PauliBasis> bases;
  for (char c : word) bases.push_back(pauli_basis_from_char(c));
  return PauliSetting(std::move(bases));
}

std::string PauliSetting::word() const {
  std::string out;
  for (auto b : bases_) out.push_back(to_char(b));
  return out;
}

ProductProjector PauliSetting::outcome_projector(Index k) const {
  if (k < 0 || k >= outcome_count()) throw std::out_of_range("outcome index out of range");
  std::vector<PolarizationState> states;
  const int n = size();
  for (int q = 0; q < n; ++q) {
    const bool minus = ((k >> (n - 1 - q)) & 1) != 0;
    switch (bases_[static_cast<std::size_t>(q)]) {
      case PauliBasis::Z: states.push_back(minus ? PolarizationState::V : PolarizationState::H); break;
      case PauliBasis::X: states.push_back(minus ? PolarizationState::A : PolarizationState::D); break;
      case PauliBasis::Y: states.push_back(minus ? PolarizationState::L : PolarizationState::R); break;
    }
  }
  return ProductProjector(std::move(states));
}

PauliSetting setting_of(const ProductProjector& p) {
  if (p.empty()) throw std::invalid_argument("empty projector");
  std::vector<PauliBasis> bases;
  for (auto s : p.states()) {
    switch (s) {
      case PolarizationState::H:
      case PolarizationState::V: bases.push_back(PauliBasis::Z); break;
      case PolarizationState::D:
      case PolarizationState::A: bases.push_back(PauliBasis::X); break;
      case PolarizationState::R:
      case PolarizationState::L: bases.push_back(PauliBasis::Y); break;
    }
  }
  return PauliSetting(std::move(bases));
}

std::vector<PauliSetting> settings_for_plan(const MeasurementPlan& plan) {
  if (plan.targets.empty()) throw std::invalid_argument("empty measurement plan");
  std::vector<PauliSetting> out;
  std::set<PauliSetting> seen;
  for (const auto& t : plan.targets) {
    PauliSetting s = setting_of(t.projector);
    if (seen.insert(s).second) out.push_back(std::move(s));
  }
  return out;
}

RealVector outcome_probabilities(const Matrix& rho, const PauliSetting& s) {
  const Index d = rho.rows();
  if (rho.cols() != d || d != s.outcome_count()) throw std::invalid_argument("setting and state dimensions differ");
  // rho' = U rho U^dag with U = tensor of per-qubit rows <plus|, <minus|.
  Matrix m = rho;
  const int n = s.size();
  for (int q = 0; q < n; ++q) {
    const ProductProjector plus = s.outcome_projector(0);
    const ProductProjector minus = s.outcome_projector(Index{1} << (n - 1 - q));
    const auto [p0, p1] = amplitudes(plus[q]);
    const auto [m0, m1] = amplitudes(minus[q]);
    const Complex u00 = std::conj(p0), u01 = std::conj(p1), u10 = std::conj(m0), u11 = std::conj(m1);
    const Index bit = Index{1} << (n - 1 - q);
    for (Index r = 0; r < d; ++r) {
      if (r & bit) continue;
      const Eigen::RowVectorXcd a = m.row(r), b = m.row(r | bit);
      m.row(r) = u00 * a + u01 * b;
      m.row(r | bit) = u10 * a + u11 * b;
    }
    for (Index c = 0; c < d; ++c) {
      if (c & bit) continue;
      const Vector a = m.col(c), b = m.col(c | bit);
      m.col(c) = std::conj(u00) * a + std::conj(u01) * b;
      m.col(c | bit) = std::conj(u10) * a + std::conj(u11) * b;
    }
  }
  return m.diagonal().real();
}

double pauli_correlator(const Matrix& rho, const PauliSetting& s) {
  const RealVector p = outcome_probabilities(rho, s);
  double total = 0.0;
  for (Index k = 0; k < p.size(); ++k) total += (std::popcount(static_cast<std::uint64_t>(k)) % 2 ? -1.0 : 1.0) * p(k);
  return std::clamp(total, -1.0, 1.0);
}

double pauli_correlator(const DensityMatrix& rho, const PauliSetting& s) { return pauli_correlator(rho.matrix(), s); }

std::vector<std::int64_t> sample_setting_counts(const DensityMatrix& rho, const PauliSetting& s, std::int64_t shots,
                                                std::uint64_t seed) {
  if (shots < 1) throw std::invalid_argument("shots must be at least 1");
  Rng rng = make_rng(seed, kStreamSettings);
  return sample_multinomial(outcome_probabilities(rho.matrix(), s).cwiseMax(0.0), shots, rng);
}

double correlator_from_histogram(const std::vector<std::int64_t>& histogram) {
  double total = 0.0, signed_total = 0.0;
  for (std::size_t k = 0; k < histogram.size(); ++k) {
    const double c = double(histogram[k]);
    total += c;
    signed_total += (std::popcount(static_cast<std::uint64_t>(k)) % 2 ? -c : c);
  }
  if (!(total > 0.0)) throw std::invalid_argument("empty histogram");
  return signed_total / total;
}

}  // namespace tqst
