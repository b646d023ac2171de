#include "tqst/core.hpp"

#include <cmath>
#include <sstream>

namespace tqst {

namespace {
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
}

std::pair<Complex, Complex> amplitudes(PolarizationState s) {
  switch (s) {
    case PolarizationState::H: return {1.0, 0.0};
    case PolarizationState::V: return {0.0, 1.0};
    case PolarizationState::D: return {kInvSqrt2, kInvSqrt2};
    case PolarizationState::A: return {kInvSqrt2, -kInvSqrt2};
    case PolarizationState::R: return {kInvSqrt2, Complex(0.0, kInvSqrt2)};
    case PolarizationState::L: return {kInvSqrt2, Complex(0.0, -kInvSqrt2)};
  }
  throw std::invalid_argument("unknown polarization state");
}

char to_char(PolarizationState s) {
  static constexpr char kLetters[] = {'H', 'V', 'D', 'A', 'R', 'L'};
  return kLetters[static_cast<int>(s)];
}

PolarizationState polarization_from_char(char c) {
  switch (c) {
    case 'H': return PolarizationState::H;
    case 'V': return PolarizationState::V;
    case 'D': return PolarizationState::D;
    case 'A': return PolarizationState::A;
    case 'R': return PolarizationState::R;
    case 'L': return PolarizationState::L;
    default: throw std::invalid_argument(std::string("invalid projector letter '") + c + "'");
  }
}

ProductProjector ProductProjector::from_word(std::string_view word) {
  std::vector<PolarizationState> states;
  states.reserve(word.size());
  for (char c : word) states.push_back(polarization_from_char(c));
  return ProductProjector(std::move(states));
}

ProductProjector ProductProjector::basis(int n_qubits, Index index) {
  if (n_qubits < 1 || n_qubits > 62 || index < 0 || index >= (Index{1} << n_qubits)) {
    throw std::invalid_argument("basis index out of range");
  }
  std::vector<PolarizationState> states(static_cast<std::size_t>(n_qubits));
  for (int q = 0; q < n_qubits; ++q) {
    const bool bit = (index >> (n_qubits - 1 - q)) & 1;
    states[static_cast<std::size_t>(q)] = bit ? PolarizationState::V : PolarizationState::H;
  }
  return ProductProjector(std::move(states));
}

std::string ProductProjector::word() const {
  std::string w;
  w.reserve(states_.size());
  for (auto s : states_) w.push_back(to_char(s));
  return w;
}

bool ProductProjector::is_computational() const {
  for (auto s : states_) {
    if (s != PolarizationState::H && s != PolarizationState::V) return false;
  }
  return true;
}

ProductProjector ProductProjector::prefixed(PolarizationState s) const {
  std::vector<PolarizationState> states;
  states.reserve(states_.size() + 1);
  states.push_back(s);
  states.insert(states.end(), states_.begin(), states_.end());
  return ProductProjector(std::move(states));
}

std::string_view to_string(ElementPart part) {
  switch (part) {
    case ElementPart::Re: return "re";
    case ElementPart::Im: return "im";
    case ElementPart::Diag: return "diag";
  }
  return "?";
}

ElementPart element_part_from_string(std::string_view s) {
  if (s == "re") return ElementPart::Re;
  if (s == "im") return ElementPart::Im;
  if (s == "diag") return ElementPart::Diag;
  throw std::invalid_argument("invalid element part '" + std::string(s) + "'");
}

MatrixElementIndex MatrixElementIndex::make(Index i, Index j, ElementPart part) {
  if (i < 0 || j < i) throw std::invalid_argument("element index requires 0 <= i <= j");
  if ((part == ElementPart::Diag) != (i == j)) {
    throw std::invalid_argument("part must be diag exactly when i == j");
  }
  return {i, j, part};
}

CountRecord CountRecord::make(ProductProjector projector, std::int64_t observed, std::int64_t shots) {
  if (shots <= 0) throw std::invalid_argument("shots must be positive");
  if (observed < 0 || observed > shots) throw std::invalid_argument("observed count outside [0, shots]");
  if (projector.empty()) throw std::invalid_argument("count record without projector");
  return {std::move(projector), observed, shots};
}

Vector product_ket(const ProductProjector& p) {
  if (p.empty()) throw std::invalid_argument("product_ket of an empty projector");
  Vector ket(1);
  ket(0) = 1.0;
  for (auto s : p.states()) {
    const auto [a0, a1] = amplitudes(s);
    // Interleave so the earlier qubit stays most significant.
    Vector out(2 * ket.size());
    for (Index k = 0; k < ket.size(); ++k) {
      out(2 * k) = ket(k) * a0;
      out(2 * k + 1) = ket(k) * a1;
    }
    ket = std::move(out);
  }
  return ket;
}

SparseKet sparse_product_ket(const ProductProjector& p) {
  if (p.empty()) throw std::invalid_argument("product_ket of an empty projector");
  SparseKet ket;
  ket.index.push_back(0);
  ket.amplitude.push_back(1.0);
  for (auto s : p.states()) {
    const auto [a0, a1] = amplitudes(s);
    SparseKet next;
    next.index.reserve(2 * ket.size());
    next.amplitude.reserve(2 * ket.size());
    for (std::size_t k = 0; k < ket.size(); ++k) {
      if (a0 != 0.0) {
        next.index.push_back(2 * ket.index[k]);
        next.amplitude.push_back(ket.amplitude[k] * a0);
      }
      if (a1 != 0.0) {
        next.index.push_back(2 * ket.index[k] + 1);
        next.amplitude.push_back(ket.amplitude[k] * a1);
      }
    }
    ket = std::move(next);
  }
  return ket;
}

std::string ValidityReport::describe() const {
  std::ostringstream os;
  auto item = [&](const char* name, const ValidityCheck& c) {
    os << name << '=' << (c.pass ? "pass" : "fail") << '(' << c.violation << ") ";
  };
  item("hermitian", hermitian);
  item("trace", unit_trace);
  item("psd", positive_semidefinite);
  item("offdiag", offdiagonal_bound);
  return os.str();
}

ValidityReport validate_density(const Matrix& m, double tolerance) {
  if (m.rows() != m.cols()) throw std::invalid_argument("density matrix must be square");
  if (m.rows() == 0) throw std::invalid_argument("density matrix must be non-empty");
  ValidityReport report;
  const Index d = m.rows();

  double herm = 0.0;
  double offdiag = 0.0;
  for (Index j = 0; j < d; ++j) {
    for (Index i = 0; i < d; ++i) {
      herm = std::max(herm, std::abs(m(i, j) - std::conj(m(j, i))));
      if (i != j) {
        const double ceiling = std::sqrt(std::max(0.0, m(i, i).real() * m(j, j).real()));
        offdiag = std::max(offdiag, std::abs(m(i, j)) - ceiling);
      }
    }
  }
  report.hermitian = {herm <= tolerance, herm};
  report.offdiagonal_bound = {offdiag <= tolerance, std::max(0.0, offdiag)};

  const double trace_err = std::abs(m.trace() - Complex(1.0));
  report.unit_trace = {trace_err <= tolerance, trace_err};

  const Matrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  report.positive_semidefinite = {min_eig >= -tolerance, std::max(0.0, -min_eig)};
  return report;
}

int qubits_for_dimension(Index dim) {
  if (dim < 2 || (dim & (dim - 1)) != 0) {
    throw std::invalid_argument("dimension " + std::to_string(dim) + " is not a power of two >= 2");
  }
  int n = 0;
  while ((Index{1} << n) < dim) ++n;
  return n;
}

DensityMatrix::DensityMatrix(Matrix m, double tolerance)
    : m_(std::move(m)), tolerance_(tolerance) {
  if (tolerance < 0.0) throw std::invalid_argument("tolerance must be non-negative");
  if (m_.rows() != m_.cols()) throw std::invalid_argument("density matrix must be square");
  n_qubits_ = qubits_for_dimension(m_.rows());
  const auto report = validate_density(m_, tolerance_);
  if (!report.ok()) throw std::invalid_argument("not a density matrix: " + report.describe());
}

DensityMatrix DensityMatrix::pure(const Vector& ket) {
  const double norm = ket.norm();
  if (norm == 0.0) throw std::invalid_argument("zero ket");
  const Vector v = ket / norm;
  return DensityMatrix(v * v.adjoint());
}

double expectation(const Matrix& rho, const SparseKet& ket) {
  Complex acc = 0.0;
  for (std::size_t a = 0; a < ket.size(); ++a) {
    Complex row = 0.0;
    for (std::size_t b = 0; b < ket.size(); ++b) {
      row += rho(ket.index[a], ket.index[b]) * ket.amplitude[b];
    }
    acc += std::conj(ket.amplitude[a]) * row;
  }
  return acc.real();
}

double expectation(const Matrix& rho, const ProductProjector& p) {
  if (rho.rows() != rho.cols() || p.size() > 62 || rho.rows() != (Index{1} << p.size())) {
    throw std::invalid_argument("projector and matrix dimensions differ");
  }
  return expectation(rho, sparse_product_ket(p));
}

double expectation(const DensityMatrix& rho, const ProductProjector& p) {
  return expectation(rho.matrix(), p);
}

}  // namespace tqst
