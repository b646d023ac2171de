#pragma once

#include <complex>
#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace tqst {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kDefaultTolerance = 1e-9;
inline constexpr double kShotNoiseTolerance = 1e-6;

/// Raised when a request would materialize more data than the configured cap.
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a factorization or solve cannot produce a usable answer.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Pauli eigenstates in polarization notation.
enum class PolarizationState : std::uint8_t { H, V, D, A, R, L };

/// Exact two-component amplitudes of a single-qubit state.
std::pair<Complex, Complex> amplitudes(PolarizationState s);

char to_char(PolarizationState s);
PolarizationState polarization_from_char(char c);

/// A separable projector |psi><psi| with |psi> a tensor product of Pauli
/// eigenstates. The first state corresponds to the most significant bit of the
/// computational index.
class ProductProjector {
 public:
  ProductProjector() = default;
  explicit ProductProjector(std::vector<PolarizationState> states) : states_(std::move(states)) {}

  /// Parses a word such as "RRHD". Throws std::invalid_argument on any other letter.
  static ProductProjector from_word(std::string_view word);

  /// Computational basis word of `index` (H for bit 0, V for bit 1).
  static ProductProjector basis(int n_qubits, Index index);

  std::string word() const;
  int size() const { return static_cast<int>(states_.size()); }
  bool empty() const { return states_.empty(); }
  const std::vector<PolarizationState>& states() const { return states_; }
  PolarizationState operator[](int q) const { return states_[static_cast<std::size_t>(q)]; }

  /// True when every qubit is H or V, i.e. the projector is diagonal.
  bool is_computational() const;

  /// Prepends `s` (used by the recursive table construction).
  ProductProjector prefixed(PolarizationState s) const;

  friend bool operator==(const ProductProjector&, const ProductProjector&) = default;
  friend auto operator<=>(const ProductProjector&, const ProductProjector&) = default;

 private:
  std::vector<PolarizationState> states_;
};

enum class ElementPart : std::uint8_t { Re, Im, Diag };

std::string_view to_string(ElementPart part);
ElementPart element_part_from_string(std::string_view s);

/// A 0-based upper-triangle element reference (j >= i; Diag iff i == j).
struct MatrixElementIndex {
  Index i = 0;
  Index j = 0;
  ElementPart part = ElementPart::Diag;

  /// Validating constructor.
  static MatrixElementIndex make(Index i, Index j, ElementPart part);

  friend bool operator==(const MatrixElementIndex&, const MatrixElementIndex&) = default;
  friend auto operator<=>(const MatrixElementIndex&, const MatrixElementIndex&) = default;
};

/// One measured projector: N_K successes out of shots.
struct CountRecord {
  ProductProjector projector;
  std::int64_t observed = 0;
  std::int64_t shots = 1;

  static CountRecord make(ProductProjector projector, std::int64_t observed, std::int64_t shots);
};

/// Dense ket of a product projector, first qubit most significant.
Vector product_ket(const ProductProjector& p);

/// Nonzero amplitudes of the product ket. Support size is 2^(number of D/A/R/L qubits).
struct SparseKet {
  std::vector<Index> index;
  std::vector<Complex> amplitude;
  std::size_t size() const { return index.size(); }
};
SparseKet sparse_product_ket(const ProductProjector& p);

struct ValidityCheck {
  bool pass = true;
  double violation = 0.0;
};

struct ValidityReport {
  ValidityCheck hermitian;
  ValidityCheck unit_trace;
  ValidityCheck positive_semidefinite;
  ValidityCheck offdiagonal_bound;

  bool ok() const {
    return hermitian.pass && unit_trace.pass && positive_semidefinite.pass && offdiagonal_bound.pass;
  }
  std::string describe() const;
};

ValidityReport validate_density(const Matrix& m, double tolerance = kDefaultTolerance);

/// Number of qubits for a 2^n dimension; throws for other sizes.
int qubits_for_dimension(Index dim);

/// Hermitian, PSD, unit-trace matrix of dimension 2^n. Immutable once built.
class DensityMatrix {
 public:
  /// Validates `m` at `tolerance`; throws std::invalid_argument on failure.
  explicit DensityMatrix(Matrix m, double tolerance = kDefaultTolerance);

  static DensityMatrix pure(const Vector& ket);

  const Matrix& matrix() const { return m_; }
  Complex operator()(Index i, Index j) const { return m_(i, j); }
  Index dim() const { return m_.rows(); }
  int n_qubits() const { return n_qubits_; }
  double tolerance() const { return tolerance_; }
  RealVector diagonal() const { return m_.diagonal().real(); }

 private:
  Matrix m_;
  int n_qubits_ = 0;
  double tolerance_ = kDefaultTolerance;
};

/// <psi_P| rho |psi_P>; imaginary round-off is discarded.
double expectation(const Matrix& rho, const ProductProjector& p);
double expectation(const DensityMatrix& rho, const ProductProjector& p);
double expectation(const Matrix& rho, const SparseKet& ket);

}  // namespace tqst
