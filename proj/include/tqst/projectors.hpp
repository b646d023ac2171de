#pragma once

#include <optional>
#include <span>
#include <vector>

#include "tqst/core.hpp"

namespace tqst {

inline constexpr int kPiTableCap = 8;
inline constexpr int kGramCap = 6;

/// Quadrant labels of the on-demand walk. Quadrant 2 is upper-right, 3 lower-left;
/// the u/l suffix tells which triangle of that quadrant the element sits in.
enum class Quadrant : std::uint8_t { One, TwoUpper, TwoLower, ThreeUpper, ThreeLower, Four };

std::string_view to_string(Quadrant q);

/// Quadrant sequence visited while locating `idx`; one step per qubit.
std::vector<Quadrant> quadrant_walk(int n_qubits, const MatrixElementIndex& idx);

/// Projector whose expectation carries the requested part of rho_ij.
///
/// The element is located by repeatedly halving the matrix. Quadrants 1 and 4
/// emit H and V. Quadrants 2/3 emit D or R; which one depends on whether the
/// element lies in the upper or lower triangle of the quadrant and on a context
/// bit that flips every time R is emitted. An element sitting on the diagonal of
/// a 2/3 quadrant counts as upper for the real part and lower for the imaginary
/// part.
ProductProjector projector_for(int n_qubits, const MatrixElementIndex& idx);

struct PiCell {
  std::optional<ProductProjector> re;
  std::optional<ProductProjector> im;
  bool empty() const { return !re && !im; }
};

/// Materialized recursive projector table. Only the upper triangle is filled.
class PiTable {
 public:
  PiTable(int n_qubits, std::vector<PiCell> cells);

  int n_qubits() const { return n_; }
  Index dim() const { return Index{1} << n_; }
  const PiCell& cell(Index i, Index j) const { return cells_[static_cast<std::size_t>(i * dim() + j)]; }

  /// All 4^n projectors, row-major over cells with re before im.
  std::vector<ProductProjector> projectors() const;
  /// Element references in the same order as projectors().
  std::vector<MatrixElementIndex> elements() const;

 private:
  int n_;
  std::vector<PiCell> cells_;
};

PiTable build_pi_table(int n_qubits, int cap = kPiTableCap);

/// The 4^n tomographically complete projector set, in PiTable order.
std::vector<ProductProjector> complete_projector_set(int n_qubits, int cap = kPiTableCap);

/// M_LK = |<psi_L|psi_K>|^2.
RealMatrix gram_matrix(std::span<const ProductProjector> projectors);

struct CompletenessReport {
  bool invertible = false;
  double min_singular_value = 0.0;
};

CompletenessReport completeness_check(int n_qubits, int cap = kGramCap, double threshold = 1e-10);

/// Reconstructs rho = sum_K a_K P_K from expectations tr(P_L rho), M a = e.
/// The result is Hermitized but may be non-PSD.
Matrix linear_inversion(std::span<const ProductProjector> projectors, const RealVector& expectations);

/// Same, with expectations estimated as N_K / shots_K. Requires exactly one
/// record per projector of the complete set.
Matrix linear_inversion(std::span<const CountRecord> records);

/// Closest unit-trace PSD matrix: negative eigenvalues are zeroed from the
/// smallest up and their mass is spread evenly over the survivors. Any square
/// dimension; the input must be Hermitian with unit trace.
Matrix psd_project(const Matrix& m);

/// psd_project for 2^n dimensions, validated as a state.
DensityMatrix psd_projection(const Matrix& m);

}  // namespace tqst
