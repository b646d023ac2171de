#include "tqst/projectors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

namespace tqst {

namespace {

using PS = PolarizationState;

void check_index(int n_qubits, const MatrixElementIndex& idx) {
  if (n_qubits < 1 || n_qubits > 62) throw std::invalid_argument("qubit count out of range");
  const Index dim = Index{1} << n_qubits;
  if (idx.i < 0 || idx.j < idx.i || idx.j >= dim) {
    throw std::invalid_argument("element (" + std::to_string(idx.i) + ", " + std::to_string(idx.j) +
                                ") outside the upper triangle of a " + std::to_string(dim) + "-dim matrix");
  }
  if ((idx.part == ElementPart::Diag) != (idx.i == idx.j)) {
    throw std::invalid_argument("part must be diag exactly when i == j");
  }
}

struct WalkStep {
  Quadrant quadrant;
  PS emitted;
};

// Shared by quadrant_walk and projector_for.
std::vector<WalkStep> walk(int n_qubits, const MatrixElementIndex& idx) {
  check_index(n_qubits, idx);
  std::vector<WalkStep> steps;
  steps.reserve(static_cast<std::size_t>(n_qubits));
  Index row = idx.i;
  Index col = idx.j;
  bool conjugate_context = false;
  for (int level = n_qubits - 1; level >= 0; --level) {
    const Index half = Index{1} << level;
    const bool bottom = row >= half;
    const bool right = col >= half;
    row &= half - 1;
    col &= half - 1;
    if (!bottom && !right) {
      steps.push_back({Quadrant::One, PS::H});
    } else if (bottom && right) {
      steps.push_back({Quadrant::Four, PS::V});
    } else {
      bool lower = row > col;
      if (row == col) lower = idx.part == ElementPart::Im;
      const bool emit_r = lower != conjugate_context;
      if (emit_r) conjugate_context = !conjugate_context;
      Quadrant q;
      if (right) {
        q = lower ? Quadrant::TwoLower : Quadrant::TwoUpper;
      } else {
        q = lower ? Quadrant::ThreeLower : Quadrant::ThreeUpper;
      }
      steps.push_back({q, emit_r ? PS::R : PS::D});
    }
  }
  return steps;
}

}  // namespace

std::string_view to_string(Quadrant q) {
  switch (q) {
    case Quadrant::One: return "1";
    case Quadrant::TwoUpper: return "2u";
    case Quadrant::TwoLower: return "2l";
    case Quadrant::ThreeUpper: return "3u";
    case Quadrant::ThreeLower: return "3l";
    case Quadrant::Four: return "4";
  }
  return "?";
}

std::vector<Quadrant> quadrant_walk(int n_qubits, const MatrixElementIndex& idx) {
  std::vector<Quadrant> out;
  for (const auto& s : walk(n_qubits, idx)) out.push_back(s.quadrant);
  return out;
}

ProductProjector projector_for(int n_qubits, const MatrixElementIndex& idx) {
  std::vector<PS> states;
  for (const auto& s : walk(n_qubits, idx)) states.push_back(s.emitted);
  return ProductProjector(std::move(states));
}

PiTable::PiTable(int n_qubits, std::vector<PiCell> cells) : n_(n_qubits), cells_(std::move(cells)) {
  if (cells_.size() != static_cast<std::size_t>(dim() * dim())) {
    throw std::invalid_argument("PiTable cell count does not match dimension");
  }
}

std::vector<ProductProjector> PiTable::projectors() const {
  std::vector<ProductProjector> out;
  out.reserve(static_cast<std::size_t>(dim() * dim()));
  for (const auto& c : cells_) {
    if (c.re) out.push_back(*c.re);
    if (c.im) out.push_back(*c.im);
  }
  return out;
}

std::vector<MatrixElementIndex> PiTable::elements() const {
  std::vector<MatrixElementIndex> out;
  for (Index i = 0; i < dim(); ++i) {
    for (Index j = i; j < dim(); ++j) {
      const auto& c = cell(i, j);
      if (i == j) {
        if (c.re) out.push_back({i, j, ElementPart::Diag});
      } else {
        if (c.re) out.push_back({i, j, ElementPart::Re});
        if (c.im) out.push_back({i, j, ElementPart::Im});
      }
    }
  }
  return out;
}

namespace {

// A table block together with its conjugate partner. `upper` holds pi_k (upper
// triangle), `lower` holds pibar_k (lower triangle). Cells are row-major.
struct TablePair {
  Index dim;
  std::vector<PiCell> upper;
  std::vector<PiCell> lower;
};

std::optional<ProductProjector> prefix(PS s, const std::optional<ProductProjector>& p) {
  if (!p) return std::nullopt;
  return p->prefixed(s);
}

// Exactly one of the two candidate words survives in every nonzero slot.
std::optional<ProductProjector> pick(std::optional<ProductProjector> a, std::optional<ProductProjector> b) {
  if (a && b) throw std::logic_error("projector table recursion produced two terms in one slot");
  return a ? a : b;
}

TablePair base_tables() {
  TablePair t{2, std::vector<PiCell>(4), std::vector<PiCell>(4)};
  const ProductProjector h({PS::H}), v({PS::V}), d({PS::D}), r({PS::R});
  t.upper[0].re = h;
  t.upper[3].re = v;
  t.upper[1] = {d, r};
  t.lower[0].re = h;
  t.lower[3].re = v;
  t.lower[2] = {d, r};  // D - iR; the sign is absorbed by the inversion coefficients
  return t;
}

TablePair grow(const TablePair& prev) {
  const Index h = prev.dim;
  const Index d = 2 * h;
  TablePair next{d, std::vector<PiCell>(static_cast<std::size_t>(d * d)),
                 std::vector<PiCell>(static_cast<std::size_t>(d * d))};
  auto at = [](std::vector<PiCell>& v, Index dim, Index a, Index b) -> PiCell& {
    return v[static_cast<std::size_t>(a * dim + b)];
  };
  for (Index a = 0; a < h; ++a) {
    for (Index b = 0; b < h; ++b) {
      const PiCell& p = prev.upper[static_cast<std::size_t>(a * h + b)];
      const PiCell& q = prev.lower[static_cast<std::size_t>(a * h + b)];
      // pi_n = [[H pi, D pi + i R pibar], [0, V pi]]
      if (!p.empty()) {
        at(next.upper, d, a, b) = {prefix(PS::H, p.re), prefix(PS::H, p.im)};
        at(next.upper, d, a + h, b + h) = {prefix(PS::V, p.re), prefix(PS::V, p.im)};
      }
      if (!p.empty() || !q.empty()) {
        at(next.upper, d, a, b + h) = {pick(prefix(PS::D, p.re), prefix(PS::R, q.im)),
                                       pick(prefix(PS::D, p.im), prefix(PS::R, q.re))};
      }
      // pibar_n = [[H pibar, 0], [D pibar - i R pi, V pibar]]
      if (!q.empty()) {
        at(next.lower, d, a, b) = {prefix(PS::H, q.re), prefix(PS::H, q.im)};
        at(next.lower, d, a + h, b + h) = {prefix(PS::V, q.re), prefix(PS::V, q.im)};
      }
      if (!p.empty() || !q.empty()) {
        at(next.lower, d, a + h, b) = {pick(prefix(PS::D, q.re), prefix(PS::R, p.im)),
                                       pick(prefix(PS::D, q.im), prefix(PS::R, p.re))};
      }
    }
  }
  return next;
}

}  // namespace

PiTable build_pi_table(int n_qubits, int cap) {
  if (n_qubits < 1) throw std::invalid_argument("qubit count must be at least 1");
  if (n_qubits > cap) {
    throw ResourceLimitError("projector table for " + std::to_string(n_qubits) + " qubits exceeds cap of " +
                             std::to_string(cap));
  }
  TablePair t = base_tables();
  for (int k = 2; k <= n_qubits; ++k) t = grow(t);
  return PiTable(n_qubits, std::move(t.upper));
}

std::vector<ProductProjector> complete_projector_set(int n_qubits, int cap) {
  return build_pi_table(n_qubits, cap).projectors();
}

RealMatrix gram_matrix(std::span<const ProductProjector> projectors) {
  const Index m = static_cast<Index>(projectors.size());
  RealMatrix gram(m, m);
  if (m == 0) return gram;
  const int n = projectors.front().size();
  for (const auto& p : projectors) {
    if (p.size() != n || p.empty()) throw std::invalid_argument("projectors must share one non-zero length");
  }
  // Overlaps of product states factorize qubit by qubit.
  std::array<std::array<double, 6>, 6> overlap{};
  for (int s = 0; s < 6; ++s) {
    for (int t = 0; t < 6; ++t) {
      const auto [a0, a1] = amplitudes(static_cast<PS>(s));
      const auto [b0, b1] = amplitudes(static_cast<PS>(t));
      overlap[s][t] = std::norm(std::conj(a0) * b0 + std::conj(a1) * b1);
    }
  }
  for (Index l = 0; l < m; ++l) {
    const auto& pl = projectors[static_cast<std::size_t>(l)].states();
    gram(l, l) = 1.0;
    for (Index k = l + 1; k < m; ++k) {
      const auto& pk = projectors[static_cast<std::size_t>(k)].states();
      double v = 1.0;
      for (int q = 0; q < n && v != 0.0; ++q) v *= overlap[static_cast<int>(pl[q])][static_cast<int>(pk[q])];
      gram(l, k) = v;
      gram(k, l) = v;
    }
  }
  return gram;
}

CompletenessReport completeness_check(int n_qubits, int cap, double threshold) {
  if (n_qubits > cap) {
    throw ResourceLimitError("Gram matrix for " + std::to_string(n_qubits) + " qubits exceeds cap of " +
                             std::to_string(cap));
  }
  const auto projectors = complete_projector_set(n_qubits);
  const RealMatrix gram = gram_matrix(projectors);
  // Symmetric, so singular values are the absolute eigenvalues.
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(gram, Eigen::EigenvaluesOnly);
  CompletenessReport report;
  report.min_singular_value = es.eigenvalues().cwiseAbs().minCoeff();
  report.invertible = report.min_singular_value > threshold;
  return report;
}

Matrix linear_inversion(std::span<const ProductProjector> projectors, const RealVector& expectations) {
  if (projectors.empty()) throw std::invalid_argument("no projectors");
  if (static_cast<Index>(projectors.size()) != expectations.size()) {
    throw std::invalid_argument("one expectation per projector required");
  }
  const int n = projectors.front().size();
  const Index dim = Index{1} << n;
  if (static_cast<Index>(projectors.size()) != dim * dim) {
    throw std::invalid_argument("linear inversion needs exactly 4^n projectors");
  }
  const RealMatrix gram = gram_matrix(projectors);
  Eigen::ColPivHouseholderQR<RealMatrix> qr(gram);
  qr.setThreshold(1e-12);
  if (qr.rank() < gram.rows()) throw NumericalError("Gram matrix of the projector set is singular");
  const RealVector coeffs = qr.solve(expectations);

  Matrix rho = Matrix::Zero(dim, dim);
  for (std::size_t k = 0; k < projectors.size(); ++k) {
    const SparseKet ket = sparse_product_ket(projectors[k]);
    const double a = coeffs(static_cast<Index>(k));
    for (std::size_t x = 0; x < ket.size(); ++x) {
      for (std::size_t y = 0; y < ket.size(); ++y) {
        rho(ket.index[x], ket.index[y]) += a * ket.amplitude[x] * std::conj(ket.amplitude[y]);
      }
    }
  }
  return (rho + rho.adjoint()) / 2.0;
}

Matrix linear_inversion(std::span<const CountRecord> records) {
  if (records.empty()) throw std::invalid_argument("no count records");
  const int n = records.front().projector.size();
  std::map<std::string, double> measured;
  for (const auto& r : records) {
    if (r.projector.size() != n) throw std::invalid_argument("count records mix qubit counts");
    if (r.shots <= 0) throw std::invalid_argument("shots must be positive");
    if (!measured.emplace(r.projector.word(), double(r.observed) / double(r.shots)).second) {
      throw std::invalid_argument("duplicate record for projector " + r.projector.word());
    }
  }
  const auto projectors = complete_projector_set(n);
  if (measured.size() != projectors.size()) {
    throw std::invalid_argument("records must cover exactly the 4^n complete projector set");
  }
  RealVector expectations(static_cast<Index>(projectors.size()));
  for (std::size_t k = 0; k < projectors.size(); ++k) {
    const auto it = measured.find(projectors[k].word());
    if (it == measured.end()) throw std::invalid_argument("missing record for projector " + projectors[k].word());
    expectations(static_cast<Index>(k)) = it->second;
  }
  return linear_inversion(projectors, expectations);
}

Matrix psd_project(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) throw std::invalid_argument("psd_projection needs a square matrix");
  const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-9) throw std::invalid_argument("psd_projection input is not Hermitian");
  if (std::abs(m.trace() - Complex(1.0)) > 1e-6) throw std::invalid_argument("psd_projection input trace is not 1");

  const Matrix h = (m + m.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  RealVector mu = es.eigenvalues();  // ascending
  const Index d = mu.size();
  // Walk from the most negative eigenvalue; `survivors` counts the ones kept.
  double deficit = 0.0;
  Index first_kept = 0;
  while (first_kept < d && mu(first_kept) + deficit / double(d - first_kept) < 0.0) {
    deficit += mu(first_kept);
    mu(first_kept) = 0.0;
    ++first_kept;
  }
  const double share = first_kept < d ? deficit / double(d - first_kept) : 0.0;
  for (Index k = first_kept; k < d; ++k) mu(k) += share;
  Matrix out = es.eigenvectors() * mu.asDiagonal() * es.eigenvectors().adjoint();
  return (out + out.adjoint()) / 2.0;
}

DensityMatrix psd_projection(const Matrix& m) { return DensityMatrix(psd_project(m), kDefaultTolerance); }

}  // namespace tqst
