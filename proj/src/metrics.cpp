#include "tqst/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "tqst/linalg.hpp"

namespace tqst {

namespace {
void require_same_dim(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("density matrices have different dimensions");
}
}  // namespace

double root_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho, sigma);
  return linalg::root_fidelity(rho.matrix(), sigma.matrix());
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  const double f = root_fidelity(rho, sigma);
  return f * f;
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho, sigma);
  return linalg::trace_distance(rho.matrix(), sigma.matrix());
}

int numerical_rank(const DensityMatrix& rho, double eigen_tolerance) {
  return linalg::numerical_rank(rho.matrix(), eigen_tolerance);
}

double purity(const DensityMatrix& rho) { return linalg::purity(rho.matrix()); }

double below_threshold_mass(const RealVector& diag, double threshold) {
  double sum = 0.0;
  for (Index i = 0; i < diag.size(); ++i) {
    for (Index j = i + 1; j < diag.size(); ++j) {
      const double prod = diag(i) * diag(j);
      if (std::sqrt(prod) < threshold) sum += 2.0 * prod;
    }
  }
  return sum;
}

double fidelity_bound(const FidelityBoundInput& input) {
  if (input.rank < 1) throw std::invalid_argument("rank must be at least 1");
  if ((input.diag.array() < 0.0).any()) throw std::invalid_argument("diagonal entries must be non-negative");
  if (input.diag.sum() > 1.0 + 1e-9) throw std::invalid_argument("diagonal sums to more than one");
  const double mass = below_threshold_mass(input.diag, input.threshold);
  const double inner = std::clamp(1.0 - std::sqrt(input.rank * mass), 0.0, 1.0);
  return inner * inner;
}

}  // namespace tqst
