#pragma once

#include "tqst/core.hpp"

namespace tqst {

/// Tr sqrt(sqrt(rho) sigma sqrt(rho)), in [0, 1].
double root_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Squared convention: root_fidelity^2. Equals <psi|rho|psi> for pure sigma.
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Count of eigenvalues above `eigen_tolerance`.
int numerical_rank(const DensityMatrix& rho, double eigen_tolerance = 1e-8);

double purity(const DensityMatrix& rho);

struct FidelityBoundInput {
  RealVector diag;
  double threshold = 0.0;
  int rank = 1;
};

/// Sum of rho_ii rho_jj over below-threshold pairs, both orientations counted.
double below_threshold_mass(const RealVector& diag, double threshold);

/// Worst-case fidelity after zeroing the below-threshold coherences:
/// (1 - sqrt(rank * S))^2 with the inner term clamped to [0, 1].
double fidelity_bound(const FidelityBoundInput& input);

}  // namespace tqst
