#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tqst/core.hpp"

namespace tqst {

enum class Parametrization : std::uint8_t { Full, LowRank };

struct MleOptions {
  /// Full: rho = T^dag T with T lower triangular (4^n reals).
  /// LowRank: rho = V^dag V with V of shape rank x 2^n (2 * rank * 2^n reals).
  Parametrization parametrization = Parametrization::Full;
  int rank = 1;
  int max_iterations = 5000;
  double gradient_tolerance = 1e-6;
  /// The descent also stops when L fell by at most objective_tolerance *
  /// max(L, 1) over the last 10 iterations.
  double objective_tolerance = 1e-12;
  /// Predicted counts are floored at floor_fraction * shots.
  double floor_fraction = 1e-9;
  std::uint64_t seed = 0;
  double jitter = 1e-3;
  /// Convergence requires min(L, tr(G rho) - lambda_min(G)) to be at most
  /// gap_tolerance, G = dL/drho. L is convex and non-negative, so both terms
  /// bound L(rho) - min L. Otherwise a conditional-gradient step is taken and
  /// the descent restarts, at most max_gap_steps times. A low-rank factor that
  /// cannot take the step counts as converged.
  double gap_tolerance = 1e-3;
  int max_gap_steps = 200;
};

std::string describe(const MleOptions& options);

/// Parses "full" or "low_rank:<r>" / "lowrank:<r>".
MleOptions parse_parametrization(const std::string& spec, MleOptions base = {});

struct ReconstructionResult {
  DensityMatrix rho;
  double final_objective = 0.0;
  int iterations = 0;
  double gradient_norm = 0.0;
  bool converged = false;
  std::string parametrization;
  double wall_time_seconds = 0.0;
  std::vector<double> objective_history;
  int gap_steps = 0;
  /// Upper bound on L(rho) - min L at the returned point: the smaller of the
  /// conditional-gradient gap and L itself.
  double optimality_gap = 0.0;
};

/// Gaussian negative log-likelihood L = sum_K ((n_K - N_K) / (2 sqrt(n_K)))^2
/// with n_K = shots_K <P_K|rho|P_K>, rho = A^dag A / tr(A^dag A).
class LikelihoodModel {
 public:
  LikelihoodModel(std::span<const CountRecord> records, const MleOptions& options);

  int n_qubits() const { return n_qubits_; }
  Index dim() const { return dim_; }
  Index factor_rows() const;
  Index parameter_count() const;

  Matrix factor(const RealVector& params) const;
  RealVector parameters(const Matrix& factor) const;
  /// Unit-trace rho for the given parameters.
  Matrix density(const RealVector& params) const;

  double value(const RealVector& params) const;
  double value_and_gradient(const RealVector& params, RealVector& grad) const;

  /// Starting point: diagonal factor from the measured diagonal plus seeded jitter.
  RealVector initial_parameters() const;

  /// dL/drho as a Hermitian matrix: sum_K (dL/dp_K) P_K, floored terms taking
  /// the slope just above the floor.
  Matrix density_gradient(const Matrix& rho) const;

  /// Parameters reproducing a unit-trace PSD `rho`. The low-rank layout keeps
  /// the leading `rank` eigencomponents.
  RealVector parameters_for(const Matrix& rho) const;

 private:
  struct Term {
    SparseKet ket;
    double observed;
    double shots;
  };
  void check_params(const RealVector& params) const;
  double evaluate(const RealVector& params, RealVector* grad) const;
  /// dL/dp for one term at predicted probability `prob`; zero below the floor.
  double weight(const Term& t, double prob) const;

  MleOptions options_;
  int n_qubits_ = 0;
  Index dim_ = 0;
  std::vector<Term> terms_;
  RealVector diagonal_estimate_;
};

double likelihood(const RealVector& params, std::span<const CountRecord> records, const MleOptions& options);
RealVector gradient(const RealVector& params, std::span<const CountRecord> records, const MleOptions& options);

/// Quasi-Newton maximum-likelihood reconstruction. Non-convergence is reported
/// through `converged`, not thrown.
ReconstructionResult reconstruct(std::span<const CountRecord> records, const MleOptions& options = {});

}  // namespace tqst
