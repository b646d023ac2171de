#include "tqst/mle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>

#include "tqst/lbfgs.hpp"
#include "tqst/random.hpp"

namespace tqst {

std::string describe(const MleOptions& options) {
  if (options.parametrization == Parametrization::Full) return "full";
  return "low_rank(" + std::to_string(options.rank) + ")";
}

MleOptions parse_parametrization(const std::string& spec, MleOptions base) {
  if (spec == "full") {
    base.parametrization = Parametrization::Full;
    return base;
  }
  for (const std::string prefix : {"low_rank:", "lowrank:"}) {
    if (spec.rfind(prefix, 0) == 0) {
      base.parametrization = Parametrization::LowRank;
      try {
        base.rank = std::stoi(spec.substr(prefix.size()));
      } catch (const std::exception&) {
        throw std::invalid_argument("invalid rank in parametrization '" + spec + "'");
      }
      if (base.rank < 1) throw std::invalid_argument("rank must be at least 1");
      return base;
    }
  }
  throw std::invalid_argument("unknown parametrization '" + spec + "' (use full or low_rank:<r>)");
}

LikelihoodModel::LikelihoodModel(std::span<const CountRecord> records, const MleOptions& options)
    : options_(options) {
  if (records.empty()) throw std::invalid_argument("no count records");
  n_qubits_ = records.front().projector.size();
  if (n_qubits_ < 1 || n_qubits_ > 30) throw std::invalid_argument("unsupported qubit count");
  dim_ = Index{1} << n_qubits_;
  if (options_.parametrization == Parametrization::LowRank && (options_.rank < 1 || options_.rank > dim_)) {
    throw std::invalid_argument("low-rank parametrization needs 1 <= r <= 2^n");
  }
  diagonal_estimate_ = RealVector::Constant(dim_, -1.0);
  terms_.reserve(records.size());
  for (const auto& r : records) {
    if (r.projector.size() != n_qubits_) throw std::invalid_argument("count records mix qubit counts");
    if (r.shots <= 0 || r.observed < 0 || r.observed > r.shots) throw std::invalid_argument("invalid count record");
    terms_.push_back({sparse_product_ket(r.projector), double(r.observed), double(r.shots)});
    if (r.projector.is_computational()) {
      diagonal_estimate_(terms_.back().ket.index.front()) = double(r.observed) / double(r.shots);
    }
  }
}

Index LikelihoodModel::factor_rows() const {
  return options_.parametrization == Parametrization::Full ? dim_ : Index(options_.rank);
}

Index LikelihoodModel::parameter_count() const {
  if (options_.parametrization == Parametrization::Full) return dim_ * dim_;
  return 2 * Index(options_.rank) * dim_;
}

void LikelihoodModel::check_params(const RealVector& params) const {
  if (params.size() != parameter_count()) {
    throw std::invalid_argument("expected " + std::to_string(parameter_count()) + " parameters, got " +
                                std::to_string(params.size()));
  }
}

Matrix LikelihoodModel::factor(const RealVector& params) const {
  check_params(params);
  Matrix a = Matrix::Zero(factor_rows(), dim_);
  if (options_.parametrization == Parametrization::Full) {
    for (Index k = 0; k < dim_; ++k) a(k, k) = params(k);
    Index p = dim_;
    for (Index r = 1; r < dim_; ++r) {
      for (Index c = 0; c < r; ++c, p += 2) a(r, c) = Complex(params(p), params(p + 1));
    }
  } else {
    Index p = 0;
    for (Index r = 0; r < a.rows(); ++r) {
      for (Index c = 0; c < dim_; ++c, p += 2) a(r, c) = Complex(params(p), params(p + 1));
    }
  }
  return a;
}

RealVector LikelihoodModel::parameters(const Matrix& a) const {
  if (a.rows() != factor_rows() || a.cols() != dim_) throw std::invalid_argument("factor has the wrong shape");
  RealVector params(parameter_count());
  if (options_.parametrization == Parametrization::Full) {
    for (Index k = 0; k < dim_; ++k) params(k) = a(k, k).real();
    Index p = dim_;
    for (Index r = 1; r < dim_; ++r) {
      for (Index c = 0; c < r; ++c, p += 2) {
        params(p) = a(r, c).real();
        params(p + 1) = a(r, c).imag();
      }
    }
  } else {
    Index p = 0;
    for (Index r = 0; r < a.rows(); ++r) {
      for (Index c = 0; c < dim_; ++c, p += 2) {
        params(p) = a(r, c).real();
        params(p + 1) = a(r, c).imag();
      }
    }
  }
  return params;
}

Matrix LikelihoodModel::density(const RealVector& params) const {
  const Matrix a = factor(params);
  const double trace = a.squaredNorm();
  if (!(trace > 0.0)) throw std::invalid_argument("all-zero parameters do not define a density matrix");
  Matrix rho = a.adjoint() * a / trace;
  return (rho + rho.adjoint()) / 2.0;
}

double LikelihoodModel::value(const RealVector& params) const { return evaluate(params, nullptr); }

double LikelihoodModel::value_and_gradient(const RealVector& params, RealVector& grad) const {
  return evaluate(params, &grad);
}

double LikelihoodModel::evaluate(const RealVector& params, RealVector* grad) const {
  const Matrix a = factor(params);
  const double trace = a.squaredNorm();
  if (!(trace > 0.0)) throw std::invalid_argument("all-zero parameters do not define a density matrix");
  const bool want_grad = grad != nullptr;
  Matrix gc;
  if (want_grad) gc = Matrix::Zero(a.rows(), a.cols());

  double total = 0.0;
  double weighted_prob = 0.0;
  Vector u(a.rows());
  for (const auto& t : terms_) {
    u.setZero();
    for (std::size_t k = 0; k < t.ket.size(); ++k) u += a.col(t.ket.index[k]) * t.ket.amplitude[k];
    const double prob = u.squaredNorm() / trace;
    const double predicted = std::max(t.shots * prob, options_.floor_fraction * t.shots);
    const double diff = predicted - t.observed;
    total += diff * diff / (4.0 * predicted);
    if (!want_grad) continue;
    const double w = weight(t, prob);
    if (w == 0.0) continue;
    weighted_prob += w * prob;
    for (std::size_t k = 0; k < t.ket.size(); ++k) {
      gc.col(t.ket.index[k]) += (w / trace) * std::conj(t.ket.amplitude[k]) * u;
    }
  }
  if (!want_grad) return total;

  // d/d conj(A) of |A psi|^2 / tr(A^dag A) is (u psi^dag - p A) / tr.
  gc -= (weighted_prob / trace) * a;
  // Real-parameter gradient is 2 Re / 2 Im of the Wirtinger derivative.
  *grad = 2.0 * parameters(gc);
  return total;
}

double LikelihoodModel::weight(const Term& t, double prob) const {
  const double predicted = t.shots * prob;
  if (predicted < options_.floor_fraction * t.shots) return 0.0;
  // dL/dp = shots * (n - N)(n + N) / (4 n^2)
  return t.shots * (predicted - t.observed) * (predicted + t.observed) / (4.0 * predicted * predicted);
}

Matrix LikelihoodModel::density_gradient(const Matrix& rho) const {
  if (rho.rows() != dim_ || rho.cols() != dim_) throw std::invalid_argument("density has the wrong dimension");
  Matrix g = Matrix::Zero(dim_, dim_);
  for (const auto& t : terms_) {
    // Floored terms contribute their slope just above the floor, the cost of moving
    // probability into them.
    const double w = weight(t, std::max(expectation(rho, t.ket), options_.floor_fraction));
    if (w == 0.0) continue;
    for (std::size_t r = 0; r < t.ket.size(); ++r) {
      for (std::size_t c = 0; c < t.ket.size(); ++c) {
        g(t.ket.index[r], t.ket.index[c]) += w * t.ket.amplitude[r] * std::conj(t.ket.amplitude[c]);
      }
    }
  }
  return g;
}

RealVector LikelihoodModel::parameters_for(const Matrix& rho) const {
  if (rho.rows() != dim_ || rho.cols() != dim_) throw std::invalid_argument("density has the wrong dimension");
  const Eigen::SelfAdjointEigenSolver<Matrix> es((rho + rho.adjoint()) / 2.0);
  const RealVector lambda = es.eigenvalues().cwiseMax(0.0);
  if (!(lambda.sum() > 0.0)) throw std::invalid_argument("density has no positive eigenvalue");
  // rho = B^dag B with B = sqrt(Lambda) U^dag, eigenvalues ascending.
  Matrix b = lambda.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
  if (options_.parametrization == Parametrization::LowRank) {
    return parameters(Matrix(b.bottomRows(factor_rows())));
  }
  // Lower-triangular T with T^dag T = rho: QL of B through the index reversal J,
  // J B J = Q R  =>  B = (J Q J)(J R J).
  const Matrix flipped = b.colwise().reverse().rowwise().reverse();
  Eigen::HouseholderQR<Matrix> qr(flipped);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  Matrix t = r.colwise().reverse().rowwise().reverse();
  for (Index k = 0; k < dim_; ++k) {
    const double mag = std::abs(t(k, k));
    if (mag > 0.0) t.row(k) *= std::conj(t(k, k)) / mag;
  }
  return parameters(t);
}

RealVector LikelihoodModel::initial_parameters() const {
  for (Index k = 0; k < dim_; ++k) {
    if (diagonal_estimate_(k) < 0.0) {
      throw std::invalid_argument("reconstruction needs every computational-basis projector among the records");
    }
  }
  const double eps = options_.floor_fraction;
  Matrix a = Matrix::Zero(factor_rows(), dim_);
  for (Index k = 0; k < dim_; ++k) {
    const double amp = std::sqrt(std::max(diagonal_estimate_(k), eps));
    if (options_.parametrization == Parametrization::Full) {
      a(k, k) = amp;
    } else {
      a(0, k) = amp;
    }
  }
  RealVector params = parameters(a);
  Rng rng = make_rng(options_.seed, kStreamMle);
  std::uniform_real_distribution<double> jitter(-options_.jitter, options_.jitter);
  const Index skip = options_.parametrization == Parametrization::Full ? dim_ : 0;
  for (Index p = 0; p < params.size(); ++p) {
    if (p < skip) continue;
    // In the low-rank layout the first row carries the diagonal amplitudes.
    if (options_.parametrization == Parametrization::LowRank && p < 2 * dim_ && p % 2 == 0) continue;
    params(p) += jitter(rng);
  }
  return params;
}

double likelihood(const RealVector& params, std::span<const CountRecord> records, const MleOptions& options) {
  return LikelihoodModel(records, options).value(params);
}

RealVector gradient(const RealVector& params, std::span<const CountRecord> records, const MleOptions& options) {
  RealVector g;
  LikelihoodModel(records, options).value_and_gradient(params, g);
  return g;
}

namespace {

struct GapCheck {
  /// max(0, tr(G rho) - lambda_min(G)); bounds L(rho) - min L from above.
  double gap = 0.0;
  Vector direction;
};

GapCheck gap_check(const LikelihoodModel& model, const Matrix& rho) {
  const Matrix g = model.density_gradient(rho);
  const double mu = (g * rho).trace().real();
  const Eigen::SelfAdjointEigenSolver<Matrix> es((g + g.adjoint()) / 2.0);
  return {std::max(0.0, mu - es.eigenvalues()(0)), es.eigenvectors().col(0)};
}

/// Best spectral truncation of rho that lowers the objective, if any.
std::optional<std::pair<RealVector, double>> truncate_spectrum(const LikelihoodModel& model, const Matrix& rho,
                                                               double value) {
  const Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
  const RealVector lambda = es.eigenvalues().cwiseMax(0.0);
  const double top = lambda.maxCoeff();
  std::optional<std::pair<RealVector, double>> best;
  Index last_kept = -1;
  for (double cut = 1e-1; cut >= 1e-8; cut /= 10.0) {
    RealVector kept = (lambda.array() >= cut * top).select(lambda, 0.0);
    const Index count = (kept.array() > 0.0).count();
    if (count == last_kept || count == lambda.size()) continue;
    last_kept = count;
    kept /= kept.sum();
    const Matrix candidate = es.eigenvectors() * kept.asDiagonal() * es.eigenvectors().adjoint();
    RealVector x = model.parameters_for(candidate);
    const double f = model.value(x);
    if (f < (best ? best->second : value)) best.emplace(std::move(x), f);
  }
  return best;
}

/// Conditional-gradient step rho -> (1 - eta) rho + eta v v^dag, backtracking on eta.
std::optional<std::pair<RealVector, double>> gap_step(const LikelihoodModel& model, const Matrix& rho, double value,
                                                      const GapCheck& check) {
  const Matrix vv = check.direction * check.direction.adjoint();
  for (double eta = 0.5; eta > 1e-8; eta /= 4.0) {
    RealVector x = model.parameters_for((1.0 - eta) * rho + eta * vv);
    const double f = model.value(x);
    if (f < value - 1e-4 * eta * check.gap) return std::make_pair(std::move(x), f);
  }
  return std::nullopt;
}

constexpr int kRoundIterations = 1000;

}  // namespace

ReconstructionResult reconstruct(std::span<const CountRecord> records, const MleOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const LikelihoodModel model(records, options);
  LbfgsOptions lopt;
  lopt.gradient_tolerance = options.gradient_tolerance;
  lopt.objective_tolerance = options.objective_tolerance;

  RealVector x = model.initial_parameters();
  std::vector<double> history;
  int iterations = 0;
  int gap_steps = 0;
  bool converged = false;
  double value = 0.0, gradient_norm = 0.0;
  GapCheck check;
  auto jump = [&](std::pair<RealVector, double>&& to) {
    x = std::move(to.first);
    value = to.second;
    history.push_back(value);
  };

  // Rounds of quasi-Newton descent. Between rounds the iterate may jump to a
  // spectral truncation or take a conditional-gradient step; every jump lowers L.
  // L is convex in rho, so the conditional-gradient gap certifies optimality.
  // L >= 0 as well, so L itself bounds L - min L.
  while (iterations < options.max_iterations) {
    lopt.max_iterations = std::min(kRoundIterations, options.max_iterations - iterations);
    auto fit = minimize_lbfgs<double>(
        [&model](const RealVector& p, RealVector& g) { return model.value_and_gradient(p, g); }, x, lopt);
    iterations += std::max(fit.iterations, 1);
    history.insert(history.end(), fit.history.begin() + (history.empty() ? 0 : 1), fit.history.end());
    x = std::move(fit.x);
    value = fit.value;
    gradient_norm = fit.gradient_norm;
    const Matrix rho = model.density(x);

    if (auto t = truncate_spectrum(model, rho, value);
        t && value - t->second > options.objective_tolerance * std::max(value, 1.0)) {
      jump(std::move(*t));
      continue;
    }
    check = gap_check(model, rho);
    if (std::min(check.gap, value) <= options.gap_tolerance) {
      converged = true;
      break;
    }
    if (!fit.converged && !fit.line_search_failed) continue;
    if (gap_steps >= options.max_gap_steps) break;
    auto e = gap_step(model, rho, value, check);
    if (!e) {
      // A rank-capped factor can sit at the optimum of its own set while the
      // full PSD problem still has a descent direction.
      converged = fit.converged && model.factor_rows() < model.dim();
      break;
    }
    jump(std::move(*e));
    ++gap_steps;
  }
  if (!converged) {
    RealVector g;
    model.value_and_gradient(x, g);
    gradient_norm = g.norm();
    check = gap_check(model, model.density(x));
  }

  ReconstructionResult result{DensityMatrix(model.density(x), kShotNoiseTolerance),
                              value,
                              iterations,
                              gradient_norm,
                              converged,
                              describe(options),
                              0.0,
                              std::move(history),
                              gap_steps,
                              std::min(check.gap, value)};
  result.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace tqst
