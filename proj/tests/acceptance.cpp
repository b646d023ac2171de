// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"
#include "tqst/metrics.hpp"
#include "tqst/mle.hpp"
#include "tqst/projectors.hpp"
#include "tqst/settings.hpp"
#include "tqst/simulator.hpp"
#include "tqst/threshold.hpp"

using namespace tqst;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

std::string word(int n, Index i, Index j, ElementPart part) {
  return projector_for(n, MatrixElementIndex::make(i, j, part)).word();
}

Outcome projector_fixtures() {
  Outcome o;
  const auto start = Clock::now();
  o.require(word(2, 1, 2, ElementPart::Re) == "RR", "n=2 (1,2) re");
  o.require(word(2, 1, 2, ElementPart::Im) == "RD", "n=2 (1,2) im");
  o.require(word(3, 3, 5, ElementPart::Im) == "RDV", "n=3 (3,5) im");
  o.require(word(4, 4, 9, ElementPart::Re) == "RRHD", "n=4 (4,9) re");
  const PiTable t2 = build_pi_table(2);
  o.require(t2.cell(1, 2).re->word() == "RR" && t2.cell(1, 2).im->word() == "RD", "table cell");
  const double s = seconds_since(start);
  o.require(s < 1.0, "runtime");
  o.detail << "RR/RD, RDV, RRHD in " << s << " s";
  return o;
}

Outcome completeness() {
  Outcome o;
  const auto start = Clock::now();
  double t5 = 0.0;
  for (int n = 1; n <= 5; ++n) {
    const auto t0 = Clock::now();
    const CompletenessReport r = completeness_check(n);
    if (n == 5) t5 = seconds_since(t0);
    o.require(r.invertible && r.min_singular_value > 1e-10, "n=" + std::to_string(n));
    o.detail << " n=" << n << ":" << r.min_singular_value;
  }
  o.require(t5 < 120.0, "n=5 runtime");
  o.detail << " (n=5 " << t5 << " s, total " << seconds_since(start) << " s)";
  return o;
}

Outcome frobenius_oracle() {
  Outcome o;
  int checked = 0;
  double worst = 0.0;
  for (int n = 1; n <= 2; ++n) {
    const Index d = Index{1} << n;
    std::vector<Matrix> candidates;
    for (int code = 0; code < static_cast<int>(std::pow(6, n)); ++code) {
      std::string w;
      for (int q = 0, c = code; q < n; ++q, c /= 6) w += "HVDARL"[c % 6];
      const Vector k = product_ket(ProductProjector::from_word(w));
      candidates.push_back(k * k.adjoint());
    }
    for (Index i = 0; i < d; ++i) {
      for (Index j = i + 1; j < d; ++j) {
        for (ElementPart part : {ElementPart::Re, ElementPart::Im}) {
          Matrix op = Matrix::Zero(d, d);
          if (part == ElementPart::Re) {
            op(i, j) = op(j, i) = 0.5;
          } else {
            op(i, j) = Complex(0, -0.5);
            op(j, i) = Complex(0, 0.5);
          }
          double best = std::numeric_limits<double>::infinity();
          for (const Matrix& c : candidates) best = std::min(best, (op - c).norm());
          const Vector k = product_ket(projector_for(n, MatrixElementIndex::make(i, j, part)));
          const double got = (op - k * k.adjoint()).norm();
          worst = std::max(worst, got - best);
          o.require(got <= best + 1e-10, std::to_string(n) + ":" + std::to_string(i) + "," + std::to_string(j));
          ++checked;
        }
      }
    }
  }
  o.detail << checked << " projectors, worst excess " << worst;
  return o;
}

std::vector<CountRecord> exact_records(const DensityMatrix& rho, double t, std::int64_t shots) {
  return sample_counts(rho, select_offdiagonal(rho.diagonal(), t), shots, NoiseModel{0.0, Sampling::Exact, 0}).records;
}

Outcome noiseless_w() {
  Outcome o;
  const std::pair<int, double> cases[] = {{4, 0.1}, {5, 0.01}, {6, 0.001}, {7, 0.0001}};
  for (const auto& [n, t] : cases) {
    const auto start = Clock::now();
    const DensityMatrix w = w_state(n);
    const auto records = exact_records(w, t, 10000);
    const ReconstructionResult r = reconstruct(records);
    const double f = fidelity(w, r.rho);
    const double s = seconds_since(start);
    const std::size_t expected = (std::size_t(1) << n) + std::size_t(n * (n - 1));
    o.require(records.size() == expected, "plan size n=" + std::to_string(n));
    o.require(f >= 0.99, "fidelity n=" + std::to_string(n));
    if (n == 7) o.require(s < 600.0, "n=7 runtime");
    o.detail << " n=" << n << ": " << records.size() << " meas, F=" << f << ", " << s << " s;";
  }
  return o;
}

// Depolarizing strength chosen so the estimate lands near 91% fidelity.
constexpr double kTableLambda = 0.04;
constexpr std::int64_t kTableShots = 32768;

Outcome noisy_w() {
  Outcome o;
  const std::pair<int, double> cases[] = {{8, 0.053}, {9, 0.047}, {10, 0.042}};
  for (const auto& [n, t] : cases) {
    const auto start = Clock::now();
    const DensityMatrix w = w_state(n);
    const NoiseModel noise{kTableLambda, Sampling::Multinomial, 7};
    const DiagonalRecord diag = sample_diagonal(w, kTableShots, noise);
    const MeasurementPlan plan = select_offdiagonal(diag, t);
    const auto records = sample_counts(w, plan, kTableShots, noise).records;
    MleOptions opt;
    opt.seed = 7;
    const ReconstructionResult r = reconstruct(records, opt);
    const double f = fidelity(w, r.rho);
    const double s = seconds_since(start);
    const double formula = double((1 << n) + n * n - n);
    o.require(std::abs(double(plan.size()) - formula) <= 0.01 * formula, "count band n=" + std::to_string(n));
    o.require(f >= 0.85 && f <= 0.97, "fidelity band n=" + std::to_string(n));
    if (n == 10) o.require(s < 1800.0, "n=10 runtime");
    o.detail << " n=" << n << ": " << plan.size() << " meas (formula " << formula << "), F=" << f << ", " << s
             << " s;";
  }
  return o;
}

// Zeroes the below-threshold pairs and projects back onto states.
DensityMatrix thresholded(const Matrix& rho, double t) {
  Matrix out = rho;
  const RealVector p = rho.diagonal().real();
  for (Index i = 0; i < rho.rows(); ++i)
    for (Index j = 0; j < rho.rows(); ++j)
      if (i != j && std::sqrt(std::max(0.0, p(i) * p(j))) < t) out(i, j) = 0.0;
  return psd_projection(out);
}

Outcome bound_validity() {
  Outcome o;
  Rng rng(2718);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::uniform_int_distribution<int> qubits(1, 4);
  o.require(fidelity_bound({w_state(4).diagonal(), 0.0, 1}) == 1.0, "t=0");
  double min_slack = std::numeric_limits<double>::infinity();
  int informative = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = qubits(rng);
    const Index d = Index{1} << n;
    const DensityMatrix rho(testing::random_density(d, rng, 1 + trial % std::min<Index>(d, 3)));
    const double t = 0.3 * uni(rng);
    const double bound = fidelity_bound({rho.diagonal(), t, numerical_rank(rho)});
    const double f = fidelity(rho, thresholded(rho.matrix(), t));
    min_slack = std::min(min_slack, f - bound);
    if (bound > 0.0) ++informative;
    o.require(f >= bound - 1e-8, "trial " + std::to_string(trial));
  }
  o.detail << "100 states, " << informative << " with a nonzero bound, min slack " << min_slack;
  return o;
}

Outcome color_code_counts() {
  Outcome o;
  const auto start = Clock::now();
  const DensityMatrix c0 = color_code_state(0);
  const MeasurementPlan plan = select_offdiagonal(c0.diagonal(), 0.01);
  const auto settings = settings_for_plan(plan);
  const std::size_t n_support = 8;
  o.require(plan.size() == 184, "184 measurements");
  o.require(settings.size() == 57, "57 settings");
  o.require(settings.size() <= 1 + n_support * (n_support - 1), "1+N(N-1) bound");
  const double s = seconds_since(start);
  o.require(s < 5.0, "runtime");
  o.detail << plan.size() << " measurements, " << settings.size() << " settings, bound " << 1 + 8 * 7 << ", " << s
           << " s";
  return o;
}

Outcome mle_numerics() {
  Outcome o;
  Rng rng(314);
  double worst_rel = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 3;
    const DensityMatrix rho(testing::random_density(Index{1} << n, rng));
    const auto records = sample_counts(rho, select_offdiagonal(rho.diagonal(), 0.0), 10000,
                                       NoiseModel{0.0, Sampling::Multinomial, std::uint64_t(trial)})
                             .records;
    LikelihoodModel model(records, {});
    RealVector x(model.parameter_count());
    std::normal_distribution<double> g(0.0, 1.0);
    for (Index k = 0; k < x.size(); ++k) x(k) = g(rng);
    RealVector grad;
    model.value_and_gradient(x, grad);
    RealVector fd(x.size());
    for (Index k = 0; k < x.size(); ++k) {
      const double h = 1e-6 * std::max(1.0, std::abs(x(k)));
      RealVector a = x, b = x;
      a(k) += h;
      b(k) -= h;
      fd(k) = (model.value(a) - model.value(b)) / (2 * h);
    }
    worst_rel = std::max(worst_rel, (grad - fd).norm() / grad.norm());
  }
  o.require(worst_rel <= 1e-5, "gradient");
  double worst_infidelity = 0.0;
  for (int n = 1; n <= 3; ++n) {
    for (int trial = 0; trial < 3; ++trial) {
      const DensityMatrix psi(testing::random_density(Index{1} << n, rng, 1));
      const ReconstructionResult r = reconstruct(exact_records(psi, 0.0, 100000000));
      worst_infidelity = std::max(worst_infidelity, 1.0 - fidelity(psi, r.rho));
    }
  }
  o.require(worst_infidelity <= 1e-6, "exact-data fidelity");
  o.detail << "gradient rel err " << worst_rel << " over 50 points; worst 1-F " << worst_infidelity;
  return o;
}

Outcome inversion_and_projection() {
  Outcome o;
  Rng rng(99);
  double worst = 0.0;
  for (int n = 1; n <= 3; ++n) {
    const auto set = complete_projector_set(n);
    for (int trial = 0; trial < 5; ++trial) {
      const Matrix rho = testing::random_density(Index{1} << n, rng);
      RealVector e(static_cast<Index>(set.size()));
      for (std::size_t k = 0; k < set.size(); ++k) e(static_cast<Index>(k)) = expectation(rho, set[k]);
      worst = std::max(worst, (linear_inversion(set, e) - rho).cwiseAbs().maxCoeff());
    }
  }
  o.require(worst <= 1e-9, "inversion identity");
  Matrix a = Matrix::Zero(2, 2);
  a.diagonal() << 1.2, -0.2;
  Matrix ea = Matrix::Zero(2, 2);
  ea.diagonal() << 1.0, 0.0;
  Matrix b = Matrix::Zero(3, 3);
  b.diagonal() << 0.9, 0.4, -0.3;
  Matrix eb = Matrix::Zero(3, 3);
  eb.diagonal() << 0.75, 0.25, 0.0;
  const double ra = (psd_projection(a).matrix() - ea).norm();
  const double rb = (psd_project(b) - eb).norm();
  o.require(ra < 1e-12 && rb < 1e-12, "projection fixtures");
  o.detail << "inversion error " << worst << "; fixtures " << ra << ", " << rb;
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"projector fixtures", projector_fixtures},
      {"completeness n=1..5", completeness},
      {"Frobenius minimizer n=1,2", frobenius_oracle},
      {"noiseless W, n=4..7", noiseless_w},
      {"noisy W, n=8..10", noisy_w},
      {"fidelity bound", bound_validity},
      {"color-code counts", color_code_counts},
      {"MLE numerics", mle_numerics},
      {"inversion and projection", inversion_and_projection},
  };
  int failures = 0;
  int index = 1;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " exception: " << e.what();
    }
    std::printf("%s %d %s: %s\n", o.pass ? "PASS" : "FAIL", index++, name, o.detail.str().c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
