#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "support.hpp"
#include "tqst/projectors.hpp"
#include "tqst/simulator.hpp"
#include "tqst/threshold.hpp"

using namespace tqst;

namespace {

std::set<std::pair<std::string, std::string>> target_set(const MeasurementPlan& plan) {
  std::set<std::pair<std::string, std::string>> out;
  for (const auto& t : plan.targets) {
    out.emplace(std::to_string(t.element.i) + "," + std::to_string(t.element.j) + "," +
                    std::string(to_string(t.element.part)),
                t.projector.word());
  }
  return out;
}

RealVector w_diagonal(int n) {
  RealVector p = RealVector::Zero(Index{1} << n);
  for (int k = 0; k < n; ++k) p(Index{1} << k) = 1.0 / n;
  return p;
}

}  // namespace

TEST_CASE("plan sizes") {
  CHECK(select_offdiagonal(w_diagonal(7), 1e-4).size() == 170);
  CHECK(select_offdiagonal(w_diagonal(4), 0.1).size() == 28);
  RealVector cc = RealVector::Zero(128);
  for (Index k : color_code_support(0)) cc(k) = 1.0 / 8.0;
  CHECK(select_offdiagonal(cc, 0.01).size() == 184);

  Rng rng(2);
  for (int n = 1; n <= 4; ++n) {
    const RealVector p = testing::random_density(Index{1} << n, rng).diagonal().real();
    CHECK(select_offdiagonal(p, 0.0).size() == std::size_t(1) << (2 * n));
    CHECK(select_offdiagonal(p, 1.0).size() == std::size_t(1) << n);
  }
}

TEST_CASE("plan size for a sparse diagonal") {
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + trial % 3;
    const Index d = Index{1} << n;
    const Index support = 1 + trial % 6;
    RealVector p = RealVector::Zero(d);
    std::vector<Index> idx(static_cast<std::size_t>(d));
    std::iota(idx.begin(), idx.end(), Index{0});
    std::shuffle(idx.begin(), idx.end(), rng);
    for (Index k = 0; k < support; ++k) p(idx[static_cast<std::size_t>(k)]) = 0.5 + double(k);
    p /= p.sum();
    double smallest = 1.0;
    for (Index a = 0; a < d; ++a)
      for (Index b = a + 1; b < d; ++b)
        if (p(a) > 0 && p(b) > 0) smallest = std::min(smallest, std::sqrt(p(a) * p(b)));
    const MeasurementPlan plan = select_offdiagonal(p, smallest * 0.999);
    CHECK(plan.size() == static_cast<std::size_t>(d + support * (support - 1)));
  }
}

TEST_CASE("boundary is inclusive") {
  RealVector p(2);
  p << 0.5, 0.5;
  CHECK(select_offdiagonal(p, 0.5).size() == 4);
  CHECK(select_offdiagonal(p, std::nextafter(0.5, 1.0)).size() == 2);
}

TEST_CASE("plans are monotone in the threshold") {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const RealVector p = testing::random_density(16, rng).diagonal().real();
    const double t1 = std::uniform_real_distribution<double>(0, 0.2)(rng);
    const double t2 = t1 + std::uniform_real_distribution<double>(0, 0.2)(rng);
    const auto a = target_set(select_offdiagonal(p, t1));
    const auto b = target_set(select_offdiagonal(p, t2));
    CHECK(std::includes(a.begin(), a.end(), b.begin(), b.end()));
  }
}

TEST_CASE("plan layout") {
  const MeasurementPlan plan = select_offdiagonal(w_diagonal(3), 0.1);
  CHECK(plan.offdiagonal_pairs() == 3);
  for (Index k = 0; k < 8; ++k) {
    CHECK(plan.targets[static_cast<std::size_t>(k)].element.part == ElementPart::Diag);
    CHECK(plan.targets[static_cast<std::size_t>(k)].element.i == k);
  }
  for (const auto& t : plan.targets) {
    CHECK(ProductProjector::from_word(t.projector.word()) == t.projector);
    CHECK(projector_for(3, t.element) == t.projector);
  }
}

TEST_CASE("diagonal record validation") {
  CHECK_NOTHROW(DiagonalRecord({3, 1}, 4));
  CHECK_THROWS_AS(DiagonalRecord({3, 1}, 5), std::invalid_argument);
  CHECK_THROWS_AS(DiagonalRecord({3, 1, 0}, 4), std::invalid_argument);
  CHECK_THROWS_AS(DiagonalRecord({5, -1}, 4), std::invalid_argument);
  CHECK((DiagonalRecord({3, 1}, 4).probabilities() - RealVector{{0.75, 0.25}}).norm() < 1e-15);
}

TEST_CASE("threshold formulas") {
  const ThresholdEstimate e = threshold_from_extremes(100, 400, 4, 10000);
  CHECK(e.t0 == doctest::Approx(140));
  CHECK(e.t_signal == doctest::Approx(320));
  CHECK(e.t == doctest::Approx(0.032));
  CHECK(e.favorable);

  const std::int64_t ns = 10000;
  RealVector ideal(2);
  ideal << 1.0, 0.0;
  std::vector<DiagonalRecord> runs(3, DiagonalRecord({ns, 0}, ns));
  const ThresholdEstimate one = estimate_threshold(ideal, runs, 1);
  CHECK(one.t0 == doctest::Approx(0.0));
  CHECK(one.t_signal == doctest::Approx(double(ns) - std::sqrt(double(ns))));
  CHECK(one.t == doctest::Approx(1.0 - 1.0 / std::sqrt(double(ns))));
}

TEST_CASE("threshold from noisy W4 replicas") {
  const DensityMatrix w4 = w_state(4);
  std::vector<DiagonalRecord> runs;
  for (int r = 0; r < 100; ++r) {
    runs.push_back(sample_diagonal(w4, 10000, NoiseModel{0.02, Sampling::Multinomial, derive_seed(42, r)}));
  }
  const ThresholdEstimate e = estimate_threshold(w4.diagonal(), runs, 4);
  CHECK(e.favorable);
  CHECK(e.t > 0.0);
  CHECK(e.t < 0.25);
  // Regression constant of this seeded run.
  CHECK(e.t == doctest::Approx(0.21541753369666286).epsilon(1e-12));
}
