#pragma once

#include <cmath>
#include <deque>
#include <limits>
#include <vector>

#include <Eigen/Core>

namespace tqst {

struct LbfgsOptions {
  int memory = 10;
  int max_iterations = 5000;
  double gradient_tolerance = 1e-6;
  /// Also stop once f fell by at most objective_tolerance * max(|f|, 1) over
  /// the last objective_window iterations. Zero disables the test.
  double objective_tolerance = 0.0;
  int objective_window = 10;
  double armijo = 1e-4;     // sufficient decrease
  double curvature = 0.9;   // weak Wolfe
  int max_line_search = 60;
};

template <typename Scalar>
struct LbfgsResult {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x;
  Scalar value{};
  Scalar gradient_norm{};
  int iterations = 0;
  bool converged = false;
  bool stalled = false;  ///< stopped by the objective test
  bool line_search_failed = false;
  std::vector<Scalar> history;  ///< objective after each accepted step, starting point first
};

/// Limited-memory BFGS with a bisection weak-Wolfe line search. Every accepted
/// step satisfies the sufficient-decrease condition, so the objective is
/// non-increasing along `history`.
///
/// `fn(x, grad)` returns f(x) and writes the gradient into `grad`.
template <typename Scalar, typename Objective>
LbfgsResult<Scalar> minimize_lbfgs(Objective&& fn, Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x,
                                   const LbfgsOptions& opt = {}) {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  LbfgsResult<Scalar> out;
  Vec g(x.size());
  Scalar f = fn(x, g);
  out.history.push_back(f);

  std::deque<Vec> s_hist, y_hist;
  std::deque<Scalar> rho_hist;
  Vec g_new(x.size()), x_new(x.size()), dir(x.size());

  int it = 0;
  for (; it < opt.max_iterations; ++it) {
    if (g.norm() <= opt.gradient_tolerance) {
      out.converged = true;
      break;
    }
    const auto h = out.history.size();
    if (opt.objective_tolerance > 0 && h > static_cast<std::size_t>(opt.objective_window)) {
      const Scalar drop = out.history[h - 1 - opt.objective_window] - f;
      if (drop <= opt.objective_tolerance * std::max<Scalar>(std::abs(f), 1)) {
        out.converged = true;
        out.stalled = true;
        break;
      }
    }
    // Two-loop recursion.
    dir = -g;
    std::vector<Scalar> alpha(s_hist.size());
    for (int k = static_cast<int>(s_hist.size()) - 1; k >= 0; --k) {
      alpha[k] = rho_hist[k] * s_hist[k].dot(dir);
      dir -= alpha[k] * y_hist[k];
    }
    if (!s_hist.empty()) {
      dir *= s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
    } else {
      dir /= std::max(Scalar(1), g.norm());
    }
    for (std::size_t k = 0; k < s_hist.size(); ++k) {
      const Scalar beta = rho_hist[k] * y_hist[k].dot(dir);
      dir += (alpha[k] - beta) * s_hist[k];
    }
    Scalar slope = g.dot(dir);
    if (!(slope < 0)) {
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      dir = -g / std::max(Scalar(1), g.norm());
      slope = g.dot(dir);
    }

    Scalar step = 1, lo = 0, hi = std::numeric_limits<Scalar>::infinity();
    Scalar f_new = f;
    bool accepted = false;
    Scalar best_step = 0, best_f = f;
    for (int ls = 0; ls < opt.max_line_search; ++ls) {
      x_new = x + step * dir;
      f_new = fn(x_new, g_new);
      if (!std::isfinite(f_new) || f_new > f + opt.armijo * step * slope) {
        hi = step;
      } else {
        if (f_new < best_f) {
          best_f = f_new;
          best_step = step;
        }
        if (g_new.dot(dir) < opt.curvature * slope) {
          lo = step;
        } else {
          accepted = true;
          break;
        }
      }
      step = std::isfinite(hi) ? (lo + hi) / 2 : 2 * lo;
    }
    if (!accepted) {
      if (best_step <= 0) {
        if (!s_hist.empty()) {
          // Retry once from steepest descent before giving up.
          s_hist.clear();
          y_hist.clear();
          rho_hist.clear();
          continue;
        }
        out.line_search_failed = true;
        break;
      }
      x_new = x + best_step * dir;
      f_new = fn(x_new, g_new);
    }

    Vec s = x_new - x;
    Vec y = g_new - g;
    const Scalar sy = s.dot(y);
    if (sy > std::numeric_limits<Scalar>::epsilon() * s.norm() * y.norm()) {
      if (static_cast<int>(s_hist.size()) == opt.memory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(Scalar(1) / sy);
    }
    x = x_new;
    g = g_new;
    f = f_new;
    out.history.push_back(f);
  }
  if (!out.converged && g.norm() <= opt.gradient_tolerance) out.converged = true;
  out.x = std::move(x);
  out.value = f;
  out.gradient_norm = g.norm();
  out.iterations = it;
  return out;
}

}  // namespace tqst
