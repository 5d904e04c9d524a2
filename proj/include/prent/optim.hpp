#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <deque>
#include <limits>

namespace prent::optim {

struct lbfgs_options {
  int history = 10;
  int max_iterations = 1000;
  /// stop once the largest absolute gradient component falls below this
  double gradient_tolerance = 1e-4;
  int max_line_search = 40;
};

template <typename Scalar>
struct lbfgs_result {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x;
  Scalar value = 0;
  int iterations = 0;
  bool converged = false;
};

/// Limited-memory BFGS with an Armijo backtracking line search. `objective`
/// maps (x, gradient&) to the function value and fills the gradient.
template <typename Scalar, typename Objective>
lbfgs_result<Scalar> minimize(Objective&& objective, Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x,
                              const lbfgs_options& opts = {}) {
  using vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  vec g(x.size());
  Scalar f = objective(x, g);
  std::deque<vec> s_hist, y_hist;
  std::deque<Scalar> rho_hist;
  lbfgs_result<Scalar> res;

  for (int it = 0; it < opts.max_iterations; ++it) {
    if (g.size() == 0 || g.cwiseAbs().maxCoeff() <= opts.gradient_tolerance) {
      res.converged = true;
      res.iterations = it;
      break;
    }
    // two-loop recursion
    vec q = g;
    std::vector<Scalar> alpha(s_hist.size());
    for (int i = static_cast<int>(s_hist.size()) - 1; i >= 0; --i) {
      alpha[static_cast<std::size_t>(i)] = rho_hist[static_cast<std::size_t>(i)] * s_hist[static_cast<std::size_t>(i)].dot(q);
      q -= alpha[static_cast<std::size_t>(i)] * y_hist[static_cast<std::size_t>(i)];
    }
    if (!s_hist.empty()) q *= s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
    for (std::size_t i = 0; i < s_hist.size(); ++i) {
      const Scalar beta = rho_hist[i] * y_hist[i].dot(q);
      q += s_hist[i] * (alpha[i] - beta);
    }
    vec dir = -q;
    Scalar slope = g.dot(dir);
    if (!(slope < 0)) { // not a descent direction: restart from steepest descent
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      dir = -g;
      slope = -g.squaredNorm();
    }
    Scalar step = s_hist.empty() ? std::min<Scalar>(1, Scalar(1) / std::sqrt(g.squaredNorm())) : Scalar(1);
    vec x_new, g_new(x.size());
    Scalar f_new = f;
    bool accepted = false;
    for (int ls = 0; ls < opts.max_line_search; ++ls) {
      x_new = x + step * dir;
      f_new = objective(x_new, g_new);
      if (std::isfinite(static_cast<double>(f_new)) && f_new <= f + Scalar(1e-4) * step * slope) {
        accepted = true;
        break;
      }
      step *= Scalar(0.5);
    }
    res.iterations = it + 1;
    if (!accepted) break;
    vec s = x_new - x;
    vec y = g_new - g;
    const Scalar sy = s.dot(y);
    if (sy > std::numeric_limits<Scalar>::epsilon() * y.squaredNorm()) {
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(Scalar(1) / sy);
      if (static_cast<int>(s_hist.size()) > opts.history) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
    x = std::move(x_new);
    g = std::move(g_new);
    f = f_new;
  }
  if (g.size() == 0 || g.cwiseAbs().maxCoeff() <= opts.gradient_tolerance) res.converged = true;
  res.x = std::move(x);
  res.value = f;
  return res;
}

} // namespace prent::optim
