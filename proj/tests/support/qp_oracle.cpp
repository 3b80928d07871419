// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fnd Authors

#include "qp_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fnd::testing {

double oracle_kernel(const DenseProblem& problem, const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  if (problem.rbf) {
    for (std::size_t k = 0; k < a.size(); ++k) acc += (a[k] - b[k]) * (a[k] - b[k]);
    return std::exp(-problem.alpha * acc);
  }
  for (std::size_t k = 0; k < a.size(); ++k) acc += a[k] * b[k];
  return acc;
}

double OracleSolution::decision(const DenseProblem& problem, const std::vector<double>& point) const {
  double sum = bias;
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    sum += lambda[i] * problem.y[i] * oracle_kernel(problem, problem.x[i], point);
  }
  return sum;
}

namespace {

/// Euclidean projection of z onto {0 <= l <= R, y'l = 0}. The multiplier nu
/// solves g(nu) = sum y_i clip(z_i - nu y_i, 0, R) = 0, where g is piecewise
/// linear and non-increasing with kinks at y_i z_i and y_i (z_i - R).
std::vector<double> project(const std::vector<double>& z, const std::vector<int>& y, double R) {
  const std::size_t n = z.size();
  const auto g = [&](double nu) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += y[i] * std::clamp(z[i] - nu * y[i], 0.0, R);
    return s;
  };
  std::vector<double> kinks;
  kinks.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    kinks.push_back(y[i] * z[i]);
    kinks.push_back(y[i] * (z[i] - R));
  }
  std::sort(kinks.begin(), kinks.end());
  kinks.erase(std::unique(kinks.begin(), kinks.end()), kinks.end());
  // g is positive left of the first kink region and negative right of it.
  double nu = kinks.front();
  for (std::size_t k = 0; k + 1 < kinks.size(); ++k) {
    const double ga = g(kinks[k]);
    const double gb = g(kinks[k + 1]);
    if (ga == 0.0) {
      nu = kinks[k];
      break;
    }
    if (gb == 0.0) {
      nu = kinks[k + 1];
      break;
    }
    if (ga > 0.0 && gb < 0.0) {
      nu = kinks[k] + (kinks[k + 1] - kinks[k]) * ga / (ga - gb);
      break;
    }
    nu = kinks[k + 1];
  }
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = std::clamp(z[i] - nu * y[i], 0.0, R);
  return out;
}

}  // namespace

OracleSolution solve_dual_reference(const DenseProblem& problem, std::size_t max_iter) {
  const std::size_t n = problem.x.size();
  std::vector<double> Q(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Q[i * n + j] = problem.y[i] * problem.y[j] * oracle_kernel(problem, problem.x[i], problem.x[j]);
    }
  }
  // Largest eigenvalue by power iteration bounds the gradient's Lipschitz constant.
  std::vector<double> v(n, 1.0);
  double L = 0.0;
  for (int k = 0; k < 500; ++k) {
    std::vector<double> next(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) next[i] += Q[i * n + j] * v[j];
    double norm = 0.0;
    for (double t : next) norm += t * t;
    norm = std::sqrt(norm);
    if (norm == 0.0) break;
    for (std::size_t i = 0; i < n; ++i) v[i] = next[i] / norm;
    L = norm;
  }
  L = std::max(L * 1.05, 1e-12);

  const auto objective = [&](const std::vector<double>& l) {
    double lin = 0.0;
    double quad = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      lin += l[i];
      for (std::size_t j = 0; j < n; ++j) quad += l[i] * Q[i * n + j] * l[j];
    }
    return lin - 0.5 * quad;
  };

  // Gradient-mapping norm |l - P(l + grad / L)|, zero exactly at the optimum.
  const auto residual = [&](const std::vector<double>& l) {
    std::vector<double> step(n);
    for (std::size_t i = 0; i < n; ++i) {
      double g = 1.0;
      for (std::size_t j = 0; j < n; ++j) g -= Q[i * n + j] * l[j];
      step[i] = l[i] + g / L;
    }
    const std::vector<double> p = project(step, problem.y, problem.R);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(p[i] - l[i]));
    return worst;
  };

  std::vector<double> x(n, 0.0);
  std::vector<double> z = x;
  double t = 1.0;
  double best = objective(x);
  std::size_t iter = 0;
  for (; iter < max_iter; ++iter) {
    std::vector<double> step(n);
    for (std::size_t i = 0; i < n; ++i) {
      double g = 1.0;  // gradient of the maximized objective
      for (std::size_t j = 0; j < n; ++j) g -= Q[i * n + j] * z[j];
      step[i] = z[i] + g / L;
    }
    std::vector<double> next = project(step, problem.y, problem.R);
    const double value = objective(next);
    if (value < best && t > 1.0) {
      // Adaptive restart drops the momentum whenever the objective regresses.
      // A plain projected step is monotone up to rounding, so it is kept.
      t = 1.0;
      z = x;
      continue;
    }
    best = std::max(best, value);
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    for (std::size_t i = 0; i < n; ++i) z[i] = next[i] + ((t - 1.0) / t_next) * (next[i] - x[i]);
    x = std::move(next);
    t = t_next;
    if (iter % 50 == 0 && residual(x) < 1e-13 * std::max(1.0, problem.R)) break;
  }

  OracleSolution sol;
  sol.lambda = x;
  sol.dual_objective = objective(x);
  sol.iterations = iter;

  // Bias from margin vectors, or the midpoint of the feasible interval.
  const double eps = 1e-9 * std::max(1.0, problem.R);
  double free_sum = 0.0;
  std::size_t free_count = 0;
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    double f = 0.0;
    for (std::size_t j = 0; j < n; ++j) f += x[j] * problem.y[j] * oracle_kernel(problem, problem.x[j], problem.x[i]);
    const double b = problem.y[i] - f;  // bias putting point i on its margin
    if (x[i] > eps && x[i] < problem.R - eps) {
      free_sum += b;
      ++free_count;
    } else if (x[i] <= eps) {
      // y_i (f + b) >= 1
      if (problem.y[i] == 1) lower = std::max(lower, b); else upper = std::min(upper, b);
    } else {
      // y_i (f + b) <= 1
      if (problem.y[i] == 1) upper = std::min(upper, b); else lower = std::max(lower, b);
    }
  }
  if (free_count > 0) {
    sol.bias = free_sum / static_cast<double>(free_count);
  } else {
    sol.bias = 0.5 * (lower + upper);
  }
  return sol;
}

}  // namespace fnd::testing
