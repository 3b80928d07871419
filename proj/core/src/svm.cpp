// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fnd Authors

#include "fnd/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "fnd/error.hpp"
#include "fnd/rng.hpp"
#include "kernel_cache.hpp"

namespace fnd {

std::string_view to_string(FeatureSpace space) noexcept {
  switch (space) {
    case FeatureSpace::kBow: return "bow";
    case FeatureSpace::kTfidf: return "tfidf";
    case FeatureSpace::kW2v: return "w2v";
  }
  return "unknown";
}

std::string_view to_string(KernelKind kernel) noexcept {
  return kernel == KernelKind::kLinear ? "linear" : "rbf";
}

FeatureSpace parse_feature_space(std::string_view name) {
  if (name == "bow") return FeatureSpace::kBow;
  if (name == "tfidf") return FeatureSpace::kTfidf;
  if (name == "w2v") return FeatureSpace::kW2v;
  throw Error(ErrorKind::kConfig, "unknown vectorizer '" + std::string(name) + "' (expected bow, tfidf or w2v)");
}

KernelKind parse_kernel(std::string_view name) {
  if (name == "linear") return KernelKind::kLinear;
  if (name == "rbf") return KernelKind::kRbf;
  throw Error(ErrorKind::kConfig, "unknown kernel '" + std::string(name) + "' (expected linear or rbf)");
}

Label unmap_label(int y) {
  if (y == 1) return Label::kReal;
  if (y == -1) return Label::kFake;
  throw Error(ErrorKind::kDomain, "svm label must be +1 or -1, got " + std::to_string(y));
}

void TrainingSet::validate() const {
  if (x.size() != y.size()) throw Error(ErrorKind::kPrecondition, "feature and label counts differ");
  if (x.size() < 2) throw Error(ErrorKind::kPrecondition, "need at least two training examples");
  bool pos = false;
  bool neg = false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (y[i] == 1) {
      pos = true;
    } else if (y[i] == -1) {
      neg = true;
    } else {
      throw Error(ErrorKind::kPrecondition, "label at row " + std::to_string(i) + " is not +-1");
    }
    if (x[i].dim != dim) {
      throw Error(ErrorKind::kPrecondition, "row " + std::to_string(i) + " has dimension " +
                                                std::to_string(x[i].dim) + ", expected " + std::to_string(dim));
    }
    if (!x[i].well_formed()) {
      throw Error(ErrorKind::kPrecondition, "row " + std::to_string(i) + " is not a well-formed sparse vector");
    }
  }
  if (!pos || !neg) throw Error(ErrorKind::kPrecondition, "training set must contain both classes");
}

void SolverConfig::validate() const {
  if (!(tolerance > 0.0)) throw Error(ErrorKind::kConfig, "solver tolerance must be > 0");
  if (max_iter < 1) throw Error(ErrorKind::kConfig, "solver max_iter must be >= 1");
  if (threads < 1) throw Error(ErrorKind::kConfig, "solver threads must be >= 1");
}

namespace {

void check_regularization(double R) {
  if (!(R > 0.0) || !std::isfinite(R)) {
    throw Error(ErrorKind::kPrecondition, "regularization R must be a positive finite number");
  }
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorKind::kDomain, "rbf alpha must be a positive finite number");
  }
}

/// Bias from the dual gradient. `y_grad[t]` is y_t * G_t where G is the
/// gradient of 1/2 a'Qa - e'a without the bias term. Averages over free
/// multipliers, otherwise takes the midpoint of the feasible interval.
double bias_from_gradient(std::span<const double> alpha, std::span<const int> y,
                          std::span<const double> y_grad, double R) {
  double upper = std::numeric_limits<double>::infinity();
  double lower = -std::numeric_limits<double>::infinity();
  double free_sum = 0.0;
  std::size_t free_count = 0;
  for (std::size_t t = 0; t < alpha.size(); ++t) {
    const double yg = y_grad[t];
    if (alpha[t] >= R) {
      if (y[t] == -1) upper = std::min(upper, yg); else lower = std::max(lower, yg);
    } else if (alpha[t] <= 0.0) {
      if (y[t] == 1) upper = std::min(upper, yg); else lower = std::max(lower, yg);
    } else {
      ++free_count;
      free_sum += yg;
    }
  }
  double rho = 0.0;
  if (free_count > 0) {
    rho = free_sum / static_cast<double>(free_count);
  } else if (std::isfinite(upper) && std::isfinite(lower)) {
    rho = (upper + lower) / 2.0;
  } else if (std::isfinite(upper)) {
    rho = upper;
  } else if (std::isfinite(lower)) {
    rho = lower;
  }
  return -rho;
}

template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  if (threads <= 1 || count < 1024) {
    fn(std::size_t{0}, count);
    return;
  }
  std::vector<std::jthread> pool;
  const std::size_t chunk = (count + threads - 1) / threads;
  for (std::size_t begin = 0; begin < count; begin += chunk) {
    pool.emplace_back([&fn, begin, end = std::min(count, begin + chunk)] { fn(begin, end); });
  }
}

/// Rows of Q_ik = y_i y_k K(x_i, x_k), computed on demand through a dense
/// scratch copy of x_i and cached.
template <typename Kernel>
class KernelRows {
 public:
  KernelRows(const TrainingSet& data, Kernel kernel, const SolverConfig& cfg)
      : data_(data),
        kernel_(kernel),
        threads_(cfg.threads),
        cache_(data.size(), cfg.cache_bytes),
        scratch_(data.dim, 0.0) {
    norms_.reserve(data.size());
    for (const auto& x : data.x) norms_.push_back(squared_norm(x));
    diag_.reserve(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) diag_.push_back(kernel_.self(norms_[i]));
  }

  std::span<const double> row(std::size_t i) {
    const auto acquired = cache_.acquire(i);
    const std::span<double> values = acquired.first;
    if (acquired.second) return values;
    const auto& xi = data_.x[i];
    for (const auto& e : xi.entries) scratch_[e.index] = e.value;
    const double yi = data_.y[i];
    parallel_for(data_.size(), threads_, [&](std::size_t begin, std::size_t end) {
      for (std::size_t k = begin; k < end; ++k) {
        values[k] = yi * data_.y[k] * kernel_(norms_[i], norms_[k], dot(data_.x[k], scratch_));
      }
    });
    values[i] = diag_[i];
    for (const auto& e : xi.entries) scratch_[e.index] = 0.0;
    return values;
  }

  /// Q_ii, which equals K(x_i, x_i).
  std::span<const double> diagonal() const noexcept { return diag_; }

 private:
  const TrainingSet& data_;
  Kernel kernel_;
  unsigned threads_;
  detail::KernelCache cache_;
  std::vector<double> norms_;
  std::vector<double> diag_;
  std::vector<double> scratch_;
};

struct LinearKernel {
  double self(double norm) const noexcept { return norm; }
  double operator()(double, double, double inner) const noexcept { return inner; }
};

struct RbfKernel {
  double alpha;
  double self(double) const noexcept { return 1.0; }
  double operator()(double norm_a, double norm_b, double inner) const noexcept {
    return std::exp(-alpha * std::max(0.0, norm_a + norm_b - 2.0 * inner));
  }
};

double half_dual(std::span<const double> alpha, std::span<const double> grad) {
  // f = 1/2 a'Qa - e'a = 1/2 sum a_t (G_t - 1); the dual objective is -f.
  double f = 0.0;
  for (std::size_t t = 0; t < alpha.size(); ++t) f += alpha[t] * (grad[t] - 1.0);
  return -0.5 * f;
}

struct SmoResult {
  std::vector<double> a;
  std::vector<double> grad;  // G = Qa - e
  std::size_t iterations = 0;
  double violation = 0.0;
};

/// Sequential minimal optimization on min 1/2 a'Qa - e'a subject to
/// 0 <= a <= R and y'a = 0, without shrinking.
/// `a` must be feasible and `grad` must equal Qa - e.
template <typename Rows>
SmoResult solve_smo(const TrainingSet& data, Rows& rows, double R, const SolverConfig& cfg,
                    const ProgressCallback& progress, std::vector<double> a, std::vector<double> grad) {
  const std::size_t n = data.size();
  const auto& y = data.y;
  const auto qd = rows.diagonal();
  constexpr double kTau = 1e-12;

  std::size_t iter = 0;
  double violation = 0.0;
  for (;;) {
    // i: largest -y_t G_t over I_up.
    double gmax = -std::numeric_limits<double>::infinity();
    std::size_t i = n;
    for (std::size_t t = 0; t < n; ++t) {
      if (y[t] == 1 ? a[t] < R : a[t] > 0.0) {
        const double v = -y[t] * grad[t];
        if (v >= gmax) {
          gmax = v;
          i = t;
        }
      }
    }
    // j: over I_low, either the largest y_t G_t or the best second-order gain.
    double gmax2 = -std::numeric_limits<double>::infinity();
    std::size_t j_first = n;
    std::size_t j_second = n;
    double best_gain = std::numeric_limits<double>::infinity();
    std::span<const double> qi;
    if (i < n && cfg.working_set == WorkingSetRule::kSecondOrder) qi = rows.row(i);
    for (std::size_t t = 0; t < n; ++t) {
      if (!(y[t] == 1 ? a[t] > 0.0 : a[t] < R)) continue;
      const double v = y[t] * grad[t];
      if (v >= gmax2) {
        gmax2 = v;
        j_first = t;
      }
      if (!qi.empty()) {
        const double diff = gmax + v;
        if (diff > 0.0) {
          // |phi_i - phi_t|^2 = K_ii + K_tt - 2 K_it with K_it = y_i y_t Q_it.
          const double quad = qd[i] + qd[t] - 2.0 * static_cast<double>(y[i] * y[t]) * qi[t];
          const double gain = -(diff * diff) / (quad > 0.0 ? quad : kTau);
          if (gain <= best_gain) {
            best_gain = gain;
            j_second = t;
          }
        }
      }
    }
    violation = (i < n && j_first < n) ? gmax + gmax2 : 0.0;
    if (violation < cfg.tolerance) break;
    const std::size_t j = cfg.working_set == WorkingSetRule::kSecondOrder && j_second < n ? j_second : j_first;

    if (iter >= cfg.max_iter) {
      throw ConvergenceError("smo did not converge within " + std::to_string(cfg.max_iter) +
                                 " iterations (max KKT violation " + std::to_string(violation) + ")",
                             half_dual(a, grad), violation);
    }
    ++iter;

    const auto q_i = rows.row(i);
    const auto q_j = rows.row(j);
    const double old_ai = a[i];
    const double old_aj = a[j];
    if (y[i] != y[j]) {
      double quad = qd[i] + qd[j] + 2.0 * q_i[j];
      if (quad <= 0.0) quad = kTau;
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = a[i] - a[j];
      a[i] += delta;
      a[j] += delta;
      if (diff > 0.0) {
        if (a[j] < 0.0) {
          a[j] = 0.0;
          a[i] = diff;
        }
      } else if (a[i] < 0.0) {
        a[i] = 0.0;
        a[j] = -diff;
      }
      if (diff > 0.0) {
        if (a[i] > R) {
          a[i] = R;
          a[j] = R - diff;
        }
      } else if (a[j] > R) {
        a[j] = R;
        a[i] = R + diff;
      }
    } else {
      double quad = qd[i] + qd[j] - 2.0 * q_i[j];
      if (quad <= 0.0) quad = kTau;
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = a[i] + a[j];
      a[i] -= delta;
      a[j] += delta;
      if (sum > R) {
        if (a[i] > R) {
          a[i] = R;
          a[j] = sum - R;
        }
      } else if (a[j] < 0.0) {
        a[j] = 0.0;
        a[i] = sum;
      }
      if (sum > R) {
        if (a[j] > R) {
          a[j] = R;
          a[i] = sum - R;
        }
      } else if (a[i] < 0.0) {
        a[i] = 0.0;
        a[j] = sum;
      }
    }
    const double d_i = a[i] - old_ai;
    const double d_j = a[j] - old_aj;
    for (std::size_t t = 0; t < n; ++t) grad[t] += q_i[t] * d_i + q_j[t] * d_j;

    if (progress) progress({iter, half_dual(a, grad), violation});
  }
  return {std::move(a), std::move(grad), iter, std::max(0.0, violation)};
}

template <typename Rows>
SmoResult solve_smo(const TrainingSet& data, Rows& rows, double R, const SolverConfig& cfg,
                    const ProgressCallback& progress) {
  return solve_smo(data, rows, R, cfg, progress, std::vector<double>(data.size(), 0.0),
                   std::vector<double>(data.size(), -1.0));
}

/// w = sum a_i y_i x_i.
DenseVector fold_weights(const TrainingSet& data, std::span<const double> a) {
  DenseVector w(data.dim, 0.0);
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (a[i] == 0.0) continue;
    const double coef = a[i] * data.y[i];
    for (const auto& e : data.x[i].entries) w[e.index] += coef * e.value;
  }
  return w;
}

/// Largest KKT violation of the equality-constrained dual, as SMO measures it.
double kkt_violation(std::span<const double> a, std::span<const int> y, std::span<const double> grad, double R) {
  double up = -std::numeric_limits<double>::infinity();
  double low = -std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < a.size(); ++t) {
    if (y[t] == 1 ? a[t] < R : a[t] > 0.0) up = std::max(up, -y[t] * grad[t]);
    if (y[t] == 1 ? a[t] > 0.0 : a[t] < R) low = std::max(low, y[t] * grad[t]);
  }
  return std::isfinite(up) && std::isfinite(low) ? up + low : 0.0;
}

/// Coordinate descent on the augmented Lagrangian
///   1/2 a'Qa - e'a + mu y'a + rho/2 (y'a)^2,  0 <= a <= R,
/// with a multiplier step on mu after every epoch. The result is moved onto
/// y'a = 0 by spreading the residual over the available box slack.
std::vector<double> linear_warm_start(const TrainingSet& data, std::span<const double> qd, double R,
                                      const SolverConfig& cfg) {
  const std::size_t n = data.size();
  const auto& y = data.y;
  double rho = 0.0;
  for (double q : qd) rho += q;
  rho = rho > 0.0 ? rho / static_cast<double>(n) : 1.0;

  std::vector<double> a(n, 0.0);
  DenseVector w(data.dim, 0.0);
  std::vector<double> grad(n);
  std::vector<std::size_t> active(n);
  for (std::size_t i = 0; i < n; ++i) active[i] = i;
  std::size_t active_size = n;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  // Projected-gradient bounds of the previous epoch; coordinates at a bound
  // whose gradient lies beyond them are shrunk out of the active set.
  double pg_max_old = kInf;
  double pg_min_old = -kInf;
  Rng rng(cfg.seed);
  double s = 0.0;  // y'a
  double mu = 0.0;
  for (std::size_t epoch = 0; epoch < cfg.warm_start_epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(active.data(), active_size));
    double pg_max = -kInf;
    double pg_min = kInf;
    for (std::size_t k = 0; k < active_size; ++k) {
      const std::size_t i = active[k];
      const double yi = y[i];
      const double g = yi * dot(data.x[i], w) - 1.0 + yi * (mu + rho * s);
      double pg = 0.0;
      if (a[i] <= 0.0) {
        if (g > pg_max_old) {
          std::swap(active[k--], active[--active_size]);
          continue;
        }
        pg = std::min(g, 0.0);
      } else if (a[i] >= R) {
        if (g < pg_min_old) {
          std::swap(active[k--], active[--active_size]);
          continue;
        }
        pg = std::max(g, 0.0);
      } else {
        pg = g;
      }
      pg_max = std::max(pg_max, pg);
      pg_min = std::min(pg_min, pg);
      if (pg == 0.0) continue;
      const double next = std::clamp(a[i] - g / (qd[i] + rho), 0.0, R);
      const double delta = next - a[i];
      if (delta == 0.0) continue;
      a[i] = next;
      for (const auto& e : data.x[i].entries) w[e.index] += delta * yi * e.value;
      s += delta * yi;
    }
    mu += rho * s;
    const bool settled = pg_max - pg_min < 0.5 * cfg.tolerance && std::abs(s) < 0.5 * cfg.tolerance;
    if (settled && active_size < n) {
      // Re-examine every coordinate before trusting convergence.
      active_size = n;
      pg_max_old = kInf;
      pg_min_old = -kInf;
      continue;
    }
    if (settled) {
      for (std::size_t t = 0; t < n; ++t) grad[t] = y[t] * dot(data.x[t], w) - 1.0;
      if (kkt_violation(a, y, grad, R) < 0.5 * cfg.tolerance) break;
    }
    pg_max_old = pg_max > 0.0 ? pg_max : kInf;
    pg_min_old = pg_min < 0.0 ? pg_min : -kInf;
  }

  // Rounding dust next to a bound would otherwise count as a free vector and
  // steer the bias choice when the bias is not unique.
  constexpr double kSnap = 1e-10;
  const auto snap = [&] {
    for (auto& v : a) {
      if (v < kSnap * R) v = 0.0;
      if (v > (1.0 - kSnap) * R) v = R;
    }
  };
  snap();

  // Restore y'a = 0 by moving free multipliers in proportion to their slack
  // in the needed direction; bound multipliers keep their KKT status unless
  // the free slack is insufficient.
  s = 0.0;
  for (std::size_t t = 0; t < n; ++t) s += y[t] * a[t];
  for (const bool free_only : {true, false}) {
    if (std::abs(s) <= kSnap * R) break;  // rounding-level residual
    const double sign = s > 0.0 ? 1.0 : -1.0;
    const auto eligible = [&](std::size_t t) { return !free_only || (a[t] > 0.0 && a[t] < R); };
    double slack = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      if (eligible(t)) slack += y[t] * sign > 0 ? a[t] : R - a[t];
    }
    if (slack < std::abs(s) && free_only) continue;
    const double share = std::min(1.0, std::abs(s) / slack);
    for (std::size_t t = 0; t < n; ++t) {
      if (!eligible(t)) continue;
      if (y[t] * sign > 0) {
        a[t] -= share * a[t];
      } else {
        a[t] += share * (R - a[t]);
      }
    }
    s = 0.0;
  }
  snap();
  return a;
}

double bias_of(const SmoResult& r, const TrainingSet& data, double R) {
  std::vector<double> y_grad(r.a.size());
  for (std::size_t t = 0; t < r.a.size(); ++t) y_grad[t] = data.y[t] * r.grad[t];
  return bias_from_gradient(r.a, data.y, y_grad, R);
}

}  // namespace

KernelSvmModel train_rbf(const TrainingSet& data, double R, double alpha, const SolverConfig& cfg,
                         const ProgressCallback& progress) {
  data.validate();
  check_regularization(R);
  check_alpha(alpha);
  cfg.validate();

  KernelRows rows(data, RbfKernel{alpha}, cfg);
  const SmoResult r = solve_smo(data, rows, R, cfg, progress);

  KernelSvmModel model;
  model.h = bias_of(r, data, R);
  model.alpha = alpha;
  model.R = R;
  model.dim = data.dim;
  model.support_index.emplace();
  for (std::size_t t = 0; t < data.size(); ++t) {
    if (r.a[t] > 0.0) {
      model.support_x.push_back(data.x[t]);
      model.dual_coef.push_back(r.a[t] * data.y[t]);
      model.support_index->push_back(t);
    }
  }
  model.stats.iterations = r.iterations;
  model.stats.dual_objective = half_dual(r.a, r.grad);
  model.stats.max_violation = r.violation;
  return model;
}

LinearSvmModel train_linear(const TrainingSet& data, double R, const SolverConfig& cfg,
                            const ProgressCallback& progress) {
  data.validate();
  check_regularization(R);
  cfg.validate();

  KernelRows rows(data, LinearKernel{}, cfg);
  SmoResult r;
  if (cfg.warm_start && data.size() >= cfg.warm_start_min_rows) {
    std::vector<double> a = linear_warm_start(data, rows.diagonal(), R, cfg);
    const DenseVector w = fold_weights(data, a);
    std::vector<double> grad(data.size());
    for (std::size_t t = 0; t < data.size(); ++t) grad[t] = data.y[t] * dot(data.x[t], w) - 1.0;
    r = solve_smo(data, rows, R, cfg, progress, std::move(a), std::move(grad));
  } else {
    r = solve_smo(data, rows, R, cfg, progress);
  }

  LinearSvmModel model;
  model.w = fold_weights(data, r.a);
  model.h = bias_of(r, data, R);
  model.R = R;

  SupportReport support;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double margin = data.y[i] * (dot(data.x[i], model.w) + model.h);
    if (margin <= 1.0 + cfg.tolerance) {
      support.indices.push_back(i);
      support.values.push_back(margin);
    }
  }
  support.count = support.indices.size();
  model.support = std::move(support);

  model.stats.iterations = r.iterations;
  model.stats.dual_objective = half_dual(r.a, r.grad);
  model.stats.primal_objective = primal_objective(model, data);
  model.stats.max_violation = r.violation;
  return model;
}

double rbf_kernel(const SparseVector& a, const SparseVector& b, double alpha) {
  check_alpha(alpha);
  if (a.dim != b.dim) {
    throw Error(ErrorKind::kDomain, "kernel dimension mismatch: " + std::to_string(a.dim) + " vs " +
                                        std::to_string(b.dim));
  }
  const double dist = std::max(0.0, squared_norm(a) + squared_norm(b) - 2.0 * dot(a, b));
  return std::exp(-alpha * dist);
}

double rbf_kernel(std::span<const double> a, std::span<const double> b, double alpha) {
  check_alpha(alpha);
  if (a.size() != b.size()) {
    throw Error(ErrorKind::kDomain, "kernel dimension mismatch: " + std::to_string(a.size()) + " vs " +
                                        std::to_string(b.size()));
  }
  double dist = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) dist += (a[k] - b[k]) * (a[k] - b[k]);
  return std::exp(-alpha * dist);
}

double scale_alpha(std::span<const SparseVector> rows, std::size_t dim) {
  if (rows.empty() || dim == 0) return 1.0;
  std::vector<double> sum(dim, 0.0);
  std::vector<double> sum_sq(dim, 0.0);
  for (const auto& row : rows) {
    for (const auto& e : row.entries) {
      sum[e.index] += e.value;
      sum_sq[e.index] += e.value * e.value;
    }
  }
  const double n = static_cast<double>(rows.size());
  double total_var = 0.0;
  for (std::size_t j = 0; j < dim; ++j) {
    const double mean = sum[j] / n;
    total_var += std::max(0.0, sum_sq[j] / n - mean * mean);
  }
  // 1 / (d * mean variance) = 1 / total variance.
  return total_var > 0.0 ? 1.0 / total_var : 1.0;
}

double decision_value(const LinearSvmModel& model, const SparseVector& x) {
  if (x.dim != model.w.size()) {
    throw Error(ErrorKind::kDomain, "input dimension " + std::to_string(x.dim) + " does not match model (" +
                                        std::to_string(model.w.size()) + ")");
  }
  return dot(x, model.w) + model.h;
}

double decision_value(const KernelSvmModel& model, const SparseVector& x) {
  if (x.dim != model.dim) {
    throw Error(ErrorKind::kDomain, "input dimension " + std::to_string(x.dim) + " does not match model (" +
                                        std::to_string(model.dim) + ")");
  }
  double sum = model.h;
  for (std::size_t s = 0; s < model.support_x.size(); ++s) {
    sum += model.dual_coef[s] * rbf_kernel(model.support_x[s], x, model.alpha);
  }
  return sum;
}

std::vector<double> decision_values(const KernelSvmModel& model, std::span<const SparseVector> rows,
                                    unsigned threads) {
  for (const auto& x : rows) {
    if (x.dim != model.dim) throw Error(ErrorKind::kDomain, "input dimension does not match model");
  }
  std::vector<double> sv_norms;
  sv_norms.reserve(model.support_x.size());
  for (const auto& sv : model.support_x) sv_norms.push_back(squared_norm(sv));

  std::vector<double> out(rows.size());
  const auto work = [&](std::size_t begin, std::size_t end) {
    std::vector<double> scratch(model.dim, 0.0);
    for (std::size_t r = begin; r < end; ++r) {
      const auto& x = rows[r];
      for (const auto& e : x.entries) scratch[e.index] = e.value;
      const double x_norm = squared_norm(x);
      double sum = model.h;
      for (std::size_t s = 0; s < model.support_x.size(); ++s) {
        const double dist = std::max(0.0, sv_norms[s] + x_norm - 2.0 * dot(model.support_x[s], scratch));
        sum += model.dual_coef[s] * std::exp(-model.alpha * dist);
      }
      out[r] = sum;
      for (const auto& e : x.entries) scratch[e.index] = 0.0;
    }
  };
  if (threads <= 1 || rows.size() < 2 * static_cast<std::size_t>(threads)) {
    work(0, rows.size());
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (rows.size() + threads - 1) / threads;
    for (std::size_t begin = 0; begin < rows.size(); begin += chunk) {
      pool.emplace_back(work, begin, std::min(rows.size(), begin + chunk));
    }
  }
  return out;
}

std::vector<double> decision_values(const LinearSvmModel& model, std::span<const SparseVector> rows) {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& x : rows) out.push_back(decision_value(model, x));
  return out;
}

SupportReport support_vectors(const LinearSvmModel& model) {
  if (!model.support) {
    throw Error(ErrorKind::kUnsupported, "linear model has no training provenance");
  }
  return *model.support;
}

SupportReport support_vectors(const KernelSvmModel& model) {
  if (!model.support_index) {
    throw Error(ErrorKind::kUnsupported, "kernel model has no training provenance");
  }
  SupportReport report;
  report.count = model.support_index->size();
  report.indices = *model.support_index;
  for (double c : model.dual_coef) report.values.push_back(std::abs(c));
  return report;
}

double primal_objective(const LinearSvmModel& model, const TrainingSet& data) {
  double ww = 0.0;
  for (double v : model.w) ww += v * v;
  double hinge = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    hinge += std::max(0.0, 1.0 - data.y[i] * (dot(data.x[i], model.w) + model.h));
  }
  return 0.5 * ww + model.R * hinge;
}

}  // namespace fnd
