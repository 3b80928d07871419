// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fnd Authors

#include "fnd/projection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "fnd/error.hpp"
#include "fnd/rng.hpp"

namespace fnd {

void TsneConfig::validate() const {
  if (out_dims != 2 && out_dims != 3) throw Error(ErrorKind::kConfig, "t-SNE output dimension must be 2 or 3");
  if (!(perplexity > 0.0)) throw Error(ErrorKind::kConfig, "perplexity must be positive");
  if (iterations < 1) throw Error(ErrorKind::kConfig, "t-SNE needs at least one iteration");
  if (!(learning_rate > 0.0)) throw Error(ErrorKind::kConfig, "learning rate must be positive");
  if (!(momentum_early >= 0.0 && momentum_early < 1.0) || !(momentum_late >= 0.0 && momentum_late < 1.0)) {
    throw Error(ErrorKind::kConfig, "momentum must lie in [0, 1)");
  }
  if (!(early_exaggeration >= 1.0)) throw Error(ErrorKind::kConfig, "early exaggeration must be >= 1");
  if (subsample < 4) throw Error(ErrorKind::kConfig, "t-SNE subsample must be at least 4");
  validate_for(subsample);
}

void TsneConfig::validate_for(std::size_t n) const {
  if (n < 4) throw Error(ErrorKind::kConfig, "t-SNE needs at least 4 points, got " + std::to_string(n));
  const double bound = (static_cast<double>(n) - 1.0) / 3.0;
  if (!(perplexity < bound)) {
    throw Error(ErrorKind::kConfig, "perplexity " + std::to_string(perplexity) + " is infeasible for " +
                                        std::to_string(n) + " points (must be < " + std::to_string(bound) + ")");
  }
}

namespace {

/// Conditional distribution for precision `beta` over distances already
/// shifted so the minimum is zero; returns perplexity 2^H.
double conditional_for(std::span<const double> shifted, double beta, std::vector<double>& p) {
  double total = 0.0;
  for (std::size_t k = 0; k < shifted.size(); ++k) {
    p[k] = std::exp(-beta * shifted[k]);
    total += p[k];
  }
  double entropy = 0.0;  // nats
  for (auto& v : p) {
    v /= total;
    if (v > 0.0) entropy -= v * std::log(v);
  }
  return std::exp(entropy);
}

}  // namespace

Bandwidth calibrate_bandwidth(std::span<const double> sq_dists, double target) {
  if (sq_dists.size() < 2) throw Error(ErrorKind::kCalibration, "bandwidth calibration needs at least two neighbours");
  if (!(target >= 1.0) || target > static_cast<double>(sq_dists.size())) {
    throw Error(ErrorKind::kCalibration, "target perplexity " + std::to_string(target) +
                                             " is not reachable with " + std::to_string(sq_dists.size()) +
                                             " neighbours");
  }
  double d_min = std::numeric_limits<double>::infinity();
  double d_sum = 0.0;
  for (double d : sq_dists) {
    if (!std::isfinite(d) || d < 0.0) throw Error(ErrorKind::kCalibration, "distances must be finite and non-negative");
    d_min = std::min(d_min, d);
    d_sum += d;
  }
  if (d_sum == 0.0) throw Error(ErrorKind::kCalibration, "all distances are zero");

  std::vector<double> shifted(sq_dists.begin(), sq_dists.end());
  for (auto& d : shifted) d -= d_min;
  double spread = 0.0;
  for (double d : shifted) spread += d;
  spread /= static_cast<double>(shifted.size());

  Bandwidth bw;
  bw.conditional.resize(shifted.size());
  double beta = spread > 0.0 ? 1.0 / spread : 1.0;
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  double perplexity = conditional_for(shifted, beta, bw.conditional);
  for (int step = 0; step < 100 && std::abs(perplexity - target) > 1e-3 * target; ++step) {
    if (perplexity > target) {
      lo = beta;
      beta = std::isinf(hi) ? beta * 2.0 : 0.5 * (beta + hi);
    } else {
      hi = beta;
      beta = 0.5 * (beta + lo);
    }
    perplexity = conditional_for(shifted, beta, bw.conditional);
  }
  bw.beta = beta;
  bw.sigma = std::sqrt(1.0 / (2.0 * beta));
  bw.perplexity = perplexity;
  return bw;
}

SquareMatrix squared_distances(std::span<const DenseVector> points) {
  const std::size_t n = points.size();
  SquareMatrix dist{n, std::vector<double>(n * n, 0.0)};
  for (std::size_t i = 0; i < n; ++i) {
    if (points[i].size() != points.front().size()) throw Error(ErrorKind::kDomain, "points have mixed dimensions");
    for (std::size_t j = i + 1; j < n; ++j) {
      double d = 0.0;
      for (std::size_t k = 0; k < points[i].size(); ++k) {
        const double diff = points[i][k] - points[j][k];
        d += diff * diff;
      }
      dist(i, j) = d;
      dist(j, i) = d;
    }
  }
  return dist;
}

SquareMatrix squared_distances(std::span<const SparseVector> points) {
  const std::size_t n = points.size();
  std::vector<double> norms(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (points[i].dim != points.front().dim) throw Error(ErrorKind::kDomain, "points have mixed dimensions");
    norms[i] = squared_norm(points[i]);
  }
  SquareMatrix dist{n, std::vector<double>(n * n, 0.0)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = std::max(0.0, norms[i] + norms[j] - 2.0 * dot(points[i], points[j]));
      dist(i, j) = d;
      dist(j, i) = d;
    }
  }
  return dist;
}

SquareMatrix joint_probabilities(std::span<const DenseVector> points, double perplexity) {
  return joint_probabilities(squared_distances(points), perplexity);
}

SquareMatrix joint_probabilities(const SquareMatrix& dist, double perplexity) {
  const std::size_t n = dist.n;
  if (n < 2) throw Error(ErrorKind::kCalibration, "need at least two points");
  SquareMatrix cond{n, std::vector<double>(n * n, 0.0)};
  std::vector<double> row(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0, k = 0; j < n; ++j) {
      if (j != i) row[k++] = dist(i, j);
    }
    const Bandwidth bw = calibrate_bandwidth(row, perplexity);
    for (std::size_t j = 0, k = 0; j < n; ++j) {
      if (j != i) cond(i, j) = bw.conditional[k++];
    }
  }
  SquareMatrix p{n, std::vector<double>(n * n, 0.0)};
  const double denom = 2.0 * static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) p(i, j) = (cond(i, j) + cond(j, i)) / denom;
    }
  }
  return p;
}

namespace {

/// Student-t weights w_ij = 1 / (1 + |y_i - y_j|^2) and their sum over i != j.
double student_weights(std::span<const double> y, std::size_t n, std::size_t dims, std::vector<double>& w) {
  w.assign(n * n, 0.0);
  double z = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double d = 0.0;
      for (std::size_t k = 0; k < dims; ++k) {
        const double diff = y[i * dims + k] - y[j * dims + k];
        d += diff * diff;
      }
      const double v = 1.0 / (1.0 + d);
      w[i * n + j] = v;
      w[j * n + i] = v;
      z += 2.0 * v;
    }
  }
  return z;
}

void check_layout(const SquareMatrix& p, std::span<const double> y, std::size_t dims) {
  if (dims == 0 || y.size() != p.n * dims) throw Error(ErrorKind::kDomain, "coordinate array does not match P");
}

}  // namespace

double tsne_kl(const SquareMatrix& p, std::span<const double> y, std::size_t dims) {
  check_layout(p, y, dims);
  std::vector<double> w;
  const double z = student_weights(y, p.n, dims, w);
  double kl = 0.0;
  for (std::size_t i = 0; i < p.n; ++i) {
    for (std::size_t j = 0; j < p.n; ++j) {
      const double pij = p(i, j);
      if (i == j || pij <= 0.0) continue;
      kl += pij * std::log(pij * z / w[i * p.n + j]);
    }
  }
  return kl;
}

std::vector<double> tsne_gradient(const SquareMatrix& p, std::span<const double> y, std::size_t dims) {
  check_layout(p, y, dims);
  const std::size_t n = p.n;
  std::vector<double> w;
  const double z = student_weights(y, n, dims, w);
  std::vector<double> grad(n * dims, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double wij = w[i * n + j];
      const double coeff = 4.0 * (p(i, j) - wij / z) * wij;
      for (std::size_t k = 0; k < dims; ++k) grad[i * dims + k] += coeff * (y[i * dims + k] - y[j * dims + k]);
    }
  }
  return grad;
}

Embedding tsne(std::span<const DenseVector> points, std::span<const Label> labels, const TsneConfig& cfg) {
  if (points.size() != labels.size()) throw Error(ErrorKind::kDomain, "t-SNE points and labels differ in length");
  cfg.validate_for(points.size());
  return tsne(squared_distances(points), labels, cfg);
}

Embedding tsne(std::span<const SparseVector> points, std::span<const Label> labels, const TsneConfig& cfg) {
  if (points.size() != labels.size()) throw Error(ErrorKind::kDomain, "t-SNE points and labels differ in length");
  cfg.validate_for(points.size());
  return tsne(squared_distances(points), labels, cfg);
}

Embedding tsne(const SquareMatrix& sq_dists, std::span<const Label> labels, const TsneConfig& cfg) {
  if (sq_dists.n != labels.size()) throw Error(ErrorKind::kDomain, "t-SNE distances and labels differ in size");
  if (cfg.out_dims != 2 && cfg.out_dims != 3) throw Error(ErrorKind::kConfig, "t-SNE output dimension must be 2 or 3");
  cfg.validate_for(sq_dists.n);
  const std::size_t n = sq_dists.n;
  const std::size_t dims = cfg.out_dims;

  const SquareMatrix p = joint_probabilities(sq_dists, cfg.perplexity);
  SquareMatrix p_exaggerated = p;
  for (auto& v : p_exaggerated.values) v *= cfg.early_exaggeration;

  Embedding out;
  out.dims = dims;
  out.labels.assign(labels.begin(), labels.end());
  out.coords.resize(n * dims);
  Rng rng(cfg.seed);
  for (auto& v : out.coords) v = 1e-4 * rng.normal();

  std::vector<double> velocity(n * dims, 0.0);
  std::vector<double> gains(n * dims, 1.0);
  out.initial_kl = tsne_kl(p, out.coords, dims);
  out.kl_trace.push_back(out.initial_kl);

  for (std::size_t iter = 0; iter < cfg.iterations; ++iter) {
    const auto grad = tsne_gradient(iter < cfg.exaggeration_iters ? p_exaggerated : p, out.coords, dims);
    const double momentum = iter < cfg.momentum_switch ? cfg.momentum_early : cfg.momentum_late;
    for (std::size_t k = 0; k < grad.size(); ++k) {
      const bool same_sign = (grad[k] > 0.0) == (velocity[k] > 0.0);
      gains[k] = same_sign ? std::max(0.01, gains[k] * 0.8) : gains[k] + 0.2;
      velocity[k] = momentum * velocity[k] - cfg.learning_rate * gains[k] * grad[k];
      out.coords[k] += velocity[k];
    }
    for (std::size_t d = 0; d < dims; ++d) {
      double mean = 0.0;
      for (std::size_t i = 0; i < n; ++i) mean += out.coords[i * dims + d];
      mean /= static_cast<double>(n);
      for (std::size_t i = 0; i < n; ++i) out.coords[i * dims + d] -= mean;
    }
    if ((iter + 1) % 50 == 0 || iter + 1 == cfg.iterations) out.kl_trace.push_back(tsne_kl(p, out.coords, dims));
  }
  out.final_kl = out.kl_trace.back();
  return out;
}

std::vector<std::size_t> stratified_subsample(std::span<const Label> labels, std::size_t cap, std::uint64_t seed) {
  const std::size_t n = labels.size();
  std::vector<std::size_t> chosen;
  if (cap >= n) {
    chosen.resize(n);
    for (std::size_t i = 0; i < n; ++i) chosen[i] = i;
    return chosen;
  }
  std::vector<std::size_t> members[2];
  for (std::size_t i = 0; i < n; ++i) members[to_int(labels[i])].push_back(i);
  std::size_t quota[2];
  quota[0] = std::min(members[0].size(),
                      static_cast<std::size_t>(std::llround(static_cast<double>(cap) *
                                                            static_cast<double>(members[0].size()) /
                                                            static_cast<double>(n))));
  quota[1] = std::min(members[1].size(), cap - quota[0]);
  quota[0] = std::min(members[0].size(), cap - quota[1]);
  for (int label = 0; label < 2; ++label) {
    Rng rng(stage_seed(seed, static_cast<std::uint64_t>(label)));
    rng.shuffle(std::span<std::size_t>(members[label]));
    chosen.insert(chosen.end(), members[label].begin(), members[label].begin() + static_cast<std::ptrdiff_t>(quota[label]));
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

void write_embedding_tsv(const Embedding& embedding, std::ostream& out) {
  const auto precision = out.precision(17);
  const std::size_t n = embedding.labels.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t d = 0; d < embedding.dims; ++d) out << embedding.coords[i * embedding.dims + d] << '\t';
    out << to_int(embedding.labels[i]) << '\n';
  }
  out.precision(precision);
}

}  // namespace fnd
