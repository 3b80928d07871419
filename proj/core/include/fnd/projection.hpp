// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fnd Authors

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "fnd/corpus.hpp"
#include "fnd/sparse.hpp"

namespace fnd {

struct TsneConfig {
  std::size_t out_dims = 2;
  double perplexity = 30.0;
  std::size_t iterations = 1000;
  double learning_rate = 200.0;
  double momentum_early = 0.5;
  double momentum_late = 0.8;
  std::size_t momentum_switch = 250;
  double early_exaggeration = 12.0;
  std::size_t exaggeration_iters = 250;
  std::uint64_t seed = 1;
  std::size_t subsample = 2000;

  /// Checks everything that does not depend on the point count.
  void validate() const;
  /// Requires perplexity < (n - 1) / 3 for the n points actually embedded.
  void validate_for(std::size_t n) const;
};

struct Bandwidth {
  double sigma = 0.0;
  double beta = 0.0;                // 1 / (2 sigma^2)
  std::vector<double> conditional;  // p_{j|i} over the row entries
  double perplexity = 0.0;          // 2^H of `conditional`
};

/// Bisects the Gaussian precision so that 2^H of the conditional distribution
/// over `sq_dists` is within 1e-3 * target of `target_perplexity`, or stops
/// after 100 steps.
///
/// Throws Error{kCalibration} when the row has fewer than two entries, every
/// distance is zero, or the target exceeds the number of neighbours.
Bandwidth calibrate_bandwidth(std::span<const double> sq_dists, double target_perplexity);

/// Row-major N x N matrix.
struct SquareMatrix {
  std::size_t n = 0;
  std::vector<double> values;

  double operator()(std::size_t i, std::size_t j) const { return values[i * n + j]; }
  double& operator()(std::size_t i, std::size_t j) { return values[i * n + j]; }
};

/// Pairwise squared Euclidean distances.
SquareMatrix squared_distances(std::span<const DenseVector> points);
SquareMatrix squared_distances(std::span<const SparseVector> points);

/// Symmetrized affinities p_ij = (p_{j|i} + p_{i|j}) / 2N with zero diagonal.
SquareMatrix joint_probabilities(const SquareMatrix& sq_dists, double perplexity);
SquareMatrix joint_probabilities(std::span<const DenseVector> points, double perplexity);

/// KL(P || Q) for Student-t Q over row-major coordinates `y` (N x dims).
double tsne_kl(const SquareMatrix& p, std::span<const double> y, std::size_t dims);
/// Exact gradient of tsne_kl with respect to `y`.
std::vector<double> tsne_gradient(const SquareMatrix& p, std::span<const double> y,
                                  std::size_t dims);

struct Embedding {
  std::size_t dims = 0;
  std::vector<double> coords;  // N x dims
  std::vector<Label> labels;
  double initial_kl = 0.0;
  double final_kl = 0.0;
  std::vector<double> kl_trace;  // one entry per 50 iterations plus the last
};

/// Exact O(N^2) t-SNE with momentum, gains and early exaggeration.
Embedding tsne(std::span<const DenseVector> points, std::span<const Label> labels,
               const TsneConfig& cfg);
/// Sparse rows are compared through their distances, never densified.
Embedding tsne(std::span<const SparseVector> points, std::span<const Label> labels,
               const TsneConfig& cfg);
/// Same optimizer over a precomputed squared-distance matrix.
Embedding tsne(const SquareMatrix& sq_dists, std::span<const Label> labels, const TsneConfig& cfg);

/// Picks at most `cap` indices, stratified by label with the split permutation.
std::vector<std::size_t> stratified_subsample(std::span<const Label> labels,
                                              std::size_t cap, std::uint64_t seed);

/// One row per point: coordinate columns then the label.
void write_embedding_tsv(const Embedding& embedding, std::ostream& out);

}  // namespace fnd
