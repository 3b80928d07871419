// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fnd Authors

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "fnd/corpus.hpp"
#include "fnd/sparse.hpp"

namespace fnd {

enum class FeatureSpace : std::uint8_t { kBow = 0, kTfidf = 1, kW2v = 2 };
enum class KernelKind : std::uint8_t { kLinear = 0, kRbf = 1 };

std::string_view to_string(FeatureSpace space) noexcept;
std::string_view to_string(KernelKind kernel) noexcept;
/// Accepts "bow", "tfidf", "w2v"; throws Error{kConfig} otherwise.
FeatureSpace parse_feature_space(std::string_view name);
/// Accepts "linear", "rbf"; throws Error{kConfig} otherwise.
KernelKind parse_kernel(std::string_view name);

/// Fake (0) maps to -1 and real (1) to +1.
constexpr int map_label(Label label) noexcept { return label == Label::kReal ? 1 : -1; }
/// Inverse of map_label; throws Error{kDomain} for values other than +-1.
Label unmap_label(int y);

struct TrainingSet {
  std::vector<SparseVector> x;
  std::vector<int> y;  // +1 / -1
  std::size_t dim = 0;

  std::size_t size() const noexcept { return x.size(); }
  /// n >= 2, both classes present, uniform dimension, well-formed rows.
  void validate() const;
};

enum class WorkingSetRule : std::uint8_t {
  kMaxViolatingPair,  // first-order: the pair with the largest KKT violation
  kSecondOrder,       // i by largest violation, j by largest second-order gain
};

struct SolverConfig {
  double tolerance = 1e-3;
  std::size_t max_iter = 10'000'000;
  std::uint64_t seed = 1;  // coordinate order of the linear warm start
  WorkingSetRule working_set = WorkingSetRule::kMaxViolatingPair;
  std::size_t cache_bytes = std::size_t{256} << 20;
  unsigned threads = 1;
  /// Linear only: start SMO from an augmented-Lagrangian coordinate descent
  /// solution once the training set has at least `warm_start_min_rows` rows.
  /// Each coordinate step costs one sparse row instead of a full pass over
  /// the data. Small problems skip it: plain SMO is fast there and lands
  /// exactly on the box bounds, which keeps the bias choice canonical when
  /// the bias is not unique.
  bool warm_start = true;
  std::size_t warm_start_min_rows = 2000;
  std::size_t warm_start_epochs = 10000;

  void validate() const;
};

struct SolverProgress {
  std::size_t iteration = 0;
  double dual_objective = 0.0;
  double max_violation = 0.0;
};
using ProgressCallback = std::function<void(const SolverProgress&)>;

/// Outcome of a training run. Not part of the persisted model.
struct SolverStats {
  std::size_t iterations = 0;
  double dual_objective = 0.0;    // sum(lambda) - 1/2 lambda' Q lambda
  double primal_objective = 0.0;  // 1/2 |w|^2 + R sum(hinge), linear only
  double max_violation = 0.0;
};

struct SupportReport {
  std::size_t count = 0;
  std::vector<std::uint64_t> indices;  // into the training set
  /// |lambda| for kernel models, functional margin y(w.x + h) for linear ones.
  std::vector<double> values;
};

struct LinearSvmModel {
  DenseVector w;
  double h = 0.0;
  double R = 1.0;
  FeatureSpace feature_space = FeatureSpace::kBow;
  /// Training points with functional margin <= 1 + tolerance.
  std::optional<SupportReport> support;
  SolverStats stats;
};

struct KernelSvmModel {
  std::vector<SparseVector> support_x;
  std::vector<double> dual_coef;  // lambda_i * y_i
  double h = 0.0;
  double alpha = 1.0;
  double R = 1.0;
  std::size_t dim = 0;
  FeatureSpace feature_space = FeatureSpace::kBow;
  std::optional<std::vector<std::uint64_t>> support_index;
  SolverStats stats;
};

/// Minimizes 1/2 w'w + R sum max(0, 1 - y_i (w.x_i + h)) with h unregularized.
///
/// Runs the same SMO as the kernel solver on the linear kernel, so the
/// equality constraint on sum(lambda_i y_i) holds at every step, then folds
/// the multipliers into an explicit weight vector. With cfg.warm_start the SMO
/// begins from a near-optimal feasible point; the stopping rule is unchanged.
/// stats.iterations counts SMO steps only.
LinearSvmModel train_linear(const TrainingSet& data, double R,
                            const SolverConfig& cfg = {},
                            const ProgressCallback& progress = {});

/// SMO on the soft-margin dual with kernel exp(-alpha |a - b|^2). Stops when
/// the largest KKT violation drops below cfg.tolerance. Only vectors with
/// lambda > 0 are retained.
KernelSvmModel train_rbf(const TrainingSet& data, double R, double alpha,
                         const SolverConfig& cfg = {},
                         const ProgressCallback& progress = {});

/// exp(-alpha |a - b|^2) evaluated as |a|^2 + |b|^2 - 2<a, b>.
double rbf_kernel(const SparseVector& a, const SparseVector& b, double alpha);
double rbf_kernel(std::span<const double> a, std::span<const double> b, double alpha);

/// 1 / (d * mean per-feature variance), or 1 when the features are constant.
double scale_alpha(std::span<const SparseVector> rows, std::size_t dim);

double decision_value(const LinearSvmModel& model, const SparseVector& x);
double decision_value(const KernelSvmModel& model, const SparseVector& x);

/// Batch evaluation; rows are densified once into a scratch buffer.
std::vector<double> decision_values(const KernelSvmModel& model,
                                    std::span<const SparseVector> rows,
                                    unsigned threads = 1);
std::vector<double> decision_values(const LinearSvmModel& model,
                                    std::span<const SparseVector> rows);

/// Non-negative decision values are real news; a tie at exactly 0 is real.
constexpr Label label_from_decision(double value) noexcept {
  return value >= 0.0 ? Label::kReal : Label::kFake;
}
template <typename Model>
Label predict(const Model& model, const SparseVector& x) {
  return label_from_decision(decision_value(model, x));
}

/// Throws Error{kUnsupported} when the model kept no training provenance.
SupportReport support_vectors(const LinearSvmModel& model);
SupportReport support_vectors(const KernelSvmModel& model);

/// Value of the linear primal objective at (w, h).
double primal_objective(const LinearSvmModel& model, const TrainingSet& data);

}  // namespace fnd
