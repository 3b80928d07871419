// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fnd Authors

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fnd/cbow.hpp"
#include "fnd/corpus.hpp"
#include "fnd/preprocess.hpp"
#include "fnd/sparse.hpp"
#include "fnd/svm.hpp"
#include "fnd/vectorize.hpp"

namespace fnd {

struct PipelineConfig {
  FeatureSpace vectorizer = FeatureSpace::kBow;
  KernelKind kernel = KernelKind::kLinear;
  double R = 1.0;
  std::optional<double> alpha;  // unset: scale heuristic on training features
  std::size_t min_df = 2;
  CbowParams cbow;
  SolverConfig solver;

  void validate() const;
};

/// Where a trained pipeline came from. Hyperparameters are free-form
/// key/value pairs kept in insertion order.
struct Provenance {
  std::uint64_t seed = 0;
  SplitSpec split;
  std::vector<std::pair<std::string, std::string>> hyperparameters;
  std::int64_t created_unix = 0;
};

using Vectorizer = std::variant<Vocabulary, TfidfModel, WordEmbeddings>;
using Classifier = std::variant<LinearSvmModel, KernelSvmModel>;

/// A vectorizer and the classifier trained in its feature space.
struct Pipeline {
  Vectorizer vectorizer;
  Classifier classifier;
  Provenance provenance;

  FeatureSpace feature_space() const noexcept;
  KernelKind kernel() const noexcept;
  std::size_t feature_dim() const noexcept;

  SparseVector featurize(std::span<const std::string> tokens) const;
  double decision_value(std::span<const std::string> tokens) const;
  std::vector<double> decision_values(std::span<const TokenizedDocument> docs,
                                      unsigned threads = 1) const;
};

struct PipelineHooks {
  CbowProgress cbow;
  ProgressCallback solver;
};

Pipeline train_pipeline(std::span<const TokenizedDocument> train_docs,
                        const PipelineConfig& cfg, const PipelineHooks& hooks = {});

/// Featurizes documents with a freshly fitted vectorizer, for projection.
std::vector<SparseVector> fit_features(std::span<const TokenizedDocument> docs,
                                       FeatureSpace space, std::size_t min_df,
                                       const CbowParams& cbow);

/// Turns featurized documents into an SVM training set.
TrainingSet make_training_set(std::vector<SparseVector> rows,
                              std::span<const TokenizedDocument> docs, std::size_t dim);

}  // namespace fnd
