// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fnd Authors

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "fnd/preprocess.hpp"
#include "fnd/sparse.hpp"

namespace fnd {

struct CbowParams {
  std::size_t dim = 100;
  std::size_t window = 5;
  std::size_t negatives = 5;
  std::size_t epochs = 5;
  double initial_lr = 0.025;
  std::uint64_t seed = 1;
  std::size_t min_count = 2;
  /// 1 is deterministic. More workers update shared weights without locks.
  unsigned threads = 1;

  void validate() const;
};

/// Word vectors learned by CBOW with negative sampling.
///
/// Matrices are row-major, one row of `dim` values per term. `output` holds the
/// context weights used by negative sampling; it may be empty for embeddings
/// restored from a model file, which only need `input` for inference.
struct WordEmbeddings {
  std::size_t dim = 0;
  std::vector<std::string> terms;        // lexicographic
  std::vector<std::uint64_t> counts;     // corpus frequency per term
  std::vector<double> input;             // V x dim
  std::vector<double> output;            // V x dim or empty
  CbowParams params;

  std::size_t size() const noexcept { return terms.size(); }
  std::optional<std::uint32_t> index_of(std::string_view term) const;
  std::span<const double> input_row(std::size_t index) const {
    return {input.data() + index * dim, dim};
  }
  std::span<const double> output_row(std::size_t index) const {
    return {output.data() + index * dim, dim};
  }

  /// Rebuilds the term lookup after terms are assigned directly.
  void reindex();

 private:
  std::unordered_map<std::string, std::uint32_t> index_;
};

/// Callback fired once per finished epoch with the mean loss of that epoch.
using CbowProgress = std::function<void(std::size_t epoch, double mean_loss)>;

WordEmbeddings train_cbow(std::span<const TokenizedDocument> train_docs,
                          const CbowParams& params,
                          const CbowProgress& progress = {});

/// Mean of the input vectors of in-vocabulary tokens; zeros if there are none.
DenseVector embed_doc(const TokenizedDocument& doc, const WordEmbeddings& emb);
DenseVector embed_doc(std::span<const std::string> tokens, const WordEmbeddings& emb);

/// Text export: "V D" header, then one line per term with D components.
void write_embeddings_text(const WordEmbeddings& emb, const std::filesystem::path& path);

/// One CBOW training example: context term ids, the center id and the noise
/// ids drawn for it.
struct CbowExample {
  std::vector<std::uint32_t> context;
  std::uint32_t center = 0;
  std::vector<std::uint32_t> negatives;
};

/// Negative-sampling loss of one example:
///   h = mean(input[c] for c in context)
///   L = -log s(output[center].h) - sum_k log s(-output[neg_k].h)
double cbow_loss(const WordEmbeddings& emb, const CbowExample& ex);

/// Dense gradient of cbow_loss with respect to `input` and `output`, each
/// shaped like the embedding matrices.
struct CbowGradient {
  std::vector<double> input;
  std::vector<double> output;
};
CbowGradient cbow_gradient(const WordEmbeddings& emb, const CbowExample& ex);

}  // namespace fnd
