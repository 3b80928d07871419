// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fnd Authors

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "fnd/preprocess.hpp"
#include "fnd/sparse.hpp"

namespace fnd {

/// Term index built from training documents.
///
/// Column indices follow lexicographic term order. `doc_freq(i)` is the number
/// of training documents containing term i and `total_docs()` the number of
/// training documents.
class Vocabulary {
 public:
  Vocabulary() = default;
  /// Rebuilds the lookup table; terms must be strictly ascending.
  Vocabulary(std::vector<std::string> terms, std::vector<std::uint32_t> doc_freq,
             std::uint64_t total_docs);

  std::size_t size() const noexcept { return terms_.size(); }
  std::uint64_t total_docs() const noexcept { return total_docs_; }
  const std::vector<std::string>& terms() const noexcept { return terms_; }
  const std::vector<std::uint32_t>& doc_freqs() const noexcept { return doc_freq_; }
  std::uint32_t doc_freq(std::size_t index) const { return doc_freq_.at(index); }

  std::optional<std::uint32_t> index_of(std::string_view term) const;

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept {
      return std::hash<std::string_view>{}(s);
    }
  };

  std::vector<std::string> terms_;
  std::vector<std::uint32_t> doc_freq_;
  std::uint64_t total_docs_ = 0;
  std::unordered_map<std::string, std::uint32_t, Hash, std::equal_to<>> index_;
};

/// Keeps terms that occur in at least `min_df` training documents.
Vocabulary build_vocab(std::span<const TokenizedDocument> train_docs,
                       std::size_t min_df);

/// Raw in-document counts of in-vocabulary tokens; other tokens are ignored.
SparseVector bow_vector(const TokenizedDocument& doc, const Vocabulary& vocab);
SparseVector bow_vector(std::span<const std::string> tokens, const Vocabulary& vocab);

struct TfidfModel {
  Vocabulary vocab;
  std::vector<double> idf;  // ln(M / m_t), one per term
};

TfidfModel fit_tfidf(Vocabulary vocab);

/// count(t, doc) * idf(t). Terms with zero idf produce no entry.
SparseVector tfidf_vector(const TokenizedDocument& doc, const TfidfModel& model);
SparseVector tfidf_vector(std::span<const std::string> tokens, const TfidfModel& model);

}  // namespace fnd
