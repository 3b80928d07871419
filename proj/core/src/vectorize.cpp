// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fnd Authors

#include "fnd/vectorize.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_set>

#include "fnd/error.hpp"

namespace fnd {

Vocabulary::Vocabulary(std::vector<std::string> terms, std::vector<std::uint32_t> doc_freq,
                       std::uint64_t total_docs)
    : terms_(std::move(terms)), doc_freq_(std::move(doc_freq)), total_docs_(total_docs) {
  if (terms_.size() != doc_freq_.size()) {
    throw Error(ErrorKind::kDomain, "vocabulary terms and frequencies differ in length");
  }
  index_.reserve(terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (i > 0 && !(terms_[i - 1] < terms_[i])) {
      throw Error(ErrorKind::kDomain, "vocabulary terms are not strictly ascending");
    }
    if (doc_freq_[i] == 0 || doc_freq_[i] > total_docs_) {
      throw Error(ErrorKind::kDomain, "document frequency out of range for '" + terms_[i] + "'");
    }
    index_.emplace(terms_[i], static_cast<std::uint32_t>(i));
  }
}

std::optional<std::uint32_t> Vocabulary::index_of(std::string_view term) const {
  const auto it = index_.find(term);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Vocabulary build_vocab(std::span<const TokenizedDocument> train_docs, std::size_t min_df) {
  if (train_docs.empty()) {
    throw Error(ErrorKind::kPrecondition, "cannot build a vocabulary from zero documents");
  }
  std::map<std::string, std::uint32_t, std::less<>> df;
  std::unordered_set<std::string_view> seen;
  for (const auto& doc : train_docs) {
    seen.clear();
    for (const auto& token : doc.tokens) {
      if (seen.insert(token).second) ++df[token];
    }
  }
  std::vector<std::string> terms;
  std::vector<std::uint32_t> freqs;
  for (auto& [term, count] : df) {
    if (count >= min_df) {
      terms.push_back(term);
      freqs.push_back(count);
    }
  }
  return Vocabulary(std::move(terms), std::move(freqs), train_docs.size());
}

namespace {

/// Sorted (index, count) pairs for in-vocabulary tokens.
template <typename Lookup>
std::vector<std::pair<std::uint32_t, std::uint32_t>> count_terms(std::span<const std::string> tokens,
                                                                 const Lookup& lookup) {
  std::vector<std::uint32_t> ids;
  ids.reserve(tokens.size());
  for (const auto& token : tokens) {
    if (auto id = lookup(token)) ids.push_back(*id);
  }
  std::sort(ids.begin(), ids.end());
  std::vector<std::pair<std::uint32_t, std::uint32_t>> counts;
  for (std::uint32_t id : ids) {
    if (!counts.empty() && counts.back().first == id) {
      ++counts.back().second;
    } else {
      counts.emplace_back(id, 1);
    }
  }
  return counts;
}

}  // namespace

SparseVector bow_vector(std::span<const std::string> tokens, const Vocabulary& vocab) {
  SparseVector out;
  out.dim = vocab.size();
  for (auto [index, count] : count_terms(tokens, [&](const std::string& t) { return vocab.index_of(t); })) {
    out.entries.push_back({index, static_cast<double>(count)});
  }
  return out;
}

SparseVector bow_vector(const TokenizedDocument& doc, const Vocabulary& vocab) {
  return bow_vector(doc.tokens, vocab);
}

TfidfModel fit_tfidf(Vocabulary vocab) {
  TfidfModel model;
  model.idf.reserve(vocab.size());
  const auto total = static_cast<double>(vocab.total_docs());
  for (std::uint32_t m_t : vocab.doc_freqs()) {
    // Exactly zero when the term is in every document.
    model.idf.push_back(m_t == vocab.total_docs() ? 0.0 : std::log(total / static_cast<double>(m_t)));
  }
  model.vocab = std::move(vocab);
  return model;
}

SparseVector tfidf_vector(std::span<const std::string> tokens, const TfidfModel& model) {
  SparseVector out;
  out.dim = model.vocab.size();
  for (auto [index, count] :
       count_terms(tokens, [&](const std::string& t) { return model.vocab.index_of(t); })) {
    const double weight = static_cast<double>(count) * model.idf[index];
    if (weight != 0.0) out.entries.push_back({index, weight});
  }
  return out;
}

SparseVector tfidf_vector(const TokenizedDocument& doc, const TfidfModel& model) {
  return tfidf_vector(doc.tokens, model);
}

}  // namespace fnd
