// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fnd Authors

#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "fnd/corpus.hpp"

namespace fnd {

inline constexpr std::size_t kMinTokenLength = 3;
inline constexpr std::size_t kMaxTokenLength = 15;

class StopwordList {
 public:
  StopwordList() = default;
  StopwordList(std::unordered_set<std::string> words, std::string source_id);

  /// The bundled NLTK English snapshot (179 words).
  static const StopwordList& english();

  /// One word per line, '#' starts a comment line, blank lines ignored.
  /// Entries are lowercased.
  static StopwordList from_file(const std::filesystem::path& path);
  static StopwordList parse(std::string_view text, std::string source_id);

  bool contains(std::string_view word) const;
  std::size_t size() const noexcept { return words_.size(); }
  /// Entries in lexicographic order, one per line, as `parse` reads them.
  std::string serialize() const;
  const std::string& source_id() const noexcept { return source_id_; }

 private:
  std::unordered_set<std::string> words_;
  std::string source_id_;
};

struct TokenizedDocument {
  std::vector<std::string> tokens;
  Label label = Label::kFake;
};

/// Splits UTF-8 text into maximal runs of letters, lowercases them, keeps
/// runs of 3..15 code points, then removes stopwords. Order and duplicates
/// are preserved. Invalid UTF-8 bytes act as separators.
std::vector<std::string> clean_tokenize(std::string_view text,
                                        const StopwordList& stopwords);

struct PreprocessResult {
  std::vector<TokenizedDocument> documents;
  std::size_t dropped_empty = 0;
};

/// Tokenizes title + " " + body for each document. Documents left with no
/// tokens are dropped. Output order follows input order for any thread count.
PreprocessResult preprocess_corpus(const Corpus& corpus,
                                   const StopwordList& stopwords,
                                   unsigned threads = 1);

/// Joins tokens with single spaces.
std::string join_tokens(const std::vector<std::string>& tokens);

namespace unicode {

/// Letter test covering ASCII, Latin-1, Latin Extended-A, Greek and Cyrillic.
bool is_letter(char32_t cp) noexcept;
/// Simple one-to-one lowercase mapping over the same blocks.
char32_t to_lower(char32_t cp) noexcept;

}  // namespace unicode

}  // namespace fnd
