// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fnd Authors

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace fnd {

/// Class labels as they appear in the dataset: fake news is 0, real news is 1.
enum class Label : std::uint8_t { kFake = 0, kReal = 1 };

/// Throws Error{kDomain} for anything other than 0 or 1.
Label label_from_int(long value);
constexpr int to_int(Label label) noexcept { return static_cast<int>(label); }

struct RawDocument {
  std::string title;
  std::string body;
  std::string subject;
  std::string date;  // opaque, never parsed
  Label label = Label::kFake;
};

/// Rows discarded during ingestion.
struct IngestStats {
  std::size_t dropped_empty = 0;
  std::size_t dropped_duplicate = 0;
};

/// Labeled documents in ingestion order. Immutable once built.
class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::vector<RawDocument> documents, IngestStats stats = {});

  const std::vector<RawDocument>& documents() const noexcept { return documents_; }
  std::size_t size() const noexcept { return documents_.size(); }
  bool empty() const noexcept { return documents_.empty(); }

  std::size_t count(Label label) const noexcept {
    return counts_[static_cast<std::size_t>(label)];
  }
  const IngestStats& stats() const noexcept { return stats_; }

 private:
  std::vector<RawDocument> documents_;
  std::array<std::size_t, 2> counts_{};
  IngestStats stats_;
};

/// Loads the two-file news layout (columns title, text, subject, date; label
/// implied by the file). Real rows are read first. Rows whose title and text
/// are both empty are dropped, and repeated (title, text) pairs keep only the
/// first occurrence.
Corpus load_isot(const std::filesystem::path& real_path,
                 const std::filesystem::path& fake_path);

/// Loads a single CSV with columns text,label.
Corpus load_fixture(const std::filesystem::path& path);

struct SplitSpec {
  double test_fraction = 0.2;
  std::uint64_t seed = 42;

  void validate() const;
};

struct Split {
  Corpus train;
  Corpus test;
};

/// Per label, round(test_fraction * n_label) documents chosen by a seeded
/// Fisher-Yates permutation go to test. Both halves keep ingestion order.
Split stratified_split(const Corpus& corpus, const SplitSpec& spec);

/// Writes documents in the text,label fixture schema. The text column is
/// title and body joined by one space, matching what preprocessing sees.
void write_fixture(const Corpus& corpus, const std::filesystem::path& path);

}  // namespace fnd
