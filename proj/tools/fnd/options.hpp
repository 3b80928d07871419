// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fnd Authors

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fnd/pipeline.hpp"
#include "fnd/projection.hpp"

namespace fnd::cli {

// Fixed offsets added to --seed for each randomized stage.
inline constexpr std::uint64_t kSplitSeedOffset = 0;
inline constexpr std::uint64_t kCbowSeedOffset = 1;
inline constexpr std::uint64_t kSolverSeedOffset = 2;
inline constexpr std::uint64_t kTsneSeedOffset = 3;

enum class Subset { kTrain, kTest, kAll };

struct DataOptions {
  std::string real_path;
  std::string fake_path;
  std::string fixture_path;
  std::string split_dir;
  double test_fraction = 0.2;
  std::string subset;  // train | test | all; empty picks the command default

  bool any() const { return !real_path.empty() || !fake_path.empty() || !fixture_path.empty() || !split_dir.empty(); }
  void validate() const;
  Subset resolve_subset(Subset fallback) const;
};

struct CommonOptions {
  std::uint64_t seed = 42;
  unsigned threads = 1;
  std::string out_dir;
  std::string stopwords_path;  // empty selects the bundled English list
};

struct ModelOptions {
  std::string vectorizer = "bow";
  std::string kernel = "linear";
  double R = 1.0;
  std::optional<double> alpha;
  std::size_t min_df = 2;
  CbowParams cbow;
  double tolerance = 1e-3;
  std::size_t max_iter = 10'000'000;
  std::string working_set = "first";
  std::size_t cache_mb = 256;

  /// Builds and validates the pipeline config with per-stage seeds applied.
  PipelineConfig to_config(const CommonOptions& common) const;
};

struct TsneOptions {
  TsneConfig config;
  std::string space = "tfidf";
  std::string points_path;
  std::size_t min_df = 2;
  CbowParams cbow;
};

/// Reads a flat key=value file. Blank lines and lines starting with '#' are
/// skipped; keys are option names without leading dashes.
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);

/// Fills every option of `command` that was not given on the command line
/// from `values`. Unknown keys are config errors.
void apply_config(CLI::App& command, const std::map<std::string, std::string>& values);

/// key=value lines for every option of `command` with its effective value.
std::string effective_config(const CLI::App& command);

}  // namespace fnd::cli
