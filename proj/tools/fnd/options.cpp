// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fnd Authors

#include "options.hpp"

#include <fstream>
#include <sstream>

#include "fnd/error.hpp"

namespace fnd::cli {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

void DataOptions::validate() const {
  const int sources = static_cast<int>(!split_dir.empty()) + static_cast<int>(!fixture_path.empty()) +
                      static_cast<int>(!real_path.empty() || !fake_path.empty());
  if (sources == 0) {
    throw Error(ErrorKind::kConfig, "no input data: pass --data-real and --data-fake, --fixture, or --split-dir");
  }
  if (sources > 1) throw Error(ErrorKind::kConfig, "choose exactly one of ISOT files, --fixture or --split-dir");
  if ((!real_path.empty() || !fake_path.empty()) && (real_path.empty() || fake_path.empty())) {
    throw Error(ErrorKind::kConfig, "--data-real and --data-fake must be given together");
  }
  SplitSpec{test_fraction, 0}.validate();
  if (!subset.empty() && subset != "train" && subset != "test" && subset != "all") {
    throw Error(ErrorKind::kConfig, "unknown subset '" + subset + "' (expected train, test or all)");
  }
}

Subset DataOptions::resolve_subset(Subset fallback) const {
  if (subset == "train") return Subset::kTrain;
  if (subset == "test") return Subset::kTest;
  if (subset == "all") return Subset::kAll;
  return fallback;
}

PipelineConfig ModelOptions::to_config(const CommonOptions& common) const {
  PipelineConfig cfg;
  cfg.vectorizer = parse_feature_space(vectorizer);
  cfg.kernel = parse_kernel(kernel);
  cfg.R = R;
  cfg.alpha = alpha;
  cfg.min_df = min_df;
  cfg.cbow = cbow;
  cfg.cbow.seed = common.seed + kCbowSeedOffset;
  cfg.cbow.threads = common.threads;
  cfg.solver.tolerance = tolerance;
  cfg.solver.max_iter = max_iter;
  cfg.solver.seed = common.seed + kSolverSeedOffset;
  cfg.solver.threads = common.threads;
  cfg.solver.cache_bytes = cache_mb << 20;
  if (working_set == "first") {
    cfg.solver.working_set = WorkingSetRule::kMaxViolatingPair;
  } else if (working_set == "second") {
    cfg.solver.working_set = WorkingSetRule::kSecondOrder;
  } else {
    throw Error(ErrorKind::kConfig, "unknown working set rule '" + working_set + "' (expected first or second)");
  }
  cfg.validate();
  return cfg;
}

std::map<std::string, std::string> read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kConfig, "cannot read config file " + path.string());
  std::map<std::string, std::string> values;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::kConfig, path.string() + ":" + std::to_string(number) + ": expected key=value");
    }
    values[trim(text.substr(0, eq))] = trim(text.substr(eq + 1));
  }
  return values;
}

void apply_config(CLI::App& command, const std::map<std::string, std::string>& values) {
  for (const auto& [key, value] : values) {
    if (key == "config") continue;
    CLI::Option* opt = nullptr;
    try {
      opt = command.get_option("--" + key);
    } catch (const CLI::OptionNotFound&) {
      throw Error(ErrorKind::kConfig, "unknown config key '" + key + "' for " + command.get_name());
    }
    if (opt->count() > 0) continue;  // the command line wins
    try {
      opt->add_result(value);
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw Error(ErrorKind::kConfig, "config key '" + key + "': " + e.what());
    }
  }
}

std::string effective_config(const CLI::App& command) {
  std::ostringstream out;
  for (const CLI::Option* opt : command.get_options()) {
    const std::string name = opt->get_single_name();
    if (name.empty() || name == "help" || name == "config") continue;
    if (opt->get_expected_min() == 0) continue;  // flags
    std::string value;
    if (opt->count() > 0) {
      const auto& results = opt->results();
      for (std::size_t i = 0; i < results.size(); ++i) value += (i ? "," : "") + results[i];
    } else {
      value = opt->get_default_str();
    }
    out << name << '=' << value << '\n';
  }
  return out.str();
}

}  // namespace fnd::cli
