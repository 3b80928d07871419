// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fnd Authors

#pragma once

#include <string>
#include <vector>

#include "options.hpp"

namespace fnd::cli {

/// Name of the stage currently running, used to tag error messages.
extern std::string g_stage;

struct TrainArgs {
  CommonOptions common;
  DataOptions data;
  ModelOptions model;
  std::string embeddings_path;  // w2v only: text export of the word vectors
  std::string config_echo;
};

struct EvalArgs {
  CommonOptions common;
  DataOptions data;
  std::string model_path;
  std::string vectorizer;  // optional guard against the model's space
  std::string kernel;
  bool split_from_model = true;
};

struct PredictArgs {
  std::string model_path;
  std::vector<std::string> texts;
  std::string input_path;  // one document per line; "-" reads stdin
  unsigned threads = 1;
};

struct TsneArgs {
  CommonOptions common;
  DataOptions data;
  TsneOptions tsne;
  std::string config_echo;
};

struct SplitArgs {
  CommonOptions common;
  DataOptions data;
};

int run_train(const TrainArgs& args);
int run_eval(const EvalArgs& args);
int run_predict(const PredictArgs& args);
int run_tsne(const TsneArgs& args);
int run_split(const SplitArgs& args);

}  // namespace fnd::cli
