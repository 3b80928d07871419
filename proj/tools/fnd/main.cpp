// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fnd Authors

#include <cstdlib>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "fnd/error.hpp"
#include "options.hpp"

namespace {

using namespace fnd::cli;

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

void add_common(CLI::App& cmd, CommonOptions& common, std::string& config_path, bool with_out = true) {
  cmd.add_option("--config", config_path, "Flat key=value file; command-line flags take precedence");
  cmd.add_option("--seed", common.seed, "Master seed; each stage adds a fixed offset");
  cmd.add_option("--threads", common.threads, "Worker threads inside a stage")->check(CLI::PositiveNumber);
  if (with_out) cmd.add_option("--out", common.out_dir, "Output directory")->envname("FND_OUT_DIR");
}

void add_data(CLI::App& cmd, DataOptions& data) {
  cmd.add_option("--data-real", data.real_path, "CSV of real articles (title,text,subject,date)");
  cmd.add_option("--data-fake", data.fake_path, "CSV of fake articles (title,text,subject,date)");
  cmd.add_option("--fixture", data.fixture_path, "Single CSV with columns text,label");
  cmd.add_option("--split-dir", data.split_dir, "Directory written by the split command");
  cmd.add_option("--test-fraction", data.test_fraction, "Share of each class held out for testing");
  cmd.add_option("--subset", data.subset, "Documents to use: train, test or all")
      ->check(CLI::IsMember({"train", "test", "all"}));
}

void add_stopwords(CLI::App& cmd, CommonOptions& common) {
  cmd.add_option("--stopwords", common.stopwords_path, "Stopword file, one word per line; default bundled English");
}

void add_cbow(CLI::App& cmd, fnd::CbowParams& cbow) {
  cmd.add_option("--w2v-dim", cbow.dim, "Embedding dimension");
  cmd.add_option("--w2v-window", cbow.window, "Context half-width");
  cmd.add_option("--w2v-negatives", cbow.negatives, "Negative samples per position");
  cmd.add_option("--w2v-epochs", cbow.epochs, "Training epochs");
  cmd.add_option("--w2v-lr", cbow.initial_lr, "Initial learning rate");
  cmd.add_option("--w2v-min-count", cbow.min_count, "Minimum corpus frequency of a word");
}

/// Fills options not given on the command line from the --config file.
void load_config(CLI::App& cmd, const std::string& config_path) {
  if (!config_path.empty()) apply_config(cmd, read_config_file(config_path));
}

int dispatch(int argc, char** argv) {
  CLI::App app{"Fake news detection toolkit: SVM text classifiers, embeddings and projections", "fnd"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);

  std::string config_path;

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Train a vectorizer and SVM, write model.fnd and train.log");
  add_common(*train_cmd, train.common, config_path);
  add_data(*train_cmd, train.data);
  train_cmd->add_option("--vectorizer", train.model.vectorizer, "bow, tfidf or w2v")
      ->check(CLI::IsMember({"bow", "tfidf", "w2v"}));
  train_cmd->add_option("--kernel", train.model.kernel, "linear or rbf")->check(CLI::IsMember({"linear", "rbf"}));
  train_cmd->add_option("--R", train.model.R, "Soft-margin penalty");
  train_cmd->add_option("--alpha", train.model.alpha, "RBF width; default scales with feature variance");
  train_cmd->add_option("--min-df", train.model.min_df, "Minimum document frequency of a term");
  add_cbow(*train_cmd, train.model.cbow);
  add_stopwords(*train_cmd, train.common);
  train_cmd->add_option("--export-embeddings", train.embeddings_path, "w2v only: write word vectors as text");
  train_cmd->add_option("--tolerance", train.model.tolerance, "KKT violation tolerance");
  train_cmd->add_option("--max-iter", train.model.max_iter, "Solver iteration budget");
  train_cmd->add_option("--working-set", train.model.working_set, "first or second order pair selection")
      ->check(CLI::IsMember({"first", "second"}));
  train_cmd->add_option("--cache-mb", train.model.cache_mb, "Kernel row cache size in MiB");

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "Score a model, write metrics.json, confusion.tsv and roc.tsv");
  add_common(*eval_cmd, eval.common, config_path);
  add_data(*eval_cmd, eval.data);
  eval_cmd->add_option("--model", eval.model_path, "Model file")->required();
  eval_cmd->add_option("--vectorizer", eval.vectorizer, "Expected feature space of the model")
      ->check(CLI::IsMember({"bow", "tfidf", "w2v"}));
  eval_cmd->add_option("--kernel", eval.kernel, "Expected kernel of the model")
      ->check(CLI::IsMember({"linear", "rbf"}));

  PredictArgs predict;
  CommonOptions predict_common;
  auto* predict_cmd = app.add_subcommand("predict", "Print label and decision value per document");
  add_common(*predict_cmd, predict_common, config_path, false);
  predict_cmd->add_option("--model", predict.model_path, "Model file")->required();
  predict_cmd->add_option("--text", predict.texts, "Document text; repeatable");
  predict_cmd->add_option("--input", predict.input_path, "File with one document per line, or - for stdin");

  TsneArgs tsne;
  auto* tsne_cmd = app.add_subcommand("tsne", "Embed documents or numeric points with exact t-SNE");
  add_common(*tsne_cmd, tsne.common, config_path);
  add_data(*tsne_cmd, tsne.data);
  tsne_cmd->add_option("--points", tsne.tsne.points_path, "Numeric TSV: feature columns then a 0/1 label");
  tsne_cmd->add_option("--space", tsne.tsne.space, "Feature space for documents: bow, tfidf or w2v")
      ->check(CLI::IsMember({"bow", "tfidf", "w2v"}));
  tsne_cmd->add_option("--dims", tsne.tsne.config.out_dims, "Output dimension, 2 or 3");
  tsne_cmd->add_option("--perplexity", tsne.tsne.config.perplexity, "Target perplexity");
  tsne_cmd->add_option("--iterations", tsne.tsne.config.iterations, "Gradient steps");
  tsne_cmd->add_option("--learning-rate", tsne.tsne.config.learning_rate, "Step size");
  tsne_cmd->add_option("--early-exaggeration", tsne.tsne.config.early_exaggeration, "Early P multiplier");
  tsne_cmd->add_option("--subsample", tsne.tsne.config.subsample, "Stratified cap on embedded points");
  tsne_cmd->add_option("--min-df", tsne.tsne.min_df, "Minimum document frequency of a term");
  add_cbow(*tsne_cmd, tsne.tsne.cbow);
  add_stopwords(*tsne_cmd, tsne.common);

  SplitArgs split;
  auto* split_cmd = app.add_subcommand("split", "Write train.csv, test.csv and split.json");
  add_common(*split_cmd, split.common, config_path);
  add_data(*split_cmd, split.data);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  g_stage = "config";
  if (train_cmd->parsed()) {
    load_config(*train_cmd, config_path);
    train.config_echo = effective_config(*train_cmd);
    return run_train(train);
  }
  if (eval_cmd->parsed()) {
    load_config(*eval_cmd, config_path);
    eval.split_from_model = eval_cmd->count("--seed") == 0 && eval_cmd->count("--test-fraction") == 0;
    return run_eval(eval);
  }
  if (predict_cmd->parsed()) {
    load_config(*predict_cmd, config_path);
    predict.threads = predict_common.threads;
    return run_predict(predict);
  }
  if (tsne_cmd->parsed()) {
    load_config(*tsne_cmd, config_path);
    tsne.config_echo = effective_config(*tsne_cmd);
    return run_tsne(tsne);
  }
  load_config(*split_cmd, config_path);
  return run_split(split);
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const fnd::Error& e) {
    std::cerr << '[' << g_stage << "] error: " << e.what() << '\n';
    return e.kind() == fnd::ErrorKind::kConfig ? kExitUsage : kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << '[' << g_stage << "] error: " << e.what() << '\n';
    return kExitRuntime;
  }
}
