// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fnd Authors

#include "fnd/pipeline.hpp"

#include <cmath>
#include <sstream>

#include "fnd/error.hpp"

namespace fnd {

void PipelineConfig::validate() const {
  if (!(R > 0.0) || !std::isfinite(R)) throw Error(ErrorKind::kConfig, "R must be a positive finite number");
  if (alpha && (!(*alpha > 0.0) || !std::isfinite(*alpha))) {
    throw Error(ErrorKind::kConfig, "alpha must be a positive finite number");
  }
  if (min_df < 1) throw Error(ErrorKind::kConfig, "min_df must be >= 1");
  if (vectorizer == FeatureSpace::kW2v) cbow.validate();
  solver.validate();
}

FeatureSpace Pipeline::feature_space() const noexcept {
  switch (vectorizer.index()) {
    case 0: return FeatureSpace::kBow;
    case 1: return FeatureSpace::kTfidf;
    default: return FeatureSpace::kW2v;
  }
}

KernelKind Pipeline::kernel() const noexcept {
  return classifier.index() == 0 ? KernelKind::kLinear : KernelKind::kRbf;
}

std::size_t Pipeline::feature_dim() const noexcept {
  if (const auto* vocab = std::get_if<Vocabulary>(&vectorizer)) return vocab->size();
  if (const auto* tfidf = std::get_if<TfidfModel>(&vectorizer)) return tfidf->vocab.size();
  return std::get<WordEmbeddings>(vectorizer).dim;
}

SparseVector Pipeline::featurize(std::span<const std::string> tokens) const {
  if (const auto* vocab = std::get_if<Vocabulary>(&vectorizer)) return bow_vector(tokens, *vocab);
  if (const auto* tfidf = std::get_if<TfidfModel>(&vectorizer)) return tfidf_vector(tokens, *tfidf);
  return SparseVector::from_dense(embed_doc(tokens, std::get<WordEmbeddings>(vectorizer)));
}

double Pipeline::decision_value(std::span<const std::string> tokens) const {
  const SparseVector x = featurize(tokens);
  return std::visit([&](const auto& model) { return fnd::decision_value(model, x); }, classifier);
}

std::vector<double> Pipeline::decision_values(std::span<const TokenizedDocument> docs, unsigned threads) const {
  std::vector<SparseVector> rows;
  rows.reserve(docs.size());
  for (const auto& doc : docs) rows.push_back(featurize(doc.tokens));
  if (const auto* linear = std::get_if<LinearSvmModel>(&classifier)) return fnd::decision_values(*linear, rows);
  return fnd::decision_values(std::get<KernelSvmModel>(classifier), rows, threads);
}

namespace {

std::string number(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

std::vector<SparseVector> featurize_all(const Vectorizer& vectorizer, std::span<const TokenizedDocument> docs) {
  Pipeline probe{vectorizer, LinearSvmModel{}, {}};
  std::vector<SparseVector> rows;
  rows.reserve(docs.size());
  for (const auto& doc : docs) rows.push_back(probe.featurize(doc.tokens));
  return rows;
}

Vectorizer fit_vectorizer(std::span<const TokenizedDocument> docs, FeatureSpace space, std::size_t min_df,
                          const CbowParams& cbow, const CbowProgress& progress) {
  switch (space) {
    case FeatureSpace::kBow: return build_vocab(docs, min_df);
    case FeatureSpace::kTfidf: return fit_tfidf(build_vocab(docs, min_df));
    case FeatureSpace::kW2v: return train_cbow(docs, cbow, progress);
  }
  throw Error(ErrorKind::kConfig, "unknown feature space");
}

}  // namespace

TrainingSet make_training_set(std::vector<SparseVector> rows, std::span<const TokenizedDocument> docs,
                              std::size_t dim) {
  TrainingSet set;
  set.x = std::move(rows);
  set.dim = dim;
  set.y.reserve(docs.size());
  for (const auto& doc : docs) set.y.push_back(map_label(doc.label));
  return set;
}

std::vector<SparseVector> fit_features(std::span<const TokenizedDocument> docs, FeatureSpace space,
                                       std::size_t min_df, const CbowParams& cbow) {
  return featurize_all(fit_vectorizer(docs, space, min_df, cbow, {}), docs);
}

Pipeline train_pipeline(std::span<const TokenizedDocument> train_docs, const PipelineConfig& cfg,
                        const PipelineHooks& hooks) {
  cfg.validate();
  if (train_docs.empty()) throw Error(ErrorKind::kPrecondition, "no training documents");

  Pipeline pipeline{fit_vectorizer(train_docs, cfg.vectorizer, cfg.min_df, cfg.cbow, hooks.cbow),
                    LinearSvmModel{}, {}};
  const std::size_t dim = pipeline.feature_dim();
  if (dim == 0) throw Error(ErrorKind::kTraining, "vocabulary is empty; lower min_df or add data");
  TrainingSet data = make_training_set(featurize_all(pipeline.vectorizer, train_docs), train_docs, dim);

  auto& hp = pipeline.provenance.hyperparameters;
  hp.emplace_back("vectorizer", std::string(to_string(cfg.vectorizer)));
  hp.emplace_back("kernel", std::string(to_string(cfg.kernel)));
  hp.emplace_back("R", number(cfg.R));
  hp.emplace_back("min_df", std::to_string(cfg.min_df));
  hp.emplace_back("solver_tolerance", number(cfg.solver.tolerance));
  hp.emplace_back("solver_max_iter", std::to_string(cfg.solver.max_iter));
  hp.emplace_back("solver_seed", std::to_string(cfg.solver.seed));
  hp.emplace_back("working_set",
                  cfg.solver.working_set == WorkingSetRule::kSecondOrder ? "second-order" : "max-violating-pair");
  if (cfg.vectorizer == FeatureSpace::kW2v) {
    hp.emplace_back("w2v_dim", std::to_string(cfg.cbow.dim));
    hp.emplace_back("w2v_window", std::to_string(cfg.cbow.window));
    hp.emplace_back("w2v_negatives", std::to_string(cfg.cbow.negatives));
    hp.emplace_back("w2v_epochs", std::to_string(cfg.cbow.epochs));
    hp.emplace_back("w2v_lr", number(cfg.cbow.initial_lr));
    hp.emplace_back("w2v_min_count", std::to_string(cfg.cbow.min_count));
    hp.emplace_back("w2v_seed", std::to_string(cfg.cbow.seed));
  }

  if (cfg.kernel == KernelKind::kLinear) {
    LinearSvmModel model = train_linear(data, cfg.R, cfg.solver, hooks.solver);
    model.feature_space = cfg.vectorizer;
    pipeline.classifier = std::move(model);
  } else {
    const double alpha = cfg.alpha ? *cfg.alpha : scale_alpha(data.x, dim);
    hp.emplace_back("alpha", number(alpha));
    KernelSvmModel model = train_rbf(data, cfg.R, alpha, cfg.solver, hooks.solver);
    model.feature_space = cfg.vectorizer;
    pipeline.classifier = std::move(model);
  }
  return pipeline;
}

}  // namespace fnd
