// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fnd Authors

#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fnd/artifact_store.hpp"
#include "fnd/cbow.hpp"
#include "fnd/corpus.hpp"
#include "fnd/error.hpp"
#include "fnd/metrics.hpp"
#include "fnd/pipeline.hpp"
#include "fnd/preprocess.hpp"
#include "fnd/projection.hpp"

namespace fnd::cli {

std::string g_stage = "cli";

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

void log_line(const std::string& stage, const std::string& message) {
  std::cerr << '[' << stage << "] " << message << '\n';
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double value, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value);
  return buf;
}

std::string fmt_g(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

fs::path output_dir(const CommonOptions& common) {
  if (common.out_dir.empty()) throw Error(ErrorKind::kConfig, "no output directory: pass --out or set FND_OUT_DIR");
  return fs::path(common.out_dir);
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::kIo, "cannot create output directory " + dir.string() + ": " + ec.message());
}

Corpus concat(const Corpus& a, const Corpus& b) {
  std::vector<RawDocument> docs = a.documents();
  docs.insert(docs.end(), b.documents().begin(), b.documents().end());
  return Corpus(std::move(docs));
}

struct LoadedData {
  std::optional<Corpus> full;  // absent when reading a materialized split
  Split split;
};

LoadedData load_data(const DataOptions& data, const SplitSpec& spec) {
  g_stage = "ingest";
  LoadedData out;
  if (!data.split_dir.empty()) {
    const fs::path dir(data.split_dir);
    out.split.train = load_fixture(dir / "train.csv");
    out.split.test = load_fixture(dir / "test.csv");
  } else {
    out.full = data.fixture_path.empty() ? load_isot(data.real_path, data.fake_path) : load_fixture(data.fixture_path);
    const auto& stats = out.full->stats();
    log_line("ingest", std::to_string(out.full->size()) + " documents (" + std::to_string(out.full->count(Label::kReal)) +
                           " real, " + std::to_string(out.full->count(Label::kFake)) + " fake); dropped " +
                           std::to_string(stats.dropped_empty) + " empty, " + std::to_string(stats.dropped_duplicate) +
                           " duplicate");
    out.split = stratified_split(*out.full, spec);
  }
  log_line("ingest", "split: " + std::to_string(out.split.train.size()) + " train, " +
                         std::to_string(out.split.test.size()) + " test");
  return out;
}

Corpus select(const LoadedData& loaded, Subset subset) {
  switch (subset) {
    case Subset::kTrain:
      return loaded.split.train;
    case Subset::kTest:
      return loaded.split.test;
    case Subset::kAll:
      break;
  }
  return loaded.full ? *loaded.full : concat(loaded.split.train, loaded.split.test);
}

/// Provenance key holding a custom stopword list, one word per line.
constexpr const char* kStopwordsKey = "stopwords";

StopwordList stopwords_from(const CommonOptions& common) {
  g_stage = "preprocess";
  if (common.stopwords_path.empty()) return StopwordList::english();
  return StopwordList::from_file(common.stopwords_path);
}

/// The list a model was trained with; the bundled one unless overridden.
StopwordList stopwords_from(const Pipeline& pipeline) {
  for (const auto& [key, value] : pipeline.provenance.hyperparameters) {
    if (key == kStopwordsKey) return StopwordList::parse(value, "model");
  }
  return StopwordList::english();
}

std::vector<TokenizedDocument> tokenize(const Corpus& corpus, const StopwordList& stopwords, unsigned threads) {
  g_stage = "preprocess";
  PreprocessResult result = preprocess_corpus(corpus, stopwords, threads);
  log_line("preprocess", std::to_string(result.documents.size()) + " documents tokenized, " +
                             std::to_string(result.dropped_empty) + " empty after cleaning");
  return std::move(result.documents);
}

SplitSpec split_spec(const DataOptions& data, const CommonOptions& common) {
  return SplitSpec{data.test_fraction, common.seed + kSplitSeedOffset};
}

/// Logs the dual objective at powers of two and every thousandth iteration.
bool worth_logging(std::size_t iteration) {
  return iteration % 1000 == 0 || (iteration & (iteration - 1)) == 0;
}

}  // namespace

int run_train(const TrainArgs& args) {
  g_stage = "config";
  const PipelineConfig cfg = args.model.to_config(args.common);
  args.data.validate();
  if (!args.embeddings_path.empty() && cfg.vectorizer != FeatureSpace::kW2v) {
    throw Error(ErrorKind::kConfig, "--export-embeddings needs --vectorizer w2v");
  }
  const SplitSpec spec = split_spec(args.data, args.common);
  const fs::path out = output_dir(args.common);

  const auto start = Clock::now();
  const StopwordList stopwords = stopwords_from(args.common);
  const LoadedData loaded = load_data(args.data, spec);
  const auto docs =
      tokenize(select(loaded, args.data.resolve_subset(Subset::kTrain)), stopwords, args.common.threads);

  std::ostringstream log;
  log << "# fnd train log\n";
  log << "documents\t" << docs.size() << '\n';
  PipelineHooks hooks;
  hooks.cbow = [&](std::size_t epoch, double loss) {
    log << "cbow_epoch\t" << epoch << '\t' << fmt_g(loss) << '\n';
    log_line("vectorize", "cbow epoch " + std::to_string(epoch) + " mean loss " + fmt(loss));
  };
  SolverProgress last;
  hooks.solver = [&](const SolverProgress& p) {
    last = p;
    if (worth_logging(p.iteration)) {
      log << "solver_iter\t" << p.iteration << '\t' << fmt_g(p.dual_objective) << '\t' << fmt_g(p.max_violation)
          << '\n';
    }
  };

  g_stage = "train";
  Pipeline pipeline = train_pipeline(docs, cfg, hooks);
  pipeline.provenance.seed = args.common.seed;
  pipeline.provenance.split = spec;
  pipeline.provenance.created_unix = static_cast<std::int64_t>(std::time(nullptr));
  if (!args.common.stopwords_path.empty()) {
    pipeline.provenance.hyperparameters.emplace_back(kStopwordsKey, stopwords.serialize());
  }

  const SolverStats& stats = std::visit([](const auto& m) -> const SolverStats& { return m.stats; },
                                        pipeline.classifier);
  if (last.iteration != 0 && !worth_logging(last.iteration)) {
    log << "solver_iter\t" << last.iteration << '\t' << fmt_g(last.dual_objective) << '\t'
        << fmt_g(last.max_violation) << '\n';
  }
  log << "iterations\t" << stats.iterations << '\n';
  log << "dual_objective\t" << fmt_g(stats.dual_objective) << '\n';
  log << "max_violation\t" << fmt_g(stats.max_violation) << '\n';
  log << "feature_dim\t" << pipeline.feature_dim() << '\n';
  const double wall = seconds_since(start);
  log << "wall_seconds\t" << fmt(wall, 3) << '\n';
  log_line("train", to_string(cfg.vectorizer).data() + std::string("+") + to_string(cfg.kernel).data() + ": " +
                        std::to_string(stats.iterations) + " iterations, dual objective " +
                        fmt(stats.dual_objective) + ", " + fmt(wall, 2) + " s");

  g_stage = "write";
  ensure_dir(out);
  save_model(pipeline, out / "model.fnd");
  write_text_file(out / "train.log", log.str());
  write_text_file(out / "config.txt", args.config_echo);
  if (!args.embeddings_path.empty()) {
    write_embeddings_text(std::get<WordEmbeddings>(pipeline.vectorizer), args.embeddings_path);
  }
  log_line("write", "model written to " + (out / "model.fnd").string());
  return 0;
}

int run_eval(const EvalArgs& args) {
  g_stage = "config";
  args.data.validate();
  if (!args.vectorizer.empty()) parse_feature_space(args.vectorizer);
  if (!args.kernel.empty()) parse_kernel(args.kernel);
  const fs::path out = output_dir(args.common);

  g_stage = "load";
  const Pipeline pipeline = load_model(args.model_path);
  if (!args.vectorizer.empty() && parse_feature_space(args.vectorizer) != pipeline.feature_space()) {
    throw Error(ErrorKind::kPipeline, "feature space mismatch: model was trained on " +
                                          std::string(to_string(pipeline.feature_space())) + " features, requested " +
                                          args.vectorizer);
  }
  if (!args.kernel.empty() && parse_kernel(args.kernel) != pipeline.kernel()) {
    throw Error(ErrorKind::kPipeline, "kernel mismatch: model uses " + std::string(to_string(pipeline.kernel())) +
                                          ", requested " + args.kernel);
  }

  SplitSpec spec = split_spec(args.data, args.common);
  if (args.split_from_model) spec = pipeline.provenance.split;
  const LoadedData loaded = load_data(args.data, spec);
  const auto docs = tokenize(select(loaded, args.data.resolve_subset(Subset::kTest)), stopwords_from(pipeline),
                             args.common.threads);
  if (docs.empty()) throw Error(ErrorKind::kPrecondition, "no documents to evaluate");

  g_stage = "evaluate";
  const std::vector<double> scores = pipeline.decision_values(docs, args.common.threads);
  std::vector<Label> truth;
  truth.reserve(docs.size());
  for (const auto& d : docs) truth.push_back(d.label);
  const EvaluationReport report = evaluate(truth, scores);
  for (const auto& w : report.summary.warnings) log_line("evaluate", "warning: " + w);

  g_stage = "write";
  ensure_dir(out);
  const std::string vec(to_string(pipeline.feature_space()));
  const std::string ker(to_string(pipeline.kernel()));
  write_text_file(out / "metrics.json", to_json(report, vec, ker));
  std::ostringstream confusion;
  write_confusion_tsv(report.matrix, confusion);
  write_text_file(out / "confusion.tsv", confusion.str());
  std::ostringstream roc_tsv;
  write_roc_tsv(report.roc, roc_tsv);
  write_text_file(out / "roc.tsv", roc_tsv.str());

  const auto& s = report.summary;
  std::cout << vec << '\t' << ker << '\t' << fmt(s.accuracy, 4) << '\t' << fmt(s.macro.precision, 4) << '\t'
            << fmt(s.macro.recall, 4) << '\t' << fmt(s.macro.f1, 4) << '\n';
  return 0;
}

int run_predict(const PredictArgs& args) {
  g_stage = "config";
  if (args.texts.empty() == args.input_path.empty()) {
    throw Error(ErrorKind::kConfig, "pass either --text or --input");
  }
  g_stage = "load";
  const Pipeline pipeline = load_model(args.model_path);

  std::vector<std::string> texts = args.texts;
  if (!args.input_path.empty()) {
    g_stage = "ingest";
    std::ifstream file;
    std::istream* in = &std::cin;
    if (args.input_path != "-") {
      file.open(args.input_path);
      if (!file) throw Error(ErrorKind::kIo, "cannot read " + args.input_path);
      in = &file;
    }
    std::string line;
    while (std::getline(*in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      texts.push_back(line);
    }
  }

  g_stage = "predict";
  const StopwordList stopwords = stopwords_from(pipeline);
  std::string out;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    const auto tokens = clean_tokenize(texts[i], stopwords);
    const double value = pipeline.decision_value(tokens);
    out += std::to_string(to_int(label_from_decision(value))) + '\t' + fmt(value);
    if (tokens.empty()) {
      out += "\tempty_document";
      log_line("predict", "warning: document " + std::to_string(i + 1) + " is empty after cleaning");
    }
    out += '\n';
  }
  std::cout << out;
  return 0;
}

namespace {

/// Numeric TSV rows: feature columns followed by a 0/1 label.
void read_points(const fs::path& path, std::vector<DenseVector>& points, std::vector<Label>& labels) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot read " + path.string());
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty() || line.front() == '#') continue;
    std::istringstream fields(line);
    std::vector<double> values;
    std::string cell;
    while (std::getline(fields, cell, '\t')) {
      try {
        std::size_t used = 0;
        values.push_back(std::stod(cell, &used));
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw Error(ErrorKind::kParse, path.string() + ":" + std::to_string(number) + ": not a number: '" + cell + "'");
      }
    }
    if (values.size() < 2) {
      throw Error(ErrorKind::kParse, path.string() + ":" + std::to_string(number) + ": need features and a label");
    }
    const double label = values.back();
    if (label != 0.0 && label != 1.0) {
      throw Error(ErrorKind::kParse, path.string() + ":" + std::to_string(number) + ": label must be 0 or 1");
    }
    labels.push_back(label_from_int(static_cast<long>(label)));
    values.pop_back();
    if (!points.empty() && values.size() != points.front().size()) {
      throw Error(ErrorKind::kParse, path.string() + ":" + std::to_string(number) + ": inconsistent column count");
    }
    points.push_back(std::move(values));
  }
}

template <typename Row>
std::vector<Row> pick(const std::vector<Row>& rows, const std::vector<std::size_t>& index) {
  std::vector<Row> out;
  out.reserve(index.size());
  for (std::size_t i : index) out.push_back(rows[i]);
  return out;
}

}  // namespace

int run_tsne(const TsneArgs& args) {
  g_stage = "config";
  TsneConfig cfg = args.tsne.config;
  cfg.seed = args.common.seed + kTsneSeedOffset;
  cfg.validate();
  const bool from_points = !args.tsne.points_path.empty();
  if (from_points == args.data.any()) throw Error(ErrorKind::kConfig, "pass either --points or a data source");
  FeatureSpace space = FeatureSpace::kTfidf;
  CbowParams cbow = args.tsne.cbow;
  cbow.seed = args.common.seed + kCbowSeedOffset;
  cbow.threads = args.common.threads;
  if (!from_points) {
    args.data.validate();
    space = parse_feature_space(args.tsne.space);
    cbow.validate();
  }
  const fs::path out = output_dir(args.common);

  Embedding embedding;
  const auto start = Clock::now();
  if (from_points) {
    g_stage = "ingest";
    std::vector<DenseVector> points;
    std::vector<Label> labels;
    read_points(args.tsne.points_path, points, labels);
    const auto index = stratified_subsample(labels, cfg.subsample, cfg.seed);
    cfg.validate_for(index.size());
    g_stage = "project";
    embedding = tsne(pick(points, index), pick(labels, index), cfg);
  } else {
    const StopwordList stopwords = stopwords_from(args.common);
    const LoadedData loaded = load_data(args.data, split_spec(args.data, args.common));
    const auto docs =
        tokenize(select(loaded, args.data.resolve_subset(Subset::kAll)), stopwords, args.common.threads);
    std::vector<Label> labels;
    for (const auto& d : docs) labels.push_back(d.label);
    const auto index = stratified_subsample(labels, cfg.subsample, cfg.seed);
    cfg.validate_for(index.size());
    const auto chosen = pick(docs, index);
    g_stage = "vectorize";
    const auto rows = fit_features(chosen, space, args.tsne.min_df, cbow);
    g_stage = "project";
    embedding = tsne(std::span<const SparseVector>(rows), pick(labels, index), cfg);
  }
  log_line("project", std::to_string(embedding.labels.size()) + " points, KL " + fmt(embedding.initial_kl) + " -> " +
                          fmt(embedding.final_kl) + ", " + fmt(seconds_since(start), 2) + " s");

  g_stage = "write";
  ensure_dir(out);
  std::ostringstream tsv;
  write_embedding_tsv(embedding, tsv);
  write_text_file(out / "tsne.tsv", tsv.str());
  write_text_file(out / "config.txt", args.config_echo);
  return 0;
}

int run_split(const SplitArgs& args) {
  g_stage = "config";
  args.data.validate();
  if (!args.data.split_dir.empty()) throw Error(ErrorKind::kConfig, "split needs raw data, not --split-dir");
  const SplitSpec spec = split_spec(args.data, args.common);
  const fs::path out = output_dir(args.common);

  const LoadedData loaded = load_data(args.data, spec);

  g_stage = "write";
  ensure_dir(out);
  write_fixture(loaded.split.train, out / "train.csv");
  write_fixture(loaded.split.test, out / "test.csv");
  nlohmann::ordered_json meta;
  meta["seed"] = spec.seed;
  meta["test_fraction"] = spec.test_fraction;
  meta["source"] = args.data.fixture_path.empty() ? "isot" : "fixture";
  meta["columns"] = {"text", "label"};
  meta["labels"] = {{"fake", 0}, {"real", 1}};
  for (const auto& [name, part] : {std::pair{"train", &loaded.split.train}, std::pair{"test", &loaded.split.test}}) {
    meta[name] = {{"file", std::string(name) + ".csv"},
                  {"documents", part->size()},
                  {"real", part->count(Label::kReal)},
                  {"fake", part->count(Label::kFake)}};
  }
  write_text_file(out / "split.json", meta.dump(2) + "\n");
  log_line("write", "split written to " + out.string());
  return 0;
}

}  // namespace fnd::cli
