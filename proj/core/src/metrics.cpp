// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fnd Authors

#include "fnd/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include <nlohmann/json.hpp>

#include "fnd/error.hpp"

namespace fnd {

ConfusionMatrix confusion(std::span<const Label> y_true, std::span<const Label> y_pred) {
  if (y_true.size() != y_pred.size()) {
    throw Error(ErrorKind::kDomain, "confusion: label vectors differ in length");
  }
  if (y_true.empty()) throw Error(ErrorKind::kDomain, "confusion: no examples");
  ConfusionMatrix m;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const bool actual = y_true[i] == Label::kReal;
    const bool predicted = y_pred[i] == Label::kReal;
    if (actual && predicted) ++m.tp;
    else if (!actual && predicted) ++m.fp;
    else if (actual && !predicted) ++m.fn;
    else ++m.tn;
  }
  return m;
}

namespace {

double ratio(std::uint64_t num, std::uint64_t den, const char* what, std::vector<std::string>& warnings) {
  if (den == 0) {
    warnings.emplace_back(what);
    return 0.0;
  }
  return static_cast<double>(num) / static_cast<double>(den);
}

double harmonic(double p, double r, const char* what, std::vector<std::string>& warnings) {
  if (p + r == 0.0) {
    warnings.emplace_back(what);
    return 0.0;
  }
  return 2.0 * p * r / (p + r);
}

}  // namespace

Summary summarize(const ConfusionMatrix& m) {
  if (m.total() == 0) throw Error(ErrorKind::kDomain, "summarize: empty confusion matrix");
  Summary s;
  s.accuracy = static_cast<double>(m.tp + m.tn) / static_cast<double>(m.total());
  s.real.precision = ratio(m.tp, m.tp + m.fp, "precision_real: no positive predictions", s.warnings);
  s.real.recall = ratio(m.tp, m.tp + m.fn, "recall_real: no real examples", s.warnings);
  s.real.f1 = harmonic(s.real.precision, s.real.recall, "f1_real: precision and recall are zero", s.warnings);
  s.fake.precision = ratio(m.tn, m.tn + m.fn, "precision_fake: no negative predictions", s.warnings);
  s.fake.recall = ratio(m.tn, m.tn + m.fp, "recall_fake: no fake examples", s.warnings);
  s.fake.f1 = harmonic(s.fake.precision, s.fake.recall, "f1_fake: precision and recall are zero", s.warnings);
  s.macro.precision = (s.real.precision + s.fake.precision) / 2.0;
  s.macro.recall = (s.real.recall + s.fake.recall) / 2.0;
  s.macro.f1 = (s.real.f1 + s.fake.f1) / 2.0;
  return s;
}

RocCurve roc(std::span<const Label> y_true, std::span<const double> scores) {
  if (y_true.size() != scores.size()) throw Error(ErrorKind::kDomain, "roc: labels and scores differ in length");
  std::uint64_t positives = 0;
  for (Label l : y_true) positives += l == Label::kReal;
  const std::uint64_t negatives = y_true.size() - positives;
  if (positives == 0 || negatives == 0) throw Error(ErrorKind::kDomain, "roc: both classes must be present");
  for (double s : scores) {
    if (std::isnan(s)) throw Error(ErrorKind::kDomain, "roc: NaN score");
  }

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  RocCurve curve;
  curve.points.push_back({0.0, 0.0, std::numeric_limits<double>::infinity()});
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  const double P = static_cast<double>(positives);
  const double N = static_cast<double>(negatives);
  for (std::size_t k = 0; k < order.size();) {
    const double threshold = scores[order[k]];
    while (k < order.size() && scores[order[k]] == threshold) {
      if (y_true[order[k]] == Label::kReal) ++tp; else ++fp;
      ++k;
    }
    const RocPoint next{static_cast<double>(fp) / N, static_cast<double>(tp) / P, threshold};
    const RocPoint& prev = curve.points.back();
    curve.auc += (next.fpr - prev.fpr) * (next.tpr + prev.tpr) / 2.0;
    curve.points.push_back(next);
  }
  return curve;
}

EvaluationReport evaluate(std::span<const Label> y_true, std::span<const double> scores) {
  std::vector<Label> predicted;
  predicted.reserve(scores.size());
  for (double s : scores) predicted.push_back(s >= 0.0 ? Label::kReal : Label::kFake);
  EvaluationReport report;
  report.matrix = confusion(y_true, predicted);
  report.summary = summarize(report.matrix);
  report.roc = roc(y_true, scores);
  return report;
}

std::string to_json(const EvaluationReport& report, const std::string& vectorizer, const std::string& kernel) {
  const auto& s = report.summary;
  nlohmann::json j;
  j["vectorizer"] = vectorizer;
  j["kernel"] = kernel;
  j["n"] = report.matrix.total();
  j["accuracy"] = s.accuracy;
  j["precision_real"] = s.real.precision;
  j["recall_real"] = s.real.recall;
  j["f1_real"] = s.real.f1;
  j["precision_fake"] = s.fake.precision;
  j["recall_fake"] = s.fake.recall;
  j["f1_fake"] = s.fake.f1;
  j["macro_precision"] = s.macro.precision;
  j["macro_recall"] = s.macro.recall;
  j["macro_f1"] = s.macro.f1;
  j["auc"] = report.roc.auc;
  j["confusion"] = {{"tp", report.matrix.tp}, {"fp", report.matrix.fp},
                    {"fn", report.matrix.fn}, {"tn", report.matrix.tn}};
  j["warnings"] = s.warnings;
  return j.dump(2) + "\n";
}

void write_roc_tsv(const RocCurve& curve, std::ostream& out) {
  const auto precision = out.precision(17);
  out << "fpr\ttpr\tthreshold\n";
  for (const auto& p : curve.points) {
    out << p.fpr << '\t' << p.tpr << '\t';
    if (std::isinf(p.threshold)) out << (p.threshold > 0 ? "inf" : "-inf"); else out << p.threshold;
    out << '\n';
  }
  out.precision(precision);
}

void write_confusion_tsv(const ConfusionMatrix& m, std::ostream& out) {
  out << "true\\pred\treal\tfake\n";
  out << "real\t" << m.tp << '\t' << m.fn << '\n';
  out << "fake\t" << m.fp << '\t' << m.tn << '\n';
}

}  // namespace fnd
