// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fnd Authors

#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "fnd/corpus.hpp"

namespace fnd {

/// Binary confusion counts with REAL (1) as the positive class.
struct ConfusionMatrix {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  std::uint64_t total() const noexcept { return tp + fp + fn + tn; }
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

ConfusionMatrix confusion(std::span<const Label> y_true, std::span<const Label> y_pred);

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Accuracy plus per-class and macro precision/recall/F1.
///
/// A 0/0 ratio evaluates to 0 and appends a short note to `warnings`
/// (for example "precision_real: no positive predictions").
struct Summary {
  double accuracy = 0.0;
  ClassMetrics real;
  ClassMetrics fake;
  ClassMetrics macro;
  std::vector<std::string> warnings;
};

Summary summarize(const ConfusionMatrix& matrix);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  double threshold = 0.0;  // +inf for the leading (0, 0) point
};

struct RocCurve {
  std::vector<RocPoint> points;
  double auc = 0.0;
};

/// Sweeps thresholds over the distinct scores in descending order; equal
/// scores move together. AUC is the trapezoidal area under the points.
RocCurve roc(std::span<const Label> y_true, std::span<const double> scores);

struct EvaluationReport {
  ConfusionMatrix matrix;
  Summary summary;
  RocCurve roc;
};

EvaluationReport evaluate(std::span<const Label> y_true, std::span<const double> scores);

/// JSON with the fixed metric keys (accuracy, precision_real, ..., auc) plus a
/// "confusion" object and a "warnings" array. Keys are sorted and numbers are
/// printed with round-trip precision, so equal reports serialize identically.
std::string to_json(const EvaluationReport& report, const std::string& vectorizer,
                    const std::string& kernel);

/// Header "fpr\ttpr\tthreshold", one line per ROC point.
void write_roc_tsv(const RocCurve& curve, std::ostream& out);
/// Two-by-two block with row = true class and column = predicted class.
void write_confusion_tsv(const ConfusionMatrix& matrix, std::ostream& out);

}  // namespace fnd
