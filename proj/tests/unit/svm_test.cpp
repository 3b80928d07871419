// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fnd Authors

#include "fnd/svm.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fnd/error.hpp"
#include "fnd/rng.hpp"
#include "qp_oracle.hpp"

namespace fnd {
namespace {

using testing::DenseProblem;
using testing::solve_dual_reference;

SparseVector sv(std::vector<double> dense) { return SparseVector::from_dense(dense); }

TrainingSet make_set(const std::vector<std::vector<double>>& x, const std::vector<int>& y) {
  TrainingSet set;
  set.dim = x.front().size();
  for (const auto& row : x) set.x.push_back(sv(row));
  set.y = y;
  return set;
}

SolverConfig tight() {
  SolverConfig cfg;
  cfg.tolerance = 1e-8;
  return cfg;
}

TEST(LabelMap, Bijection) {
  EXPECT_EQ(map_label(Label::kReal), 1);
  EXPECT_EQ(map_label(Label::kFake), -1);
  for (Label l : {Label::kReal, Label::kFake}) EXPECT_EQ(unmap_label(map_label(l)), l);
  EXPECT_THROW(unmap_label(0), Error);
  EXPECT_THROW(unmap_label(2), Error);
}

TEST(Names, ParseAndPrint) {
  EXPECT_EQ(parse_feature_space("tfidf"), FeatureSpace::kTfidf);
  EXPECT_EQ(to_string(FeatureSpace::kW2v), "w2v");
  EXPECT_EQ(parse_kernel("rbf"), KernelKind::kRbf);
  try {
    parse_feature_space("glove");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kConfig);
  }
  EXPECT_THROW(parse_kernel("poly"), Error);
}

TEST(TrainLinear, TwoPointSymmetricProblem) {
  const TrainingSet data = make_set({{-1, 0}, {1, 0}}, {-1, 1});
  const LinearSvmModel model = train_linear(data, 1e6, tight());
  ASSERT_EQ(model.w.size(), 2u);
  EXPECT_NEAR(model.w[0], 1.0, 1e-6);
  EXPECT_NEAR(model.w[1], 0.0, 1e-9);
  EXPECT_NEAR(model.h, 0.0, 1e-6);
  const SupportReport report = support_vectors(model);
  EXPECT_EQ(report.count, 2u);
  EXPECT_EQ(report.indices, (std::vector<std::uint64_t>{0, 1}));
}

TEST(TrainLinear, FarPointLeavesSupportSetUnchanged) {
  const TrainingSet data = make_set({{-1, 0}, {1, 0}, {25, 3}}, {-1, 1, 1});
  const LinearSvmModel model = train_linear(data, 1e6, tight());
  EXPECT_EQ(support_vectors(model).indices, (std::vector<std::uint64_t>{0, 1}));
  EXPECT_NEAR(model.w[0], 1.0, 1e-6);
}

TEST(TrainLinear, PreconditionsAndConfig) {
  const TrainingSet data = make_set({{-1, 0}, {1, 0}}, {-1, 1});
  EXPECT_THROW(train_linear(data, 0.0), Error);
  EXPECT_THROW(train_linear(data, -1.0), Error);
  SolverConfig bad;
  bad.tolerance = 0.0;
  EXPECT_THROW(train_linear(data, 1.0, bad), Error);
  TrainingSet one_class = make_set({{-1, 0}, {1, 0}}, {1, 1});
  try {
    train_linear(one_class, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kPrecondition);
  }
  TrainingSet mixed = data;
  mixed.x[1].dim = 3;
  EXPECT_THROW(train_linear(mixed, 1.0), Error);
}

TEST(TrainLinear, NonConvergenceCarriesDiagnostics) {
  Rng rng(1);
  std::vector<std::vector<double>> x;
  std::vector<int> y;
  for (int i = 0; i < 40; ++i) {
    x.push_back({rng.normal(), rng.normal()});
    y.push_back(rng.uniform() < 0.5 ? 1 : -1);
  }
  y[0] = 1;
  y[1] = -1;
  SolverConfig cfg;
  cfg.max_iter = 1;
  cfg.tolerance = 1e-12;
  cfg.warm_start = false;
  try {
    train_linear(make_set(x, y), 10.0, cfg);
    FAIL();
  } catch (const ConvergenceError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kConvergence);
    EXPECT_GT(e.max_violation(), 0.0);
    EXPECT_TRUE(std::isfinite(e.objective()));
  }
  try {
    train_rbf(make_set(x, y), 10.0, 1.0, cfg);
    FAIL();
  } catch (const ConvergenceError& e) {
    EXPECT_GT(e.max_violation(), 0.0);
  }
}

TEST(TrainRbf, XorIsSolved) {
  const TrainingSet data = make_set({{0, 0}, {1, 1}, {0, 1}, {1, 0}}, {1, 1, -1, -1});
  const KernelSvmModel model = train_rbf(data, 10.0, 1.0, tight());
  for (std::size_t i = 0; i < data.size(); ++i) {
    EXPECT_EQ(map_label(predict(model, data.x[i])), data.y[i]) << i;
  }
  EXPECT_GT(decision_value(model, sv({0, 0})), 0.0);
  const SupportReport report = support_vectors(model);
  EXPECT_EQ(report.count, 4u);

  DenseProblem problem{{{0, 0}, {1, 1}, {0, 1}, {1, 0}}, {1, 1, -1, -1}, 10.0, true, 1.0};
  const auto oracle = solve_dual_reference(problem);
  for (double l : oracle.lambda) EXPECT_GT(l, 0.0);
  EXPECT_NEAR(model.stats.dual_objective, oracle.dual_objective, 1e-6);
}

TEST(TrainRbf, FreeSupportVectorsSitOnTheMargin) {
  Rng rng(12);
  std::vector<std::vector<double>> x;
  std::vector<int> y;
  for (int i = 0; i < 30; ++i) {
    const int label = i % 2 ? 1 : -1;
    x.push_back({rng.normal() + label, rng.normal()});
    y.push_back(label);
  }
  const TrainingSet data = make_set(x, y);
  const double R = 2.0;
  const KernelSvmModel model = train_rbf(data, R, 0.5, tight());
  ASSERT_TRUE(model.support_index.has_value());
  std::size_t free_count = 0;
  for (std::size_t s = 0; s < model.support_x.size(); ++s) {
    const double lambda = std::abs(model.dual_coef[s]);
    if (lambda > 1e-6 && lambda < R - 1e-6) {
      ++free_count;
      const std::size_t i = (*model.support_index)[s];
      EXPECT_NEAR(decision_value(model, data.x[i]), data.y[i], 1e-5);
    }
  }
  EXPECT_GT(free_count, 0u);
}

TEST(TrainRbf, DualFeasibilityAndMonotoneProgress) {
  Rng rng(21);
  std::vector<std::vector<double>> x;
  std::vector<int> y;
  for (int i = 0; i < 60; ++i) {
    x.push_back({rng.normal(), rng.normal(), rng.normal()});
    y.push_back(x.back()[0] * x.back()[1] > 0 ? 1 : -1);
  }
  const TrainingSet data = make_set(x, y);
  const double R = 3.0;
  std::vector<double> trace;
  SolverConfig cfg = tight();
  cfg.cache_bytes = 1024;  // force cache eviction
  const KernelSvmModel model =
      train_rbf(data, R, 1.0, cfg, [&](const SolverProgress& p) { trace.push_back(p.dual_objective); });
  ASSERT_GT(trace.size(), 1u);
  for (std::size_t k = 1; k < trace.size(); ++k) EXPECT_GE(trace[k], trace[k - 1] - 1e-12) << k;

  double balance = 0.0;
  double total = 0.0;
  for (std::size_t s = 0; s < model.dual_coef.size(); ++s) {
    const double lambda = std::abs(model.dual_coef[s]);
    EXPECT_GT(lambda, 0.0);
    EXPECT_LE(lambda, R * (1 + 1e-12));
    balance += model.dual_coef[s];
    total += lambda;
  }
  EXPECT_LE(std::abs(balance), 1e-8 * total);
  EXPECT_LT(model.stats.max_violation, cfg.tolerance);

  SolverConfig second = cfg;
  second.working_set = WorkingSetRule::kSecondOrder;
  const KernelSvmModel alt = train_rbf(data, R, 1.0, second);
  EXPECT_NEAR(alt.stats.dual_objective, model.stats.dual_objective, 1e-6);
}

TEST(TrainLinear, WarmStartMatchesColdSmoOnSparseText) {
  Rng rng(8);
  TrainingSet data;
  data.dim = 300;
  for (int i = 0; i < 400; ++i) {
    const int label = i % 2 ? 1 : -1;
    std::vector<double> dense(data.dim, 0.0);
    for (int k = 0; k < 25; ++k) {
      // Overlapping topics: a fifth of the terms lean towards the label.
      const bool topical = rng.uniform() < 0.2;
      const std::size_t term = topical ? (label > 0 ? 0 : 150) + rng.below(150) : rng.below(data.dim);
      dense[term] += 1.0;
    }
    data.x.push_back(sv(dense));
    data.y.push_back(label);
  }
  SolverConfig cold;
  cold.warm_start = false;
  SolverConfig warm;
  warm.warm_start_min_rows = 0;
  const LinearSvmModel a = train_linear(data, 1.0, cold);
  const LinearSvmModel b = train_linear(data, 1.0, warm);
  EXPECT_NEAR(a.stats.dual_objective, b.stats.dual_objective, 1e-3 * std::abs(a.stats.dual_objective));
  EXPECT_LT(b.stats.max_violation, SolverConfig{}.tolerance);
  EXPECT_LT(b.stats.iterations, a.stats.iterations);
  std::size_t agree = 0;
  for (const auto& x : data.x) agree += predict(a, x) == predict(b, x);
  EXPECT_GE(agree, data.size() - 2);
}

TEST(Svm, PredictionsInvariantUnderReordering) {
  Rng rng(31);
  std::vector<std::vector<double>> x;
  std::vector<int> y;
  for (int i = 0; i < 40; ++i) {
    const int label = i % 2 ? 1 : -1;
    x.push_back({rng.normal() + 0.8 * label, rng.normal() - 0.3 * label});
    y.push_back(label);
  }
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(std::span<std::size_t>(order));
  std::vector<std::vector<double>> xs;
  std::vector<int> ys;
  for (auto i : order) {
    xs.push_back(x[i]);
    ys.push_back(y[i]);
  }
  const TrainingSet a = make_set(x, y);
  const TrainingSet b = make_set(xs, ys);
  const auto la = train_linear(a, 1.0, tight());
  const auto lb = train_linear(b, 1.0, tight());
  const auto ka = train_rbf(a, 1.0, 0.7, tight());
  const auto kb = train_rbf(b, 1.0, 0.7, tight());
  for (double gx = -3; gx <= 3; gx += 0.25) {
    for (double gy = -3; gy <= 3; gy += 0.25) {
      const SparseVector p = sv({gx, gy});
      const double dl = decision_value(la, p);
      const double dk = decision_value(ka, p);
      EXPECT_NEAR(dl, decision_value(lb, p), 1e-5);
      EXPECT_NEAR(dk, decision_value(kb, p), 1e-5);
      if (std::abs(dl) > 1e-4) EXPECT_EQ(predict(la, p), predict(lb, p));
      if (std::abs(dk) > 1e-4) EXPECT_EQ(predict(ka, p), predict(kb, p));
    }
  }
}

TEST(Svm, LinearAndRbfMatchReferenceOnRandomInstances) {
  Rng rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    DenseProblem problem;
    const std::size_t n = 4 + rng.below(9);
    const std::size_t d = 1 + rng.below(3);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> row(d);
      for (auto& v : row) v = rng.normal();
      problem.x.push_back(row);
      problem.y.push_back(i < 2 ? (i == 0 ? 1 : -1) : (rng.uniform() < 0.5 ? 1 : -1));
    }
    problem.R = std::array<double, 3>{0.1, 1.0, 10.0}[trial % 3];
    const TrainingSet data = make_set(problem.x, problem.y);
    SolverConfig warm = tight();
    warm.warm_start_min_rows = 0;
    const auto lin = train_linear(data, problem.R, warm);
    SolverConfig cold = tight();
    cold.warm_start = false;
    const auto lin_cold = train_linear(data, problem.R, cold);
    const auto ref_lin = solve_dual_reference(problem);
    const double tol = std::max(1e-6, 1e-3 * std::abs(ref_lin.dual_objective));
    EXPECT_NEAR(lin.stats.dual_objective, ref_lin.dual_objective, tol) << trial;
    EXPECT_NEAR(lin_cold.stats.dual_objective, ref_lin.dual_objective, tol) << trial;
    EXPECT_NEAR(primal_objective(lin, data), ref_lin.dual_objective, tol) << trial;

    problem.rbf = true;
    problem.alpha = 0.5;
    const auto rbf = train_rbf(data, problem.R, problem.alpha, tight());
    const auto ref_rbf = solve_dual_reference(problem);
    EXPECT_NEAR(rbf.stats.dual_objective, ref_rbf.dual_objective,
                std::max(1e-6, 1e-3 * std::abs(ref_rbf.dual_objective)))
        << trial;
  }
}

TEST(RbfKernel, Values) {
  EXPECT_EQ(rbf_kernel(sv({0.3, -2}), sv({0.3, -2}), 5.0), 1.0);
  EXPECT_NEAR(rbf_kernel(sv({0, 0}), sv({1, 0}), 1.0), 0.367879, 5e-7);
  EXPECT_NEAR(rbf_kernel(std::vector<double>{0, 0}, std::vector<double>{1, 0}, 1.0), std::exp(-1.0), 1e-15);
  try {
    rbf_kernel(sv({0, 0}), sv({1, 0}), 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDomain);
  }
  SparseVector a = sv({1, 2});
  SparseVector b = sv({1, 2, 3});
  EXPECT_THROW(rbf_kernel(a, b, 1.0), Error);
}

TEST(RbfKernel, MatrixIsSymmetricUnitDiagonalInUnitInterval) {
  Rng rng(4);
  std::vector<SparseVector> rows;
  for (int i = 0; i < 25; ++i) rows.push_back(sv({rng.normal(), 0.0, rng.normal() * 3, rng.normal()}));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rbf_kernel(rows[i], rows[i], 0.3), 1.0);
    for (std::size_t j = 0; j < rows.size(); ++j) {
      const double k = rbf_kernel(rows[i], rows[j], 0.3);
      EXPECT_GT(k, 0.0);
      EXPECT_LE(k, 1.0);
      EXPECT_EQ(k, rbf_kernel(rows[j], rows[i], 0.3));
    }
  }
}

TEST(DecisionValue, ModelsByHand) {
  LinearSvmModel lin;
  lin.w = {1, 0};
  EXPECT_EQ(decision_value(lin, sv({2, 5})), 2.0);
  EXPECT_THROW(decision_value(lin, sv({1, 2, 3})), Error);

  KernelSvmModel k;
  k.support_x = {sv({0.5, 0.5})};
  k.dual_coef = {1.0};
  k.dim = 2;
  EXPECT_EQ(decision_value(k, sv({0.5, 0.5})), 1.0);
  EXPECT_THROW(decision_value(k, sv({1})), Error);
  const std::vector<SparseVector> batch = {sv({0.5, 0.5}), sv({0, 0})};
  const auto values = decision_values(k, batch, 2);
  EXPECT_EQ(values[0], 1.0);
  EXPECT_NEAR(values[1], std::exp(-0.5), 1e-15);
}

TEST(Predict, SignRuleWithTieToReal) {
  EXPECT_EQ(label_from_decision(3.2), Label::kReal);
  EXPECT_EQ(label_from_decision(-0.001), Label::kFake);
  EXPECT_EQ(label_from_decision(0.0), Label::kReal);
  LinearSvmModel lin;
  lin.w = {0, 0};
  EXPECT_EQ(predict(lin, sv({1, 1})), Label::kReal);
}

TEST(SupportVectors, MissingProvenanceIsUnsupported) {
  LinearSvmModel lin;
  KernelSvmModel k;
  try {
    support_vectors(lin);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kUnsupported);
  }
  EXPECT_THROW(support_vectors(k), Error);
}

TEST(ScaleAlpha, InverseOfTotalVariance) {
  const std::vector<SparseVector> rows = {sv({0, 0}), sv({2, 4})};
  // Per-feature variances 1 and 4.
  EXPECT_NEAR(scale_alpha(rows, 2), 1.0 / 5.0, 1e-15);
}

}  // namespace
}  // namespace fnd
