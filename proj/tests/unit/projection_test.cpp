// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fnd Authors

#include "fnd/projection.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fnd/error.hpp"
#include "fnd/rng.hpp"
#include "test_util.hpp"

namespace fnd {
namespace {

double perplexity_of(const std::vector<double>& p) {
  double h = 0.0;
  for (double v : p) {
    if (v > 0.0) h -= v * std::log2(v);
  }
  return std::exp2(h);
}

ErrorKind kind_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::kUnsupported;
}

TEST(CalibrateBandwidth, EquidistantNeighboursAreUniform) {
  const Bandwidth bw = calibrate_bandwidth(std::vector<double>{3.0, 3.0}, 2.0);
  EXPECT_NEAR(bw.conditional[0], 0.5, 1e-15);
  EXPECT_NEAR(bw.conditional[1], 0.5, 1e-15);
  EXPECT_NEAR(bw.perplexity, 2.0, 1e-12);
}

TEST(CalibrateBandwidth, RecomputedEntropyHitsTarget) {
  for (double target : {1.2, 1.5, 2.0, 2.7}) {
    const Bandwidth bw = calibrate_bandwidth(std::vector<double>{1.0, 4.0, 9.0}, target);
    EXPECT_NEAR(perplexity_of(bw.conditional), target, 1e-3 * target);
    EXPECT_NEAR(bw.beta, 1.0 / (2.0 * bw.sigma * bw.sigma), 1e-12 * bw.beta);
    // Recompute the conditionals from sigma alone.
    std::vector<double> p;
    double z = 0.0;
    for (double d : {1.0, 4.0, 9.0}) {
      p.push_back(std::exp(-d * bw.beta));
      z += p.back();
    }
    for (auto& v : p) v /= z;
    EXPECT_NEAR(perplexity_of(p), target, 1e-3 * target);
  }
}

TEST(CalibrateBandwidth, Errors) {
  EXPECT_EQ(kind_of([] { calibrate_bandwidth(std::vector<double>{0.0, 0.0, 0.0}, 2.0); }), ErrorKind::kCalibration);
  EXPECT_EQ(kind_of([] { calibrate_bandwidth(std::vector<double>{1.0, 4.0, 9.0}, 3.5); }), ErrorKind::kCalibration);
  EXPECT_EQ(kind_of([] { calibrate_bandwidth(std::vector<double>{1.0}, 1.0); }), ErrorKind::kCalibration);
}

TEST(JointProbabilities, SymmetricNonNegativeNormalized) {
  const auto blobs = testing::make_blobs(15, 5, 3.0, 3);
  const SquareMatrix p = joint_probabilities(blobs.points, 5.0);
  double sum = 0.0;
  for (std::size_t i = 0; i < p.n; ++i) {
    EXPECT_EQ(p(i, i), 0.0);
    for (std::size_t j = 0; j < p.n; ++j) {
      EXPECT_GE(p(i, j), 0.0);
      EXPECT_EQ(p(i, j), p(j, i));
      sum += p(i, j);
    }
  }
  EXPECT_NEAR(sum, 1.0, 1e-9);
}

TEST(TsneGradient, MatchesFiniteDifferences) {
  Rng rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 4 + rng.below(7);
    std::vector<DenseVector> x(n, DenseVector(3));
    for (auto& row : x)
      for (auto& v : row) v = rng.normal();
    const SquareMatrix p = joint_probabilities(x, 1.5);
    std::vector<double> y(n * 2);
    for (auto& v : y) v = rng.normal();
    const auto analytic = tsne_gradient(p, y, 2);
    std::vector<double> numeric(y.size());
    constexpr double h = 1e-5;
    for (std::size_t k = 0; k < y.size(); ++k) {
      const double saved = y[k];
      y[k] = saved + h;
      const double up = tsne_kl(p, y, 2);
      y[k] = saved - h;
      const double down = tsne_kl(p, y, 2);
      y[k] = saved;
      numeric[k] = (up - down) / (2 * h);
    }
    EXPECT_LT(testing::max_relative_error(analytic, numeric), 1e-4) << trial;
  }
}

TsneConfig quick_config() {
  TsneConfig cfg;
  cfg.perplexity = 15.0;
  cfg.iterations = 400;
  cfg.subsample = 100;
  return cfg;
}

TEST(Tsne, BlobsSeparateAndKlDecreases) {
  const auto blobs = testing::make_blobs(50, 10, 4.0, 11);
  const Embedding emb = tsne(blobs.points, blobs.labels, quick_config());
  ASSERT_EQ(emb.coords.size(), 200u);
  for (double v : emb.coords) ASSERT_TRUE(std::isfinite(v));
  EXPECT_GE(testing::linear_probe_accuracy(emb.coords, 2, blobs.labels), 0.95);
  EXPECT_LT(emb.final_kl, emb.initial_kl);
  for (double kl : emb.kl_trace) EXPECT_GE(kl, 0.0);
  EXPECT_EQ(emb.kl_trace.size(), 1u + 400u / 50u);
}

TEST(Tsne, ReproducibleAndThreeDimensional) {
  const auto blobs = testing::make_blobs(10, 4, 3.0, 2);
  TsneConfig cfg = quick_config();
  cfg.perplexity = 5.0;
  cfg.iterations = 120;
  cfg.out_dims = 3;
  const Embedding a = tsne(blobs.points, blobs.labels, cfg);
  const Embedding b = tsne(blobs.points, blobs.labels, cfg);
  EXPECT_EQ(a.coords, b.coords);
  std::ostringstream out;
  write_embedding_tsv(a, out);
  const std::string text = out.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 20);
  const std::string first = text.substr(0, text.find('\n'));
  EXPECT_EQ(std::count(first.begin(), first.end(), '\t'), 3);
}

TEST(Tsne, InfeasiblePerplexityIsConfigError) {
  const auto blobs = testing::make_blobs(50, 3, 3.0, 2);
  TsneConfig cfg = quick_config();
  cfg.perplexity = 10000.0;
  EXPECT_EQ(kind_of([&] { tsne(blobs.points, blobs.labels, cfg); }), ErrorKind::kConfig);
  cfg.perplexity = 5.0;
  cfg.out_dims = 4;
  EXPECT_EQ(kind_of([&] { cfg.validate(); }), ErrorKind::kConfig);
}

TEST(Tsne, SparseAndDenseInputsAgree) {
  const auto blobs = testing::make_blobs(10, 6, 3.0, 5);
  std::vector<SparseVector> sparse;
  for (const auto& p : blobs.points) sparse.push_back(SparseVector::from_dense(p));
  const SquareMatrix dense_d = squared_distances(blobs.points);
  const SquareMatrix sparse_d = squared_distances(sparse);
  for (std::size_t k = 0; k < dense_d.values.size(); ++k) {
    EXPECT_NEAR(dense_d.values[k], sparse_d.values[k], 1e-10 * (1.0 + dense_d.values[k]));
  }
  const SquareMatrix pa = joint_probabilities(dense_d, 4.0);
  const SquareMatrix pb = joint_probabilities(sparse_d, 4.0);
  for (std::size_t k = 0; k < pa.values.size(); ++k) EXPECT_NEAR(pa.values[k], pb.values[k], 1e-9);

  const auto big = testing::make_blobs(50, 10, 4.0, 11);
  std::vector<SparseVector> big_sparse;
  for (const auto& p : big.points) big_sparse.push_back(SparseVector::from_dense(p));
  const Embedding b = tsne(std::span<const SparseVector>(big_sparse), big.labels, quick_config());
  EXPECT_GE(testing::linear_probe_accuracy(b.coords, 2, big.labels), 0.95);
}

TEST(StratifiedSubsample, KeepsClassProportions) {
  std::vector<Label> labels;
  for (int i = 0; i < 300; ++i) labels.push_back(i < 100 ? Label::kReal : Label::kFake);
  const auto chosen = stratified_subsample(labels, 30, 4);
  ASSERT_EQ(chosen.size(), 30u);
  std::size_t real = 0;
  for (auto i : chosen) real += labels[i] == Label::kReal;
  EXPECT_EQ(real, 10u);
  EXPECT_TRUE(std::is_sorted(chosen.begin(), chosen.end()));
  EXPECT_EQ(chosen, stratified_subsample(labels, 30, 4));
  EXPECT_EQ(stratified_subsample(labels, 1000, 4).size(), 300u);
}

}  // namespace
}  // namespace fnd
