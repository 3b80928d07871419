// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fnd Authors

#include "fnd/vectorize.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "fnd/error.hpp"
#include "fnd/rng.hpp"

namespace fnd {
namespace {

TokenizedDocument doc(std::vector<std::string> tokens) { return {std::move(tokens), Label::kReal}; }

std::vector<TokenizedDocument> toy() {
  return {doc({"cat", "dog"}), doc({"dog"}), doc({"dog", "bird"})};
}

TEST(BuildVocab, HandCounts) {
  const std::vector<TokenizedDocument> docs = {doc({"cat", "dog"}), doc({"dog"})};
  const Vocabulary v1 = build_vocab(docs, 1);
  ASSERT_EQ(v1.size(), 2u);
  EXPECT_EQ(v1.terms(), (std::vector<std::string>{"cat", "dog"}));
  EXPECT_EQ(v1.doc_freq(*v1.index_of("cat")), 1u);
  EXPECT_EQ(v1.doc_freq(*v1.index_of("dog")), 2u);
  EXPECT_EQ(v1.total_docs(), 2u);

  const Vocabulary v2 = build_vocab(docs, 2);
  ASSERT_EQ(v2.size(), 1u);
  EXPECT_EQ(v2.terms()[0], "dog");

  const std::vector<TokenizedDocument> single = {doc({"alpha"})};
  const Vocabulary v3 = build_vocab(single, 1);
  EXPECT_EQ(v3.size(), 1u);
  EXPECT_EQ(v3.doc_freq(0), 1u);
  EXPECT_EQ(v3.total_docs(), 1u);
}

TEST(BuildVocab, DocumentFrequencyCountsDocumentsNotTokens) {
  const std::vector<TokenizedDocument> docs = {doc({"dog", "dog", "dog"}), doc({"cat"})};
  const Vocabulary v = build_vocab(docs, 1);
  EXPECT_EQ(v.doc_freq(*v.index_of("dog")), 1u);
}

TEST(BuildVocab, EmptyIsPreconditionError) {
  try {
    build_vocab({}, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kPrecondition);
  }
}

TEST(Vocabulary, RejectsUnsortedTerms) {
  EXPECT_THROW(Vocabulary({"dog", "cat"}, {1, 1}, 2), Error);
  EXPECT_THROW(Vocabulary({"cat"}, {3}, 2), Error);
  EXPECT_THROW(Vocabulary({"cat"}, {0}, 2), Error);
}

TEST(BowVector, HandCounts) {
  const Vocabulary vocab({"cat", "dog"}, {1, 2}, 2);
  const SparseVector v = bow_vector(doc({"dog", "dog", "cat"}), vocab);
  EXPECT_EQ(v.dim, 2u);
  ASSERT_EQ(v.nnz(), 2u);
  EXPECT_EQ(v.entries[0], (SparseVector::Entry{0, 1.0}));
  EXPECT_EQ(v.entries[1], (SparseVector::Entry{1, 2.0}));
  EXPECT_EQ(bow_vector(doc({"zebra", "yak"}), vocab).nnz(), 0u);
}

TEST(FitTfidf, IdfValues) {
  const TfidfModel model = fit_tfidf(build_vocab(toy(), 1));
  EXPECT_NEAR(model.idf[*model.vocab.index_of("cat")], 1.0986, 5e-5);
  EXPECT_EQ(model.idf[*model.vocab.index_of("dog")], 0.0);

  const std::vector<TokenizedDocument> two = {doc({"cat", "dog"}), doc({"dog"})};
  const TfidfModel m2 = fit_tfidf(build_vocab(two, 1));
  EXPECT_NEAR(m2.idf[*m2.vocab.index_of("cat")], 0.6931, 5e-5);
}

TEST(TfidfVector, ToyCorpusHandOracle) {
  const TfidfModel model = fit_tfidf(build_vocab(toy(), 1));
  const SparseVector a = tfidf_vector(toy()[0], model);
  ASSERT_EQ(a.nnz(), 1u);
  EXPECT_EQ(a.entries[0].index, *model.vocab.index_of("cat"));
  EXPECT_NEAR(a.entries[0].value, 1.0986, 5e-5);
  EXPECT_NEAR(a.entries[0].value, std::log(3.0), 1e-12);

  EXPECT_EQ(tfidf_vector(doc({"dog", "dog"}), model).nnz(), 0u);
  const SparseVector cc = tfidf_vector(doc({"cat", "cat"}), model);
  ASSERT_EQ(cc.nnz(), 1u);
  EXPECT_NEAR(cc.entries[0].value, 2.1972, 5e-5);
}

std::vector<TokenizedDocument> random_docs(Rng& rng, std::size_t n) {
  static const std::vector<std::string> words = {"aaa", "bbb", "ccc", "ddd", "eee", "fff", "ggg", "hhh"};
  std::vector<TokenizedDocument> docs;
  for (std::size_t i = 0; i < n; ++i) {
    TokenizedDocument d;
    const std::size_t len = 1 + rng.below(12);
    for (std::size_t k = 0; k < len; ++k) d.tokens.push_back(words[rng.below(words.size())]);
    docs.push_back(std::move(d));
  }
  return docs;
}

TEST(VectorizeProperties, IdfMonotoneInDocumentFrequency) {
  Rng rng(3);
  const auto docs = random_docs(rng, 40);
  const TfidfModel model = fit_tfidf(build_vocab(docs, 1));
  for (std::size_t a = 0; a < model.vocab.size(); ++a) {
    for (std::size_t b = 0; b < model.vocab.size(); ++b) {
      if (model.vocab.doc_freq(a) < model.vocab.doc_freq(b)) EXPECT_GT(model.idf[a], model.idf[b]);
    }
  }
}

TEST(VectorizeProperties, BowLinearityAndTfidfFactorization) {
  Rng rng(11);
  const auto docs = random_docs(rng, 30);
  const TfidfModel model = fit_tfidf(build_vocab(docs, 2));
  const auto oov_free = random_docs(rng, 200);
  for (std::size_t i = 0; i + 1 < oov_free.size(); i += 2) {
    const auto& p = oov_free[i];
    const auto& q = oov_free[i + 1];
    TokenizedDocument joined = p;
    joined.tokens.insert(joined.tokens.end(), q.tokens.begin(), q.tokens.end());
    const DenseVector sum_parts = [&] {
      DenseVector a = bow_vector(p, model.vocab).to_dense();
      const DenseVector b = bow_vector(q, model.vocab).to_dense();
      for (std::size_t k = 0; k < a.size(); ++k) a[k] += b[k];
      return a;
    }();
    EXPECT_EQ(bow_vector(joined, model.vocab).to_dense(), sum_parts);

    const SparseVector bow = bow_vector(p, model.vocab);
    double total = 0.0;
    for (const auto& e : bow.entries) total += e.value;
    std::size_t in_vocab = 0;
    for (const auto& t : p.tokens) in_vocab += model.vocab.index_of(t).has_value();
    EXPECT_EQ(total, static_cast<double>(in_vocab));

    const DenseVector tfidf = tfidf_vector(p, model).to_dense();
    const DenseVector counts = bow.to_dense();
    for (std::size_t k = 0; k < counts.size(); ++k) EXPECT_EQ(tfidf[k], counts[k] * model.idf[k]);
    EXPECT_TRUE(tfidf_vector(p, model).well_formed());
  }
}

TEST(Sparse, DotAndNorm) {
  const SparseVector a = SparseVector::from_dense(std::vector<double>{1, 0, 2, 0});
  const SparseVector b = SparseVector::from_dense(std::vector<double>{0, 5, 3, 1});
  EXPECT_EQ(a.nnz(), 2u);
  EXPECT_EQ(dot(a, b), 6.0);
  EXPECT_EQ(dot(a, std::vector<double>{1, 1, 1, 1}), 3.0);
  EXPECT_EQ(squared_norm(b), 35.0);
  EXPECT_TRUE(a.well_formed());
  SparseVector bad{3, {{2, 1.0}, {1, 1.0}}};
  EXPECT_FALSE(bad.well_formed());
}

}  // namespace
}  // namespace fnd
