// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fnd Authors

#include "fnd/cbow.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <thread>

#include "fnd/error.hpp"
#include "fnd/rng.hpp"

namespace fnd {

void CbowParams::validate() const {
  if (dim < 1) throw Error(ErrorKind::kConfig, "cbow dim must be >= 1");
  if (window < 1) throw Error(ErrorKind::kConfig, "cbow window must be >= 1");
  if (negatives < 1) throw Error(ErrorKind::kConfig, "cbow negatives must be >= 1");
  if (epochs < 1) throw Error(ErrorKind::kConfig, "cbow epochs must be >= 1");
  if (!(initial_lr > 0.0) || !std::isfinite(initial_lr)) {
    throw Error(ErrorKind::kConfig, "cbow initial_lr must be > 0");
  }
  if (threads < 1) throw Error(ErrorKind::kConfig, "cbow threads must be >= 1");
}

std::optional<std::uint32_t> WordEmbeddings::index_of(std::string_view term) const {
  const auto it = index_.find(std::string(term));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void WordEmbeddings::reindex() {
  index_.clear();
  index_.reserve(terms.size());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    index_.emplace(terms[i], static_cast<std::uint32_t>(i));
  }
}

namespace {

double sigmoid(double x) noexcept { return 1.0 / (1.0 + std::exp(-x)); }

/// -log(sigmoid(x)), stable for large |x|.
double neg_log_sigmoid(double x) noexcept {
  return x > 0 ? std::log1p(std::exp(-x)) : -x + std::log1p(std::exp(x));
}

/// Cumulative unigram^0.75 table for negative sampling.
class NoiseTable {
 public:
  explicit NoiseTable(const std::vector<std::uint64_t>& counts) {
    double total = 0.0;
    cumulative_.reserve(counts.size());
    for (auto c : counts) {
      total += std::pow(static_cast<double>(c), 0.75);
      cumulative_.push_back(total);
    }
    for (auto& v : cumulative_) v /= total;
  }

  std::uint32_t sample(Rng& rng) const {
    const double u = rng.uniform();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    const auto idx = static_cast<std::size_t>(it - cumulative_.begin());
    return static_cast<std::uint32_t>(std::min(idx, cumulative_.size() - 1));
  }

 private:
  std::vector<double> cumulative_;
};

/// Weight access. Shared mode goes through relaxed atomics so concurrent
/// workers race benignly instead of invoking undefined behaviour.
template <bool Shared>
struct Weights {
  double* data;

  double load(std::size_t i) const noexcept {
    if constexpr (Shared) {
      return std::atomic_ref<double>(data[i]).load(std::memory_order_relaxed);
    } else {
      return data[i];
    }
  }
  void add(std::size_t i, double delta) const noexcept {
    if constexpr (Shared) {
      std::atomic_ref<double> ref(data[i]);
      ref.store(ref.load(std::memory_order_relaxed) + delta, std::memory_order_relaxed);
    } else {
      data[i] += delta;
    }
  }
};

struct TrainState {
  std::size_t dim;
  std::size_t window;
  std::size_t negatives;
  double initial_lr;
  std::uint64_t total_updates;
  std::atomic<std::uint64_t> processed{0};
  const NoiseTable* noise;
};

/// Runs one epoch over `docs`; returns summed loss and number of examples.
template <bool Shared>
std::pair<double, std::uint64_t> run_epoch(std::span<const std::vector<std::uint32_t>> docs,
                                           Weights<Shared> input, Weights<Shared> output,
                                           TrainState& state, Rng& rng) {
  const std::size_t dim = state.dim;
  std::vector<double> hidden(dim);
  std::vector<double> grad_hidden(dim);
  std::vector<std::uint32_t> targets;
  double loss = 0.0;
  std::uint64_t examples = 0;

  for (const auto& ids : docs) {
    for (std::size_t pos = 0; pos < ids.size(); ++pos) {
      const std::uint64_t done = state.processed.fetch_add(1, std::memory_order_relaxed);
      const double lr =
          state.initial_lr *
          std::max(1e-4, 1.0 - static_cast<double>(done) / static_cast<double>(state.total_updates));

      const std::size_t lo = pos >= state.window ? pos - state.window : 0;
      const std::size_t hi = std::min(ids.size() - 1, pos + state.window);
      const std::size_t context_size = hi - lo;  // excludes pos itself
      if (context_size == 0) continue;

      std::fill(hidden.begin(), hidden.end(), 0.0);
      for (std::size_t c = lo; c <= hi; ++c) {
        if (c == pos) continue;
        const std::size_t row = ids[c] * dim;
        for (std::size_t d = 0; d < dim; ++d) hidden[d] += input.load(row + d);
      }
      const double inv = 1.0 / static_cast<double>(context_size);
      for (auto& v : hidden) v *= inv;

      targets.clear();
      targets.push_back(ids[pos]);
      for (std::size_t k = 0; k < state.negatives; ++k) {
        const std::uint32_t neg = state.noise->sample(rng);
        if (neg != ids[pos]) targets.push_back(neg);
      }

      std::fill(grad_hidden.begin(), grad_hidden.end(), 0.0);
      for (std::size_t t = 0; t < targets.size(); ++t) {
        const std::size_t row = targets[t] * dim;
        double score = 0.0;
        for (std::size_t d = 0; d < dim; ++d) score += output.load(row + d) * hidden[d];
        const double label = t == 0 ? 1.0 : 0.0;
        loss += neg_log_sigmoid(t == 0 ? score : -score);
        // Step along the negative gradient of the loss.
        const double g = (label - sigmoid(score)) * lr;
        for (std::size_t d = 0; d < dim; ++d) grad_hidden[d] += g * output.load(row + d);
        for (std::size_t d = 0; d < dim; ++d) output.add(row + d, g * hidden[d]);
      }
      for (std::size_t c = lo; c <= hi; ++c) {
        if (c == pos) continue;
        const std::size_t row = ids[c] * dim;
        for (std::size_t d = 0; d < dim; ++d) input.add(row + d, grad_hidden[d] * inv);
      }
      ++examples;
    }
  }
  return {loss, examples};
}

}  // namespace

WordEmbeddings train_cbow(std::span<const TokenizedDocument> train_docs, const CbowParams& params,
                          const CbowProgress& progress) {
  params.validate();
  if (train_docs.empty()) {
    throw Error(ErrorKind::kPrecondition, "cbow needs at least one training document");
  }

  std::map<std::string, std::uint64_t, std::less<>> freq;
  for (const auto& doc : train_docs) {
    for (const auto& token : doc.tokens) ++freq[token];
  }
  WordEmbeddings emb;
  emb.dim = params.dim;
  emb.params = params;
  for (auto& [term, count] : freq) {
    if (count >= params.min_count) {
      emb.terms.push_back(term);
      emb.counts.push_back(count);
    }
  }
  if (emb.terms.empty()) {
    throw Error(ErrorKind::kTraining, "no term reaches min_count " + std::to_string(params.min_count));
  }
  emb.reindex();

  const std::size_t vocab = emb.terms.size();
  emb.input.resize(vocab * params.dim);
  emb.output.assign(vocab * params.dim, 0.0);
  Rng init_rng(stage_seed(params.seed, 0));
  for (auto& v : emb.input) v = (init_rng.uniform() - 0.5) / static_cast<double>(params.dim);

  std::vector<std::vector<std::uint32_t>> docs;
  docs.reserve(train_docs.size());
  std::uint64_t positions = 0;
  for (const auto& doc : train_docs) {
    std::vector<std::uint32_t> ids;
    for (const auto& token : doc.tokens) {
      if (auto id = emb.index_of(token)) ids.push_back(*id);
    }
    positions += ids.size();
    docs.push_back(std::move(ids));
  }

  const NoiseTable noise(emb.counts);
  TrainState state{params.dim,       params.window, params.negatives, params.initial_lr,
                   std::max<std::uint64_t>(1, positions * params.epochs), {0}, &noise};

  const unsigned workers = std::min<std::size_t>(params.threads, std::max<std::size_t>(1, docs.size()));
  std::vector<Rng> rngs;
  for (unsigned w = 0; w < workers; ++w) rngs.emplace_back(stage_seed(params.seed, w + 1));

  for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
    double loss = 0.0;
    std::uint64_t examples = 0;
    if (workers == 1) {
      std::tie(loss, examples) = run_epoch<false>(docs, Weights<false>{emb.input.data()},
                                                  Weights<false>{emb.output.data()}, state, rngs[0]);
    } else {
      std::vector<std::pair<double, std::uint64_t>> partial(workers);
      {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (docs.size() + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
          const std::size_t begin = std::min(docs.size(), w * chunk);
          const std::size_t end = std::min(docs.size(), begin + chunk);
          pool.emplace_back([&, w, begin, end] {
            partial[w] = run_epoch<true>(
                std::span<const std::vector<std::uint32_t>>(docs).subspan(begin, end - begin),
                Weights<true>{emb.input.data()}, Weights<true>{emb.output.data()}, state, rngs[w]);
          });
        }
      }
      for (const auto& [l, n] : partial) {
        loss += l;
        examples += n;
      }
    }
    if (progress) progress(epoch, examples ? loss / static_cast<double>(examples) : 0.0);
  }
  return emb;
}

DenseVector embed_doc(std::span<const std::string> tokens, const WordEmbeddings& emb) {
  std::vector<std::uint32_t> ids;
  for (const auto& token : tokens) {
    if (auto id = emb.index_of(token)) ids.push_back(*id);
  }
  DenseVector out(emb.dim, 0.0);
  if (ids.empty()) return out;
  // Summing in id order makes the result independent of token order.
  std::sort(ids.begin(), ids.end());
  for (auto id : ids) {
    const auto row = emb.input_row(id);
    for (std::size_t d = 0; d < emb.dim; ++d) out[d] += row[d];
  }
  const double inv = 1.0 / static_cast<double>(ids.size());
  for (auto& v : out) v *= inv;
  return out;
}

DenseVector embed_doc(const TokenizedDocument& doc, const WordEmbeddings& emb) {
  return embed_doc(doc.tokens, emb);
}

void write_embeddings_text(const WordEmbeddings& emb, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  out << emb.size() << ' ' << emb.dim << '\n';
  out << std::setprecision(17);
  for (std::size_t i = 0; i < emb.size(); ++i) {
    out << emb.terms[i];
    for (double v : emb.input_row(i)) out << ' ' << v;
    out << '\n';
  }
  if (!out) throw Error(ErrorKind::kIo, "write failed for " + path.string());
}

namespace {

DenseVector context_mean(const WordEmbeddings& emb, const CbowExample& ex) {
  if (ex.context.empty()) throw Error(ErrorKind::kDomain, "cbow example has an empty context");
  DenseVector hidden(emb.dim, 0.0);
  for (auto c : ex.context) {
    const auto row = emb.input_row(c);
    for (std::size_t d = 0; d < emb.dim; ++d) hidden[d] += row[d];
  }
  for (auto& v : hidden) v /= static_cast<double>(ex.context.size());
  return hidden;
}

double row_dot(std::span<const double> a, const DenseVector& b) {
  double s = 0.0;
  for (std::size_t d = 0; d < b.size(); ++d) s += a[d] * b[d];
  return s;
}

}  // namespace

double cbow_loss(const WordEmbeddings& emb, const CbowExample& ex) {
  const DenseVector hidden = context_mean(emb, ex);
  double loss = neg_log_sigmoid(row_dot(emb.output_row(ex.center), hidden));
  for (auto n : ex.negatives) loss += neg_log_sigmoid(-row_dot(emb.output_row(n), hidden));
  return loss;
}

CbowGradient cbow_gradient(const WordEmbeddings& emb, const CbowExample& ex) {
  const DenseVector hidden = context_mean(emb, ex);
  CbowGradient grad{std::vector<double>(emb.input.size(), 0.0),
                    std::vector<double>(emb.output.size(), 0.0)};
  DenseVector grad_hidden(emb.dim, 0.0);
  const auto accumulate = [&](std::uint32_t target, double coeff) {
    const auto row = emb.output_row(target);
    for (std::size_t d = 0; d < emb.dim; ++d) {
      grad.output[target * emb.dim + d] += coeff * hidden[d];
      grad_hidden[d] += coeff * row[d];
    }
  };
  // d/dx of -log s(x) is s(x) - 1; of -log s(-x) is s(x).
  accumulate(ex.center, sigmoid(row_dot(emb.output_row(ex.center), hidden)) - 1.0);
  for (auto n : ex.negatives) accumulate(n, sigmoid(row_dot(emb.output_row(n), hidden)));
  const double inv = 1.0 / static_cast<double>(ex.context.size());
  for (auto c : ex.context) {
    for (std::size_t d = 0; d < emb.dim; ++d) grad.input[c * emb.dim + d] += grad_hidden[d] * inv;
  }
  return grad;
}

}  // namespace fnd
