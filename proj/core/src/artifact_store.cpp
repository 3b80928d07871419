// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fnd Authors

#include "fnd/artifact_store.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <system_error>

#include <unistd.h>

#include "fnd/error.hpp"

namespace fnd {

namespace {

std::uint64_t fnv1a(const std::uint8_t* data, std::size_t size) {
  std::uint64_t hash = 0xCBF29CE484222325ULL;
  for (std::size_t i = 0; i < size; ++i) {
    hash ^= data[i];
    hash *= 0x100000001B3ULL;
  }
  return hash;
}

/// Little-endian byte sink.
class Writer {
 public:
  void u8(std::uint8_t v) { bytes_.push_back(v); }
  void u16(std::uint16_t v) { put(v, 2); }
  void u32(std::uint32_t v) { put(v, 4); }
  void u64(std::uint64_t v) { put(v, 8); }
  void i64(std::int64_t v) { put(static_cast<std::uint64_t>(v), 8); }
  void f64(double v) { put(std::bit_cast<std::uint64_t>(v), 8); }
  void str(const std::string& s) {
    u32(checked_u32(s.size()));
    bytes_.insert(bytes_.end(), s.begin(), s.end());
  }
  void raw(const char* data, std::size_t size) { bytes_.insert(bytes_.end(), data, data + size); }

  static std::uint32_t checked_u32(std::size_t v) {
    if (v > 0xFFFFFFFFULL) throw Error(ErrorKind::kDomain, "value too large for a 32-bit model field");
    return static_cast<std::uint32_t>(v);
  }

  std::vector<std::uint8_t>& bytes() { return bytes_; }

 private:
  void put(std::uint64_t v, int width) {
    for (int k = 0; k < width; ++k) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
  }
  std::vector<std::uint8_t> bytes_;
};

/// Bounds-checked little-endian reader; overruns are reported as corruption.
class Reader {
 public:
  Reader(const std::uint8_t* data, std::size_t size) : data_(data), size_(size) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(get(1)); }
  std::uint16_t u16() { return static_cast<std::uint16_t>(get(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
  std::uint64_t u64() { return get(8); }
  std::int64_t i64() { return static_cast<std::int64_t>(get(8)); }
  double f64() { return std::bit_cast<double>(get(8)); }
  double finite() {
    const double v = f64();
    if (!std::isfinite(v)) throw Error(ErrorKind::kCorruption, "model file holds a non-finite number");
    return v;
  }
  std::string str() {
    const std::size_t len = u32();
    need(len);
    std::string s(reinterpret_cast<const char*>(data_ + pos_), len);
    pos_ += len;
    return s;
  }
  /// Guards a count before allocating `count * min_bytes` worth of records.
  std::size_t count(std::size_t n, std::size_t min_bytes) {
    if (min_bytes > 0 && n > (size_ - pos_) / min_bytes) {
      throw Error(ErrorKind::kCorruption, "model file is truncated");
    }
    return n;
  }
  bool done() const noexcept { return pos_ == size_; }

 private:
  void need(std::size_t n) const {
    if (n > size_ - pos_) throw Error(ErrorKind::kCorruption, "model file is truncated");
  }
  std::uint64_t get(int width) {
    need(static_cast<std::size_t>(width));
    std::uint64_t v = 0;
    for (int k = 0; k < width; ++k) v |= static_cast<std::uint64_t>(data_[pos_ + k]) << (8 * k);
    pos_ += static_cast<std::size_t>(width);
    return v;
  }

  const std::uint8_t* data_;
  std::size_t size_;
  std::size_t pos_ = 0;
};

void write_vocabulary(Writer& w, const Vocabulary& vocab) {
  w.u64(vocab.total_docs());
  w.u32(Writer::checked_u32(vocab.size()));
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    w.str(vocab.terms()[i]);
    w.u32(vocab.doc_freq(i));
  }
}

Vocabulary read_vocabulary(Reader& r) {
  const std::uint64_t total = r.u64();
  const std::size_t size = r.count(r.u32(), 8);
  std::vector<std::string> terms;
  std::vector<std::uint32_t> freq;
  terms.reserve(size);
  freq.reserve(size);
  for (std::size_t i = 0; i < size; ++i) {
    terms.push_back(r.str());
    freq.push_back(r.u32());
  }
  return Vocabulary(std::move(terms), std::move(freq), total);
}

void write_vectorizer(Writer& w, const Vectorizer& vectorizer) {
  if (const auto* vocab = std::get_if<Vocabulary>(&vectorizer)) {
    write_vocabulary(w, *vocab);
  } else if (const auto* tfidf = std::get_if<TfidfModel>(&vectorizer)) {
    write_vocabulary(w, tfidf->vocab);
    for (double v : tfidf->idf) w.f64(v);
  } else {
    const auto& emb = std::get<WordEmbeddings>(vectorizer);
    w.u32(Writer::checked_u32(emb.dim));
    w.u32(Writer::checked_u32(emb.params.window));
    w.u32(Writer::checked_u32(emb.params.negatives));
    w.u32(Writer::checked_u32(emb.params.epochs));
    w.f64(emb.params.initial_lr);
    w.u64(emb.params.seed);
    w.u32(Writer::checked_u32(emb.params.min_count));
    w.u32(Writer::checked_u32(emb.size()));
    for (std::size_t i = 0; i < emb.size(); ++i) {
      w.str(emb.terms[i]);
      w.u64(emb.counts[i]);
    }
    for (double v : emb.input) w.f64(v);
  }
}

Vectorizer read_vectorizer(Reader& r, FeatureSpace space) {
  switch (space) {
    case FeatureSpace::kBow: return read_vocabulary(r);
    case FeatureSpace::kTfidf: {
      TfidfModel model;
      model.vocab = read_vocabulary(r);
      model.idf.reserve(model.vocab.size());
      for (std::size_t i = 0; i < model.vocab.size(); ++i) model.idf.push_back(r.finite());
      return model;
    }
    case FeatureSpace::kW2v: {
      WordEmbeddings emb;
      emb.dim = r.u32();
      emb.params.dim = emb.dim;
      emb.params.window = r.u32();
      emb.params.negatives = r.u32();
      emb.params.epochs = r.u32();
      emb.params.initial_lr = r.f64();
      emb.params.seed = r.u64();
      emb.params.min_count = r.u32();
      if (emb.dim == 0) throw Error(ErrorKind::kCorruption, "embedding width is zero");
      const std::size_t size = r.count(r.u32(), 12);
      for (std::size_t i = 0; i < size; ++i) {
        emb.terms.push_back(r.str());
        emb.counts.push_back(r.u64());
        if (i > 0 && !(emb.terms[i - 1] < emb.terms[i])) {
          throw Error(ErrorKind::kCorruption, "embedding terms are not sorted");
        }
      }
      r.count(size * emb.dim, 8);
      emb.input.reserve(size * emb.dim);
      for (std::size_t k = 0; k < size * emb.dim; ++k) emb.input.push_back(r.finite());
      emb.reindex();
      return emb;
    }
  }
  throw Error(ErrorKind::kCorruption, "unknown vectorizer kind");
}

void write_sparse(Writer& w, const SparseVector& v) {
  w.u32(Writer::checked_u32(v.nnz()));
  for (const auto& e : v.entries) {
    w.u32(e.index);
    w.f64(e.value);
  }
}

SparseVector read_sparse(Reader& r, std::size_t dim) {
  SparseVector v;
  v.dim = dim;
  const std::size_t nnz = r.count(r.u32(), 12);
  v.entries.reserve(nnz);
  for (std::size_t k = 0; k < nnz; ++k) {
    const std::uint32_t index = r.u32();
    const double value = r.f64();
    v.entries.push_back({index, value});
  }
  if (!v.well_formed()) throw Error(ErrorKind::kCorruption, "malformed support vector");
  return v;
}

void write_classifier(Writer& w, const Classifier& classifier) {
  if (const auto* linear = std::get_if<LinearSvmModel>(&classifier)) {
    w.u8(static_cast<std::uint8_t>(linear->feature_space));
    w.u32(Writer::checked_u32(linear->w.size()));
    w.f64(linear->R);
    w.f64(linear->h);
    for (double v : linear->w) w.f64(v);
    w.u8(linear->support ? 1 : 0);
    if (linear->support) {
      w.u32(Writer::checked_u32(linear->support->indices.size()));
      for (std::size_t k = 0; k < linear->support->indices.size(); ++k) {
        w.u64(linear->support->indices[k]);
        w.f64(linear->support->values[k]);
      }
    }
    return;
  }
  const auto& kernel = std::get<KernelSvmModel>(classifier);
  w.u8(static_cast<std::uint8_t>(kernel.feature_space));
  w.u32(Writer::checked_u32(kernel.dim));
  w.f64(kernel.R);
  w.f64(kernel.alpha);
  w.f64(kernel.h);
  w.u32(Writer::checked_u32(kernel.support_x.size()));
  for (std::size_t s = 0; s < kernel.support_x.size(); ++s) {
    w.f64(kernel.dual_coef[s]);
    write_sparse(w, kernel.support_x[s]);
  }
  w.u8(kernel.support_index ? 1 : 0);
  if (kernel.support_index) {
    for (auto index : *kernel.support_index) w.u64(index);
  }
}

FeatureSpace decode_space(std::uint8_t raw) {
  if (raw > 2) throw Error(ErrorKind::kCorruption, "unknown feature space tag " + std::to_string(raw));
  return static_cast<FeatureSpace>(raw);
}

Classifier read_classifier(Reader& r, KernelKind kernel) {
  if (kernel == KernelKind::kLinear) {
    LinearSvmModel model;
    model.feature_space = decode_space(r.u8());
    const std::size_t dim = r.count(r.u32(), 8);
    model.R = r.finite();
    model.h = r.finite();
    model.w.reserve(dim);
    for (std::size_t k = 0; k < dim; ++k) model.w.push_back(r.finite());
    if (r.u8()) {
      SupportReport report;
      report.count = r.count(r.u32(), 16);
      for (std::size_t k = 0; k < report.count; ++k) {
        report.indices.push_back(r.u64());
        report.values.push_back(r.f64());
      }
      model.support = std::move(report);
    }
    return model;
  }
  KernelSvmModel model;
  model.feature_space = decode_space(r.u8());
  model.dim = r.u32();
  model.R = r.finite();
  model.alpha = r.finite();
  model.h = r.finite();
  const std::size_t count = r.count(r.u32(), 12);
  for (std::size_t s = 0; s < count; ++s) {
    model.dual_coef.push_back(r.finite());
    model.support_x.push_back(read_sparse(r, model.dim));
  }
  if (r.u8()) {
    r.count(count, 8);
    model.support_index.emplace();
    for (std::size_t s = 0; s < count; ++s) model.support_index->push_back(r.u64());
  }
  return model;
}

FeatureSpace classifier_space(const Classifier& c) {
  return std::visit([](const auto& m) { return m.feature_space; }, c);
}

std::string expected_magic() { return std::string(kModelMagic.begin(), kModelMagic.end()); }

}  // namespace

std::vector<std::uint8_t> encode_model(const Pipeline& pipeline) {
  Writer payload;
  const auto& prov = pipeline.provenance;
  payload.u64(prov.seed);
  payload.f64(prov.split.test_fraction);
  payload.u64(prov.split.seed);
  payload.u32(Writer::checked_u32(prov.hyperparameters.size()));
  for (const auto& [key, value] : prov.hyperparameters) {
    payload.str(key);
    payload.str(value);
  }
  write_vectorizer(payload, pipeline.vectorizer);
  write_classifier(payload, pipeline.classifier);

  const auto& body = payload.bytes();
  Writer out;
  out.raw(kModelMagic.data(), kModelMagic.size());
  out.u32(kModelFormatVersion);
  out.u8(static_cast<std::uint8_t>(pipeline.feature_space()));
  out.u8(static_cast<std::uint8_t>(pipeline.kernel()));
  out.u16(0);
  out.i64(prov.created_unix);
  out.u64(body.size());
  out.u64(fnv1a(body.data(), body.size()));
  auto bytes = std::move(out.bytes());
  bytes.insert(bytes.end(), body.begin(), body.end());
  return bytes;
}

Pipeline decode_model(const std::vector<std::uint8_t>& bytes) {
  const std::size_t magic_len = std::min(bytes.size(), kModelMagic.size());
  if (std::memcmp(bytes.data(), kModelMagic.data(), magic_len) != 0) {
    throw Error(ErrorKind::kFormat, "not a model file: expected magic tag '" + expected_magic() + "'");
  }
  if (bytes.size() < kHeaderSize) {
    // Enough of the header may be present to reject a future version first.
    if (bytes.size() >= 12) {
      Reader r(bytes.data() + 8, 4);
      if (r.u32() > kModelFormatVersion) throw Error(ErrorKind::kVersion, "model format version is newer than supported");
    }
    throw Error(ErrorKind::kCorruption, "model file is truncated (header incomplete)");
  }

  Reader header(bytes.data() + kModelMagic.size(), kHeaderSize - kModelMagic.size());
  const std::uint32_t version = header.u32();
  if (version > kModelFormatVersion) {
    throw Error(ErrorKind::kVersion, "model format version " + std::to_string(version) +
                                         " is newer than supported version " +
                                         std::to_string(kModelFormatVersion));
  }
  if (version == 0) throw Error(ErrorKind::kFormat, "model format version 0 is invalid");
  const std::uint8_t space_tag = header.u8();
  const std::uint8_t kernel_tag = header.u8();
  header.u16();
  const std::int64_t created = header.i64();
  const std::uint64_t length = header.u64();
  const std::uint64_t checksum = header.u64();
  if (bytes.size() - kHeaderSize < length) throw Error(ErrorKind::kCorruption, "model payload is truncated");
  if (bytes.size() - kHeaderSize > length) throw Error(ErrorKind::kCorruption, "model file has trailing bytes");
  if (fnv1a(bytes.data() + kHeaderSize, length) != checksum) {
    throw Error(ErrorKind::kCorruption, "model payload checksum mismatch");
  }
  if (kernel_tag > 1) throw Error(ErrorKind::kCorruption, "unknown kernel tag " + std::to_string(kernel_tag));
  const FeatureSpace space = decode_space(space_tag);
  const auto kernel = static_cast<KernelKind>(kernel_tag);

  Reader r(bytes.data() + kHeaderSize, length);
  try {
    Provenance prov;
    prov.created_unix = created;
    prov.seed = r.u64();
    prov.split.test_fraction = r.f64();
    prov.split.seed = r.u64();
    const std::size_t n_hp = r.count(r.u32(), 8);
    for (std::size_t k = 0; k < n_hp; ++k) {
      std::string key = r.str();
      std::string value = r.str();
      prov.hyperparameters.emplace_back(std::move(key), std::move(value));
    }
    Vectorizer vectorizer = read_vectorizer(r, space);
    Classifier classifier = read_classifier(r, kernel);
    if (!r.done()) throw Error(ErrorKind::kCorruption, "model payload has unread bytes");
    Pipeline pipeline{std::move(vectorizer), std::move(classifier), std::move(prov)};
    if (classifier_space(pipeline.classifier) != space) {
      throw Error(ErrorKind::kCorruption, "classifier feature space does not match the header");
    }
    const std::size_t dim = std::visit(
        [](const auto& m) -> std::size_t {
          if constexpr (std::is_same_v<std::decay_t<decltype(m)>, LinearSvmModel>) return m.w.size();
          else return m.dim;
        },
        pipeline.classifier);
    if (dim != pipeline.feature_dim()) throw Error(ErrorKind::kCorruption, "classifier and vectorizer dimensions differ");
    return pipeline;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kCorruption) throw;
    throw Error(ErrorKind::kCorruption, std::string("invalid model payload: ") + e.what());
  }
}

void save_model(const Pipeline& pipeline, const std::filesystem::path& path) {
  const auto bytes = encode_model(pipeline);
  write_text_file(path, std::string(bytes.begin(), bytes.end()));
}

Pipeline load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open model file " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorKind::kIo, "read failed for " + path.string());
  try {
    return decode_model(bytes);
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw Error(ErrorKind::kIo, "write failed for " + path.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    std::filesystem::remove(tmp, ignored);
    throw Error(ErrorKind::kIo, "cannot move model into place at " + path.string() + ": " + ec.message());
  }
}

}  // namespace fnd
