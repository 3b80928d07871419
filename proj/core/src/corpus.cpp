// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fnd Authors

#include "fnd/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <optional>
#include <unordered_set>

#include "fnd/csv.hpp"
#include "fnd/error.hpp"
#include "fnd/rng.hpp"

namespace fnd {

Label label_from_int(long value) {
  if (value == 0) return Label::kFake;
  if (value == 1) return Label::kReal;
  throw Error(ErrorKind::kDomain, "label must be 0 or 1, got " + std::to_string(value));
}

Corpus::Corpus(std::vector<RawDocument> documents, IngestStats stats)
    : documents_(std::move(documents)), stats_(stats) {
  for (const auto& doc : documents_) ++counts_[static_cast<std::size_t>(doc.label)];
}

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  return in;
}

/// Maps each required column name to its position in the header.
std::vector<std::size_t> locate_columns(const csv::Record& header,
                                        const std::vector<std::string>& required,
                                        const std::filesystem::path& path) {
  std::vector<std::size_t> positions;
  for (const auto& name : required) {
    std::optional<std::size_t> found;
    for (std::size_t i = 0; i < header.fields.size(); ++i) {
      if (lower(trim(header.fields[i])) == name) {
        found = i;
        break;
      }
    }
    if (!found) {
      throw Error(ErrorKind::kSchema,
                  path.string() + ": missing required column '" + name + "'");
    }
    positions.push_back(*found);
  }
  return positions;
}

void check_width(const csv::Record& rec, std::size_t width,
                 const std::filesystem::path& path) {
  if (rec.fields.size() != width) {
    throw Error(ErrorKind::kParse, path.string() + ": line " + std::to_string(rec.line) +
                                       ": expected " + std::to_string(width) +
                                       " fields, found " + std::to_string(rec.fields.size()));
  }
}

struct PairHash {
  std::size_t operator()(const std::pair<std::string, std::string>& p) const noexcept {
    const std::size_t a = std::hash<std::string>{}(p.first);
    const std::size_t b = std::hash<std::string>{}(p.second);
    return a ^ (b + 0x9E3779B97F4A7C15ULL + (a << 6) + (a >> 2));
  }
};

void read_isot_file(const std::filesystem::path& path, Label label,
                    std::vector<RawDocument>& out, IngestStats& stats,
                    std::unordered_set<std::pair<std::string, std::string>, PairHash>& seen) {
  auto in = open_input(path);
  csv::Reader reader(in);
  auto header = reader.next();
  if (!header) throw Error(ErrorKind::kSchema, path.string() + ": missing header row");
  const auto cols = locate_columns(*header, {"title", "text", "subject", "date"}, path);
  const std::size_t width = header->fields.size();

  while (auto rec = reader.next()) {
    // A trailing blank line parses as one empty field.
    if (rec->fields.size() == 1 && rec->fields[0].empty() && width > 1) continue;
    check_width(*rec, width, path);
    RawDocument doc;
    doc.title = std::move(rec->fields[cols[0]]);
    doc.body = std::move(rec->fields[cols[1]]);
    doc.subject = std::move(rec->fields[cols[2]]);
    doc.date = std::move(rec->fields[cols[3]]);
    doc.label = label;
    if (trim(doc.title).empty() && trim(doc.body).empty()) {
      ++stats.dropped_empty;
      continue;
    }
    if (!seen.emplace(doc.title, doc.body).second) {
      ++stats.dropped_duplicate;
      continue;
    }
    out.push_back(std::move(doc));
  }
}

}  // namespace

Corpus load_isot(const std::filesystem::path& real_path,
                 const std::filesystem::path& fake_path) {
  std::vector<RawDocument> docs;
  IngestStats stats;
  std::unordered_set<std::pair<std::string, std::string>, PairHash> seen;
  read_isot_file(real_path, Label::kReal, docs, stats, seen);
  read_isot_file(fake_path, Label::kFake, docs, stats, seen);
  return Corpus(std::move(docs), stats);
}

Corpus load_fixture(const std::filesystem::path& path) {
  auto in = open_input(path);
  csv::Reader reader(in);
  auto header = reader.next();
  if (!header) throw Error(ErrorKind::kSchema, path.string() + ": missing header row");
  const auto cols = locate_columns(*header, {"text", "label"}, path);
  const std::size_t width = header->fields.size();

  std::vector<RawDocument> docs;
  IngestStats stats;
  std::size_t row = 0;
  while (auto rec = reader.next()) {
    if (rec->fields.size() == 1 && rec->fields[0].empty() && width > 1) continue;
    ++row;
    check_width(*rec, width, path);
    const std::string label_text = trim(rec->fields[cols[1]]);
    if (label_text != "0" && label_text != "1") {
      throw Error(ErrorKind::kSchema, path.string() + ": row " + std::to_string(row) +
                                          " (line " + std::to_string(rec->line) +
                                          "): label must be 0 or 1, got '" + label_text +
                                          "'");
    }
    RawDocument doc;
    doc.body = std::move(rec->fields[cols[0]]);
    doc.label = label_text == "1" ? Label::kReal : Label::kFake;
    if (trim(doc.body).empty()) {
      ++stats.dropped_empty;
      continue;
    }
    docs.push_back(std::move(doc));
  }
  return Corpus(std::move(docs), stats);
}

void SplitSpec::validate() const {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw Error(ErrorKind::kConfig, "test_fraction must lie in (0, 1), got " +
                                        std::to_string(test_fraction));
  }
}

Split stratified_split(const Corpus& corpus, const SplitSpec& spec) {
  spec.validate();
  std::vector<bool> to_test(corpus.size(), false);
  for (Label label : {Label::kFake, Label::kReal}) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      if (corpus.documents()[i].label == label) members.push_back(i);
    }
    if (members.empty()) {
      throw Error(ErrorKind::kPrecondition,
                  std::string("cannot stratify: no documents with label ") +
                      std::to_string(to_int(label)));
    }
    Rng rng(stage_seed(spec.seed, static_cast<std::uint64_t>(to_int(label))));
    rng.shuffle(std::span<std::size_t>(members));
    const auto n_test = static_cast<std::size_t>(
        std::llround(spec.test_fraction * static_cast<double>(members.size())));
    for (std::size_t k = 0; k < n_test; ++k) to_test[members[k]] = true;
  }

  std::vector<RawDocument> train;
  std::vector<RawDocument> test;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    (to_test[i] ? test : train).push_back(corpus.documents()[i]);
  }
  return {Corpus(std::move(train)), Corpus(std::move(test))};
}

void write_fixture(const Corpus& corpus, const std::filesystem::path& path) {
  std::string out = "text,label\n";
  for (const auto& doc : corpus.documents()) {
    std::string text = doc.title;
    if (!text.empty() && !doc.body.empty()) text.push_back(' ');
    text += doc.body;
    out += csv::escape(text);
    out += ',';
    out += std::to_string(to_int(doc.label));
    out += '\n';
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  file << out;
  if (!file) throw Error(ErrorKind::kIo, "write failed for " + path.string());
}

}  // namespace fnd
