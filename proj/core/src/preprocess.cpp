// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fnd Authors

#include "fnd/preprocess.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <thread>

#include "fnd/error.hpp"

namespace fnd {

namespace {
#include "stopwords_data.inc"
}  // namespace

namespace unicode {

bool is_letter(char32_t cp) noexcept {
  if (cp < 0x80) return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z');
  if (cp == 0xAA || cp == 0xB5 || cp == 0xBA) return true;
  if (cp >= 0xC0 && cp <= 0x24F) return cp != 0xD7 && cp != 0xF7;
  if (cp >= 0x386 && cp <= 0x3FF) {
    return cp != 0x387 && cp != 0x38B && cp != 0x38D && cp != 0x3A2 && cp != 0x3F6;
  }
  if (cp >= 0x400 && cp <= 0x52F) return !(cp >= 0x482 && cp <= 0x489);
  return false;
}

char32_t to_lower(char32_t cp) noexcept {
  if (cp < 0x80) return (cp >= 'A' && cp <= 'Z') ? cp + 32 : cp;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
  if (cp >= 0x100 && cp <= 0x17F) {
    // Latin Extended-A alternates upper/lower pairs, with a parity shift
    // between U+0138 and U+0149 and again from U+0178.
    if (cp == 0x130 || cp == 0x138 || cp == 0x149 || cp == 0x17F) return cp;
    if (cp == 0x178) return 0xFF;
    if ((cp >= 0x139 && cp <= 0x148) || (cp >= 0x179 && cp <= 0x17E)) {
      return (cp % 2 == 1) ? cp + 1 : cp;
    }
    return (cp % 2 == 0) ? cp + 1 : cp;
  }
  if (cp == 0x386) return 0x3AC;
  if (cp >= 0x388 && cp <= 0x38A) return cp + 0x25;
  if (cp == 0x38C) return 0x3CC;
  if (cp == 0x38E || cp == 0x38F) return cp + 0x3F;
  if (cp >= 0x391 && cp <= 0x3AB && cp != 0x3A2) return cp + 0x20;
  if (cp >= 0x400 && cp <= 0x40F) return cp + 0x50;
  if (cp >= 0x410 && cp <= 0x42F) return cp + 0x20;
  return cp;
}

}  // namespace unicode

namespace {

/// Decodes one UTF-8 sequence starting at `pos`. Invalid or overlong
/// sequences yield U+FFFD and consume a single byte.
char32_t decode_utf8(std::string_view s, std::size_t& pos) noexcept {
  const auto byte = [&](std::size_t i) { return static_cast<unsigned char>(s[i]); };
  const unsigned char lead = byte(pos);
  if (lead < 0x80) {
    ++pos;
    return lead;
  }
  std::size_t len = 0;
  char32_t cp = 0;
  char32_t min = 0;
  if ((lead & 0xE0) == 0xC0) {
    len = 2, cp = lead & 0x1F, min = 0x80;
  } else if ((lead & 0xF0) == 0xE0) {
    len = 3, cp = lead & 0x0F, min = 0x800;
  } else if ((lead & 0xF8) == 0xF0) {
    len = 4, cp = lead & 0x07, min = 0x10000;
  } else {
    ++pos;
    return 0xFFFD;
  }
  if (pos + len > s.size()) {
    ++pos;
    return 0xFFFD;
  }
  for (std::size_t k = 1; k < len; ++k) {
    const unsigned char c = byte(pos + k);
    if ((c & 0xC0) != 0x80) {
      ++pos;
      return 0xFFFD;
    }
    cp = (cp << 6) | (c & 0x3F);
  }
  if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
    ++pos;
    return 0xFFFD;
  }
  pos += len;
  return cp;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

}  // namespace

StopwordList::StopwordList(std::unordered_set<std::string> words, std::string source_id)
    : words_(std::move(words)), source_id_(std::move(source_id)) {}

const StopwordList& StopwordList::english() {
  static const StopwordList list = parse(kEnglishStopwords, "nltk-english-179-v1");
  return list;
}

StopwordList StopwordList::parse(std::string_view text, std::string source_id) {
  std::unordered_set<std::string> words;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) {
      line.remove_suffix(1);
    }
    while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) line.remove_prefix(1);
    if (line.empty() || line.front() == '#') continue;
    std::string word;
    for (std::size_t pos = 0; pos < line.size();) {
      append_utf8(word, unicode::to_lower(decode_utf8(line, pos)));
    }
    words.insert(std::move(word));
  }
  return StopwordList(std::move(words), std::move(source_id));
}

StopwordList StopwordList::from_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open stopword file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), path.filename().string());
}

std::string StopwordList::serialize() const {
  std::vector<std::string> sorted(words_.begin(), words_.end());
  std::sort(sorted.begin(), sorted.end());
  std::string out;
  for (const auto& w : sorted) out += w + '\n';
  return out;
}

bool StopwordList::contains(std::string_view word) const {
  return words_.find(std::string(word)) != words_.end();
}

std::vector<std::string> clean_tokenize(std::string_view text, const StopwordList& stopwords) {
  std::vector<std::string> tokens;
  std::string current;
  std::size_t length = 0;  // code points in `current`
  const auto flush = [&] {
    if (length >= kMinTokenLength && length <= kMaxTokenLength && !stopwords.contains(current)) {
      tokens.push_back(current);
    }
    current.clear();
    length = 0;
  };
  for (std::size_t pos = 0; pos < text.size();) {
    const char32_t cp = decode_utf8(text, pos);
    if (unicode::is_letter(cp)) {
      append_utf8(current, unicode::to_lower(cp));
      ++length;
    } else if (length > 0) {
      flush();
    }
  }
  if (length > 0) flush();
  return tokens;
}

std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

PreprocessResult preprocess_corpus(const Corpus& corpus, const StopwordList& stopwords,
                                   unsigned threads) {
  const auto& docs = corpus.documents();
  std::vector<std::vector<std::string>> tokenized(docs.size());
  const auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      std::string text = docs[i].title;
      text.push_back(' ');
      text += docs[i].body;
      tokenized[i] = clean_tokenize(text, stopwords);
    }
  };
  threads = std::max(1u, threads);
  if (threads == 1 || docs.size() < 2 * threads) {
    work(0, docs.size());
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (docs.size() + threads - 1) / threads;
    for (std::size_t begin = 0; begin < docs.size(); begin += chunk) {
      pool.emplace_back(work, begin, std::min(docs.size(), begin + chunk));
    }
  }

  PreprocessResult result;
  result.documents.reserve(docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (tokenized[i].empty()) {
      ++result.dropped_empty;
      continue;
    }
    result.documents.push_back({std::move(tokenized[i]), docs[i].label});
  }
  return result;
}

}  // namespace fnd
