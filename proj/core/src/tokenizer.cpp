// Copyright 2026 vidlang authors
// Tokenizer implementation.
//
// Licensed under the Apache License, Version 2.0

#include "vidlang/tokenizer.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "vidlang/errors.hpp"

namespace vidlang {

namespace {
const std::string kSpecialNames[] = {"[PAD]", "[CLS]", "[SEP]", "[MASK]", "[UNK]"};

bool is_edge_punct(char c) {
  static const std::string punct = ".,;:!?\"'()[]{}";
  return punct.find(c) != std::string::npos;
}
}  // namespace

std::string normalize_word(const std::string& word) {
  size_t b = 0, e = word.size();
  while (b < e && is_edge_punct(word[b])) ++b;
  while (e > b && is_edge_punct(word[e - 1])) --e;
  std::string out;
  out.reserve(e - b);
  for (size_t i = b; i < e; ++i) {
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(word[i]))));
  }
  return out;
}

std::vector<std::string> split_words(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) {
        std::string w = normalize_word(cur);
        if (!w.empty()) out.push_back(std::move(w));
        cur.clear();
      }
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) {
    std::string w = normalize_word(cur);
    if (!w.empty()) out.push_back(std::move(w));
  }
  return out;
}

Vocabulary Vocabulary::build(const std::vector<std::string>& texts, int64_t max_size) {
  if (max_size <= kNumSpecial) {
    throw Error(ErrorCode::BadConfig, "vocabulary size must exceed special token count");
  }
  // std::map keeps words sorted so frequency ties break lexicographically.
  std::map<std::string, int64_t> counts;
  for (const auto& t : texts) {
    for (auto& w : split_words(t)) ++counts[w];
  }
  std::vector<std::pair<std::string, int64_t>> ranked(counts.begin(), counts.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> words;
  const int64_t budget = max_size - kNumSpecial;
  for (const auto& [w, c] : ranked) {
    if (static_cast<int64_t>(words.size()) >= budget) break;
    words.push_back(w);
  }
  return from_words(std::move(words));
}

Vocabulary Vocabulary::from_words(std::vector<std::string> words) {
  Vocabulary v;
  v.words_ = std::move(words);
  for (size_t i = 0; i < v.words_.size(); ++i) {
    v.index_.emplace(v.words_[i], kNumSpecial + static_cast<int64_t>(i));
  }
  return v;
}

int64_t Vocabulary::id_of(const std::string& word) const {
  auto it = index_.find(word);
  return it == index_.end() ? kUnk : it->second;
}

const std::string& Vocabulary::word_of(int64_t id) const {
  if (id < 0 || id >= size()) {
    throw Error(ErrorCode::BadToken, "id " + std::to_string(id) + " out of range");
  }
  if (id < kNumSpecial) return kSpecialNames[id];
  return words_[static_cast<size_t>(id - kNumSpecial)];
}

int64_t TokenSequence::num_real() const {
  int64_t n = 0;
  for (uint8_t m : attention_mask) n += m;
  return n;
}

TokenSequence tokenize(const std::string& text, const Vocabulary& vocab, int64_t max_len) {
  if (max_len < 3) {
    throw Error(ErrorCode::BadConfig, "max_len must fit [CLS], one word and [SEP]");
  }
  std::vector<std::string> words = split_words(text);
  if (words.empty()) {
    throw Error(ErrorCode::EmptyText, "no words survive normalization");
  }
  const int64_t word_budget = max_len - 2;
  if (static_cast<int64_t>(words.size()) > word_budget) {
    words.resize(static_cast<size_t>(word_budget));
  }

  TokenSequence seq;
  seq.ids.assign(static_cast<size_t>(max_len), Vocabulary::kPad);
  seq.attention_mask.assign(static_cast<size_t>(max_len), 0);
  seq.special.assign(static_cast<size_t>(max_len), 1);

  seq.ids[0] = Vocabulary::kCls;
  seq.attention_mask[0] = 1;
  for (size_t i = 0; i < words.size(); ++i) {
    seq.ids[i + 1] = vocab.id_of(words[i]);
    seq.attention_mask[i + 1] = 1;
    seq.special[i + 1] = 0;
  }
  const size_t sep = words.size() + 1;
  seq.ids[sep] = Vocabulary::kSep;
  seq.attention_mask[sep] = 1;
  return seq;
}

}  // namespace vidlang
