// Copyright 2026 vidlang authors
// Whitespace tokenizer with a corpus-derived vocabulary.
//
// Text is lowercased, split on whitespace, and stripped of leading/trailing
// punctuation; unknown words map to [UNK]. Sequences are wrapped as
// [CLS] w1 ... wn [SEP] and padded with [PAD] to a fixed length.
//
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace vidlang {

class Vocabulary {
 public:
  static constexpr int64_t kPad = 0;
  static constexpr int64_t kCls = 1;
  static constexpr int64_t kSep = 2;
  static constexpr int64_t kMask = 3;
  static constexpr int64_t kUnk = 4;
  static constexpr int64_t kNumSpecial = 5;

  // Builds a vocabulary from corpus texts: words ranked by frequency
  // (ties broken lexicographically), truncated to max_size total ids.
  static Vocabulary build(const std::vector<std::string>& texts, int64_t max_size);

  // Reconstructs a vocabulary from an ordered word list (checkpoint load).
  static Vocabulary from_words(std::vector<std::string> words);

  int64_t id_of(const std::string& word) const;  // kUnk when absent
  const std::string& word_of(int64_t id) const;  // specials render as [PAD] etc.
  int64_t size() const { return kNumSpecial + static_cast<int64_t>(words_.size()); }
  int64_t num_words() const { return static_cast<int64_t>(words_.size()); }
  const std::vector<std::string>& words() const { return words_; }

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, int64_t> index_;
};

// A tokenized, padded text sequence.
// Invariants: ids/mask have identical length; masked-out (pad) positions
// carry kPad; position 0 is [CLS]; every id is < vocab.size().
struct TokenSequence {
  std::vector<int64_t> ids;
  std::vector<uint8_t> attention_mask;      // 1 = real token, 0 = padding
  std::vector<uint8_t> special;             // 1 = [CLS]/[SEP]/[PAD], not maskable

  int64_t length() const { return static_cast<int64_t>(ids.size()); }
  int64_t num_real() const;                 // count of mask==1 positions
};

// Normalizes a single word: lowercase + strip edge punctuation.
std::string normalize_word(const std::string& word);

// Splits raw text into normalized words (may be empty).
std::vector<std::string> split_words(const std::string& text);

// Tokenizes and pads/truncates to max_len (which includes [CLS] and [SEP]).
// Throws Error(EmptyText) when no words survive normalization.
TokenSequence tokenize(const std::string& text, const Vocabulary& vocab, int64_t max_len);

}  // namespace vidlang
