// Copyright 2026 vidlang authors
// Tokenizer and vocabulary tests.
//
// Licensed under the Apache License, Version 2.0

#include <string>
#include <vector>

#include "doctest.h"
#include "vidlang/errors.hpp"
#include "vidlang/tokenizer.hpp"

using namespace vidlang;

TEST_CASE("tokenizer: normalization lowercases and strips edge punctuation") {
  CHECK(normalize_word("Hello,") == "hello");
  CHECK(normalize_word("(artery)") == "artery");
  CHECK(normalize_word("don't") == "don't");  // interior punctuation kept
  CHECK(normalize_word("...") == "");
  std::vector<std::string> words = split_words("The surgeon Clips; the DUCT.");
  REQUIRE(words.size() == 5);
  CHECK(words[0] == "the");
  CHECK(words[1] == "surgeon");
  CHECK(words[2] == "clips");
  CHECK(words[3] == "the");
  CHECK(words[4] == "duct");
}

TEST_CASE("tokenizer: vocabulary ranks by frequency with lexicographic ties") {
  Vocabulary v = Vocabulary::build({"b b b a a c", "a c"}, 64);
  // a:3 b:3 c:2 -> tie between a and b broken lexicographically.
  CHECK(v.id_of("a") == Vocabulary::kNumSpecial + 0);
  CHECK(v.id_of("b") == Vocabulary::kNumSpecial + 1);
  CHECK(v.id_of("c") == Vocabulary::kNumSpecial + 2);
  CHECK(v.id_of("missing") == Vocabulary::kUnk);
  CHECK(v.size() == Vocabulary::kNumSpecial + 3);
  CHECK(v.word_of(v.id_of("a")) == "a");
  CHECK(v.word_of(Vocabulary::kMask) == "[MASK]");
}

TEST_CASE("tokenizer: vocabulary truncates to max size") {
  Vocabulary v = Vocabulary::build({"a a a b b c"}, Vocabulary::kNumSpecial + 2);
  CHECK(v.size() == Vocabulary::kNumSpecial + 2);
  CHECK(v.id_of("a") != Vocabulary::kUnk);
  CHECK(v.id_of("b") != Vocabulary::kUnk);
  CHECK(v.id_of("c") == Vocabulary::kUnk);
}

TEST_CASE("tokenizer: sequences carry [CLS], [SEP] and pad invariants") {
  Vocabulary v = Vocabulary::build({"grasper retracts the gallbladder"}, 64);
  TokenSequence seq = tokenize("The grasper retracts...", v, 8);
  REQUIRE(seq.length() == 8);
  CHECK(seq.ids[0] == Vocabulary::kCls);
  CHECK(seq.ids[1] == v.id_of("the"));
  CHECK(seq.ids[2] == v.id_of("grasper"));
  CHECK(seq.ids[3] == v.id_of("retracts"));
  CHECK(seq.ids[4] == Vocabulary::kSep);
  for (int64_t i = 5; i < 8; ++i) {
    CHECK(seq.ids[i] == Vocabulary::kPad);
    CHECK(seq.attention_mask[i] == 0);
    CHECK(seq.special[i] == 1);
  }
  CHECK(seq.num_real() == 5);
  // Maskable = real non-special positions.
  CHECK(seq.special[0] == 1);
  CHECK(seq.special[1] == 0);
  CHECK(seq.special[4] == 1);
}

TEST_CASE("tokenizer: long text truncates to the word budget") {
  Vocabulary v = Vocabulary::build({"a b c d e f g h"}, 64);
  TokenSequence seq = tokenize("a b c d e f g h", v, 5);
  REQUIRE(seq.length() == 5);
  CHECK(seq.ids[0] == Vocabulary::kCls);
  CHECK(seq.ids[1] == v.id_of("a"));
  CHECK(seq.ids[2] == v.id_of("b"));
  CHECK(seq.ids[3] == v.id_of("c"));
  CHECK(seq.ids[4] == Vocabulary::kSep);
  CHECK(seq.num_real() == 5);
}

TEST_CASE("tokenizer: empty text is rejected") {
  Vocabulary v = Vocabulary::build({"word"}, 64);
  CHECK_THROWS_AS(tokenize("", v, 8), Error);
  CHECK_THROWS_AS(tokenize("  ... !!", v, 8), Error);
  try {
    tokenize("...", v, 8);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyText);
  }
}

TEST_CASE("tokenizer: identical text tokenizes identically") {
  Vocabulary v = Vocabulary::build({"surgeon dissects the triangle"}, 64);
  TokenSequence a = tokenize("Surgeon dissects the triangle.", v, 12);
  TokenSequence b = tokenize("Surgeon dissects the triangle.", v, 12);
  CHECK(a.ids == b.ids);
  CHECK(a.attention_mask == b.attention_mask);
}

TEST_CASE("tokenizer: round trip through word list preserves ids") {
  Vocabulary v = Vocabulary::build({"alpha beta gamma"}, 64);
  Vocabulary w = Vocabulary::from_words(v.words());
  CHECK(w.size() == v.size());
  CHECK(w.id_of("alpha") == v.id_of("alpha"));
  CHECK(w.id_of("gamma") == v.id_of("gamma"));
}
