// Copyright 2026 The collodp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef COLLODP_CORPUS_HPP_
#define COLLODP_CORPUS_HPP_

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace collodp {

struct Document {
  std::string id;
  std::string text;  // raw UTF-8
};

// One sentence of a document after normalization and word tokenization.
// [word_begin, word_end) is the sentence's word-index range within the
// document, so concatenating all sentences reproduces the document's word
// sequence exactly.
struct Sentence {
  std::vector<std::string> words;
  std::size_t word_begin = 0;
  std::size_t word_end = 0;
};

// Connector ("stop") words, barred from collocations and optionally exempt
// from privatization. Queries expect normalized input.
class ConnectorList {
 public:
  // Built-in versioned list (mirrors data/stopwords.txt).
  static ConnectorList builtin();

  // Loads a UTF-8 file, one word per line; '#' starts a comment. Entries
  // are normalized before insertion.
  static ConnectorList from_file(const std::string& path);

  static ConnectorList from_words(const std::vector<std::string>& words);

  bool contains(std::string_view word) const;
  std::size_t size() const { return words_.size(); }

  // Sorted copy of the list, for diffing and diagnostics.
  std::vector<std::string> sorted_words() const;

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };
  struct Eq {
    using is_transparent = void;
    bool operator()(std::string_view a, std::string_view b) const {
      return a == b;
    }
  };
  std::unordered_set<std::string, Hash, Eq> words_;
};

// Lowercases, NFC-normalizes, and strips control characters (tab/newline
// class controls become spaces). Throws DecodeError on invalid UTF-8.
std::string normalize(std::string_view text);

// Splits normalized text into words: maximal runs of alphanumeric code
// points, allowing internal apostrophes and hyphens. Punctuation is dropped.
std::vector<std::string> word_tokenize(std::string_view normalized);

// Splits normalized text into sentences at [.!?]+ followed by whitespace
// (or end of text). Flattening the result reproduces word_tokenize(text).
std::vector<Sentence> split_sentences(std::string_view normalized);

inline bool is_connector(const ConnectorList& connectors,
                         std::string_view word) {
  return connectors.contains(word);
}

}  // namespace collodp

#endif  // COLLODP_CORPUS_HPP_
