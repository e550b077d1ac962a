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

#ifndef COLLODP_TOKENIZE_HPP_
#define COLLODP_TOKENIZE_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "collodp/collocations.hpp"
#include "collodp/corpus.hpp"

namespace collodp {

// One collocation-level token covering [start, end) word positions of its
// sentence. Unigrams carry score 0; bi/trigrams carry their table PMI.
struct CollToken {
  std::string surface;      // constituent words joined by '_'
  std::size_t word_len = 1;
  std::size_t start = 0;
  std::size_t end = 0;
  double score = 0.0;
};

struct Tokenization {
  std::vector<CollToken> tokens;
  Sentence source;
};

// Greedy sequential tokenization: left-to-right, trigram match first, then
// bigram, else unigram; advance by the emitted token's length.
Tokenization gst(const Sentence& sentence, const ScoredTable& bigrams,
                 const ScoredTable& trigrams);

// Max score tokenization: all candidate occurrences sorted by score
// descending (ties: earlier start, longer n-gram, lexicographic surface),
// accepted when no word position is already covered.
Tokenization mst(const Sentence& sentence, const ScoredTable& bigrams,
                 const ScoredTable& trigrams);

double total_score(const Tokenization& t);

}  // namespace collodp

#endif  // COLLODP_TOKENIZE_HPP_
