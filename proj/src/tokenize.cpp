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

#include "collodp/tokenize.hpp"

#include <algorithm>
#include <optional>

namespace collodp {

namespace {

std::string join_range(const std::vector<std::string>& words,
                       std::size_t start, std::size_t len, char sep) {
  std::string s;
  for (std::size_t i = 0; i < len; ++i) {
    if (i) s.push_back(sep);
    s.append(words[start + i]);
  }
  return s;
}

std::optional<double> lookup(const ScoredTable& table,
                             const std::vector<std::string>& words,
                             std::size_t start, std::size_t len) {
  return table.score(std::string_view(join_range(words, start, len, ' ')));
}

CollToken make_token(const std::vector<std::string>& words, std::size_t start,
                     std::size_t len, double score) {
  CollToken t;
  t.surface = join_range(words, start, len, '_');
  t.word_len = len;
  t.start = start;
  t.end = start + len;
  t.score = score;
  return t;
}

}  // namespace

Tokenization gst(const Sentence& sentence, const ScoredTable& bigrams,
                 const ScoredTable& trigrams) {
  const auto& words = sentence.words;
  Tokenization out;
  out.source = sentence;

  std::size_t i = 0;
  while (i < words.size()) {
    if (i + 3 <= words.size()) {
      if (auto s = lookup(trigrams, words, i, 3)) {
        out.tokens.push_back(make_token(words, i, 3, *s));
        i += 3;
        continue;
      }
    }
    if (i + 2 <= words.size()) {
      if (auto s = lookup(bigrams, words, i, 2)) {
        out.tokens.push_back(make_token(words, i, 2, *s));
        i += 2;
        continue;
      }
    }
    out.tokens.push_back(make_token(words, i, 1, 0.0));
    i += 1;
  }
  return out;
}

Tokenization mst(const Sentence& sentence, const ScoredTable& bigrams,
                 const ScoredTable& trigrams) {
  const auto& words = sentence.words;
  const std::size_t n = words.size();

  struct Candidate {
    double score;
    std::size_t start;
    std::size_t len;
    std::string surface;
  };
  std::vector<Candidate> pool;
  pool.reserve(3 * n);
  for (std::size_t i = 0; i < n; ++i)
    pool.push_back({0.0, i, 1, words[i]});
  for (std::size_t i = 0; i + 2 <= n; ++i) {
    if (auto s = lookup(bigrams, words, i, 2))
      pool.push_back({*s, i, 2, join_range(words, i, 2, '_')});
  }
  for (std::size_t i = 0; i + 3 <= n; ++i) {
    if (auto s = lookup(trigrams, words, i, 3))
      pool.push_back({*s, i, 3, join_range(words, i, 3, '_')});
  }

  std::sort(pool.begin(), pool.end(),
            [](const Candidate& a, const Candidate& b) {
              if (a.score != b.score) return a.score > b.score;
              if (a.start != b.start) return a.start < b.start;
              if (a.len != b.len) return a.len > b.len;
              return a.surface < b.surface;
            });

  std::vector<bool> covered(n, false);
  std::vector<const Candidate*> accepted;
  for (const Candidate& c : pool) {
    bool free = true;
    for (std::size_t p = c.start; p < c.start + c.len; ++p)
      if (covered[p]) free = false;
    if (!free) continue;
    for (std::size_t p = c.start; p < c.start + c.len; ++p) covered[p] = true;
    accepted.push_back(&c);
  }
  std::sort(accepted.begin(), accepted.end(),
            [](const Candidate* a, const Candidate* b) {
              return a->start < b->start;
            });

  Tokenization out;
  out.source = sentence;
  for (const Candidate* c : accepted) {
    CollToken t;
    t.surface = c->surface;
    t.word_len = c->len;
    t.start = c->start;
    t.end = c->start + c->len;
    t.score = c->score;
    out.tokens.push_back(std::move(t));
  }
  return out;
}

double total_score(const Tokenization& t) {
  double sum = 0.0;
  for (const auto& tok : t.tokens) sum += tok.score;
  return sum;
}

}  // namespace collodp
