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

#ifndef COLLODP_COLLOCATIONS_HPP_
#define COLLODP_COLLOCATIONS_HPP_

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "collodp/corpus.hpp"
#include "collodp/strmap.hpp"

namespace collodp {

// Exact n-gram counts over sentences. Words are interned; bigrams and
// trigrams are taken over consecutive positions within one sentence only.
// Tables built on disjoint shards can be merged.
class CountTable {
 public:
  void add(const Sentence& sentence);
  void merge(const CountTable& other);

  std::uint64_t total_words() const { return total_words_; }
  std::uint64_t unigram(std::string_view w) const;
  std::uint64_t bigram(std::string_view x, std::string_view y) const;
  std::uint64_t trigram(std::string_view x, std::string_view y,
                        std::string_view z) const;

  std::size_t distinct_unigrams() const;
  std::size_t distinct_bigrams() const { return bigrams_.size(); }
  std::size_t distinct_trigrams() const { return trigrams_.size(); }

  void for_each_bigram(
      const std::function<void(std::string_view, std::string_view,
                               std::uint64_t)>& fn) const;
  void for_each_trigram(
      const std::function<void(std::string_view, std::string_view,
                               std::string_view, std::uint64_t)>& fn) const;

 private:
  static constexpr std::uint32_t kNoId = 0xffffffffu;

  std::uint32_t intern(std::string_view w);
  std::uint32_t find_id(std::string_view w) const;

  struct TriKey {
    std::array<std::uint32_t, 3> ids;
    bool operator==(const TriKey&) const = default;
  };
  struct TriHash {
    std::size_t operator()(const TriKey& k) const;
  };

  std::vector<std::string> id_to_word_;
  StrMap<std::uint32_t> word_to_id_;
  std::vector<std::uint64_t> unigrams_;  // indexed by word id
  std::unordered_map<std::uint64_t, std::uint64_t> bigrams_;  // hi id, lo id
  std::unordered_map<TriKey, std::uint64_t, TriHash> trigrams_;
  std::uint64_t total_words_ = 0;
};

// Pointwise mutual information in bits. Throws UndefinedPmiError when any
// required count is zero.
double pmi_bigram(const CountTable& t, std::string_view x, std::string_view y);
double pmi_trigram(const CountTable& t, std::string_view x, std::string_view y,
                   std::string_view z);

struct ScoredEntry {
  std::vector<std::string> words;  // length 2 or 3
  std::uint64_t count = 0;
  double pmi = 0.0;
};

// Immutable collocation table: bigrams/trigrams that passed the count, PMI
// and connector filters, sorted by PMI descending.
class ScoredTable {
 public:
  ScoredTable() = default;
  ScoredTable(std::vector<ScoredEntry> entries, double min_pmi,
              std::uint64_t min_count, std::uint64_t total_words);

  // PMI for the exact word sequence, or nullopt if absent.
  std::optional<double> score(std::span<const std::string> words) const;
  std::optional<double> score(std::string_view joined) const;

  const std::vector<ScoredEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  double min_pmi() const { return min_pmi_; }
  std::uint64_t min_count() const { return min_count_; }
  std::uint64_t total_words() const { return total_words_; }

  // Copy containing only entries of the given n-gram length (2 or 3).
  ScoredTable subset(std::size_t ngram_len) const;

  static std::string join_words(std::span<const std::string> words);

 private:
  void rebuild_index();

  std::vector<ScoredEntry> entries_;
  StrMap<std::size_t> index_;  // space-joined words -> entry position
  double min_pmi_ = 0.0;
  std::uint64_t min_count_ = 0;
  std::uint64_t total_words_ = 0;
};

ScoredTable filter_table(const CountTable& table, double min_pmi,
                         std::uint64_t min_count,
                         const ConnectorList& connectors);

// TSV with a `#N=<total_words>` header; gzip by extension.
void save_table(const ScoredTable& table, const std::string& path);
ScoredTable load_table(const std::string& path);

}  // namespace collodp

#endif  // COLLODP_COLLOCATIONS_HPP_
