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

#ifndef COLLODP_PIPELINE_HPP_
#define COLLODP_PIPELINE_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "collodp/collocations.hpp"
#include "collodp/corpus.hpp"
#include "collodp/io.hpp"
#include "collodp/mechanisms.hpp"
#include "collodp/rng.hpp"
#include "collodp/tokenize.hpp"

namespace collodp {

// Budget strategies. S1 privatizes words (stopwords skipped), S2 and S3
// privatize greedy collocation tokens, S4 privatizes max-score tokens.
// They differ in how the document budget is divided; see plan().
enum class Strategy { kS1, kS2, kS3, kS4 };

std::string strategy_name(Strategy s);
Strategy strategy_from_name(std::string_view name);

struct StrategyConfig {
  Strategy strategy = Strategy::kS3;
  double base_epsilon = 1.0;
  ConnectorList connectors;              // S1 skip list
  const ScoredTable* bigrams = nullptr;  // S2-S4
  const ScoredTable* trigrams = nullptr;
  const EmbeddingModel* word_model = nullptr;  // S1
  const EmbeddingModel* coll_model = nullptr;  // S2-S4
  // Mechanism selection. Only kind, lambda and t are read here; epsilon
  // comes from the plan and randomness from the per-document stream.
  MechanismConfig mechanism;

  const EmbeddingModel* active_model() const {
    return strategy == Strategy::kS1 ? word_model : coll_model;
  }
};

// Token-level budget assignment for one document. Tokens use document-level
// word coordinates. per_token_epsilon runs parallel to tokens; skipped
// entries hold 0 and every privatized entry is positive.
struct PrivatizationPlan {
  double doc_epsilon = 0.0;
  std::vector<CollToken> tokens;
  std::vector<double> per_token_epsilon;
  std::vector<std::size_t> skipped;
};

struct PrivatizedRecord {
  std::string id;
  std::string original;  // normalized input text
  std::string privatized;
  Strategy strategy = Strategy::kS3;
  double epsilon_base = 0.0;
  double epsilon_doc = 0.0;
  std::vector<std::string> tokens;
  std::vector<double> per_token_epsilon;
  std::vector<std::string> output_tokens;  // same length as tokens
  std::size_t self_subs = 0;
  std::vector<std::size_t> skipped;
  // Out-of-vocabulary bookkeeping: tokens re-split into smaller in-vocab
  // pieces, and single words copied verbatim because no piece was known.
  std::size_t oov_split = 0;
  std::size_t oov_verbatim = 0;
  bool degenerate = false;  // plan failed; original text passed through

  std::size_t privatized_tokens() const {
    return tokens.size() - skipped.size();
  }
  // One JSONL line; key order is fixed so reruns are byte-identical.
  std::string to_json() const;
};

// Overall budget for one document: base epsilon scaled by the dataset's
// average words per text.
double doc_budget(double base_epsilon, double avg_words_per_text);

// Splits the document budget over tokens.
//   S1: word tokens; connectors skipped; doc_eps / #privatized words each.
//   S2: greedy tokens; doc_eps / #words each (word-level token budget).
//   S3: greedy tokens; doc_eps / #tokens each.
//   S4: max-score tokens; doc_eps / #tokens each.
// Throws DegeneratePlanError when nothing is left to privatize.
PrivatizationPlan plan(const std::vector<Sentence>& sentences,
                       const StrategyConfig& cfg, double avg_words_per_text);

// Privatizes one document. The mechanism must wrap cfg.active_model().
// Randomness is derived as base_rng -> child(doc id) -> child(token index),
// so results do not depend on processing order. A degenerate plan yields a
// record with the original text and degenerate set instead of an error.
PrivatizedRecord privatize_document(const Document& doc,
                                    const StrategyConfig& cfg,
                                    const Mechanism& mechanism,
                                    double avg_words_per_text,
                                    const SplitRng& base_rng);

struct DatasetSummary {
  std::size_t documents = 0;
  std::size_t failures = 0;
  std::size_t degenerate = 0;
  double avg_words_per_text = 0.0;
  std::size_t tokens = 0;
  std::size_t privatized_tokens = 0;
  std::size_t skipped_tokens = 0;
  std::size_t self_subs = 0;
  std::size_t oov_split = 0;
  std::size_t oov_verbatim = 0;
  double elapsed_seconds = 0.0;

  double self_sub_rate() const {
    return privatized_tokens ? double(self_subs) / double(privatized_tokens)
                             : 0.0;
  }
  std::string to_json() const;
};

// Privatizes every document and writes one JSONL record per line, in input
// order. avg_words_per_text is computed from the input unless overridden.
// Per-document failures are counted and reported, not fatal; failed
// documents produce no output line. Runs are deterministic for a given
// seed regardless of worker count.
DatasetSummary privatize_dataset(const std::vector<Document>& docs,
                                 const StrategyConfig& cfg,
                                 std::uint64_t seed, LineWriter& out,
                                 std::optional<double> avg_words_override =
                                     std::nullopt);

// Computes the dataset average words per text (word count mean).
double average_words_per_text(const std::vector<Document>& docs);

// Reads documents from plain text (one per line; ids are line indexes) or
// JSONL when the path ends in .json/.jsonl (text under `field`; id from an
// "id" key when present). Gzip by extension.
std::vector<Document> read_documents(const std::string& path,
                                     const std::string& field = "text");

// Parses privatized JSONL lines back into records (keys as written by
// to_json; absent optional keys default to empty).
PrivatizedRecord record_from_json(const std::string& line);

}  // namespace collodp

#endif  // COLLODP_PIPELINE_HPP_
