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

#ifndef COLLODP_EVAL_HPP_
#define COLLODP_EVAL_HPP_

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "collodp/embeddings.hpp"

namespace collodp {

// One side of an evaluation pair: a document id plus its token surfaces.
struct EvalRecord {
  std::string id;
  std::vector<std::string> tokens;
};

// Model tokens whose constituent words all appear in a target vocabulary,
// bucketed by token word length.
struct VocabMatch {
  std::map<std::size_t, std::size_t> matched;
  std::map<std::size_t, std::size_t> total;
};

struct EvalReport {
  std::size_t records = 0;
  double cosine_mean = 0.0;
  double self_sub_rate = 0.0;
  // Pairs where one side had no in-vocabulary token (cosine contributed 0).
  std::size_t no_vocab_docs = 0;
  // Privatized-side token word lengths; values sum to the token total.
  std::map<std::size_t, std::size_t> token_stats;
  VocabMatch vocab_match;  // empty unless vocab_match_report was merged

  std::string to_json() const;
};

// Mean of the embedding rows of in-vocabulary tokens; the zero vector when
// none are known. any_known reports whether at least one token was found.
std::vector<double> doc_embed(const EmbeddingModel& m,
                              std::span<const std::string> tokens,
                              bool* any_known = nullptr);

// a.b / (|a||b|), or 0 when either norm is zero.
double cosine(std::span<const double> a, std::span<const double> b);

// (u_p / u_o) - (p_p / p_o). Baselines must be positive.
double relative_gain(double u_p, double u_o, double p_p, double p_o);

VocabMatch vocab_match_report(const EmbeddingModel& m, const StrSet& target);

// Pairs records by position (ids must agree), averaging the cosine between
// mean-pooled embeddings and the fraction of token positions left unchanged.
EvalReport evaluate(const std::vector<EvalRecord>& original,
                    const std::vector<EvalRecord>& privatized,
                    const EmbeddingModel& m);

// Loads one side of a privatized JSONL file: `which` selects the token key
// ("tokens" or "output_tokens").
std::vector<EvalRecord> eval_records_from_jsonl(const std::string& path,
                                                const std::string& which);

}  // namespace collodp

#endif  // COLLODP_EVAL_HPP_
