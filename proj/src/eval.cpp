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

#include "collodp/eval.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>

#include "collodp/errors.hpp"
#include "collodp/io.hpp"
#include "collodp/parallel.hpp"

namespace collodp {

std::vector<double> doc_embed(const EmbeddingModel& m,
                              std::span<const std::string> tokens,
                              bool* any_known) {
  std::vector<double> mean(m.dim(), 0.0);
  std::size_t known = 0;
  for (const auto& tok : tokens) {
    const auto idx = m.find(tok);
    if (!idx) continue;
    const auto row = m.row(*idx);
    for (std::size_t j = 0; j < m.dim(); ++j) mean[j] += row[j];
    ++known;
  }
  if (known > 0)
    for (auto& v : mean) v /= double(known);
  if (any_known) *any_known = known > 0;
  return mean;
}

double cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw Error("cosine: dimension mismatch");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  // Equality in Cauchy-Schwarz means exact colinearity; returning the exact
  // unit value keeps cosine(v, v) == 1 and clamps rounding overshoot.
  if (dot * dot >= na * nb) return dot >= 0.0 ? 1.0 : -1.0;
  return dot / std::sqrt(na * nb);
}

double relative_gain(double u_p, double u_o, double p_p, double p_o) {
  if (u_o <= 0.0 || p_o <= 0.0)
    throw Error("relative_gain: baselines must be positive");
  return u_p / u_o - p_p / p_o;
}

namespace {

std::size_t surface_word_len(const std::string& surface) {
  return 1 + std::size_t(std::count(surface.begin(), surface.end(), '_'));
}

}  // namespace

VocabMatch vocab_match_report(const EmbeddingModel& m, const StrSet& target) {
  VocabMatch out;
  for (const auto& tok : m.vocab()) {
    const std::size_t len = surface_word_len(tok);
    ++out.total[len];
    bool all = true;
    std::size_t begin = 0;
    for (std::size_t i = 0; i <= tok.size() && all; ++i) {
      if (i == tok.size() || tok[i] == '_') {
        if (!target.count(tok.substr(begin, i - begin))) all = false;
        begin = i + 1;
      }
    }
    if (all) ++out.matched[len];
  }
  return out;
}

EvalReport evaluate(const std::vector<EvalRecord>& original,
                    const std::vector<EvalRecord>& privatized,
                    const EmbeddingModel& m) {
  if (original.empty() && privatized.empty())
    throw Error("evaluate: nothing to evaluate");
  if (original.size() != privatized.size())
    throw Error("evaluate: record counts differ: " +
                std::to_string(original.size()) + " vs " +
                std::to_string(privatized.size()));
  for (std::size_t i = 0; i < original.size(); ++i) {
    if (original[i].id != privatized[i].id)
      throw Error("evaluate: record " + std::to_string(i) +
                  " id mismatch: '" + original[i].id + "' vs '" +
                  privatized[i].id + "'");
  }

  struct PerRecord {
    double cos = 0.0;
    bool no_vocab = false;
    std::size_t matched = 0;
    std::size_t positions = 0;
  };
  std::vector<PerRecord> rows(original.size());
  parallel_for(original.size(), thread_count(), [&](std::size_t i) {
    bool known_a = false, known_b = false;
    const auto ea = doc_embed(m, original[i].tokens, &known_a);
    const auto eb = doc_embed(m, privatized[i].tokens, &known_b);
    rows[i].cos = cosine(ea, eb);
    rows[i].no_vocab = !known_a || !known_b;
    const auto& ta = original[i].tokens;
    const auto& tb = privatized[i].tokens;
    rows[i].positions = std::max(ta.size(), tb.size());
    for (std::size_t j = 0; j < std::min(ta.size(), tb.size()); ++j)
      if (ta[j] == tb[j]) ++rows[i].matched;
  });

  EvalReport rep;
  rep.records = original.size();
  double cos_sum = 0.0;
  std::size_t matched = 0, positions = 0;
  for (const auto& r : rows) {
    cos_sum += r.cos;
    if (r.no_vocab) ++rep.no_vocab_docs;
    matched += r.matched;
    positions += r.positions;
  }
  rep.cosine_mean = cos_sum / double(rep.records);
  rep.self_sub_rate = positions ? double(matched) / double(positions) : 0.0;
  for (const auto& r : privatized)
    for (const auto& tok : r.tokens) ++rep.token_stats[surface_word_len(tok)];
  return rep;
}

std::string EvalReport::to_json() const {
  nlohmann::ordered_json j;
  j["records"] = records;
  j["cosine_mean"] = cosine_mean;
  j["self_sub_rate"] = self_sub_rate;
  j["no_vocab_docs"] = no_vocab_docs;
  auto histogram = nlohmann::ordered_json::object();
  for (const auto& [len, count] : token_stats)
    histogram[std::to_string(len)] = count;
  j["token_stats"] = histogram;
  if (!vocab_match.total.empty()) {
    auto vm = nlohmann::ordered_json::object();
    for (const auto& [len, total] : vocab_match.total) {
      const auto it = vocab_match.matched.find(len);
      vm[std::to_string(len)] = {
          {"matched", it == vocab_match.matched.end() ? 0 : it->second},
          {"total", total}};
    }
    j["vocab_match"] = vm;
  }
  return j.dump(2);
}

std::vector<EvalRecord> eval_records_from_jsonl(const std::string& path,
                                                const std::string& which) {
  if (which != "tokens" && which != "output_tokens")
    throw Error("eval_records_from_jsonl: unknown token key '" + which + "'");
  std::vector<EvalRecord> out;
  LineReader in(path);
  std::string line;
  while (in.next(line)) {
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(path, in.line_number(), e.what());
    }
    EvalRecord rec;
    rec.id = j.value("id", std::to_string(out.size()));
    rec.tokens = j.value(which, std::vector<std::string>());
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace collodp
