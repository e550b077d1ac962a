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

#include "collodp/pipeline.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <utility>

#include "collodp/errors.hpp"
#include "collodp/parallel.hpp"

namespace collodp {

namespace {

// One piece of a possibly re-split token: the words it covers, joined.
struct TokenPart {
  std::string surface;
  bool in_vocab = false;
};

std::vector<std::string> split_surface(const std::string& surface) {
  std::vector<std::string> words;
  std::size_t begin = 0;
  for (std::size_t i = 0; i <= surface.size(); ++i) {
    if (i == surface.size() || surface[i] == '_') {
      words.push_back(surface.substr(begin, i - begin));
      begin = i + 1;
    }
  }
  return words;
}

std::string join_words(const std::vector<std::string>& words,
                       std::size_t begin, std::size_t len, char sep) {
  std::string out;
  for (std::size_t i = 0; i < len; ++i) {
    if (i) out.push_back(sep);
    out += words[begin + i];
  }
  return out;
}

// Greedy longest-known-piece split of an out-of-vocabulary token. Single
// words stay as parts even when unknown; the caller copies those verbatim.
std::vector<TokenPart> backoff_parts(const std::string& surface,
                                     const EmbeddingModel& model) {
  if (model.contains(surface)) return {{surface, true}};
  const auto words = split_surface(surface);
  if (words.size() == 1) return {{surface, false}};
  std::vector<TokenPart> parts;
  std::size_t i = 0;
  while (i < words.size()) {
    std::size_t take = 1;
    for (std::size_t len = std::min<std::size_t>(3, words.size() - i);
         len >= 2; --len) {
      if (model.contains(join_words(words, i, len, '_'))) {
        take = len;
        break;
      }
    }
    std::string piece = join_words(words, i, take, '_');
    const bool known = take > 1 || model.contains(piece);
    parts.push_back({std::move(piece), known});
    i += take;
  }
  return parts;
}

}  // namespace

std::string strategy_name(Strategy s) {
  switch (s) {
    case Strategy::kS1:
      return "s1";
    case Strategy::kS2:
      return "s2";
    case Strategy::kS3:
      return "s3";
    case Strategy::kS4:
      return "s4";
  }
  throw Error("unknown strategy");
}

Strategy strategy_from_name(std::string_view name) {
  if (name == "s1") return Strategy::kS1;
  if (name == "s2") return Strategy::kS2;
  if (name == "s3") return Strategy::kS3;
  if (name == "s4") return Strategy::kS4;
  throw Error("unknown strategy name: " + std::string(name));
}

double doc_budget(double base_epsilon, double avg_words_per_text) {
  return base_epsilon * avg_words_per_text;
}

PrivatizationPlan plan(const std::vector<Sentence>& sentences,
                       const StrategyConfig& cfg, double avg_words_per_text) {
  std::size_t total_words = 0;
  for (const auto& s : sentences) total_words += s.words.size();
  if (total_words == 0) throw DegeneratePlanError("document has no words");

  PrivatizationPlan p;
  p.doc_epsilon = doc_budget(cfg.base_epsilon, avg_words_per_text);

  if (cfg.strategy == Strategy::kS1) {
    for (const auto& s : sentences) {
      for (std::size_t i = 0; i < s.words.size(); ++i) {
        CollToken t;
        t.surface = s.words[i];
        t.word_len = 1;
        t.start = s.word_begin + i;
        t.end = t.start + 1;
        p.tokens.push_back(std::move(t));
      }
    }
    for (std::size_t i = 0; i < p.tokens.size(); ++i)
      if (cfg.connectors.contains(p.tokens[i].surface)) p.skipped.push_back(i);
    const std::size_t privatized = p.tokens.size() - p.skipped.size();
    if (privatized == 0)
      throw DegeneratePlanError("every word is a connector");
    const double per_token = p.doc_epsilon / double(privatized);
    p.per_token_epsilon.assign(p.tokens.size(), per_token);
    for (const std::size_t i : p.skipped) p.per_token_epsilon[i] = 0.0;
    return p;
  }

  if (cfg.bigrams == nullptr || cfg.trigrams == nullptr)
    throw Error("strategy " + strategy_name(cfg.strategy) +
                " needs bigram and trigram tables");
  for (const auto& s : sentences) {
    Tokenization tk = cfg.strategy == Strategy::kS4
                          ? mst(s, *cfg.bigrams, *cfg.trigrams)
                          : gst(s, *cfg.bigrams, *cfg.trigrams);
    for (auto& t : tk.tokens) {
      t.start += s.word_begin;
      t.end += s.word_begin;
      p.tokens.push_back(std::move(t));
    }
  }
  const double per_token =
      cfg.strategy == Strategy::kS2
          ? p.doc_epsilon / double(total_words)
          : p.doc_epsilon / double(p.tokens.size());
  p.per_token_epsilon.assign(p.tokens.size(), per_token);
  return p;
}

PrivatizedRecord privatize_document(const Document& doc,
                                    const StrategyConfig& cfg,
                                    const Mechanism& mechanism,
                                    double avg_words_per_text,
                                    const SplitRng& base_rng) {
  const EmbeddingModel* model = cfg.active_model();
  if (model == nullptr)
    throw Error("strategy " + strategy_name(cfg.strategy) +
                " needs an embedding model");
  if (model != &mechanism.model())
    throw Error("mechanism was built for a different model");

  PrivatizedRecord rec;
  rec.id = doc.id;
  rec.original = normalize(doc.text);
  rec.strategy = cfg.strategy;
  rec.epsilon_base = cfg.base_epsilon;

  const auto sentences = split_sentences(rec.original);
  PrivatizationPlan p;
  try {
    p = plan(sentences, cfg, avg_words_per_text);
  } catch (const DegeneratePlanError&) {
    rec.degenerate = true;
    rec.privatized = rec.original;
    rec.epsilon_doc = doc_budget(cfg.base_epsilon, avg_words_per_text);
    return rec;
  }
  rec.epsilon_doc = p.doc_epsilon;
  rec.per_token_epsilon = p.per_token_epsilon;
  rec.skipped = p.skipped;

  std::vector<bool> is_skipped(p.tokens.size(), false);
  for (const std::size_t i : p.skipped) is_skipped[i] = true;

  const SplitRng doc_rng = base_rng.child(doc.id);
  std::string text;
  for (std::size_t i = 0; i < p.tokens.size(); ++i) {
    const std::string& surface = p.tokens[i].surface;
    rec.tokens.push_back(surface);
    std::string out;
    if (is_skipped[i]) {
      out = surface;
    } else {
      const SplitRng tok_rng = doc_rng.child(i);
      const auto parts = backoff_parts(surface, *model);
      if (parts.size() > 1) ++rec.oov_split;
      for (std::size_t j = 0; j < parts.size(); ++j) {
        if (j) out.push_back('_');
        if (!parts[j].in_vocab) {
          out += parts[j].surface;  // unknown word, copied untouched
          ++rec.oov_verbatim;
          continue;
        }
        SplitRng part_rng = tok_rng.child(j);
        out += mechanism
                   .perturb(parts[j].surface, p.per_token_epsilon[i], part_rng)
                   .output;
      }
      if (out == surface) ++rec.self_subs;
    }
    if (!text.empty()) text.push_back(' ');
    for (const char c : out) text.push_back(c == '_' ? ' ' : c);
    rec.output_tokens.push_back(std::move(out));
  }
  rec.privatized = std::move(text);
  return rec;
}

std::string PrivatizedRecord::to_json() const {
  nlohmann::ordered_json j;
  j["id"] = id;
  j["original"] = original;
  j["privatized"] = privatized;
  j["strategy"] = strategy_name(strategy);
  j["epsilon_base"] = epsilon_base;
  j["epsilon_doc"] = epsilon_doc;
  j["tokens"] = tokens;
  j["per_token_epsilon"] = per_token_epsilon;
  j["output_tokens"] = output_tokens;
  j["self_subs"] = self_subs;
  j["skipped"] = skipped;
  j["oov_split"] = oov_split;
  j["oov_verbatim"] = oov_verbatim;
  if (degenerate) j["warning"] = "degenerate plan; original text kept";
  return j.dump();
}

PrivatizedRecord record_from_json(const std::string& line) {
  const auto j = nlohmann::json::parse(line);
  PrivatizedRecord rec;
  rec.id = j.value("id", std::string());
  rec.original = j.value("original", std::string());
  rec.privatized = j.value("privatized", std::string());
  rec.strategy = strategy_from_name(j.value("strategy", std::string("s3")));
  rec.epsilon_base = j.value("epsilon_base", 0.0);
  rec.epsilon_doc = j.value("epsilon_doc", 0.0);
  rec.tokens = j.value("tokens", std::vector<std::string>());
  rec.per_token_epsilon =
      j.value("per_token_epsilon", std::vector<double>());
  rec.output_tokens = j.value("output_tokens", std::vector<std::string>());
  rec.self_subs = j.value("self_subs", std::size_t(0));
  rec.skipped = j.value("skipped", std::vector<std::size_t>());
  rec.oov_split = j.value("oov_split", std::size_t(0));
  rec.oov_verbatim = j.value("oov_verbatim", std::size_t(0));
  rec.degenerate = j.contains("warning");
  return rec;
}

double average_words_per_text(const std::vector<Document>& docs) {
  if (docs.empty()) return 0.0;
  std::size_t words = 0;
  for (const auto& d : docs) {
    try {
      words += word_tokenize(normalize(d.text)).size();
    } catch (const Error&) {
      // Undecodable text counts zero words; the privatization pass reports
      // the failure per record.
    }
  }
  return double(words) / double(docs.size());
}

DatasetSummary privatize_dataset(const std::vector<Document>& docs,
                                 const StrategyConfig& cfg,
                                 std::uint64_t seed, LineWriter& out,
                                 std::optional<double> avg_words_override) {
  const auto t0 = std::chrono::steady_clock::now();
  DatasetSummary sum;
  sum.avg_words_per_text =
      avg_words_override ? *avg_words_override : average_words_per_text(docs);
  if (docs.empty()) return sum;

  const EmbeddingModel* model = cfg.active_model();
  if (model == nullptr)
    throw Error("strategy " + strategy_name(cfg.strategy) +
                " needs an embedding model");
  const Mechanism mechanism(*model, cfg.mechanism);
  const SplitRng base_rng(seed);

  struct DocResult {
    bool ok = false;
    std::string line;
    std::string error;
    PrivatizedRecord rec;
  };
  std::vector<DocResult> results(docs.size());
  parallel_for(docs.size(), thread_count(), [&](std::size_t i) {
    try {
      results[i].rec = privatize_document(docs[i], cfg, mechanism,
                                          sum.avg_words_per_text, base_rng);
      results[i].line = results[i].rec.to_json();
      results[i].ok = true;
    } catch (const std::exception& e) {
      results[i].error = e.what();
    }
  });

  for (std::size_t i = 0; i < docs.size(); ++i) {
    auto& r = results[i];
    ++sum.documents;
    if (!r.ok) {
      ++sum.failures;
      std::fprintf(stderr, "collodp: document %s failed: %s\n",
                   docs[i].id.c_str(), r.error.c_str());
      continue;
    }
    out.write_line(r.line);
    if (r.rec.degenerate) ++sum.degenerate;
    sum.tokens += r.rec.tokens.size();
    sum.privatized_tokens += r.rec.privatized_tokens();
    sum.skipped_tokens += r.rec.skipped.size();
    sum.self_subs += r.rec.self_subs;
    sum.oov_split += r.rec.oov_split;
    sum.oov_verbatim += r.rec.oov_verbatim;
  }
  out.flush();
  sum.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return sum;
}

std::string DatasetSummary::to_json() const {
  nlohmann::ordered_json j;
  j["documents"] = documents;
  j["failures"] = failures;
  j["degenerate"] = degenerate;
  j["avg_words_per_text"] = avg_words_per_text;
  j["tokens"] = tokens;
  j["privatized_tokens"] = privatized_tokens;
  j["skipped_tokens"] = skipped_tokens;
  j["self_subs"] = self_subs;
  j["self_sub_rate"] = self_sub_rate();
  j["oov_split"] = oov_split;
  j["oov_verbatim"] = oov_verbatim;
  j["elapsed_seconds"] = elapsed_seconds;
  return j.dump(2);
}

namespace {

bool jsonl_path(const std::string& path) {
  std::string p = path;
  if (has_gz_extension(p)) p = p.substr(0, p.size() - 3);
  auto ends_with = [&](std::string_view suffix) {
    return p.size() >= suffix.size() &&
           std::string_view(p).substr(p.size() - suffix.size()) == suffix;
  };
  return ends_with(".json") || ends_with(".jsonl");
}

}  // namespace

std::vector<Document> read_documents(const std::string& path,
                                     const std::string& field) {
  std::vector<Document> docs;
  LineReader in(path);
  const bool as_json = jsonl_path(path);
  std::string line;
  while (in.next(line)) {
    if (as_json) {
      if (line.empty()) continue;
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(line);
      } catch (const nlohmann::json::exception& e) {
        throw ParseError(path, in.line_number(), e.what());
      }
      if (!j.contains(field) || !j[field].is_string())
        throw ParseError(path, in.line_number(),
                         "missing text field '" + field + "'");
      Document d;
      if (j.contains("id")) {
        d.id = j["id"].is_string() ? j["id"].get<std::string>()
                                   : j["id"].dump();
      } else {
        d.id = std::to_string(docs.size());
      }
      d.text = j[field].get<std::string>();
      docs.push_back(std::move(d));
    } else {
      docs.push_back({std::to_string(docs.size()), line});
    }
  }
  return docs;
}

}  // namespace collodp
