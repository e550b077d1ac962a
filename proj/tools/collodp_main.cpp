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

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "collodp/collocations.hpp"
#include "collodp/corpus.hpp"
#include "collodp/errors.hpp"
#include "collodp/eval.hpp"
#include "collodp/io.hpp"
#include "collodp/mechanisms.hpp"
#include "collodp/pipeline.hpp"
#include "collodp/tokenize.hpp"

namespace {

using namespace collodp;

void emit_report(const std::string& body, const std::string& out_path) {
  LineWriter out(out_path);
  out.write_line(body);
  out.flush();
}

ConnectorList load_connectors(const std::string& path) {
  return path.empty() ? ConnectorList::builtin()
                      : ConnectorList::from_file(path);
}

// L2-normalizes every row; zero rows are kept as-is.
EmbeddingModel unit_rows(const EmbeddingModel& m) {
  std::vector<std::vector<double>> rows;
  rows.reserve(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    const auto row = m.row(i);
    std::vector<double> r(row.begin(), row.end());
    double norm = 0.0;
    for (const double v : r) norm += v * v;
    norm = std::sqrt(norm);
    if (norm > 0.0)
      for (auto& v : r) v /= norm;
    rows.push_back(std::move(r));
  }
  return EmbeddingModel::from_rows(m.vocab(), rows);
}

// ---------------------------------------------------------------- extract

struct ExtractArgs {
  std::string input, field = "text";
  std::string bigrams_out, trigrams_out;
  std::string stopwords;
  std::uint64_t min_count = 5;
  double min_pmi = 2.0;
  std::string out = "-";
  bool pretty = false;
};

int run_extract(const ExtractArgs& a) {
  const auto docs = read_documents(a.input, a.field);
  CountTable counts;
  std::size_t sentences = 0;
  for (const auto& d : docs) {
    for (const auto& s : split_sentences(normalize(d.text))) {
      counts.add(s);
      ++sentences;
    }
  }
  const auto connectors = load_connectors(a.stopwords);
  const auto table = filter_table(counts, a.min_pmi, a.min_count, connectors);
  const auto bigrams = table.subset(2);
  const auto trigrams = table.subset(3);
  if (!a.bigrams_out.empty()) save_table(bigrams, a.bigrams_out);
  if (!a.trigrams_out.empty()) save_table(trigrams, a.trigrams_out);

  nlohmann::ordered_json j;
  j["documents"] = docs.size();
  j["sentences"] = sentences;
  j["words"] = counts.total_words();
  j["distinct_unigrams"] = counts.distinct_unigrams();
  j["distinct_bigrams"] = counts.distinct_bigrams();
  j["distinct_trigrams"] = counts.distinct_trigrams();
  j["bigrams_kept"] = bigrams.size();
  j["trigrams_kept"] = trigrams.size();
  j["min_count"] = a.min_count;
  j["min_pmi"] = a.min_pmi;
  if (a.pretty) {
    std::string text;
    for (const auto& [key, value] : j.items())
      text += key + ": " + value.dump() + "\n";
    text.pop_back();
    emit_report(text, a.out);
  } else {
    emit_report(j.dump(2), a.out);
  }
  return 0;
}

// --------------------------------------------------------------- tokenize

struct TokenizeArgs {
  std::string input, field = "text";
  std::string bigrams, trigrams;
  std::string algorithm = "gst";
  std::string out = "-";
};

int run_tokenize(const TokenizeArgs& a) {
  const auto bigrams = load_table(a.bigrams);
  const auto trigrams = load_table(a.trigrams);
  const auto docs = read_documents(a.input, a.field);
  LineWriter out(a.out);
  for (const auto& d : docs) {
    for (const auto& s : split_sentences(normalize(d.text))) {
      const Tokenization tk = a.algorithm == "mst"
                                  ? mst(s, bigrams, trigrams)
                                  : gst(s, bigrams, trigrams);
      std::string line;
      for (const auto& t : tk.tokens) {
        if (!line.empty()) line.push_back(' ');
        line += t.surface;
      }
      out.write_line(line);
    }
  }
  out.flush();
  return 0;
}

// -------------------------------------------------------------- privatize

struct PrivatizeArgs {
  std::string input, field = "text";
  std::string strategy = "s3";
  double epsilon = 1.0;
  std::string bigrams, trigrams;
  std::string model, word_model;
  std::string stopwords;
  std::string mechanism = "madlib";
  double lambda = 0.2;
  double t = 0.5;
  std::uint64_t seed = 0;
  std::optional<double> avg_words;
  bool normalize_vectors = false;
  std::string out = "-";
  bool pretty = false;
};

int run_privatize(const PrivatizeArgs& a) {
  StrategyConfig cfg;
  cfg.strategy = strategy_from_name(a.strategy);
  cfg.base_epsilon = a.epsilon;
  cfg.connectors = load_connectors(a.stopwords);
  cfg.mechanism.kind = mechanism_from_name(a.mechanism);
  cfg.mechanism.lambda = a.lambda;
  cfg.mechanism.t = a.t;

  ScoredTable bigrams, trigrams;
  if (cfg.strategy != Strategy::kS1) {
    if (a.bigrams.empty() || a.trigrams.empty())
      throw Error("strategy " + a.strategy +
                  " needs --bigrams and --trigrams");
    bigrams = load_table(a.bigrams);
    trigrams = load_table(a.trigrams);
    cfg.bigrams = &bigrams;
    cfg.trigrams = &trigrams;
  }

  EmbeddingModel model;
  if (cfg.strategy == Strategy::kS1) {
    if (a.word_model.empty())
      throw Error("strategy s1 needs --word-model");
    model = load_model(a.word_model, true);
    if (a.normalize_vectors) model = unit_rows(model);
    cfg.word_model = &model;
  } else {
    if (a.model.empty())
      throw Error("strategy " + a.strategy + " needs --model");
    model = load_model(a.model, true);
    if (a.normalize_vectors) model = unit_rows(model);
    cfg.coll_model = &model;
  }

  const auto docs = read_documents(a.input, a.field);
  LineWriter out(a.out);
  const auto summary =
      privatize_dataset(docs, cfg, a.seed, out, a.avg_words);
  if (a.pretty) {
    std::fprintf(stderr,
                 "documents %zu  failures %zu  tokens %zu  "
                 "self-sub rate %.4f  avg words %.2f  %.2fs\n",
                 summary.documents, summary.failures, summary.tokens,
                 summary.self_sub_rate(), summary.avg_words_per_text,
                 summary.elapsed_seconds);
  } else {
    std::fprintf(stderr, "%s\n", summary.to_json().c_str());
  }
  return 0;
}

// --------------------------------------------------------------- evaluate

struct EvaluateArgs {
  std::string privatized;
  std::string model;
  std::string original, field = "text";
  std::string target_vocab;
  std::string out = "-";
  bool pretty = false;
};

int run_evaluate(const EvaluateArgs& a) {
  const auto m = load_model(a.model, true);
  std::vector<EvalRecord> orig;
  if (a.original.empty()) {
    orig = eval_records_from_jsonl(a.privatized, "tokens");
  } else {
    for (const auto& d : read_documents(a.original, a.field))
      orig.push_back({d.id, word_tokenize(normalize(d.text))});
  }
  const auto priv = eval_records_from_jsonl(a.privatized, "output_tokens");
  auto report = evaluate(orig, priv, m);
  if (!a.target_vocab.empty()) {
    StrSet target;
    LineReader in(a.target_vocab);
    std::string line;
    while (in.next(line)) {
      const auto words = word_tokenize(normalize(line));
      for (const auto& w : words) target.insert(w);
    }
    report.vocab_match = vocab_match_report(m, target);
  }
  if (a.pretty) {
    std::string text;
    text += "records: " + std::to_string(report.records) + "\n";
    text += "cosine_mean: " + std::to_string(report.cosine_mean) + "\n";
    text += "self_sub_rate: " + std::to_string(report.self_sub_rate) + "\n";
    text += "no_vocab_docs: " + std::to_string(report.no_vocab_docs) + "\n";
    text += "token word lengths:";
    for (const auto& [len, count] : report.token_stats)
      text += " " + std::to_string(len) + "x" + std::to_string(count);
    emit_report(text, a.out);
  } else {
    emit_report(report.to_json(), a.out);
  }
  return 0;
}

// -------------------------------------------------------------- verify-dp

struct VerifyArgs {
  std::string model;
  std::string w, w2;
  std::string mechanism = "madlib";
  double epsilon = 1.0;
  double lambda = 0.2;
  double t = 0.5;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 0;
  std::string out = "-";
  bool pretty = false;
};

int run_verify(const VerifyArgs& a) {
  const auto m = load_model(a.model, true);
  MechanismConfig cfg;
  cfg.kind = mechanism_from_name(a.mechanism);
  cfg.epsilon = a.epsilon;
  cfg.lambda = a.lambda;
  cfg.t = a.t;
  cfg.seed = a.seed;
  const auto report = verify_dp_ratio(m, cfg, a.w, a.w2, a.samples);
  if (a.pretty) {
    std::string text;
    text += "mechanism " + report.mechanism + "  " + report.w + " vs " +
            report.w2 + "  epsilon " + std::to_string(report.epsilon) + "\n";
    text += "distance " + std::to_string(report.distance) + "  bound " +
            std::to_string(report.bound) + "  max log-ratio " +
            std::to_string(report.max_log_ratio) + "  " +
            (report.pass ? "PASS" : "FAIL") + "\n";
    for (const auto& e : report.entries) {
      char line[160];
      std::snprintf(line, sizeof(line),
                    "  %-20s %8llu %8llu  ratio %.4f  slack %.4f%s",
                    e.output.c_str(),
                    static_cast<unsigned long long>(e.count_w),
                    static_cast<unsigned long long>(e.count_w2), e.log_ratio,
                    e.slack, e.conclusive ? "" : "  (inconclusive)");
      text += std::string(line) + "\n";
    }
    text.pop_back();
    emit_report(text, a.out);
  } else {
    emit_report(report.to_json(), a.out);
  }
  return 0;
}

// ------------------------------------------------------------ budget-table

struct BudgetArgs {
  std::vector<double> epsilons = {0.1, 0.5, 1, 5, 10, 15, 25, 50};
  std::vector<std::string> datasets = {"CoLA=7.80",    "MRPC=19.54",
                                       "RTE=44.48",    "SST2=8.82",
                                       "Trustpilot=52.16", "Yelp=186.87"};
  std::string out = "-";
  bool pretty = false;
};

int run_budget(const BudgetArgs& a) {
  struct Row {
    std::string name;
    double avg = 0.0;
  };
  std::vector<Row> rows;
  for (const auto& spec : a.datasets) {
    const auto pos = spec.find('=');
    if (pos == std::string::npos)
      throw Error("dataset spec must be name=avg_words: " + spec);
    Row r;
    r.name = spec.substr(0, pos);
    try {
      r.avg = std::stod(spec.substr(pos + 1));
    } catch (const std::exception&) {
      throw Error("bad average in dataset spec: " + spec);
    }
    if (r.avg <= 0.0) throw Error("average must be positive: " + spec);
    rows.push_back(std::move(r));
  }

  if (a.pretty) {
    std::string text = "base_eps";
    for (const auto& r : rows) text += "\t" + r.name;
    text += "\n";
    for (const double e : a.epsilons) {
      char cell[48];
      std::snprintf(cell, sizeof(cell), "%g", e);
      text += cell;
      for (const auto& r : rows) {
        std::snprintf(cell, sizeof(cell), "\t%.2f", doc_budget(e, r.avg));
        text += cell;
      }
      text += "\n";
    }
    text.pop_back();
    emit_report(text, a.out);
    return 0;
  }

  nlohmann::ordered_json j;
  j["epsilons"] = a.epsilons;
  auto datasets = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json d;
    d["name"] = r.name;
    d["avg_words"] = r.avg;
    auto budgets = nlohmann::ordered_json::array();
    for (const double e : a.epsilons) budgets.push_back(doc_budget(e, r.avg));
    d["budgets"] = budgets;
    datasets.push_back(d);
  }
  j["datasets"] = datasets;
  emit_report(j.dump(2), a.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"collocation-level text privatization"};
  app.require_subcommand(1);

  ExtractArgs ex;
  auto* extract = app.add_subcommand(
      "extract", "count n-grams and write PMI-filtered tables");
  extract->add_option("--input", ex.input, "corpus (.txt/.jsonl[.gz])")
      ->required();
  extract->add_option("--field", ex.field, "JSONL text field");
  extract->add_option("--bigrams-out", ex.bigrams_out, "bigram table path");
  extract->add_option("--trigrams-out", ex.trigrams_out,
                      "trigram table path");
  extract->add_option("--min-count", ex.min_count, "minimum n-gram count");
  extract->add_option("--min-pmi", ex.min_pmi, "minimum PMI in bits");
  extract->add_option("--stopwords", ex.stopwords, "connector word file");
  extract->add_option("--out", ex.out, "summary destination");
  extract->add_flag("--pretty", ex.pretty, "human-readable summary");

  TokenizeArgs tk;
  auto* tokenize = app.add_subcommand(
      "tokenize", "emit collocation tokens, one line per sentence");
  tokenize->add_option("--input", tk.input, "corpus path")->required();
  tokenize->add_option("--field", tk.field, "JSONL text field");
  tokenize->add_option("--bigrams", tk.bigrams, "bigram table")->required();
  tokenize->add_option("--trigrams", tk.trigrams, "trigram table")
      ->required();
  tokenize
      ->add_option("--algorithm", tk.algorithm, "gst or mst")
      ->check(CLI::IsMember({"gst", "mst"}));
  tokenize->add_option("--out", tk.out, "token lines destination");

  PrivatizeArgs pv;
  auto* privatize = app.add_subcommand(
      "privatize", "apply a metric-DP mechanism to every document");
  privatize->add_option("--input", pv.input, "corpus path")->required();
  privatize->add_option("--field", pv.field, "JSONL text field");
  privatize
      ->add_option("--strategy", pv.strategy, "budget strategy")
      ->check(CLI::IsMember({"s1", "s2", "s3", "s4"}));
  privatize
      ->add_option("--epsilon", pv.epsilon, "base epsilon per word")
      ->check(CLI::PositiveNumber);
  privatize->add_option("--bigrams", pv.bigrams, "bigram table");
  privatize->add_option("--trigrams", pv.trigrams, "trigram table");
  privatize->add_option("--model", pv.model, "collocation embedding model");
  privatize->add_option("--word-model", pv.word_model,
                        "word embedding model (s1)");
  privatize->add_option("--stopwords", pv.stopwords, "connector word file");
  privatize
      ->add_option("--mechanism", pv.mechanism, "noise mechanism")
      ->check(CLI::IsMember({"madlib", "mahalanobis", "vickrey"}));
  privatize->add_option("--lambda", pv.lambda, "mahalanobis blend")
      ->check(CLI::Range(0.0, 1.0));
  privatize->add_option("--t", pv.t, "vickrey tuning")
      ->check(CLI::Range(0.0, 1.0));
  privatize->add_option("--seed", pv.seed, "random seed");
  privatize->add_option("--avg-words", pv.avg_words,
                        "override dataset average words per text");
  privatize->add_flag("--normalize", pv.normalize_vectors,
                      "unit-normalize embedding rows");
  privatize->add_option("--out", pv.out, "records destination (JSONL)");
  privatize->add_flag("--pretty", pv.pretty, "human-readable summary");

  EvaluateArgs ev;
  auto* evaluate = app.add_subcommand(
      "evaluate", "compare privatized output with its source");
  evaluate->add_option("--privatized", ev.privatized, "privatized JSONL")
      ->required();
  evaluate->add_option("--model", ev.model, "embedding model")->required();
  evaluate->add_option("--original", ev.original,
                       "original corpus (defaults to record tokens)");
  evaluate->add_option("--field", ev.field, "JSONL text field");
  evaluate->add_option("--target-vocab", ev.target_vocab,
                       "word list for vocabulary-match counts");
  evaluate->add_option("--out", ev.out, "report destination");
  evaluate->add_flag("--pretty", ev.pretty, "human-readable report");

  VerifyArgs vf;
  auto* verify = app.add_subcommand(
      "verify-dp", "estimate output ratios for a token pair");
  verify->add_option("--model", vf.model, "embedding model")->required();
  verify->add_option("--w", vf.w, "first token")->required();
  verify->add_option("--w2", vf.w2, "second token")->required();
  verify
      ->add_option("--mechanism", vf.mechanism, "noise mechanism")
      ->check(CLI::IsMember({"madlib", "mahalanobis", "vickrey"}));
  verify->add_option("--epsilon", vf.epsilon, "per-token epsilon")
      ->check(CLI::PositiveNumber);
  verify->add_option("--lambda", vf.lambda, "mahalanobis blend")
      ->check(CLI::Range(0.0, 1.0));
  verify->add_option("--t", vf.t, "vickrey tuning")
      ->check(CLI::Range(0.0, 1.0));
  verify->add_option("--samples", vf.samples, "draws per token")
      ->check(CLI::PositiveNumber);
  verify->add_option("--seed", vf.seed, "random seed");
  verify->add_option("--out", vf.out, "report destination");
  verify->add_flag("--pretty", vf.pretty, "human-readable report");

  BudgetArgs bt;
  auto* budget = app.add_subcommand(
      "budget-table", "document budgets for base epsilons and datasets");
  budget->add_option("--epsilons", bt.epsilons, "base epsilon grid")
      ->delimiter(',');
  budget->add_option("--datasets", bt.datasets, "name=avg_words pairs")
      ->delimiter(',');
  budget->add_option("--out", bt.out, "table destination");
  budget->add_flag("--pretty", bt.pretty, "human-readable table");

  try {
    app.parse(argc, argv);
    if (extract->parsed()) return run_extract(ex);
    if (tokenize->parsed()) return run_tokenize(tk);
    if (privatize->parsed()) return run_privatize(pv);
    if (evaluate->parsed()) return run_evaluate(ev);
    if (verify->parsed()) return run_verify(vf);
    if (budget->parsed()) return run_budget(bt);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const collodp::Error& e) {
    std::fprintf(stderr, "collodp: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "collodp: %s\n", e.what());
    return 2;
  }
  return 0;
}
