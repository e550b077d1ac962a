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
//
// Release gate: every check below must print [PASS]. Each one exercises a
// user-visible guarantee end to end, with tolerances stated inline.

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "collodp/collocations.hpp"
#include "collodp/corpus.hpp"
#include "collodp/eval.hpp"
#include "collodp/mechanisms.hpp"
#include "collodp/parallel.hpp"
#include "collodp/pipeline.hpp"
#include "collodp/tokenize.hpp"

using namespace collodp;

namespace {

struct CheckFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool cond, const std::string& msg) {
  if (!cond) throw CheckFailure(msg);
}

std::string work_dir() {
  return std::string(COLLODP_SOURCE_DIR) + "/build/acceptance_work";
}

struct CliResult {
  int code = -1;
  std::string out;
};

CliResult run_cli(const std::string& args) {
  const std::string cmd = std::string(COLLODP_CLI) + " " + args + " 2>" +
                          work_dir() + "/stderr.txt";
  CliResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  require(pipe != nullptr, "popen failed");
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ------------------------------------------------------------------------
// n-gram counting and PMI against a brute-force oracle.

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::string check_pmi_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<std::string> vocab = {
      "ant", "bee", "cat", "dog", "eel", "fox", "gnu", "hen", "ibis", "jay",
      "kit", "lark", "mole", "newt", "owl", "pig", "the", "of"};
  const ConnectorList connectors = ConnectorList::from_words({"the", "of"});
  SplitRng rng(0xacce1);
  std::size_t ngrams_checked = 0;

  for (int corpus = 0; corpus < 50; ++corpus) {
    std::string text;
    const std::size_t words = 30 + rng.next_u64() % 471;  // up to 500
    for (std::size_t i = 0; i < words; ++i) {
      if (i) text.push_back(' ');
      text += vocab[rng.next_u64() % vocab.size()];
      if (rng.uniform01() < 0.12) text.push_back('.');
    }
    const auto sentences = split_sentences(normalize(text));
    CountTable table;
    for (const auto& s : sentences) table.add(s);

    // Oracle: naive window counts per sentence.
    std::map<std::string, std::uint64_t> uni, bi, tri;
    std::uint64_t total = 0;
    for (const auto& s : sentences) {
      const auto& w = s.words;
      total += w.size();
      for (std::size_t i = 0; i < w.size(); ++i) {
        ++uni[w[i]];
        if (i + 1 < w.size()) ++bi[w[i] + " " + w[i + 1]];
        if (i + 2 < w.size())
          ++tri[w[i] + " " + w[i + 1] + " " + w[i + 2]];
      }
    }
    require(table.total_words() == total, "total word count mismatch");
    for (const auto& [key, count] : uni)
      require(table.unigram(key) == count, "unigram count mismatch: " + key);
    for (const auto& [key, count] : bi) {
      std::istringstream ss(key);
      std::string x, y;
      ss >> x >> y;
      require(table.bigram(x, y) == count, "bigram count mismatch: " + key);
      const double want =
          std::log2(double(total) * double(count) /
                    (double(uni.at(x)) * double(uni.at(y))));
      require(std::abs(pmi_bigram(table, x, y) - want) < 1e-9,
              "bigram PMI mismatch: " + key);
      ++ngrams_checked;
    }
    for (const auto& [key, count] : tri) {
      std::istringstream ss(key);
      std::string x, y, z;
      ss >> x >> y >> z;
      require(table.trigram(x, y, z) == count,
              "trigram count mismatch: " + key);
      const double want = std::log2(
          double(total) * double(total) * double(count) /
          (double(uni.at(x)) * double(uni.at(y)) * double(uni.at(z))));
      require(std::abs(pmi_trigram(table, x, y, z) - want) < 1e-9,
              "trigram PMI mismatch: " + key);
      ++ngrams_checked;
    }

    // Filtering agrees with a direct enumeration.
    const double min_pmi = 1.5;
    const std::uint64_t min_count = 2;
    const auto filtered = filter_table(table, min_pmi, min_count, connectors);
    std::map<std::string, std::pair<std::uint64_t, double>> want;
    auto consider = [&](const std::string& key, std::uint64_t count,
                        double pmi, bool has_connector) {
      if (count < min_count || pmi < min_pmi || has_connector) return;
      want[key] = {count, pmi};
    };
    for (const auto& [key, count] : bi) {
      std::istringstream ss(key);
      std::string x, y;
      ss >> x >> y;
      consider(key, count, pmi_bigram(table, x, y),
               connectors.contains(x) || connectors.contains(y));
    }
    for (const auto& [key, count] : tri) {
      std::istringstream ss(key);
      std::string x, y, z;
      ss >> x >> y >> z;
      consider(key, count, pmi_trigram(table, x, y, z),
               connectors.contains(x) || connectors.contains(y) ||
                   connectors.contains(z));
    }
    require(filtered.size() == want.size(), "filtered entry count mismatch");
    for (const auto& e : filtered.entries()) {
      const auto key = ScoredTable::join_words(e.words);
      const auto it = want.find(key);
      require(it != want.end(), "unexpected filtered entry: " + key);
      require(e.count == it->second.first, "filtered count mismatch: " + key);
      require(std::abs(e.pmi - it->second.second) < 1e-9,
              "filtered PMI mismatch: " + key);
    }
  }
  require(seconds_since(t0) < 10.0, "budget of 10s exceeded");
  return "50 corpora, " + std::to_string(ngrams_checked) +
         " n-grams, counts exact, PMI within 1e-9";
}

// ------------------------------------------------------------------------
// Tokenizer hand traces plus fuzzed invariants.

std::vector<std::string> surfaces(const Tokenization& t) {
  std::vector<std::string> out;
  for (const auto& tok : t.tokens) out.push_back(tok.surface);
  return out;
}

std::string check_tokenizer() {
  const auto t0 = std::chrono::steady_clock::now();
  const ScoredTable bigrams({{{"big", "apple"}, 5, 3.0},
                             {{"new", "york"}, 9, 4.5},
                             {{"york", "city"}, 6, 4.0}},
                            -100.0, 1, 1000);
  const ScoredTable trigrams({{{"new", "york", "city"}, 4, 4.0}}, -100.0, 1,
                             1000);

  auto sent = [](const std::string& text) {
    const auto s = split_sentences(normalize(text));
    require(s.size() == 1, "fixture should be one sentence");
    return s[0];
  };
  require(surfaces(gst(sent("the big apple is nice"), bigrams, trigrams)) ==
              std::vector<std::string>{"the", "big_apple", "is", "nice"},
          "greedy trace mismatch on the big apple fixture");
  require(surfaces(gst(sent("new york city"), bigrams, trigrams)) ==
              std::vector<std::string>{"new_york_city"},
          "greedy trace should take the trigram");
  require(surfaces(mst(sent("new york city"), bigrams, trigrams)) ==
              std::vector<std::string>{"new_york", "city"},
          "max-score trace should prefer the higher-PMI bigram");

  // Fuzz: partition invariants on random sentences and random tables.
  SplitRng rng(0xacce2);
  const std::vector<std::string> vocab = {"a", "b", "c", "d",
                                          "e", "f", "g", "h"};
  ScoredTable fuzz_bi, fuzz_tri;
  for (int iter = 0; iter < 10000; ++iter) {
    if (iter % 500 == 0) {
      std::vector<ScoredEntry> be, te;
      for (int k = 0; k < 6; ++k) {
        be.push_back({{vocab[rng.next_u64() % 8], vocab[rng.next_u64() % 8]},
                      3,
                      1.0 + rng.uniform01() * 5});
        te.push_back({{vocab[rng.next_u64() % 8], vocab[rng.next_u64() % 8],
                       vocab[rng.next_u64() % 8]},
                      3,
                      1.0 + rng.uniform01() * 5});
      }
      fuzz_bi = ScoredTable(be, 0.0, 1, 1000);
      fuzz_tri = ScoredTable(te, 0.0, 1, 1000);
    }
    Sentence s;
    const std::size_t n = 1 + rng.next_u64() % 12;
    for (std::size_t i = 0; i < n; ++i)
      s.words.push_back(vocab[rng.next_u64() % 8]);
    s.word_begin = 0;
    s.word_end = n;
    for (const bool use_mst : {false, true}) {
      const auto t = use_mst ? mst(s, fuzz_bi, fuzz_tri)
                             : gst(s, fuzz_bi, fuzz_tri);
      std::size_t pos = 0, words = 0;
      bool multi = false;
      for (const auto& tok : t.tokens) {
        require(tok.start == pos, "tokens must tile the sentence");
        require(tok.end == tok.start + tok.word_len, "token span mismatch");
        pos = tok.end;
        words += tok.word_len;
        multi = multi || tok.word_len > 1;
      }
      require(pos == n && words == n, "tokens must cover every word");
      require(t.tokens.size() <= n, "token count may not exceed words");
      require((t.tokens.size() == n) == !multi,
              "token count equals words exactly when no collocation fired");
    }
  }
  require(seconds_since(t0) < 30.0, "budget of 30s exceeded");
  return "hand traces exact; 10^4 fuzzed sentences tiled for gst and mst";
}

// ------------------------------------------------------------------------
// Appendix budget table through the CLI.

std::string check_budget_table() {
  const std::vector<std::string> names = {"CoLA", "MRPC",       "RTE",
                                          "SST2", "Trustpilot", "Yelp"};
  const std::vector<double> eps = {0.1, 0.5, 1, 5, 10, 15, 25, 50};
  // Printed appendix cells, row-major by dataset.
  const std::map<std::string, std::vector<double>> printed = {
      {"CoLA", {0.78, 3.9, 7.8, 38.99, 77.99, 116.98, 194.96, 389.93}},
      {"MRPC", {1.95, 9.77, 19.54, 97.72, 195.44, 195.44, 488.6, 977.21}},
      {"RTE", {4.45, 22.24, 44.48, 222.41, 444.82, 667.23, 1112.06, 2224.12}},
      {"SST2", {0.88, 4.41, 8.82, 44.11, 88.22, 132.33, 220.56, 441.12}},
      {"Trustpilot",
       {5.22, 26.08, 52.16, 260.81, 521.61, 782.42, 1304.03, 2608.05}},
      {"Yelp",
       {18.69, 93.43, 186.87, 934.34, 1868.68, 2803.02, 4671.7, 9343.41}}};

  const auto r = run_cli("budget-table");
  require(r.code == 0, "budget-table exited nonzero");
  const auto j = nlohmann::json::parse(r.out);
  require(j["epsilons"].size() == 8, "unexpected epsilon grid");
  require(j["datasets"].size() == 6, "unexpected dataset list");

  std::size_t matched = 0;
  for (const auto& d : j["datasets"]) {
    const std::string name = d["name"];
    const auto& want = printed.at(name);
    for (std::size_t i = 0; i < eps.size(); ++i) {
      const double got = d["budgets"][i].get<double>();
      if (name == "MRPC" && eps[i] == 15.0) {
        // The printed cell repeats the eps=10 value; the caption formula
        // (avg words x base epsilon) gives 293.10, which we produce.
        require(std::abs(got - 293.10) / 293.10 < 0.005,
                "MRPC eps=15 should follow the caption formula");
        continue;
      }
      require(std::abs(got - want[i]) / want[i] < 0.005,
              name + " eps=" + std::to_string(eps[i]) + ": got " +
                  std::to_string(got) + " want " + std::to_string(want[i]));
      ++matched;
    }
  }
  return std::to_string(matched) +
         "/48 printed cells within 0.5%; MRPC eps=15 printed 195.44 "
         "duplicates its eps=10 neighbor (formula gives 293.10)";
}

// ------------------------------------------------------------------------
// Relative gain against the published privacy tables.

std::string check_relative_gain() {
  struct Block {
    const char* dataset;
    double u_o, p_o;
    std::vector<double> u_p, p_p, printed;
  };
  const std::vector<Block> blocks = {
      {"Yelp S1", 81.76, 90.60, std::vector<double>(8, 48.1),
       {56.4, 58.9, 59.7, 59.6, 59.0, 62.1, 60.4, 59.2},
       {-0.03, -0.06, -0.07, -0.07, -0.06, -0.10, -0.08, -0.07}},
      {"Yelp S2", 81.76, 90.60,
       {48.1, 48.1, 48.1, 48.1, 48.1, 50.3, 76.5, 79.4},
       {44.1, 44.0, 42.9, 50.6, 55.0, 63.6, 71.6, 82.2},
       {0.10, 0.10, 0.11, 0.03, -0.02, -0.09, 0.15, 0.06}},
      {"Yelp S3", 81.76, 90.60,
       {48.1, 48.1, 48.1, 48.1, 55.2, 58.8, 69.1, 79.4},
       {40.9, 45.5, 39.2, 54.9, 60.9, 67.4, 77.5, 82.8},
       {0.14, 0.09, 0.16, -0.02, 0.00, -0.02, -0.01, 0.06}},
      {"Yelp S4", 81.76, 90.60,
       {48.1, 48.1, 48.1, 48.1, 48.1, 48.1, 48.1, 53.1},
       {42.5, 45.0, 42.0, 52.6, 56.8, 57.4, 61.7, 66.9},
       {0.12, 0.09, 0.12, 0.01, -0.04, -0.05, -0.09, -0.09}},
      {"Trustpilot S1", 98.49, 68.70,
       {48.1, 50.9, 48.1, 48.5, 48.1, 48.1, 50.8, 68.6},
       {58.1, 57.9, 57.9, 58.7, 57.6, 57.6, 57.1, 60.5},
       {-0.36, -0.32, -0.35, -0.36, -0.35, -0.35, -0.32, -0.18}},
      {"Trustpilot S2", 98.49, 68.70,
       {48.1, 48.1, 48.1, 63.9, 87.8, 94.1, 96.7, 97.6},
       {57.9, 57.6, 58.5, 57.9, 64.1, 64.3, 68.2, 68.7},
       {-0.35, -0.35, -0.36, -0.19, -0.04, 0.02, -0.01, -0.01}},
      {"Trustpilot S3", 98.49, 68.70,
       {48.1, 48.1, 48.1, 83.4, 93.1, 94.9, 97.8, 98.4},
       {57.9, 57.9, 57.9, 61.3, 66.6, 66.6, 68.2, 65.1},
       {-0.35, -0.35, -0.35, -0.05, -0.02, -0.01, 0.00, 0.05}},
      {"Trustpilot S4", 98.49, 68.70,
       {48.1, 48.1, 48.1, 54.3, 78.4, 86.3, 95.4, 95.1},
       {58.4, 58.7, 58.5, 59.4, 62.9, 62.1, 62.8, 66.9},
       {-0.36, -0.37, -0.36, -0.31, -0.12, -0.02, 0.05, -0.01}}};
  const std::vector<double> eps = {0.1, 0.5, 1, 5, 10, 15, 25, 50};
  // Two printed cells differ in the second decimal because the published
  // F1 inputs are rounded to one decimal; they stay within one print unit.
  const std::set<std::pair<std::string, double>> off_by_rounding = {
      {"Trustpilot S1", 0.5}, {"Trustpilot S4", 15}};

  std::size_t exact = 0;
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < 8; ++i) {
      const double rg = relative_gain(b.u_p[i], b.u_o, b.p_p[i], b.p_o);
      const long long rounded = std::llround(rg * 100.0);
      const long long want = std::llround(b.printed[i] * 100.0);
      if (off_by_rounding.count({b.dataset, eps[i]})) {
        require(std::abs(rg - b.printed[i]) <= 0.011,
                std::string(b.dataset) + " eps=" + std::to_string(eps[i]) +
                    " drifted past one print unit");
        continue;
      }
      require(rounded == want,
              std::string(b.dataset) + " eps=" + std::to_string(eps[i]) +
                  ": got " + std::to_string(rg) + " want " +
                  std::to_string(b.printed[i]));
      ++exact;
    }
  }
  const double anchor1 = relative_gain(48.1, 81.76, 56.4, 90.60);
  const double anchor2 = relative_gain(48.1, 81.76, 40.9, 90.60);
  require(std::llround(anchor1 * 100) == -3, "anchor -0.03 failed");
  require(std::llround(anchor2 * 100) == 14, "anchor 0.14 failed");
  return std::to_string(exact) +
         "/64 cells exact at 2 dp; 2 known cells within one print unit "
         "(1-dp published inputs)";
}

// ------------------------------------------------------------------------
// Empirical output-ratio bound on the toy model.

EmbeddingModel toy_model() {
  return EmbeddingModel::from_rows(
      {"a", "b", "c", "d", "e"},
      {{0, 0}, {1, 0}, {0, 1}, {-1, 0}, {0, -1}});
}

std::string check_dp_ratio() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto m = toy_model();
  const std::vector<std::string> toks = {"a", "b", "c", "d", "e"};
  struct Job {
    double eps;
    std::string w, w2;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  std::uint64_t seed = 1000;
  for (const double eps : {0.5, 2.0})
    for (const auto& w : toks)
      for (const auto& w2 : toks)
        if (w != w2) jobs.push_back({eps, w, w2, seed++});

  std::vector<std::string> problems(jobs.size());
  std::vector<double> margins(jobs.size());
  parallel_for(jobs.size(), thread_count(), [&](std::size_t i) {
    const auto& job = jobs[i];
    MechanismConfig cfg{MechanismKind::kMadlib, job.eps, 0.2, 0.5, job.seed};
    const auto report = verify_dp_ratio(m, cfg, job.w, job.w2, 500000);
    margins[i] = report.bound + 0.1 - report.max_log_ratio;
    if (report.bound != job.eps * distance(m, job.w, job.w2))
      problems[i] = "bound must equal eps times distance";
    else if (report.max_log_ratio > report.bound + 0.1)
      problems[i] = job.w + " vs " + job.w2 + " at eps " +
                    std::to_string(job.eps) + ": max log-ratio " +
                    std::to_string(report.max_log_ratio) + " above bound " +
                    std::to_string(report.bound) + " + 0.1";
  });
  double worst_margin = 1e9;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    require(problems[i].empty(), problems[i]);
    worst_margin = std::min(worst_margin, margins[i]);
  }
  require(seconds_since(t0) < 120.0, "budget of 2min exceeded");
  char note[128];
  std::snprintf(note, sizeof(note),
                "40 ordered pairs x 5x10^5 samples; worst margin %.3f",
                worst_margin);
  return note;
}

// ------------------------------------------------------------------------
// Noise law calibration.

std::string check_noise_calibration() {
  const std::size_t d = 300;
  const double eps = 10.0;
  SplitRng rng(0xacce3);
  double sum = 0.0, sum2 = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const auto z = sample_noise(d, eps, rng);
    double norm2 = 0.0;
    for (const double v : z) norm2 += v * v;
    const double norm = std::sqrt(norm2);
    sum += norm;
    sum2 += norm2;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  require(std::abs(mean - d / eps) / (d / eps) < 0.02,
          "norm mean off by more than 2%: " + std::to_string(mean));
  require(std::abs(var - d / (eps * eps)) / (d / (eps * eps)) < 0.05,
          "norm variance off by more than 5%: " + std::to_string(var));

  const auto m = toy_model();
  Mechanism mech(m, {MechanismKind::kMadlib, 1e6, 0.2, 0.5, 0});
  SplitRng prng(0xacce4);
  const std::vector<std::string> toks = {"a", "b", "c", "d", "e"};
  for (int i = 0; i < 10000; ++i) {
    require(mech.perturb(toks[i % 5], prng).self_substituted,
            "self-substitution must be total at eps 10^6");
  }
  char note[160];
  std::snprintf(note, sizeof(note),
                "norm mean %.3f (target 30, 2%%), variance %.3f (target 3, "
                "5%%); 10^4/10^4 self-substitutions at eps=10^6",
                mean, var);
  return note;
}

// ------------------------------------------------------------------------
// Monotone privacy-utility trend on a synthetic corpus.

struct TrendCorpus {
  std::vector<Document> docs;
  ScoredTable bigrams, trigrams;
  EmbeddingModel words, colls;
};

TrendCorpus build_trend_corpus() {
  SplitRng rng(0x7e4d);
  std::vector<std::string> fillers;
  for (int i = 0; i < 30; ++i) fillers.push_back("f" + std::to_string(i));
  const std::vector<std::pair<std::string, std::string>> pairs = {
      {"p0", "q0"}, {"p1", "q1"}, {"p2", "q2"}, {"p3", "q3"}, {"p4", "q4"}};
  const std::vector<std::string> triple = {"r0", "s0", "t0"};

  TrendCorpus c;
  for (int di = 0; di < 500; ++di) {
    std::string text;
    const int len = 8 + int(rng.next_u64() % 7);
    int words = 0;
    while (words < len) {
      if (!text.empty()) text.push_back(' ');
      const double u = rng.uniform01();
      if (u < 0.60) {
        text += fillers[rng.next_u64() % fillers.size()];
        words += 1;
      } else if (u < 0.78) {
        const auto& p = pairs[rng.next_u64() % pairs.size()];
        text += p.first + " " + p.second;
        words += 2;
      } else if (u < 0.90) {
        text += "the";
        words += 1;
      } else {
        text += triple[0] + " " + triple[1] + " " + triple[2];
        words += 3;
      }
      if (words < len && rng.uniform01() < 0.15) text.push_back('.');
    }
    text.push_back('.');
    c.docs.push_back({"doc" + std::to_string(di), text});
  }

  CountTable counts;
  for (const auto& d : c.docs)
    for (const auto& s : split_sentences(normalize(d.text))) counts.add(s);
  const auto table =
      filter_table(counts, 2.0, 5, ConnectorList::builtin());
  c.bigrams = table.subset(2);
  c.trigrams = table.subset(3);

  std::vector<std::string> word_vocab = fillers;
  for (const auto& p : pairs) {
    word_vocab.push_back(p.first);
    word_vocab.push_back(p.second);
  }
  for (const auto& w : triple) word_vocab.push_back(w);
  word_vocab.push_back("the");
  c.words = synth_model(word_vocab, 16, 500);

  std::vector<std::string> coll_vocab = word_vocab;
  for (const auto& e : table.entries()) {
    std::string joined;
    for (const auto& w : e.words) {
      if (!joined.empty()) joined.push_back('_');
      joined += w;
    }
    coll_vocab.push_back(joined);
  }
  c.colls = synth_model(coll_vocab, 16, 501);
  return c;
}

std::string check_monotone_trend() {
  const auto c = build_trend_corpus();
  require(c.bigrams.size() >= 5, "trend corpus lost its planted bigrams");
  require(c.trigrams.size() >= 1, "trend corpus lost its planted trigram");

  const std::vector<double> eps_grid = {0.1, 1.0, 10.0, 100.0};
  const double avg = average_words_per_text(c.docs);
  std::size_t total_inversions = 0;

  for (const auto strat : {Strategy::kS1, Strategy::kS3}) {
    for (const std::uint64_t seed : {11u, 22u, 33u}) {
      std::vector<double> rates, cosines;
      for (const double eps : eps_grid) {
        StrategyConfig cfg;
        cfg.strategy = strat;
        cfg.base_epsilon = eps;
        cfg.connectors = ConnectorList::builtin();
        cfg.bigrams = &c.bigrams;
        cfg.trigrams = &c.trigrams;
        cfg.word_model = &c.words;
        cfg.coll_model = &c.colls;
        const auto& model = *cfg.active_model();
        const Mechanism mech(model, cfg.mechanism);
        const SplitRng base(seed);

        std::size_t self_subs = 0, privatized = 0;
        std::vector<EvalRecord> orig, priv;
        for (const auto& doc : c.docs) {
          const auto rec = privatize_document(doc, cfg, mech, avg, base);
          self_subs += rec.self_subs;
          privatized += rec.privatized_tokens();
          orig.push_back({rec.id, rec.tokens});
          priv.push_back({rec.id, rec.output_tokens});
        }
        rates.push_back(double(self_subs) / double(privatized));
        cosines.push_back(evaluate(orig, priv, model).cosine_mean);
      }
      for (const auto& series : {rates, cosines}) {
        std::size_t inversions = 0;
        for (std::size_t i = 1; i < series.size(); ++i)
          if (series[i] < series[i - 1]) ++inversions;
        require(inversions <= 1,
                strategy_name(strat) + " seed " + std::to_string(seed) +
                    ": more than one inversion across the epsilon grid");
        require(series.back() > series.front(),
                strategy_name(strat) + " seed " + std::to_string(seed) +
                    ": no upward trend");
        total_inversions += inversions;
      }
      require(rates.back() > 0.95,
              "self-substitution should saturate at eps 100");
    }
  }
  return "S1 and S3, 3 seeds, 500 docs: self-substitution and cosine rise "
         "with eps (" +
         std::to_string(total_inversions) +
         " inversions total); published absolute scores need corpus-trained "
         "300-d models plus transformer fine-tuning and are out of scope";
}

// ------------------------------------------------------------------------
// Mechanism reductions.

std::string check_reductions() {
  const auto m = toy_model();
  Mechanism madlib(m, {MechanismKind::kMadlib, 1.5, 0.2, 0.5, 0});
  Mechanism vick0(m, {MechanismKind::kVickrey, 1.5, 0.2, 0.0, 0});
  Mechanism maha0(m, {MechanismKind::kMahalanobis, 1.5, 0.0, 0.5, 0});
  const std::vector<std::string> toks = {"a", "b", "c", "d", "e"};
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const auto& tok = toks[seed % toks.size()];
    SplitRng r1(seed), r2(seed), r3(seed);
    const auto base = madlib.perturb(tok, r1);
    const auto v = vick0.perturb(tok, r2);
    const auto h = maha0.perturb(tok, r3);
    require(base.output == v.output, "vickrey t=0 diverged from madlib");
    require(base.output == h.output,
            "mahalanobis lambda=0 diverged from madlib");
    require(base.noise_norm == h.noise_norm,
            "mahalanobis lambda=0 noise must be bit-identical");
  }
  return "500 shared-seed draws: vickrey(t=0) and mahalanobis(lambda=0) "
         "equal madlib exactly";
}

// ------------------------------------------------------------------------
// Batch determinism and parallel invariance.

std::string check_determinism() {
  const auto c = build_trend_corpus();
  std::vector<Document> docs(c.docs.begin(), c.docs.begin() + 120);
  StrategyConfig cfg;
  cfg.strategy = Strategy::kS4;
  cfg.base_epsilon = 1.0;
  cfg.connectors = ConnectorList::builtin();
  cfg.bigrams = &c.bigrams;
  cfg.trigrams = &c.trigrams;
  cfg.coll_model = &c.colls;
  cfg.mechanism.kind = MechanismKind::kVickrey;

  auto run = [&](const char* threads, const std::string& name) {
    setenv("COLLODP_THREADS", threads, 1);
    const auto path = work_dir() + "/" + name;
    {
      LineWriter out(path);
      (void)privatize_dataset(docs, cfg, 20260823, out);
    }
    unsetenv("COLLODP_THREADS");
    return read_file(path);
  };
  const auto a = run("1", "det_a.jsonl");
  const auto b = run("1", "det_b.jsonl");
  const auto p = run("8", "det_p.jsonl");
  require(!a.empty(), "no output produced");
  require(a == b, "rerun with the same seed changed the output");
  require(a == p, "worker count changed the output");
  return "120 docs, rerun and 1-vs-8 workers byte-identical (" +
         std::to_string(a.size()) + " bytes)";
}

}  // namespace

int main() {
  std::filesystem::create_directories(work_dir());
  struct Criterion {
    const char* name;
    std::function<std::string()> fn;
  };
  const std::vector<Criterion> criteria = {
      {"pmi-oracle-equivalence", check_pmi_oracle},
      {"tokenizer-traces", check_tokenizer},
      {"budget-table-reproduction", check_budget_table},
      {"relative-gain-reproduction", check_relative_gain},
      {"metric-dp-ratio-bound", check_dp_ratio},
      {"noise-calibration", check_noise_calibration},
      {"monotone-privacy-utility-trend", check_monotone_trend},
      {"mechanism-reductions", check_reductions},
      {"determinism-parallel-invariance", check_determinism},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const std::string note = c.fn();
      const double secs = std::chrono::duration<double>(
                              std::chrono::steady_clock::now() - t0)
                              .count();
      std::printf("[PASS] %s: %s (%.1fs)\n", c.name, note.c_str(), secs);
    } catch (const std::exception& e) {
      std::printf("[FAIL] %s: %s\n", c.name, e.what());
      ++failures;
    }
    std::fflush(stdout);
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures ? 1 : 0;
}
