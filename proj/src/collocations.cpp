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

#include "collodp/collocations.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>

#include "collodp/errors.hpp"
#include "collodp/io.hpp"

namespace collodp {

namespace {

std::uint64_t pack_pair(std::uint32_t a, std::uint32_t b) {
  return (std::uint64_t(a) << 32) | b;
}

std::string join2(std::string_view x, std::string_view y) {
  std::string s;
  s.reserve(x.size() + y.size() + 1);
  s.append(x);
  s.push_back(' ');
  s.append(y);
  return s;
}

std::string join3(std::string_view x, std::string_view y, std::string_view z) {
  std::string s;
  s.reserve(x.size() + y.size() + z.size() + 2);
  s.append(x);
  s.push_back(' ');
  s.append(y);
  s.push_back(' ');
  s.append(z);
  return s;
}

}  // namespace

std::uint32_t CountTable::intern(std::string_view w) {
  auto it = word_to_id_.find(w);
  if (it != word_to_id_.end()) return it->second;
  const auto id = static_cast<std::uint32_t>(id_to_word_.size());
  id_to_word_.emplace_back(w);
  word_to_id_.emplace(id_to_word_.back(), id);
  unigrams_.push_back(0);
  return id;
}

std::uint32_t CountTable::find_id(std::string_view w) const {
  auto it = word_to_id_.find(w);
  return it == word_to_id_.end() ? kNoId : it->second;
}

void CountTable::add(const Sentence& sentence) {
  const auto& words = sentence.words;
  std::vector<std::uint32_t> ids;
  ids.reserve(words.size());
  for (const auto& w : words) ids.push_back(intern(w));

  total_words_ += ids.size();
  for (std::uint32_t id : ids) ++unigrams_[id];
  for (std::size_t i = 0; i + 1 < ids.size(); ++i)
    ++bigrams_[pack_pair(ids[i], ids[i + 1])];
  for (std::size_t i = 0; i + 2 < ids.size(); ++i)
    ++trigrams_[TriKey{{ids[i], ids[i + 1], ids[i + 2]}}];
}

void CountTable::merge(const CountTable& other) {
  std::vector<std::uint32_t> remap(other.id_to_word_.size());
  for (std::size_t i = 0; i < other.id_to_word_.size(); ++i)
    remap[i] = intern(other.id_to_word_[i]);

  total_words_ += other.total_words_;
  for (std::size_t i = 0; i < other.unigrams_.size(); ++i)
    unigrams_[remap[i]] += other.unigrams_[i];
  for (const auto& [key, count] : other.bigrams_) {
    const auto a = remap[static_cast<std::uint32_t>(key >> 32)];
    const auto b = remap[static_cast<std::uint32_t>(key)];
    bigrams_[pack_pair(a, b)] += count;
  }
  for (const auto& [key, count] : other.trigrams_) {
    trigrams_[TriKey{{remap[key.ids[0]], remap[key.ids[1]],
                      remap[key.ids[2]]}}] += count;
  }
}

std::uint64_t CountTable::unigram(std::string_view w) const {
  const auto id = find_id(w);
  return id == kNoId ? 0 : unigrams_[id];
}

std::uint64_t CountTable::bigram(std::string_view x, std::string_view y) const {
  const auto a = find_id(x);
  const auto b = find_id(y);
  if (a == kNoId || b == kNoId) return 0;
  const auto it = bigrams_.find(pack_pair(a, b));
  return it == bigrams_.end() ? 0 : it->second;
}

std::uint64_t CountTable::trigram(std::string_view x, std::string_view y,
                                  std::string_view z) const {
  const auto a = find_id(x);
  const auto b = find_id(y);
  const auto c = find_id(z);
  if (a == kNoId || b == kNoId || c == kNoId) return 0;
  const auto it = trigrams_.find(TriKey{{a, b, c}});
  return it == trigrams_.end() ? 0 : it->second;
}

std::size_t CountTable::distinct_unigrams() const {
  std::size_t n = 0;
  for (auto c : unigrams_)
    if (c > 0) ++n;
  return n;
}

void CountTable::for_each_bigram(
    const std::function<void(std::string_view, std::string_view,
                             std::uint64_t)>& fn) const {
  for (const auto& [key, count] : bigrams_) {
    fn(id_to_word_[static_cast<std::uint32_t>(key >> 32)],
       id_to_word_[static_cast<std::uint32_t>(key)], count);
  }
}

void CountTable::for_each_trigram(
    const std::function<void(std::string_view, std::string_view,
                             std::string_view, std::uint64_t)>& fn) const {
  for (const auto& [key, count] : trigrams_) {
    fn(id_to_word_[key.ids[0]], id_to_word_[key.ids[1]],
       id_to_word_[key.ids[2]], count);
  }
}

std::size_t CountTable::TriHash::operator()(const TriKey& k) const {
  std::uint64_t h = 0x9e3779b97f4a7c15ull;
  for (std::uint32_t id : k.ids) {
    h ^= id + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h *= 0xff51afd7ed558ccdull;
  }
  return static_cast<std::size_t>(h ^ (h >> 33));
}

double pmi_bigram(const CountTable& t, std::string_view x,
                  std::string_view y) {
  const double n = static_cast<double>(t.total_words());
  const auto c_xy = t.bigram(x, y);
  if (c_xy == 0) throw UndefinedPmiError(join2(x, y));
  const auto c_x = t.unigram(x);
  if (c_x == 0) throw UndefinedPmiError(std::string(x));
  const auto c_y = t.unigram(y);
  if (c_y == 0) throw UndefinedPmiError(std::string(y));
  return std::log2(n * static_cast<double>(c_xy) /
                   (static_cast<double>(c_x) * static_cast<double>(c_y)));
}

double pmi_trigram(const CountTable& t, std::string_view x, std::string_view y,
                   std::string_view z) {
  const double n = static_cast<double>(t.total_words());
  const auto c_xyz = t.trigram(x, y, z);
  if (c_xyz == 0) throw UndefinedPmiError(join3(x, y, z));
  const auto c_x = t.unigram(x);
  if (c_x == 0) throw UndefinedPmiError(std::string(x));
  const auto c_y = t.unigram(y);
  if (c_y == 0) throw UndefinedPmiError(std::string(y));
  const auto c_z = t.unigram(z);
  if (c_z == 0) throw UndefinedPmiError(std::string(z));
  return std::log2(n * n * static_cast<double>(c_xyz) /
                   (static_cast<double>(c_x) * static_cast<double>(c_y) *
                    static_cast<double>(c_z)));
}

std::string ScoredTable::join_words(std::span<const std::string> words) {
  std::string s;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) s.push_back(' ');
    s.append(words[i]);
  }
  return s;
}

ScoredTable::ScoredTable(std::vector<ScoredEntry> entries, double min_pmi,
                         std::uint64_t min_count, std::uint64_t total_words)
    : entries_(std::move(entries)),
      min_pmi_(min_pmi),
      min_count_(min_count),
      total_words_(total_words) {
  std::sort(entries_.begin(), entries_.end(),
            [](const ScoredEntry& a, const ScoredEntry& b) {
              if (a.pmi != b.pmi) return a.pmi > b.pmi;
              return join_words(a.words) < join_words(b.words);
            });
  rebuild_index();
}

void ScoredTable::rebuild_index() {
  index_.clear();
  index_.reserve(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i)
    index_.emplace(join_words(entries_[i].words), i);
}

std::optional<double> ScoredTable::score(
    std::span<const std::string> words) const {
  return score(std::string_view(join_words(words)));
}

std::optional<double> ScoredTable::score(std::string_view joined) const {
  const auto it = index_.find(joined);
  if (it == index_.end()) return std::nullopt;
  return entries_[it->second].pmi;
}

ScoredTable ScoredTable::subset(std::size_t ngram_len) const {
  std::vector<ScoredEntry> kept;
  for (const auto& e : entries_)
    if (e.words.size() == ngram_len) kept.push_back(e);
  return ScoredTable(std::move(kept), min_pmi_, min_count_, total_words_);
}

ScoredTable filter_table(const CountTable& table, double min_pmi,
                         std::uint64_t min_count,
                         const ConnectorList& connectors) {
  std::vector<ScoredEntry> entries;

  table.for_each_bigram([&](std::string_view x, std::string_view y,
                            std::uint64_t count) {
    if (count < min_count) return;
    if (connectors.contains(x) || connectors.contains(y)) return;
    const double pmi = pmi_bigram(table, x, y);
    if (pmi < min_pmi) return;
    entries.push_back({{std::string(x), std::string(y)}, count, pmi});
  });

  table.for_each_trigram([&](std::string_view x, std::string_view y,
                             std::string_view z, std::uint64_t count) {
    if (count < min_count) return;
    if (connectors.contains(x) || connectors.contains(y) ||
        connectors.contains(z))
      return;
    const double pmi = pmi_trigram(table, x, y, z);
    if (pmi < min_pmi) return;
    entries.push_back(
        {{std::string(x), std::string(y), std::string(z)}, count, pmi});
  });

  return ScoredTable(std::move(entries), min_pmi, min_count,
                     table.total_words());
}

void save_table(const ScoredTable& table, const std::string& path) {
  LineWriter out(path);
  out.write_line("#N=" + std::to_string(table.total_words()));
  char buf[64];
  for (const auto& e : table.entries()) {
    std::snprintf(buf, sizeof(buf), "%.17g", e.pmi);
    out.write_line(ScoredTable::join_words(e.words) + "\t" +
                   std::to_string(e.count) + "\t" + buf);
  }
  out.flush();
}

ScoredTable load_table(const std::string& path) {
  LineReader in(path);
  std::vector<ScoredEntry> entries;
  std::uint64_t total_words = 0;
  double min_pmi = std::numeric_limits<double>::infinity();
  std::uint64_t min_count = std::numeric_limits<std::uint64_t>::max();

  std::string line;
  while (in.next(line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.rfind("#N=", 0) == 0) {
        const char* first = line.data() + 3;
        const char* last = line.data() + line.size();
        auto [p, ec] = std::from_chars(first, last, total_words);
        if (ec != std::errc() || p != last)
          throw ParseError(path, in.line_number(), "bad #N= header");
      }
      continue;
    }

    const auto tab1 = line.find('\t');
    const auto tab2 = tab1 == std::string::npos ? std::string::npos
                                                : line.find('\t', tab1 + 1);
    if (tab2 == std::string::npos)
      throw ParseError(path, in.line_number(), "expected 3 tab-separated fields");

    ScoredEntry e;
    const std::string_view words_field(line.data(), tab1);
    std::size_t start = 0;
    while (start <= words_field.size()) {
      auto sp = words_field.find(' ', start);
      if (sp == std::string_view::npos) sp = words_field.size();
      if (sp == start)
        throw ParseError(path, in.line_number(), "empty word in n-gram field");
      e.words.emplace_back(words_field.substr(start, sp - start));
      start = sp + 1;
    }
    if (e.words.size() < 2 || e.words.size() > 3)
      throw ParseError(path, in.line_number(),
                       "n-gram must have 2 or 3 words");

    {
      const char* first = line.data() + tab1 + 1;
      const char* last = line.data() + tab2;
      auto [p, ec] = std::from_chars(first, last, e.count);
      if (ec != std::errc() || p != last)
        throw ParseError(path, in.line_number(), "bad count field");
    }
    {
      const char* first = line.data() + tab2 + 1;
      const char* last = line.data() + line.size();
      auto [p, ec] = std::from_chars(first, last, e.pmi);
      if (ec != std::errc() || p != last)
        throw ParseError(path, in.line_number(), "bad PMI field");
    }

    min_pmi = std::min(min_pmi, e.pmi);
    min_count = std::min(min_count, e.count);
    entries.push_back(std::move(e));
  }

  if (entries.empty()) {
    min_pmi = 0.0;
    min_count = 0;
  }
  return ScoredTable(std::move(entries), min_pmi, min_count, total_words);
}

}  // namespace collodp
