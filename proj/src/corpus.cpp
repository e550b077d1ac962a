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

#include "collodp/corpus.hpp"

#include <unicode/uchar.h>
#include <unicode/unorm2.h>
#include <unicode/ustring.h>
#include <unicode/utypes.h>

#include <algorithm>
#include <cstdint>

#include "collodp/errors.hpp"
#include "collodp/io.hpp"
#include "collodp/stopwords_default.hpp"

namespace collodp {
namespace {

// Decoded code point plus its byte range in the source string.
struct CodePoint {
  char32_t cp;
  std::size_t offset;
  std::uint8_t length;
};

// Strict UTF-8 decoder: rejects overlong forms, surrogates, values beyond
// U+10FFFF, and truncated sequences. Throws DecodeError with the byte
// offset of the offending sequence.
std::vector<CodePoint> decode_utf8(std::string_view text) {
  std::vector<CodePoint> out;
  out.reserve(text.size());
  std::size_t i = 0;
  const auto* bytes = reinterpret_cast<const unsigned char*>(text.data());
  while (i < text.size()) {
    const unsigned char b0 = bytes[i];
    char32_t cp = 0;
    std::uint8_t len = 0;
    if (b0 < 0x80) {
      cp = b0;
      len = 1;
    } else if ((b0 & 0xe0) == 0xc0) {
      cp = b0 & 0x1f;
      len = 2;
    } else if ((b0 & 0xf0) == 0xe0) {
      cp = b0 & 0x0f;
      len = 3;
    } else if ((b0 & 0xf8) == 0xf0) {
      cp = b0 & 0x07;
      len = 4;
    } else {
      throw DecodeError(i);
    }
    if (i + len > text.size()) throw DecodeError(i);
    for (std::uint8_t k = 1; k < len; ++k) {
      const unsigned char bk = bytes[i + k];
      if ((bk & 0xc0) != 0x80) throw DecodeError(i);
      cp = (cp << 6) | (bk & 0x3f);
    }
    static constexpr char32_t kMinByLen[5] = {0, 0, 0x80, 0x800, 0x10000};
    if (len > 1 && cp < kMinByLen[len]) throw DecodeError(i);
    if (cp > 0x10ffff || (cp >= 0xd800 && cp <= 0xdfff)) throw DecodeError(i);
    out.push_back({cp, i, len});
    i += len;
  }
  return out;
}

void append_utf16(std::u16string& out, char32_t cp) {
  if (cp < 0x10000) {
    out.push_back(static_cast<char16_t>(cp));
  } else {
    const char32_t v = cp - 0x10000;
    out.push_back(static_cast<char16_t>(0xd800 + (v >> 10)));
    out.push_back(static_cast<char16_t>(0xdc00 + (v & 0x3ff)));
  }
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xc0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xe0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  } else {
    out.push_back(static_cast<char>(0xf0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  }
}

std::string utf16_to_utf8(const std::u16string& in) {
  std::string out;
  out.reserve(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) {
    const char16_t u = in[i];
    if (u >= 0xd800 && u <= 0xdbff && i + 1 < in.size()) {
      const char16_t lo = in[i + 1];
      if (lo >= 0xdc00 && lo <= 0xdfff) {
        const char32_t cp =
            0x10000 + ((char32_t(u) - 0xd800) << 10) + (char32_t(lo) - 0xdc00);
        append_utf8(out, cp);
        ++i;
        continue;
      }
    }
    append_utf8(out, u);
  }
  return out;
}

bool is_word_char(char32_t cp) {
  return u_isalnum(static_cast<UChar32>(cp)) != 0;
}

bool is_space_char(char32_t cp) {
  return u_isUWhiteSpace(static_cast<UChar32>(cp)) != 0;
}

bool is_sentence_terminator(char32_t cp) {
  return cp == U'.' || cp == U'!' || cp == U'?';
}

std::u16string lowercase_utf16(const std::u16string& in) {
  if (in.empty()) return {};
  UErrorCode status = U_ZERO_ERROR;
  const int32_t needed =
      u_strToLower(nullptr, 0, in.data(), static_cast<int32_t>(in.size()),
                   "" /* root locale */, &status);
  if (status != U_BUFFER_OVERFLOW_ERROR && U_FAILURE(status))
    throw Error("case mapping failed");
  std::u16string out(static_cast<std::size_t>(needed), u'\0');
  status = U_ZERO_ERROR;
  u_strToLower(out.data(), needed, in.data(), static_cast<int32_t>(in.size()),
               "", &status);
  if (U_FAILURE(status)) throw Error("case mapping failed");
  return out;
}

std::u16string nfc_utf16(const std::u16string& in) {
  if (in.empty()) return {};
  UErrorCode status = U_ZERO_ERROR;
  const UNormalizer2* nfc = unorm2_getNFCInstance(&status);
  if (U_FAILURE(status)) throw Error("NFC normalizer unavailable");
  const int32_t needed = unorm2_normalize(
      nfc, in.data(), static_cast<int32_t>(in.size()), nullptr, 0, &status);
  if (status != U_BUFFER_OVERFLOW_ERROR && U_FAILURE(status))
    throw Error("NFC normalization failed");
  std::u16string out(static_cast<std::size_t>(needed), u'\0');
  status = U_ZERO_ERROR;
  unorm2_normalize(nfc, in.data(), static_cast<int32_t>(in.size()), out.data(),
                   needed, &status);
  if (U_FAILURE(status)) throw Error("NFC normalization failed");
  return out;
}

}  // namespace

std::string normalize(std::string_view text) {
  const std::vector<CodePoint> cps = decode_utf8(text);

  // Tab/newline class controls become spaces so they keep separating
  // words; all other C0/C1 controls are dropped.
  std::u16string u16;
  u16.reserve(cps.size());
  for (const CodePoint& c : cps) {
    const char32_t cp = c.cp;
    if (cp == U'\t' || cp == U'\n' || cp == U'\v' || cp == U'\f' ||
        cp == U'\r') {
      u16.push_back(u' ');
      continue;
    }
    if (cp < 0x20 || cp == 0x7f || (cp >= 0x80 && cp <= 0x9f)) continue;
    append_utf16(u16, cp);
  }

  // Lowercase before composing so the result is stable under a second
  // normalize pass.
  return utf16_to_utf8(nfc_utf16(lowercase_utf16(u16)));
}

std::vector<std::string> word_tokenize(std::string_view normalized) {
  const std::vector<CodePoint> cps = decode_utf8(normalized);
  std::vector<std::string> words;
  std::string current;
  for (std::size_t i = 0; i < cps.size(); ++i) {
    const char32_t cp = cps[i].cp;
    if (is_word_char(cp)) {
      current.append(normalized.substr(cps[i].offset, cps[i].length));
      continue;
    }
    // Apostrophes and hyphens join only with word characters on both sides.
    if ((cp == U'\'' || cp == U'-') && !current.empty() &&
        i + 1 < cps.size() && is_word_char(cps[i + 1].cp)) {
      current.append(normalized.substr(cps[i].offset, cps[i].length));
      continue;
    }
    if (!current.empty()) {
      words.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) words.push_back(std::move(current));
  return words;
}

std::vector<Sentence> split_sentences(std::string_view normalized) {
  const std::vector<CodePoint> cps = decode_utf8(normalized);
  std::vector<Sentence> sentences;
  std::size_t word_cursor = 0;
  std::size_t chunk_begin = 0;  // byte offset

  auto emit_chunk = [&](std::size_t begin, std::size_t end) {
    if (begin >= end) return;
    std::vector<std::string> words =
        word_tokenize(normalized.substr(begin, end - begin));
    if (words.empty()) return;
    Sentence s;
    s.word_begin = word_cursor;
    word_cursor += words.size();
    s.word_end = word_cursor;
    s.words = std::move(words);
    sentences.push_back(std::move(s));
  };

  std::size_t i = 0;
  while (i < cps.size()) {
    if (is_sentence_terminator(cps[i].cp)) {
      std::size_t j = i;
      while (j + 1 < cps.size() && is_sentence_terminator(cps[j + 1].cp)) ++j;
      const bool at_end = (j + 1 == cps.size());
      if (at_end || is_space_char(cps[j + 1].cp)) {
        const std::size_t cut = cps[j].offset + cps[j].length;
        emit_chunk(chunk_begin, cut);
        chunk_begin = cut;
      }
      i = j + 1;
      continue;
    }
    ++i;
  }
  emit_chunk(chunk_begin, normalized.size());
  return sentences;
}

ConnectorList ConnectorList::builtin() {
  ConnectorList list;
  for (std::size_t i = 0; i < kDefaultStopwordCount; ++i)
    list.words_.insert(normalize(kDefaultStopwords[i]));
  return list;
}

ConnectorList ConnectorList::from_file(const std::string& path) {
  ConnectorList list;
  LineReader reader(path);
  std::string line;
  while (reader.next(line)) {
    const std::size_t first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    const std::size_t last = line.find_last_not_of(" \t");
    std::string word = line.substr(first, last - first + 1);
    if (word.empty() || word[0] == '#') continue;
    list.words_.insert(normalize(word));
  }
  return list;
}

ConnectorList ConnectorList::from_words(const std::vector<std::string>& words) {
  ConnectorList list;
  for (const std::string& w : words) list.words_.insert(normalize(w));
  return list;
}

bool ConnectorList::contains(std::string_view word) const {
  return words_.find(word) != words_.end();
}

std::vector<std::string> ConnectorList::sorted_words() const {
  std::vector<std::string> out(words_.begin(), words_.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace collodp
