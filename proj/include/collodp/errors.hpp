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

#ifndef COLLODP_ERRORS_HPP_
#define COLLODP_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace collodp {

// Base class for all errors raised by the library. CLI maps these to exit
// code 2 (data error); anything else is a usage error or a bug.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input file. Carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& path, std::size_t line, const std::string& msg)
      : Error(path + ":" + std::to_string(line) + ": " + msg),
        path_(path),
        line_(line) {}

  const std::string& path() const { return path_; }
  std::size_t line() const { return line_; }

 private:
  std::string path_;
  std::size_t line_;
};

// Invalid UTF-8 in a text input. byte_offset is the offset of the first
// offending byte.
class DecodeError : public Error {
 public:
  explicit DecodeError(std::size_t byte_offset)
      : Error("invalid UTF-8 at byte offset " + std::to_string(byte_offset)),
        byte_offset_(byte_offset) {}

  std::size_t byte_offset() const { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

// A token was looked up in an embedding model that does not contain it.
class OovError : public Error {
 public:
  explicit OovError(const std::string& token)
      : Error("token not in embedding vocabulary: \"" + token + "\""),
        token_(token) {}

  const std::string& token() const { return token_; }

 private:
  std::string token_;
};

// PMI is undefined because a required count is zero.
class UndefinedPmiError : public Error {
 public:
  explicit UndefinedPmiError(const std::string& ngram)
      : Error("PMI undefined (zero count) for n-gram: \"" + ngram + "\""),
        ngram_(ngram) {}

  const std::string& ngram() const { return ngram_; }

 private:
  std::string ngram_;
};

// A privatization plan could not assign budget to any token.
class DegeneratePlanError : public Error {
 public:
  explicit DegeneratePlanError(const std::string& msg) : Error(msg) {}
};

}  // namespace collodp

#endif  // COLLODP_ERRORS_HPP_
