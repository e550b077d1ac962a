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

#ifndef COLLODP_IO_HPP_
#define COLLODP_IO_HPP_

#include <memory>
#include <string>
#include <string_view>

namespace collodp {

// Line-oriented reader over a plain or gzip-compressed file ("*.gz" by
// extension). Path "-" reads stdin. Trailing '\r' is stripped.
class LineReader {
 public:
  explicit LineReader(const std::string& path);
  ~LineReader();
  LineReader(LineReader&&) noexcept;
  LineReader& operator=(LineReader&&) noexcept;
  LineReader(const LineReader&) = delete;
  LineReader& operator=(const LineReader&) = delete;

  // Reads the next line into `line`; returns false at end of input.
  bool next(std::string& line);

  // 1-based number of the line last returned by next().
  std::size_t line_number() const;

  const std::string& path() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Line-oriented writer; "*.gz" writes gzip, "-" writes stdout.
class LineWriter {
 public:
  explicit LineWriter(const std::string& path);
  ~LineWriter();
  LineWriter(LineWriter&&) noexcept;
  LineWriter& operator=(LineWriter&&) noexcept;
  LineWriter(const LineWriter&) = delete;
  LineWriter& operator=(const LineWriter&) = delete;

  void write_line(std::string_view line);
  void flush();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

bool has_gz_extension(std::string_view path);

}  // namespace collodp

#endif  // COLLODP_IO_HPP_
