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

#include "collodp/io.hpp"

#include <zlib.h>

#include <cstdio>
#include <fstream>
#include <iostream>

#include "collodp/errors.hpp"

namespace collodp {

bool has_gz_extension(std::string_view path) {
  return path.size() > 3 && path.substr(path.size() - 3) == ".gz";
}

struct LineReader::Impl {
  std::string path;
  std::size_t line_no = 0;
  std::ifstream file;
  gzFile gz = nullptr;
  bool use_stdin = false;

  ~Impl() {
    if (gz != nullptr) gzclose(gz);
  }

  std::istream& stream() { return use_stdin ? std::cin : file; }
};

LineReader::LineReader(const std::string& path) : impl_(new Impl) {
  impl_->path = path;
  if (path == "-") {
    impl_->use_stdin = true;
    return;
  }
  if (has_gz_extension(path)) {
    impl_->gz = gzopen(path.c_str(), "rb");
    if (impl_->gz == nullptr) throw Error("cannot open file: " + path);
    return;
  }
  impl_->file.open(path, std::ios::in | std::ios::binary);
  if (!impl_->file.is_open()) throw Error("cannot open file: " + path);
}

LineReader::~LineReader() = default;
LineReader::LineReader(LineReader&&) noexcept = default;
LineReader& LineReader::operator=(LineReader&&) noexcept = default;

bool LineReader::next(std::string& line) {
  line.clear();
  if (impl_->gz != nullptr) {
    char buf[1 << 14];
    bool got_any = false;
    for (;;) {
      if (gzgets(impl_->gz, buf, sizeof(buf)) == nullptr) {
        int errnum = 0;
        const char* msg = gzerror(impl_->gz, &errnum);
        if (errnum != 0 && errnum != Z_STREAM_END)
          throw Error("gzip read error in " + impl_->path + ": " + msg);
        break;
      }
      got_any = true;
      line.append(buf);
      if (!line.empty() && line.back() == '\n') {
        line.pop_back();
        break;
      }
    }
    if (!got_any) return false;
  } else {
    if (!std::getline(impl_->stream(), line)) return false;
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  ++impl_->line_no;
  return true;
}

std::size_t LineReader::line_number() const { return impl_->line_no; }
const std::string& LineReader::path() const { return impl_->path; }

struct LineWriter::Impl {
  std::string path;
  std::ofstream file;
  gzFile gz = nullptr;
  bool use_stdout = false;

  ~Impl() {
    if (gz != nullptr) gzclose(gz);
  }

  std::ostream& stream() { return use_stdout ? std::cout : file; }
};

LineWriter::LineWriter(const std::string& path) : impl_(new Impl) {
  impl_->path = path;
  if (path == "-") {
    impl_->use_stdout = true;
    return;
  }
  if (has_gz_extension(path)) {
    impl_->gz = gzopen(path.c_str(), "wb");
    if (impl_->gz == nullptr) throw Error("cannot open file for write: " + path);
    return;
  }
  impl_->file.open(path, std::ios::out | std::ios::trunc | std::ios::binary);
  if (!impl_->file.is_open()) throw Error("cannot open file for write: " + path);
}

LineWriter::~LineWriter() = default;
LineWriter::LineWriter(LineWriter&&) noexcept = default;
LineWriter& LineWriter::operator=(LineWriter&&) noexcept = default;

void LineWriter::write_line(std::string_view line) {
  if (impl_->gz != nullptr) {
    if (!line.empty() &&
        gzwrite(impl_->gz, line.data(), static_cast<unsigned>(line.size())) <=
            0)
      throw Error("gzip write error in " + impl_->path);
    if (gzwrite(impl_->gz, "\n", 1) <= 0)
      throw Error("gzip write error in " + impl_->path);
    return;
  }
  impl_->stream() << line << '\n';
  if (!impl_->stream()) throw Error("write error in " + impl_->path);
}

void LineWriter::flush() {
  if (impl_->gz != nullptr) {
    gzflush(impl_->gz, Z_SYNC_FLUSH);
  } else {
    impl_->stream().flush();
  }
}

}  // namespace collodp
