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

#ifndef COLLODP_STRMAP_HPP_
#define COLLODP_STRMAP_HPP_

#include <functional>
#include <string>
#include <string_view>
#include <unordered_map>

namespace collodp {

// Heterogeneous-lookup helpers so string_view queries avoid allocation.
struct StrHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const {
    return std::hash<std::string_view>{}(s);
  }
};

struct StrEq {
  using is_transparent = void;
  bool operator()(std::string_view a, std::string_view b) const {
    return a == b;
  }
};

template <typename V>
using StrMap = std::unordered_map<std::string, V, StrHash, StrEq>;

}  // namespace collodp

#endif  // COLLODP_STRMAP_HPP_
