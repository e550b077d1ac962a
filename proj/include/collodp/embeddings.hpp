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

#ifndef COLLODP_EMBEDDINGS_HPP_
#define COLLODP_EMBEDDINGS_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "collodp/strmap.hpp"

namespace collodp {

using StrSet = std::unordered_set<std::string, StrHash, StrEq>;

// Immutable token embedding space. Multiword tokens use '_' between
// constituent words. Rows are dense doubles, row-major.
class EmbeddingModel {
 public:
  EmbeddingModel() = default;

  // Validates: consistent row lengths, finite values, unique tokens.
  static EmbeddingModel from_rows(std::vector<std::string> vocab,
                                  const std::vector<std::vector<double>>& rows);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return vocab_.size(); }
  bool empty() const { return vocab_.empty(); }

  const std::vector<std::string>& vocab() const { return vocab_; }
  const std::string& token(std::size_t row) const { return vocab_[row]; }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * dim_, dim_};
  }
  std::optional<std::size_t> find(std::string_view token) const;
  bool contains(std::string_view token) const { return find(token).has_value(); }
  // Throws OovError for unknown tokens.
  std::span<const double> vector_of(std::string_view token) const;

  // Precomputed L2 norms of all rows.
  const std::vector<double>& norms() const { return norms_; }
  // Row indices ordered by ascending norm (for pruned scans).
  const std::vector<std::size_t>& norm_order() const { return norm_order_; }

 private:
  friend EmbeddingModel load_model(const std::string&, bool);
  friend EmbeddingModel filter_vocab(const EmbeddingModel&, const StrSet&);
  friend EmbeddingModel synth_model(const std::vector<std::string>&,
                                    std::size_t, std::uint64_t);

  void finalize();  // builds index, norms and norm order

  std::size_t dim_ = 0;
  std::vector<std::string> vocab_;
  std::vector<double> data_;
  StrMap<std::size_t> index_;
  std::vector<double> norms_;
  std::vector<std::size_t> norm_order_;
};

struct NeighborResult {
  std::string token;
  double distance = 0.0;
};

struct CovarianceSummary {
  std::size_t dim = 0;
  // Sample covariance of the rows, scaled to unit mean diagonal; the
  // square root below is of lambda * sigma + (1 - lambda) * I.
  std::vector<double> sigma;             // dim x dim, row-major
  std::vector<double> regularized_root;  // dim x dim, row-major
  double lambda = 0.0;
};

// Word2vec text format: header "<vocab> <dim>", then one token and dim
// floats per line. Gzip by extension. use_cache reads/writes a binary
// side file keyed by a hash of the source bytes.
EmbeddingModel load_model(const std::string& path, bool use_cache = false);
void save_model(const EmbeddingModel& m, const std::string& path);

// Euclidean distance between two vocab tokens (throws OovError).
double distance(const EmbeddingModel& m, std::string_view a,
                std::string_view b);

// Exact k nearest neighbors, ascending distance, ties by row order.
// nearest uses a norm-bound pruning scan (and data-parallel scanning for
// large vocabularies); nearest_scan is the plain full-scan reference.
// Both return identical results.
std::vector<NeighborResult> nearest(const EmbeddingModel& m,
                                    std::span<const double> query,
                                    std::size_t k);
std::vector<NeighborResult> nearest_scan(const EmbeddingModel& m,
                                         std::span<const double> query,
                                         std::size_t k);

CovarianceSummary covariance(const EmbeddingModel& m, double lambda);

// Keeps tokens whose every underscore-separated word is in allowed.
// Throws if nothing survives.
EmbeddingModel filter_vocab(const EmbeddingModel& m, const StrSet& allowed);

// Deterministic random model, rows iid standard normal.
EmbeddingModel synth_model(const std::vector<std::string>& vocab,
                           std::size_t dim, std::uint64_t seed);

}  // namespace collodp

#endif  // COLLODP_EMBEDDINGS_HPP_
