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

#include "collodp/embeddings.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <queue>

#include "collodp/errors.hpp"
#include "collodp/io.hpp"
#include "collodp/parallel.hpp"
#include "collodp/rng.hpp"

namespace collodp {

namespace {

// Shared distance expression. All query paths must use this exact loop so
// the accelerator stays bit-identical to the reference scan.
double dist2(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double d = a[j] - b[j];
    s += d * d;
  }
  return s;
}

struct Scored {
  double d2;
  std::size_t idx;
  bool operator<(const Scored& o) const {
    if (d2 != o.d2) return d2 < o.d2;
    return idx < o.idx;
  }
};

std::vector<NeighborResult> to_results(const EmbeddingModel& m,
                                       std::vector<Scored> best) {
  std::sort(best.begin(), best.end());
  std::vector<NeighborResult> out;
  out.reserve(best.size());
  for (const auto& s : best)
    out.push_back({m.token(s.idx), std::sqrt(s.d2)});
  return out;
}

std::uint64_t fnv1a_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::uint64_t h = 1469598103934665603ull;
  char buf[1 << 16];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    const std::streamsize n = in.gcount();
    for (std::streamsize i = 0; i < n; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ull;
    }
    if (!in) break;
  }
  return h;
}

constexpr std::uint64_t kCacheMagic = 0x434c4c4f44503031ull;

bool try_load_cache(const std::string& cache_path, std::uint64_t want_hash,
                    std::size_t& dim, std::vector<std::string>& vocab,
                    std::vector<double>& data) {
  std::ifstream in(cache_path, std::ios::binary);
  if (!in) return false;
  auto read_u64 = [&](std::uint64_t& v) {
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    return bool(in);
  };
  std::uint64_t magic = 0, hash = 0, n = 0, d = 0;
  if (!read_u64(magic) || magic != kCacheMagic) return false;
  if (!read_u64(hash) || hash != want_hash) return false;
  if (!read_u64(n) || !read_u64(d)) return false;
  if (d == 0 || n > (1ull << 32) || d > (1ull << 20)) return false;
  vocab.clear();
  vocab.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    std::uint32_t len = 0;
    in.read(reinterpret_cast<char*>(&len), sizeof(len));
    if (!in || len > (1u << 20)) return false;
    std::string t(len, '\0');
    in.read(t.data(), len);
    if (!in) return false;
    vocab.push_back(std::move(t));
  }
  data.assign(std::size_t(n) * std::size_t(d), 0.0);
  in.read(reinterpret_cast<char*>(data.data()),
          std::streamsize(data.size() * sizeof(double)));
  if (!in) return false;
  dim = std::size_t(d);
  return true;
}

void write_cache(const std::string& cache_path, std::uint64_t hash,
                 std::size_t dim, const std::vector<std::string>& vocab,
                 const std::vector<double>& data) {
  std::ofstream out(cache_path, std::ios::binary | std::ios::trunc);
  if (!out) return;  // cache is best-effort
  auto write_u64 = [&](std::uint64_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
  };
  write_u64(kCacheMagic);
  write_u64(hash);
  write_u64(vocab.size());
  write_u64(dim);
  for (const auto& t : vocab) {
    const std::uint32_t len = std::uint32_t(t.size());
    out.write(reinterpret_cast<const char*>(&len), sizeof(len));
    out.write(t.data(), len);
  }
  out.write(reinterpret_cast<const char*>(data.data()),
            std::streamsize(data.size() * sizeof(double)));
}

}  // namespace

void EmbeddingModel::finalize() {
  index_.clear();
  index_.reserve(vocab_.size());
  for (std::size_t i = 0; i < vocab_.size(); ++i) {
    if (!index_.emplace(vocab_[i], i).second)
      throw Error("duplicate token in embedding model: \"" + vocab_[i] + "\"");
  }
  norms_.resize(vocab_.size());
  for (std::size_t i = 0; i < vocab_.size(); ++i) {
    double s = 0.0;
    for (double v : row(i)) s += v * v;
    norms_[i] = std::sqrt(s);
  }
  norm_order_.resize(vocab_.size());
  for (std::size_t i = 0; i < norm_order_.size(); ++i) norm_order_[i] = i;
  std::sort(norm_order_.begin(), norm_order_.end(),
            [&](std::size_t a, std::size_t b) {
              if (norms_[a] != norms_[b]) return norms_[a] < norms_[b];
              return a < b;
            });
}

EmbeddingModel EmbeddingModel::from_rows(
    std::vector<std::string> vocab,
    const std::vector<std::vector<double>>& rows) {
  if (vocab.size() != rows.size())
    throw Error("vocab and row counts differ");
  EmbeddingModel m;
  m.vocab_ = std::move(vocab);
  m.dim_ = rows.empty() ? 0 : rows[0].size();
  if (m.dim_ == 0 && !rows.empty()) throw Error("zero-dimensional rows");
  m.data_.reserve(rows.size() * m.dim_);
  for (const auto& r : rows) {
    if (r.size() != m.dim_) throw Error("inconsistent row length");
    for (double v : r) {
      if (!std::isfinite(v)) throw Error("non-finite embedding value");
      m.data_.push_back(v);
    }
  }
  m.finalize();
  return m;
}

std::optional<std::size_t> EmbeddingModel::find(std::string_view token) const {
  const auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::span<const double> EmbeddingModel::vector_of(
    std::string_view token) const {
  const auto i = find(token);
  if (!i) throw OovError(std::string(token));
  return row(*i);
}

EmbeddingModel load_model(const std::string& path, bool use_cache) {
  std::size_t dim = 0;
  std::vector<std::string> vocab;
  std::vector<double> data;

  std::uint64_t source_hash = 0;
  const std::string cache_path = path + ".bin";
  if (use_cache) {
    source_hash = fnv1a_file(path);
    if (try_load_cache(cache_path, source_hash, dim, vocab, data)) {
      EmbeddingModel m;
      m.dim_ = dim;
      m.vocab_ = std::move(vocab);
      m.data_ = std::move(data);
      m.finalize();
      return m;
    }
  }

  LineReader in(path);
  std::string line;
  if (!in.next(line))
    throw ParseError(path, 1, "missing header");
  std::size_t declared = 0;
  {
    const char* p = line.data();
    const char* end = line.data() + line.size();
    auto [p1, ec1] = std::from_chars(p, end, declared);
    if (ec1 != std::errc() || p1 == end || *p1 != ' ')
      throw ParseError(path, 1, "bad header");
    auto [p2, ec2] = std::from_chars(p1 + 1, end, dim);
    if (ec2 != std::errc() || p2 != end || dim == 0)
      throw ParseError(path, 1, "bad header");
  }

  vocab.reserve(declared);
  data.reserve(declared * dim);
  while (in.next(line)) {
    if (line.empty()) continue;
    if (vocab.size() == declared)
      throw ParseError(path, in.line_number(), "more rows than declared");
    const char* p = line.data();
    const char* end = line.data() + line.size();
    const char* sp = p;
    while (sp != end && *sp != ' ') ++sp;
    if (sp == p || sp == end)
      throw ParseError(path, in.line_number(), "expected token and values");
    vocab.emplace_back(p, sp);
    std::size_t got = 0;
    while (sp != end) {
      while (sp != end && *sp == ' ') ++sp;
      if (sp == end) break;
      double v = 0.0;
      auto [np, ec] = std::from_chars(sp, end, v);
      if (ec != std::errc() || (np != end && *np != ' '))
        throw ParseError(path, in.line_number(), "bad numeric field");
      if (!std::isfinite(v))
        throw ParseError(path, in.line_number(), "non-finite value");
      data.push_back(v);
      ++got;
      sp = np;
    }
    if (got != dim)
      throw ParseError(path, in.line_number(),
                       "expected " + std::to_string(dim) + " values, got " +
                           std::to_string(got));
  }
  if (vocab.size() != declared)
    throw ParseError(path, in.line_number(),
                     "declared " + std::to_string(declared) + " rows, found " +
                         std::to_string(vocab.size()));

  EmbeddingModel m;
  m.dim_ = dim;
  m.vocab_ = std::move(vocab);
  m.data_ = std::move(data);
  m.finalize();  // throws on duplicate tokens

  if (use_cache) write_cache(cache_path, source_hash, m.dim_, m.vocab_, m.data_);
  return m;
}

void save_model(const EmbeddingModel& m, const std::string& path) {
  LineWriter out(path);
  out.write_line(std::to_string(m.size()) + " " + std::to_string(m.dim()));
  char buf[32];
  std::string line;
  for (std::size_t i = 0; i < m.size(); ++i) {
    line = m.token(i);
    for (double v : m.row(i)) {
      std::snprintf(buf, sizeof(buf), " %.9g", v);
      line += buf;
    }
    out.write_line(line);
  }
  out.flush();
}

double distance(const EmbeddingModel& m, std::string_view a,
                std::string_view b) {
  return std::sqrt(dist2(m.vector_of(a), m.vector_of(b)));
}

std::vector<NeighborResult> nearest_scan(const EmbeddingModel& m,
                                         std::span<const double> query,
                                         std::size_t k) {
  if (query.size() != m.dim()) throw Error("query dimension mismatch");
  if (k > m.size()) throw Error("k exceeds vocabulary size");
  // Max-heap of the k best so far; top is the current worst kept.
  std::priority_queue<Scored> heap;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const Scored s{dist2(m.row(i), query), i};
    if (heap.size() < k) {
      heap.push(s);
    } else if (!heap.empty() && s < heap.top()) {
      heap.pop();
      heap.push(s);
    }
  }
  std::vector<Scored> best;
  best.reserve(heap.size());
  while (!heap.empty()) {
    best.push_back(heap.top());
    heap.pop();
  }
  return to_results(m, std::move(best));
}

namespace {

std::vector<NeighborResult> nearest_pruned(const EmbeddingModel& m,
                                           std::span<const double> query,
                                           std::size_t k) {
  double qsum = 0.0;
  for (double v : query) qsum += v * v;
  const double qnorm = std::sqrt(qsum);
  const auto& order = m.norm_order();
  const auto& norms = m.norms();

  // Expand outward from the norm closest to the query's norm; the bound
  // |norm(x) - norm(q)| <= d(x, q) makes pruning exact (with a small
  // conservative slack for rounding).
  auto cmp_norm = [&](std::size_t idx, double v) { return norms[idx] < v; };
  const auto mid =
      std::lower_bound(order.begin(), order.end(), qnorm, cmp_norm) -
      order.begin();
  std::ptrdiff_t lo = std::ptrdiff_t(mid) - 1;
  std::ptrdiff_t hi = std::ptrdiff_t(mid);

  std::priority_queue<Scored> heap;
  auto bound_of = [&](std::ptrdiff_t pos) {
    return std::abs(norms[order[std::size_t(pos)]] - qnorm);
  };
  auto admit = [&](std::size_t idx) {
    const Scored s{dist2(m.row(idx), query), idx};
    if (heap.size() < k) {
      heap.push(s);
    } else if (s < heap.top()) {
      heap.pop();
      heap.push(s);
    }
  };
  const auto n = std::ptrdiff_t(order.size());
  while (lo >= 0 || hi < n) {
    double next_bound;
    bool take_lo;
    if (lo >= 0 && hi < n) {
      take_lo = bound_of(lo) <= bound_of(hi);
      next_bound = take_lo ? bound_of(lo) : bound_of(hi);
    } else if (lo >= 0) {
      take_lo = true;
      next_bound = bound_of(lo);
    } else {
      take_lo = false;
      next_bound = bound_of(hi);
    }
    if (heap.size() == k) {
      const double worst2 = heap.top().d2;
      if (next_bound * next_bound > worst2 * (1.0 + 1e-9) + 1e-300) break;
    }
    if (take_lo) {
      admit(order[std::size_t(lo)]);
      --lo;
    } else {
      admit(order[std::size_t(hi)]);
      ++hi;
    }
  }

  std::vector<Scored> best;
  best.reserve(heap.size());
  while (!heap.empty()) {
    best.push_back(heap.top());
    heap.pop();
  }
  return to_results(m, std::move(best));
}

std::vector<NeighborResult> nearest_parallel(const EmbeddingModel& m,
                                             std::span<const double> query,
                                             std::size_t k,
                                             std::size_t workers) {
  const std::size_t n = m.size();
  const std::size_t n_chunks = workers * 4;
  const std::size_t chunk = (n + n_chunks - 1) / n_chunks;
  std::vector<std::vector<Scored>> partial(n_chunks);

  parallel_for(n_chunks, workers, [&](std::size_t c) {
    const std::size_t begin = c * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    std::priority_queue<Scored> heap;
    for (std::size_t i = begin; i < end; ++i) {
      const Scored s{dist2(m.row(i), query), i};
      if (heap.size() < k) {
        heap.push(s);
      } else if (s < heap.top()) {
        heap.pop();
        heap.push(s);
      }
    }
    while (!heap.empty()) {
      partial[c].push_back(heap.top());
      heap.pop();
    }
  });

  // Deterministic merge: the union of per-chunk candidates is sorted by
  // the same total order as the serial scan, so the result cannot depend
  // on the worker count.
  std::vector<Scored> all;
  for (auto& p : partial) all.insert(all.end(), p.begin(), p.end());
  std::sort(all.begin(), all.end());
  if (all.size() > k) all.resize(k);
  return to_results(m, std::move(all));
}

}  // namespace

std::vector<NeighborResult> nearest(const EmbeddingModel& m,
                                    std::span<const double> query,
                                    std::size_t k) {
  if (query.size() != m.dim()) throw Error("query dimension mismatch");
  if (k > m.size()) throw Error("k exceeds vocabulary size");
  if (k == 0) return {};
  const std::size_t workers = thread_count();
  if (workers > 1 && m.size() >= 16384)
    return nearest_parallel(m, query, k, workers);
  return nearest_pruned(m, query, k);
}

CovarianceSummary covariance(const EmbeddingModel& m, double lambda) {
  if (m.size() < 2) throw Error("covariance needs at least 2 rows");
  const auto n = Eigen::Index(m.size());
  const auto d = Eigen::Index(m.dim());
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                 Eigen::RowMajor>>
      X(m.row(0).data(), n, d);

  const Eigen::RowVectorXd mean = X.colwise().mean();
  const Eigen::MatrixXd centered = X.rowwise() - mean;
  Eigen::MatrixXd sigma =
      (centered.transpose() * centered) / double(n - 1);

  // Scale to unit mean diagonal so the identity blend is balanced.
  const double tr = sigma.trace();
  if (tr > 1e-300) sigma *= double(d) / tr;

  Eigen::MatrixXd root;
  if (lambda == 0.0) {
    root = Eigen::MatrixXd::Identity(d, d);
  } else {
    const Eigen::MatrixXd blended =
        lambda * sigma +
        (1.0 - lambda) * Eigen::MatrixXd::Identity(d, d);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(blended);
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
    root = es.eigenvectors() * ev.cwiseSqrt().asDiagonal() *
           es.eigenvectors().transpose();
    root = ((root + root.transpose()) / 2.0).eval();
  }

  CovarianceSummary out;
  out.dim = m.dim();
  out.lambda = lambda;
  out.sigma.resize(std::size_t(d) * std::size_t(d));
  out.regularized_root.resize(out.sigma.size());
  for (Eigen::Index r = 0; r < d; ++r) {
    for (Eigen::Index c = 0; c < d; ++c) {
      out.sigma[std::size_t(r * d + c)] = sigma(r, c);
      out.regularized_root[std::size_t(r * d + c)] = root(r, c);
    }
  }
  return out;
}

EmbeddingModel filter_vocab(const EmbeddingModel& m, const StrSet& allowed) {
  std::vector<std::string> vocab;
  std::vector<std::size_t> keep_rows;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const std::string& t = m.token(i);
    bool ok = true;
    std::size_t start = 0;
    while (start <= t.size()) {
      auto us = t.find('_', start);
      if (us == std::string::npos) us = t.size();
      if (allowed.find(std::string_view(t).substr(start, us - start)) ==
          allowed.end()) {
        ok = false;
        break;
      }
      start = us + 1;
    }
    if (ok) {
      vocab.push_back(t);
      keep_rows.push_back(i);
    }
  }
  if (vocab.empty())
    throw Error("vocabulary filter left no tokens");

  EmbeddingModel out;
  out.dim_ = m.dim();
  out.vocab_ = std::move(vocab);
  out.data_.reserve(keep_rows.size() * m.dim());
  for (std::size_t i : keep_rows) {
    const auto r = m.row(i);
    out.data_.insert(out.data_.end(), r.begin(), r.end());
  }
  out.finalize();
  return out;
}

EmbeddingModel synth_model(const std::vector<std::string>& vocab,
                           std::size_t dim, std::uint64_t seed) {
  if (dim == 0) throw Error("dim must be positive");
  EmbeddingModel m;
  m.dim_ = dim;
  m.vocab_ = vocab;
  m.data_.resize(vocab.size() * dim);
  SplitRng rng(seed);
  for (auto& v : m.data_) v = rng.normal();
  m.finalize();
  return m;
}

}  // namespace collodp
