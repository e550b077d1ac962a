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

#ifndef COLLODP_MECHANISMS_HPP_
#define COLLODP_MECHANISMS_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "collodp/embeddings.hpp"
#include "collodp/rng.hpp"

namespace collodp {

enum class MechanismKind { kMadlib, kMahalanobis, kVickrey };

std::string_view mechanism_name(MechanismKind kind);
MechanismKind mechanism_from_name(std::string_view name);  // throws Error

struct MechanismConfig {
  MechanismKind kind = MechanismKind::kMadlib;
  double epsilon = 1.0;   // per-token budget
  double lambda = 0.2;    // mahalanobis blend
  double t = 0.5;         // vickrey tuning
  std::uint64_t seed = 0;
};

struct PerturbationOutcome {
  std::string input;
  std::string output;
  double noise_norm = 0.0;
  bool self_substituted = false;
};

// Additive noise with density proportional to exp(-epsilon * ||z||):
// uniform direction times a Gamma(dim, 1/epsilon) magnitude. Consumes the
// direction first, then the magnitude.
std::vector<double> sample_noise(std::size_t dim, double epsilon,
                                 SplitRng& rng);

// One mechanism bound to a model. The Mahalanobis covariance root is
// computed once at construction.
class Mechanism {
 public:
  Mechanism(const EmbeddingModel& model, MechanismConfig cfg);

  // Perturbs with the configured epsilon.
  PerturbationOutcome perturb(std::string_view token, SplitRng& rng) const;
  // Perturbs with an explicit per-token epsilon (budget strategies).
  PerturbationOutcome perturb(std::string_view token, double epsilon,
                              SplitRng& rng) const;

  const MechanismConfig& config() const { return cfg_; }
  const EmbeddingModel& model() const { return *model_; }

 private:
  const EmbeddingModel* model_;
  MechanismConfig cfg_;
  std::vector<double> root_;  // dim x dim, mahalanobis only
};

// Convenience wrapper matching the one-shot call shape.
PerturbationOutcome perturb_token(const EmbeddingModel& m,
                                  const MechanismConfig& cfg,
                                  std::string_view token, SplitRng& rng);

struct DpRatioEntry {
  std::string output;
  std::uint64_t count_w = 0;
  std::uint64_t count_w2 = 0;
  double log_ratio = 0.0;  // natural log, |ln(p_hat_w / p_hat_w2)|
  double slack = 0.0;      // 3-sigma binomial-CI allowance
  bool conclusive = false;
  bool violation = false;
};

struct DpRatioReport {
  std::string mechanism;
  std::string w;
  std::string w2;
  double epsilon = 0.0;
  double distance = 0.0;
  double bound = 0.0;  // epsilon * distance
  std::uint64_t samples = 0;
  std::vector<DpRatioEntry> entries;  // sorted by output token
  double max_log_ratio = 0.0;         // over conclusive entries
  bool pass = true;

  std::string to_json() const;
};

// Empirically estimates output distributions for w and w2 and compares
// per-output log-ratios against the metric-DP bound.
DpRatioReport verify_dp_ratio(const EmbeddingModel& m,
                              const MechanismConfig& cfg, std::string_view w,
                              std::string_view w2, std::uint64_t samples);

}  // namespace collodp

#endif  // COLLODP_MECHANISMS_HPP_
