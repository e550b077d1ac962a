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

#include "collodp/mechanisms.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <map>

#include "collodp/errors.hpp"

namespace collodp {

std::string_view mechanism_name(MechanismKind kind) {
  switch (kind) {
    case MechanismKind::kMadlib: return "madlib";
    case MechanismKind::kMahalanobis: return "mahalanobis";
    case MechanismKind::kVickrey: return "vickrey";
  }
  return "unknown";
}

MechanismKind mechanism_from_name(std::string_view name) {
  if (name == "madlib") return MechanismKind::kMadlib;
  if (name == "mahalanobis") return MechanismKind::kMahalanobis;
  if (name == "vickrey") return MechanismKind::kVickrey;
  throw Error("unknown mechanism: \"" + std::string(name) + "\"");
}

std::vector<double> sample_noise(std::size_t dim, double epsilon,
                                 SplitRng& rng) {
  if (dim == 0) throw Error("noise dimension must be positive");
  if (!(epsilon > 0.0)) throw Error("epsilon must be positive");
  std::vector<double> z(dim);
  rng.unit_sphere(z);
  const double magnitude = rng.gamma_int(dim) / epsilon;
  for (auto& v : z) v *= magnitude;
  return z;
}

Mechanism::Mechanism(const EmbeddingModel& model, MechanismConfig cfg)
    : model_(&model), cfg_(cfg) {
  if (!(cfg_.epsilon > 0.0)) throw Error("epsilon must be positive");
  if (cfg_.kind == MechanismKind::kMahalanobis) {
    root_ = covariance(model, cfg_.lambda).regularized_root;
  }
}

PerturbationOutcome Mechanism::perturb(std::string_view token,
                                       SplitRng& rng) const {
  return perturb(token, cfg_.epsilon, rng);
}

PerturbationOutcome Mechanism::perturb(std::string_view token, double epsilon,
                                       SplitRng& rng) const {
  const EmbeddingModel& m = *model_;
  const std::span<const double> phi = m.vector_of(token);  // throws OovError
  const std::size_t d = m.dim();

  std::vector<double> z = sample_noise(d, epsilon, rng);
  if (cfg_.kind == MechanismKind::kMahalanobis) {
    std::vector<double> tz(d, 0.0);
    for (std::size_t r = 0; r < d; ++r) {
      double acc = 0.0;
      const double* row = root_.data() + r * d;
      for (std::size_t c = 0; c < d; ++c) acc += row[c] * z[c];
      tz[r] = acc;
    }
    z = std::move(tz);
  }

  double norm2 = 0.0;
  std::vector<double> noisy(d);
  for (std::size_t j = 0; j < d; ++j) {
    norm2 += z[j] * z[j];
    noisy[j] = phi[j] + z[j];
  }

  PerturbationOutcome out;
  out.input = std::string(token);
  out.noise_norm = std::sqrt(norm2);

  if (cfg_.kind == MechanismKind::kVickrey) {
    const std::size_t k = std::min<std::size_t>(2, m.size());
    const auto nn = nearest(m, noisy, k);
    // The selection draw is always consumed, so reductions of t stay
    // aligned draw-for-draw with other mechanisms.
    const double u = rng.uniform01();
    if (nn.size() == 1) {
      out.output = nn[0].token;
    } else {
      const double d1 = nn[0].distance;
      const double d2 = nn[1].distance;
      const double num = (1.0 - cfg_.t) * d2;
      const double den = num + cfg_.t * d1;
      const double p1 = den > 0.0 ? num / den : 1.0;
      out.output = (u < p1) ? nn[0].token : nn[1].token;
    }
  } else {
    out.output = nearest(m, noisy, 1)[0].token;
  }

  out.self_substituted = (out.output == out.input);
  return out;
}

PerturbationOutcome perturb_token(const EmbeddingModel& m,
                                  const MechanismConfig& cfg,
                                  std::string_view token, SplitRng& rng) {
  return Mechanism(m, cfg).perturb(token, rng);
}

DpRatioReport verify_dp_ratio(const EmbeddingModel& m,
                              const MechanismConfig& cfg, std::string_view w,
                              std::string_view w2, std::uint64_t samples) {
  if (samples == 0) throw Error("samples must be positive");
  const Mechanism mech(m, cfg);

  DpRatioReport report;
  report.mechanism = std::string(mechanism_name(cfg.kind));
  report.w = std::string(w);
  report.w2 = std::string(w2);
  report.epsilon = cfg.epsilon;
  report.distance = distance(m, w, w2);
  report.bound = cfg.epsilon * report.distance;
  report.samples = samples;

  std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> hist;
  SplitRng base(cfg.seed);
  SplitRng rng_w = base.child("verify:w");
  SplitRng rng_w2 = base.child("verify:w2");
  for (std::uint64_t i = 0; i < samples; ++i)
    ++hist[mech.perturb(w, rng_w).output].first;
  for (std::uint64_t i = 0; i < samples; ++i)
    ++hist[mech.perturb(w2, rng_w2).output].second;

  report.max_log_ratio = 0.0;
  for (const auto& [output, counts] : hist) {
    DpRatioEntry e;
    e.output = output;
    e.count_w = counts.first;
    e.count_w2 = counts.second;
    e.conclusive = counts.first > 0 && counts.second > 0;
    if (e.conclusive) {
      e.log_ratio = std::abs(std::log(double(counts.first)) -
                             std::log(double(counts.second)));
      e.slack = 3.0 * std::sqrt(1.0 / double(counts.first) +
                                1.0 / double(counts.second));
      e.violation = e.log_ratio > report.bound + e.slack;
      report.max_log_ratio = std::max(report.max_log_ratio, e.log_ratio);
      if (e.violation) report.pass = false;
    }
    report.entries.push_back(std::move(e));
  }
  return report;
}

std::string DpRatioReport::to_json() const {
  nlohmann::json j;
  j["mechanism"] = mechanism;
  j["w"] = w;
  j["w2"] = w2;
  j["epsilon"] = epsilon;
  j["distance"] = distance;
  j["bound"] = bound;
  j["samples"] = samples;
  j["max_log_ratio"] = max_log_ratio;
  j["pass"] = pass;
  j["entries"] = nlohmann::json::array();
  for (const auto& e : entries) {
    j["entries"].push_back({{"output", e.output},
                            {"count_w", e.count_w},
                            {"count_w2", e.count_w2},
                            {"log_ratio", e.log_ratio},
                            {"slack", e.slack},
                            {"conclusive", e.conclusive},
                            {"violation", e.violation}});
  }
  return j.dump(2);
}

}  // namespace collodp
