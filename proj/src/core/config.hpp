/* Copyright 2026 The decouplab Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "core/experiments.hpp"

namespace decouplab {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kCacheEnvVar = "DECOUPLAB_CACHE_DIR";

// JSON run configuration. Every key is optional; unknown keys are rejected.
//
//   d, sigma, R (number or list), cd, quadOrder, sampleSpacing, epsSlack,
//   activityThreshold, decayPower, tol, ratioTol, hypothesisTol,
//   amplitudeSamples, fractalCenters, seed, budget, campaigns,
//   out, cacheDir, noCache
struct RunConfig {
  SweepConfig sweep = SweepConfig::defaults(2);
  std::string outDir = ".";
  std::optional<std::string> cacheDir;
  bool noCache = false;

  // Throws Error{Config} on unknown keys, wrong types or violated invariants.
  // The count of scales is checked when a campaign runs, so single-R configs
  // remain usable for point evaluation.
  static RunConfig fromJson(const nlohmann::json& doc);
  static RunConfig parse(std::string_view text);

  // Computation fields only, with defaults filled in. Keys are sorted, so the
  // dump is canonical.
  nlohmann::json canonical() const;
  nlohmann::json toJson() const;  // canonical() plus output and cache fields

  // Stable digest of the canonical config and the campaign id.
  std::string hash(Campaign c) const;

  // Config value, then the environment variable, then ".decouplab-cache".
  std::string resolvedCacheDir() const;
};

std::string sha256Hex(std::string_view data);

}  // namespace decouplab
