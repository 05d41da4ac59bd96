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

#include "core/session.hpp"

#include <chrono>

#include "core/cache.hpp"

namespace decouplab {

ResultRecord runCampaignCached(const RunConfig& cfg, Campaign c, const Progress& progress,
                               std::ostream* warn) {
  cfg.sweep.validate();
  const auto hash = cfg.hash(c);
  const ResultCache cache(cfg.resolvedCacheDir());
  if (!cfg.noCache) {
    if (auto hit = cache.lookup(hash, warn)) return *hit;
  }
  enforceBudget(cfg.sweep, c);

  const auto t0 = std::chrono::steady_clock::now();
  ResultRecord rec;
  rec.report = runCampaign(cfg.sweep, c, progress);
  rec.wallClockSeconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  rec.campaign = toString(c);
  rec.configHash = hash;
  rec.config = cfg.canonical();
  rec.version = kVersion;
  if (!cfg.noCache) cache.store(rec);
  return rec;
}

}  // namespace decouplab
