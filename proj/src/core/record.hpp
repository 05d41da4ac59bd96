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

#include <string>

#include <json.hpp>

#include "core/experiments.hpp"

namespace decouplab {

struct ResultRecord {
  std::string campaign;
  std::string configHash;
  nlohmann::json config;  // canonical config
  CampaignReport report;
  double wallClockSeconds = 0.0;
  std::string version;
  bool cacheHit = false;  // runtime flag, not serialized
};

// Wall-clock time is the only field that varies between identical runs;
// leave it out to compare records.
nlohmann::json toJson(const ResultRecord& rec, bool includeTiming = true);
// Throws Error{Io} when the document is not a well-formed record.
ResultRecord recordFromJson(const nlohmann::json& doc);

nlohmann::json toJson(const ExponentFit& fit);
ExponentFit fitFromJson(const nlohmann::json& doc);

// Plot table columns, one row per scale:
// campaign,d,sigma,R,p,lhs,rhs,ratio,M,caps,comparability,incidence,
// fractal_constant,samples,lhs_slope,rhs_slope,ratio_slope,predicted_slope,pass
std::string csvHeader();
std::string toCsv(const ResultRecord& rec, bool withHeader = true);

// 17 significant digits; empty for NaN.
std::string formatDouble(double v);

}  // namespace decouplab
