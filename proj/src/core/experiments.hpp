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

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "core/geometry.hpp"

namespace decouplab {

enum class Campaign { Amplitude, Decoupling, Corollary };
std::string toString(Campaign c);
Campaign campaignFromString(const std::string& s);

struct SweepConfig {
  Params base;                 // R is ignored; taken from Rlist
  std::vector<double> Rlist;
  std::vector<Campaign> campaigns;
  double tol = 0.05;           // slope tolerance for the main exponent fits
  double ratioTol = 0.1;       // slope tolerance for lhs/rhs ratios
  double hypothesisTol = 0.1;  // slope tolerance for the M census
  std::size_t amplitudeSamples = 100;
  std::size_t fractalCenters = 32;
  std::uint64_t seed = 1;
  double nodeBudget = 2e10;

  // Defaults: R in {2^8..2^13} for d = 2, {2^7..2^10} otherwise.
  static SweepConfig defaults(int d);
  void validate() const;
  Params at(double R) const;
};

struct ExponentFit {
  double slope = 0.0;
  double intercept = 0.0;
  double maxResidual = 0.0;
  double predicted = 0.0;
  double tol = 0.0;
  double epsSlack = 0.0;
  // When set, the slack only widens the lower side: slope in
  // [predicted - tol - epsSlack, predicted + tol]. Used for ratios, where the
  // R^eps loss can only make the right hand side larger.
  bool lowerSlackOnly = false;
  // When set, only the upper bound slope <= predicted + tol is required.
  bool upperBoundOnly = false;
  bool pass = false;
  std::size_t n = 0;
};

// Least-squares fit of log(value) against log(R).
ExponentFit fitExponent(std::span<const double> R, std::span<const double> values,
                        double predicted, double tol, double epsSlack);
// Recomputes `pass` from the other fields.
bool evaluatePass(const ExponentFit& fit);

struct HypothesisCheck {
  std::string description;
  double value = 0.0;
  double bound = 0.0;
  bool pass = false;
};

struct SweepRow {
  double R = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  std::optional<int> M;
  std::optional<int> caps;
  std::optional<double> comparability;
  std::optional<double> incidence;
  std::optional<double> fractalConstant;
  std::size_t samples = 0;
};

struct CampaignReport {
  Campaign campaign = Campaign::Amplitude;
  int d = 2;
  double sigma = 0.0;
  std::optional<double> p;      // Lebesgue exponent, absent for amplitude
  std::optional<double> alpha;  // corollary only
  std::uint64_t seed = 0;
  std::vector<SweepRow> rows;
  std::map<std::string, ExponentFit> fits;
  std::map<std::string, HypothesisCheck> hypotheses;
  bool pass = false;
};

using Progress = std::function<void(const std::string&)>;

// Predicted exponents.
double amplitudeExponent(int d, double sigma);
double decouplingExponent(int d, double sigma);
double corollaryExponent(int d, double sigma);
double decouplingLebesgueExponent(int d);

CampaignReport runAmplitudeCampaign(const SweepConfig& cfg, const Progress& progress = {});
// Throws Error{Hypothesis} when the packet comparability factor exceeds 8.
CampaignReport runDecouplingCampaign(const SweepConfig& cfg, const Progress& progress = {});
CampaignReport runCorollaryCampaign(const SweepConfig& cfg, const Progress& progress = {});
CampaignReport runCampaign(const SweepConfig& cfg, Campaign c, const Progress& progress = {});

// Estimated number of phase evaluations for a campaign.
double estimateNodeCost(const SweepConfig& cfg, Campaign c);
// Throws Error{Budget} when the estimate exceeds cfg.nodeBudget.
void enforceBudget(const SweepConfig& cfg, Campaign c);

inline constexpr double kComparabilityLimit = 8.0;

}  // namespace decouplab
