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

#include <doctest.h>

#include <cmath>

#include "core/error.hpp"
#include "core/experiments.hpp"
#include "core/record.hpp"

using namespace decouplab;

namespace {

std::vector<double> dyadic(int lo, int hi) {
  std::vector<double> R;
  for (int k = lo; k <= hi; ++k) R.push_back(std::ldexp(1.0, k));
  return R;
}

SweepConfig sweep(int d, double sigma, std::vector<double> R) {
  auto cfg = SweepConfig::defaults(d);
  cfg.base.sigma = sigma;
  cfg.Rlist = std::move(R);
  return cfg;
}

}  // namespace

TEST_CASE("predicted exponents") {
  CHECK(amplitudeExponent(2, 0.25) == doctest::Approx(-0.75));
  CHECK(amplitudeExponent(2, 0.4) == doctest::Approx(-0.6));
  CHECK(amplitudeExponent(3, 0.25) == doctest::Approx(-1.5));
  CHECK(decouplingExponent(2, 0.25) == doctest::Approx(-13.0 / 24.0));
  CHECK(decouplingExponent(2, 0.4) == doctest::Approx(0.2 - 2.0 / 3.0));
  CHECK(decouplingExponent(3, 0.25) == doctest::Approx(-1.0));
  CHECK(corollaryExponent(2, 0.25) == doctest::Approx(-0.125));
  CHECK(corollaryExponent(3, 0.25) == doctest::Approx(-0.5));
  CHECK(decouplingLebesgueExponent(2) == 6.0);
  CHECK(decouplingLebesgueExponent(3) == 4.0);
}

TEST_CASE("exponent fits on synthetic data") {
  const auto R = dyadic(8, 13);
  SUBCASE("exact power law") {
    std::vector<double> v;
    for (double r : R) v.push_back(std::pow(r, -0.75));
    const auto f = fitExponent(R, v, -0.75, 0.05, 0.05);
    CHECK(f.slope == doctest::Approx(-0.75).epsilon(1e-12));
    CHECK(f.maxResidual < 1e-12);
    CHECK(f.pass);
    CHECK(f.n == R.size());
  }
  SUBCASE("bounded oscillation") {
    std::vector<double> v;
    for (std::size_t k = 0; k < R.size(); ++k) v.push_back(std::pow(R[k], -0.75) * (2.0 + (k % 2 ? -1.0 : 1.0)));
    const auto f = fitExponent(R, v, -0.75, 0.05, 0.05);
    // a factor-3 wobble moves the slope by at most log 3 / log(Rmax / Rmin)
    CHECK(std::abs(f.slope + 0.75) <= std::log(3.0) / std::log(R.back() / R.front()));
    CHECK(f.maxResidual > 0.1);
    CHECK_FALSE(f.pass);
  }
  SUBCASE("constant input") {
    const std::vector<double> v(R.size(), 4.2);
    const auto f = fitExponent(R, v, 0.0, 0.05, 0.0);
    CHECK(std::abs(f.slope) < 1e-14);
    CHECK(f.pass);
  }
  SUBCASE("pass rules") {
    ExponentFit f;
    f.predicted = 0.0;
    f.tol = 0.1;
    f.epsSlack = 0.05;
    f.slope = 0.14;
    CHECK(evaluatePass(f));
    f.lowerSlackOnly = true;
    CHECK_FALSE(evaluatePass(f));
    f.slope = -0.14;
    CHECK(evaluatePass(f));
    f.slope = -0.16;
    CHECK_FALSE(evaluatePass(f));
    f.lowerSlackOnly = false;
    f.upperBoundOnly = true;
    f.slope = -5.0;
    CHECK(evaluatePass(f));
    f.slope = 0.11;
    CHECK_FALSE(evaluatePass(f));
  }
  CHECK_THROWS_AS(fitExponent(std::vector<double>{1.0}, std::vector<double>{1.0}, 0, 0, 0), Error);
}

TEST_CASE("sweep config validation") {
  auto cfg = sweep(2, 0.25, {256, 512, 1024});
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.Rlist = {256, 512, 1024, 1024};
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.Rlist = {256, 512, 1024, 2048};
  CHECK_NOTHROW(cfg.validate());
  CHECK(SweepConfig::defaults(2).Rlist == dyadic(8, 13));
  CHECK(SweepConfig::defaults(3).Rlist == dyadic(7, 10));
}

TEST_CASE("budget") {
  auto cfg = sweep(2, 0.25, dyadic(8, 13));
  for (auto c : {Campaign::Amplitude, Campaign::Decoupling, Campaign::Corollary}) {
    const double cost = estimateNodeCost(cfg, c);
    CHECK(cost > 0.0);
    CHECK(cost <= cfg.nodeBudget);
    auto small = sweep(2, 0.25, dyadic(8, 11));
    CHECK(estimateNodeCost(small, c) < cost);
    cfg.nodeBudget = cost / 2;
    try {
      enforceBudget(cfg, c);
      FAIL("expected a budget refusal");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Budget);
    }
    cfg.nodeBudget = 2e10;
    CHECK_NOTHROW(enforceBudget(cfg, c));
  }
}

TEST_CASE("amplitude campaign, d=3") {
  const auto rep = runAmplitudeCampaign(sweep(3, 0.25, dyadic(7, 10)));
  const auto& f = rep.fits.at("amplitude");
  CAPTURE(f.slope);
  CHECK(std::abs(f.slope + 1.5) <= 0.1);
  CHECK(rep.rows.size() == 4);
}

TEST_CASE("decoupling campaign, d=2 sigma=0.4") {
  const auto rep = runDecouplingCampaign(sweep(2, 0.4, dyadic(10, 13)));
  CHECK(rep.fits.at("lhs").predicted == doctest::Approx(0.2 - 2.0 / 3.0));
  CAPTURE(rep.fits.at("lhs").slope);
  CAPTURE(rep.fits.at("rhs").slope);
  CHECK(rep.fits.at("lhs").pass);
  CHECK(rep.fits.at("rhs").pass);
  CHECK(rep.fits.at("ratio").pass);
  for (const auto& row : rep.rows) {
    REQUIRE(row.M.has_value());
    REQUIRE(row.caps.has_value());
    CHECK(*row.M <= *row.caps);
    CHECK(*row.comparability <= 8.0);
  }
}

TEST_CASE("a report passes only when hypotheses and fits pass") {
  auto cfg = sweep(2, 0.25, dyadic(8, 11));
  const auto ok = runDecouplingCampaign(cfg);
  bool all = true;
  for (const auto& [k, f] : ok.fits) all = all && f.pass;
  for (const auto& [k, h] : ok.hypotheses) all = all && h.pass;
  CHECK(ok.pass == all);

  cfg.hypothesisTol = 0.0;  // the M slope is never exactly (d-1) sigma
  const auto strict = runDecouplingCampaign(cfg);
  CHECK_FALSE(strict.hypotheses.at("M_slope").pass);
  CHECK(strict.fits.at("lhs").pass == ok.fits.at("lhs").pass);
  CHECK_FALSE(strict.pass);
}

TEST_CASE("identical seeded sweeps give identical reports") {
  auto cfg = sweep(2, 0.25, dyadic(8, 11));
  for (auto c : {Campaign::Amplitude, Campaign::Decoupling, Campaign::Corollary}) {
    ResultRecord a, b;
    a.report = runCampaign(cfg, c);
    b.report = runCampaign(cfg, c);
    CHECK(toJson(a, false).dump() == toJson(b, false).dump());
  }
  auto other = cfg;
  other.seed = 99;
  ResultRecord a, b;
  a.report = runCampaign(cfg, Campaign::Amplitude);
  b.report = runCampaign(other, Campaign::Amplitude);
  CHECK(toJson(a, false).dump() != toJson(b, false).dump());
}

TEST_CASE("progress reports one line per scale") {
  std::vector<std::string> lines;
  runAmplitudeCampaign(sweep(2, 0.25, dyadic(8, 11)),
                       [&](const std::string& s) { lines.push_back(s); });
  CHECK(lines.size() == 4);
}
