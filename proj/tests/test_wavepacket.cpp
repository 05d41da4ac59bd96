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
#include <numeric>

#include "core/extension.hpp"
#include "core/rng.hpp"
#include "core/wavepacket.hpp"

using namespace decouplab;

namespace {

Params make(int d, double sigma, double R) {
  Params p;
  p.d = d;
  p.sigma = sigma;
  p.R = R;
  return p;
}

std::vector<WavePacket> allPackets(const std::vector<CapPiece>& pieces, const Params& p) {
  std::vector<WavePacket> out;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    auto w = packetize(pieces[i], i, p);
    out.insert(out.end(), w.begin(), w.end());
  }
  markActive(out, p.activityThreshold);
  return out;
}

}  // namespace

TEST_CASE("one cap piece per cube") {
  CHECK(capDecompose(make(2, 0.25, 256)).size() == 3);
  CHECK(capDecompose(make(3, 0.25, 256)).size() == 9);
  CHECK(capDecompose(make(2, 0.4, 1024)).size() == 15);
}

TEST_CASE("cap pieces resum to g") {
  for (int d : {2, 3}) {
    const auto p = make(d, 0.25, d == 2 ? 2048.0 : 256.0);
    const auto pieces = capDecompose(p);
    const auto plan = makePlan(p, enumerateCubes(p), p.R);
    Rng rng(4);
    for (int i = 0; i < 100; ++i) {
      const auto x = rng.inBall(d, p.R);
      Complex sum = 0.0;
      for (const auto& piece : pieces) sum += evaluateAt(piece.plan, x);
      CHECK(std::abs(sum - evaluateAt(plan, x)) < 1e-10 * plan.totalMeasure());
    }
  }
}

TEST_CASE("|g_theta| is about (2/R)^{d-1} on B_{R/8}") {
  for (int d : {2, 3}) {
    const auto p = make(d, 0.25, d == 2 ? 4096.0 : 512.0);
    const double level = std::pow(2.0 / p.R, d - 1);
    Rng rng(8);
    for (const auto& piece : capDecompose(p))
      for (int i = 0; i < 50; ++i) {
        const double a = std::abs(evaluateAt(piece.plan, rng.inBall(d, p.R / 8)));
        CHECK(a >= level / 4);
        CHECK(a <= level * 4);
      }
  }
}

TEST_CASE("packets: magnitudes, activity and comparability") {
  for (int d : {2, 3}) {
    const auto p = make(d, 0.25, d == 2 ? 4096.0 : 512.0);
    const auto pieces = capDecompose(p);
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      auto w = packetize(pieces[i], i, p);
      REQUIRE(!w.empty());
      double top = 0.0;
      for (const auto& wp : w) {
        CHECK(wp.magnitude >= 0.0);
        CHECK(wp.sampleCount >= 32);
        CHECK(wp.piece == i);
        top = std::max(top, wp.magnitude);
      }
      for (const auto& wp : w)
        if (wp.active) CHECK(wp.magnitude >= p.activityThreshold * top);
      // one cap: all active packets within a factor 4
      CHECK(comparabilityFactor(w) <= 4.0);
    }
    auto all = allPackets(pieces, p);
    const double cf = comparabilityFactor(all);
    CHECK(cf >= 1.0);
    CHECK(cf <= 8.0);
    const auto classes = dyadicClasses(all);
    const auto active = std::count_if(all.begin(), all.end(), [](const WavePacket& w) { return w.active; });
    CHECK(std::accumulate(classes.begin(), classes.end(), std::size_t{0}) ==
          static_cast<std::size_t>(active));
  }
}

TEST_CASE("tube pieces resum to g_theta inside B_{R/2}") {
  for (int d : {2, 3}) {
    const auto p = make(d, 0.25, d == 2 ? 4096.0 : 512.0);
    const auto pieces = capDecompose(p);
    Rng rng(6);
    for (const auto& piece : pieces)
      for (int i = 0; i < 40; ++i) {
        const auto x = rng.inBall(d, p.R / 2);
        const Complex direct = evaluateAt(piece.plan, x);
        CHECK(std::abs(resumTubes(piece, x) - direct) < 1e-8 * piece.plan.totalMeasure());
      }
  }
}

TEST_CASE("tube weights form a partition of unity") {
  const auto p = make(2, 0.25, 1024);
  const auto piece = capDecompose(p)[1];
  Rng rng(12);
  for (int i = 0; i < 200; ++i) {
    const auto x = rng.inBall(2, p.R / 2);
    const auto a = piece.frame.anchorOf(x);
    double sum = 0.0;
    for (int dk = -1; dk <= 1; ++dk)
      for (int dm = -1; dm <= 1; ++dm) {
        const std::vector<int> b{a[0] + dk, a[1] + dm};
        const double w = tubeWeight(piece.frame, b, x);
        CHECK(w >= 0.0);
        CHECK(w <= 1.0);
        sum += w;
      }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(tubeWeight(piece.frame, a, x) >= 0.25);
  }
}

TEST_CASE("census on X") {
  for (double R : {1024.0, 4096.0}) {
    const auto p = make(2, 0.25, R);
    const auto pieces = capDecompose(p);
    const auto packets = allPackets(pieces, p);
    const auto x = buildX(p);
    const auto census = censusAt(x.points, pieces, packets);
    REQUIRE(census.size() == x.points.size());
    for (const auto& c : census) {
      CHECK(c.M >= 0);
      CHECK(c.M <= static_cast<int>(pieces.size()));
      CHECK(c.perCap.size() == static_cast<std::size_t>(c.M));
    }
    CHECK(maxCensus(census) <= static_cast<int>(pieces.size()));
    // every cap contributes at the lattice points themselves
    const auto atLattice = censusAt(x.cellCenters, pieces, packets);
    for (const auto& c : atLattice) CHECK(c.M == static_cast<int>(pieces.size()));
  }
}

TEST_CASE("incidence fractions lie in [0,1]") {
  const auto p = make(2, 0.25, 2048);
  const auto pieces = capDecompose(p);
  const auto packets = allPackets(pieces, p);
  const auto y = buildY(p);
  const auto f = incidenceFractions(y, pieces, packets);
  REQUIRE(f.size() == packets.size());
  std::vector<double> perPiece(pieces.size(), 0.0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    CHECK(f[i] >= 0.0);
    CHECK(f[i] <= 1.0);
    perPiece[packets[i].piece] += f[i];
  }
  // each cell center lies in exactly one tube per cap
  for (double s : perPiece) CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("local orthogonality") {
  SUBCASE("R = 2^12: ratio in [1/4, 4] on at least 95% of 200 balls") {
    const auto p = make(2, 0.25, 4096);
    const auto pieces = capDecompose(p);
    const auto rep = localOrthogonalityCheck(pieces, p, 200, 17);
    CHECK(rep.ratios.size() == 200);
    CHECK(rep.fractionInBand >= 0.95);
  }
  SUBCASE("a single cap gives ratio 1") {
    const auto p = make(2, 0.25, 1024);
    const auto pieces = capDecompose(p);
    const auto rep = localOrthogonalityCheck(std::span(pieces).first(1), p, 10, 3);
    for (double r : rep.ratios) CHECK(r == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("global ratio on B_R at R=256") {
    const auto p = make(2, 0.25, 256);
    const auto pieces = capDecompose(p);
    std::vector<EvalPlan> plans;
    for (const auto& piece : pieces) plans.push_back(piece.plan);
    const std::vector<double> origin{0.0, 0.0};
    const double r = orthogonalityRatio(pieces, plans, origin, p.R, 0.5);
    CHECK(r >= 0.5);
    CHECK(r <= 2.0);
  }
}
